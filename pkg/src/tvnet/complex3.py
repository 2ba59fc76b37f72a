"""Triangulated surfaces and 3-manifolds from face-gluing data.

A tetrahedron has vertex slots 0..3; face f is opposite vertex slot f and
carries the three remaining slots in increasing order. Gluings pair faces and
record the vertex correspondence explicitly, so generalized triangulations
(self-gluings, multiple edges between the same vertex classes, one-vertex
complexes) are supported throughout; these occur already for the duals of
small honeycomb lattices and for product complexes like T^3.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

__all__ = [
    "Triangulation3",
    "Triangulation2",
    "PrismComplex",
    "parse_triangulation",
    "serialize_triangulation",
    "from_vertex_tets",
    "s3_5tet",
    "s2xs1",
    "t3",
    "boundary_delta3",
    "two_triangle_torus",
    "pachner_14",
    "pachner_23",
    "pachner_32",
    "relabeled",
    "dual_triangulation",
    "prism_complex",
    "glue_top_to_bottom",
    "enumerate_colorings",
]

FACE_VERTS = ((1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2))
EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_INDEX = {e: i for i, e in enumerate(EDGES)}
PERMS3 = tuple(itertools.permutations((0, 1, 2)))

SIDE_VERTS = ((1, 2), (0, 2), (0, 1))   # triangle side s is opposite corner s


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        if p != x:
            p = self.parent[x] = self.find(p)
        return p

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx

    def classes(self, keys):
        """Class ids numbered by first appearance in the given key order."""
        ids, out = {}, {}
        for k in keys:
            root = self.find(k)
            if root not in ids:
                ids[root] = len(ids)
            out[k] = ids[root]
        return out, len(ids)


class Triangulation3:
    """Tetrahedra plus face gluings; edge/vertex classes derived by union-find.

    gluings: dict (tet, face) -> (tet2, face2, vmap) where vmap maps each
    vertex slot of the face to a vertex slot of tet2. Both directions are
    stored; the pairing must be involutive and never glue a face to itself.
    """

    def __init__(self, n_tets, gluings):
        self.n_tets = n_tets
        self.gluings = dict(gluings)
        self._validate_gluings()
        self._build()

    def _validate_gluings(self):
        for (t, f), (t2, f2, vmap) in self.gluings.items():
            if not (0 <= t < self.n_tets and 0 <= f < 4
                    and 0 <= t2 < self.n_tets and 0 <= f2 < 4):
                raise ValueError(f"gluing ({t},{f})->({t2},{f2}) out of range")
            if (t, f) == (t2, f2):
                raise ValueError(f"face ({t},{f}) glued to itself")
            if sorted(vmap) != list(FACE_VERTS[f]) or \
                    sorted(vmap.values()) != list(FACE_VERTS[f2]):
                raise ValueError(f"bad vertex map for gluing ({t},{f})")
            back = self.gluings.get((t2, f2))
            if back is None:
                raise ValueError(f"gluing ({t},{f})->({t2},{f2}) not involutive")
            bt, bf, bmap = back
            if (bt, bf) != (t, f) or any(bmap[v] != k for k, v in vmap.items()):
                raise ValueError(f"gluing ({t},{f})->({t2},{f2}) not involutive")

    def _build(self):
        uf_e, uf_v = _UnionFind(), _UnionFind()
        for (t, f), (t2, f2, vmap) in self.gluings.items():
            for a in FACE_VERTS[f]:
                uf_v.union((t, a), (t2, vmap[a]))
            for a, b in itertools.combinations(FACE_VERTS[f], 2):
                e1 = EDGE_INDEX[tuple(sorted((a, b)))]
                e2 = EDGE_INDEX[tuple(sorted((vmap[a], vmap[b])))]
                uf_e.union((t, e1), (t2, e2))

        ekeys = [(t, e) for t in range(self.n_tets) for e in range(6)]
        vkeys = [(t, v) for t in range(self.n_tets) for v in range(4)]
        for k in ekeys:
            uf_e.find(k)
        for k in vkeys:
            uf_v.find(k)
        self.edge_class, self.n_edge_classes = uf_e.classes(ekeys)
        self.vertex_class, self.n_vertex_classes = uf_v.classes(vkeys)

        self.boundary_faces = [(t, f) for t in range(self.n_tets)
                               for f in range(4) if (t, f) not in self.gluings]
        # faces counted once: every glued pair by its smaller member
        self.faces = []
        for t in range(self.n_tets):
            for f in range(4):
                g = self.gluings.get((t, f))
                if g is None or (t, f) < g[:2]:
                    self.faces.append((t, f))

        # edge triple of a face, and per-tet edge classes in EDGES order
        self.tet_edges = [tuple(self.edge_class[(t, e)] for e in range(6))
                          for t in range(self.n_tets)]
        self.face_edges = []
        for (t, f) in self.faces:
            tri = [EDGE_INDEX[tuple(sorted(p))]
                   for p in itertools.combinations(FACE_VERTS[f], 2)]
            self.face_edges.append(tuple(self.edge_class[(t, e)] for e in tri))

        bdry = set()
        for (t, f) in self.boundary_faces:
            for p in itertools.combinations(FACE_VERTS[f], 2):
                bdry.add(self.edge_class[(t, EDGE_INDEX[tuple(sorted(p))])])
        self.boundary_edge_classes = frozenset(bdry)

        bvert = set()
        for (t, f) in self.boundary_faces:
            for a in FACE_VERTS[f]:
                bvert.add(self.vertex_class[(t, a)])
        self.boundary_vertex_classes = frozenset(bvert)

    # counts in the usual notation
    @property
    def N3(self):
        return self.n_tets

    @property
    def N1(self):
        return self.n_edge_classes

    @property
    def N0(self):
        return self.n_vertex_classes

    @property
    def closed(self):
        return not self.boundary_faces

    def __repr__(self):
        return (f"Triangulation3(N3={self.N3}, N1={self.N1}, N0={self.N0}, "
                f"boundary_faces={len(self.boundary_faces)})")


def _vmap_to_perm(f, f2, vmap):
    img = tuple(vmap[a] for a in FACE_VERTS[f])
    pos = tuple(FACE_VERTS[f2].index(x) for x in img)
    return PERMS3.index(pos)


def _perm_to_vmap(f, f2, p):
    perm = PERMS3[p]
    return {FACE_VERTS[f][i]: FACE_VERTS[f2][perm[i]] for i in range(3)}


def parse_triangulation(text):
    """Parse the gluing-data format: `tets N`, then lines
    `g tetA faceA tetB faceB perm` (perm in 0..5); `#` comments."""
    n_tets = None
    gluings = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "tets":
            if n_tets is not None:
                raise ValueError(f"line {ln}: duplicate tets header")
            n_tets = int(parts[1])
        elif parts[0] == "g":
            if n_tets is None:
                raise ValueError(f"line {ln}: gluing before tets header")
            if len(parts) != 6:
                raise ValueError(f"line {ln}: expected 'g tA fA tB fB perm'")
            t, f, t2, f2, p = map(int, parts[1:])
            if not 0 <= p < 6:
                raise ValueError(f"line {ln}: perm {p} outside 0..5")
            vmap = _perm_to_vmap(f, f2, p)
            if (t, f) in gluings or (t2, f2) in gluings:
                raise ValueError(f"line {ln}: face glued twice")
            gluings[(t, f)] = (t2, f2, vmap)
            gluings[(t2, f2)] = (t, f, {v: k for k, v in vmap.items()})
        else:
            raise ValueError(f"line {ln}: unrecognized record {parts[0]!r}")
    if n_tets is None:
        raise ValueError("missing 'tets N' header")
    return Triangulation3(n_tets, gluings)


def serialize_triangulation(tri):
    lines = [f"tets {tri.n_tets}"]
    for (t, f), (t2, f2, vmap) in sorted(tri.gluings.items()):
        if (t, f) < (t2, f2):
            lines.append(f"g {t} {f} {t2} {f2} {_vmap_to_perm(f, f2, vmap)}")
    return "\n".join(lines) + "\n"


def from_vertex_tets(tets):
    """Build a Triangulation3 from tetrahedra given as 4-tuples of global
    vertex ids, gluing faces with identical vertex sets. Only usable when no
    two faces of the same vertex set are ambiguous (at most two occurrences)."""
    by_face = {}
    for t, vs in enumerate(tets):
        if len(set(vs)) != 4:
            raise ValueError(f"tet {t} has repeated vertices")
        for f in range(4):
            key = tuple(sorted(vs[a] for a in FACE_VERTS[f]))
            by_face.setdefault(key, []).append((t, f))
    gluings = {}
    for key, occ in by_face.items():
        if len(occ) > 2:
            raise ValueError(f"face {key} shared by more than two tetrahedra")
        if len(occ) == 2:
            (t, f), (t2, f2) = occ
            vmap = {}
            for a in FACE_VERTS[f]:
                gid = tets[t][a]
                b = next(b for b in FACE_VERTS[f2] if tets[t2][b] == gid)
                vmap[a] = b
            gluings[(t, f)] = (t2, f2, vmap)
            gluings[(t2, f2)] = (t, f, {v: k for k, v in vmap.items()})
    return Triangulation3(len(tets), gluings)


# -- census ----------------------------------------------------------------

def s3_5tet():
    """S^3 as the boundary of the 4-simplex: 5 tets, all faces pairwise glued."""
    return from_vertex_tets(list(itertools.combinations(range(5), 4)))


def boundary_delta3():
    """S^2 as the boundary of the 3-simplex (4 triangles)."""
    tris = list(itertools.combinations(range(4), 3))
    return _triangulation2_from_vertex_tris(tris)


def s2xs1():
    """S^2 x S^1: prism complex over the boundary of the 3-simplex with the
    two boundary copies glued by the identity marking."""
    return glue_top_to_bottom(prism_complex(boundary_delta3()))


def t3():
    """T^3: prism complex over the two-triangle torus, glued top to bottom."""
    return glue_top_to_bottom(prism_complex(two_triangle_torus()))


CENSUS = {"S3_5tet": s3_5tet, "S2xS1": s2xs1, "T3": t3}


# -- Pachner moves ----------------------------------------------------------

def _relocate_gluings(old, relocation, n_tets_new, extra):
    """Rebuild a gluing dict after tets are replaced.

    relocation: dict (tet, face) -> (new_tet, new_face, slotmap) for faces of
    dying tets that survive (slotmap maps old vertex slots on that face to new
    slots); identity for untouched tets. extra: new internal gluings.
    """
    def move(tf, vmap_keys):
        if tf in relocation:
            nt, nf, smap = relocation[tf]
            return nt, nf, smap
        return tf[0], tf[1], None

    new = {}
    seen = set()
    for (t, f), (t2, f2, vmap) in old.items():
        if (t, f) in seen:
            continue
        seen.add((t, f))
        seen.add((t2, f2))
        nt, nf, smap = move((t, f), vmap)
        nt2, nf2, smap2 = move((t2, f2), vmap)
        if nt is None or nt2 is None:
            continue
        nmap = {}
        for a, b in vmap.items():
            na = smap[a] if smap else a
            nb = smap2[b] if smap2 else b
            nmap[na] = nb
        new[(nt, nf)] = (nt2, nf2, nmap)
        new[(nt2, nf2)] = (nt, nf, {v: k for k, v in nmap.items()})
    for (tf, tf2, vmap) in extra:
        new[tf] = (tf2[0], tf2[1], vmap)
        new[tf2] = (tf[0], tf[1], {v: k for k, v in vmap.items()})
    return new


def pachner_14(tri, tet):
    """Replace one tetrahedron by four sharing a new interior vertex."""
    if not 0 <= tet < tri.n_tets:
        raise ValueError(f"tet {tet} out of range")
    n = tri.n_tets
    # new tet N_i (for old face i) occupies index: i==0 -> tet, else n+i-1
    def newidx(i):
        return tet if i == 0 else n + i - 1

    # N_i slots 0..2 hold old vertices FACE_VERTS[i]; slot 3 is the cone point
    old_to_new = [{v: k for k, v in enumerate(FACE_VERTS[i])} for i in range(4)]

    relocation = {}
    for i in range(4):
        # old face (tet, i) becomes face 3 of N_i (slots 0,1,2)
        smap = {v: old_to_new[i][v] for v in FACE_VERTS[i]}
        relocation[(tet, i)] = (newidx(i), 3, smap)

    extra = []
    for i, j in itertools.combinations(range(4), 2):
        # N_i and N_j share the face spanned by cone point + (FACE_VERTS[i] & FACE_VERTS[j])
        fi = old_to_new[i][j]      # face of N_i opposite the slot holding old vertex j
        fj = old_to_new[j][i]
        vmap = {3: 3}
        for u in set(FACE_VERTS[i]) & set(FACE_VERTS[j]):
            vmap[old_to_new[i][u]] = old_to_new[j][u]
        extra.append(((newidx(i), fi), (newidx(j), fj), vmap))

    gluings = _relocate_gluings(tri.gluings, relocation, n + 3, extra)
    return Triangulation3(n + 3, gluings)


def pachner_23(tri, face):
    """2-3 move about an interior face whose two sides are distinct tets."""
    t0, f0 = face
    g = tri.gluings.get((t0, f0))
    if g is None:
        raise ValueError(f"face ({t0},{f0}) is a boundary face")
    t1, f1, vmap01 = g
    if t1 == t0:
        raise ValueError("2-3 move requires two distinct tetrahedra")

    u = FACE_VERTS[f0]                       # shared vertices in t0
    w = tuple(vmap01[a] for a in u)          # their images in t1
    n = tri.n_tets

    # surviving tets keep their indices compacted; new tets appended
    survivors = [t for t in range(n) if t not in (t0, t1)]
    remap = {t: i for i, t in enumerate(survivors)}
    base = len(survivors)

    # new tet P_k: slots (0,1,2,3) = (apex0, apex1, u_p, u_q) with {p,q} = {0,1,2}-{k}
    retained = [tuple(x for x in range(3) if x != k) for k in range(3)]

    relocation = {}
    for t in survivors:
        for f in range(4):
            relocation[(t, f)] = (remap[t], f, None)
    for k in range(3):
        p, q = retained[k]
        # face of t0 opposite shared vertex u_k: contains apex0, u_p, u_q -> P_k face 1
        smap0 = {f0: 0, u[p]: 2, u[q]: 3}
        relocation[(t0, u[k])] = (base + k, 1, smap0)
        smap1 = {f1: 1, w[p]: 2, w[q]: 3}
        relocation[(t1, w[k])] = (base + k, 0, smap1)

    extra = []
    for k, l in itertools.combinations(range(3), 2):
        m = next(x for x in range(3) if x not in (k, l))
        # P_k and P_l share the face (apex0, apex1, u_m)
        pk_face = 2 + retained[k].index(l)   # slot in P_k holding u_l
        pl_face = 2 + retained[l].index(k)
        vmap = {0: 0, 1: 1, 2 + retained[k].index(m): 2 + retained[l].index(m)}
        extra.append(((base + k, pk_face), (base + l, pl_face), vmap))

    old = {tf: g for tf, g in tri.gluings.items()
           if tf not in ((t0, f0), (t1, f1))}
    gluings = _relocate_gluings(old, relocation, base + 3, extra)
    return Triangulation3(base + 3, gluings)


def pachner_32(tri, edge):
    """3-2 move: collapse an interior edge of valence three (the inverse of
    pachner_23). `edge` is (tet, edge_index) designating the edge class."""
    t0, e0 = edge
    cls = tri.edge_class[(t0, e0)]
    members = sorted({(t, e) for t in range(tri.n_tets) for e in range(6)
                      if tri.edge_class[(t, e)] == cls})
    tets_around = sorted({t for t, _ in members})
    if len(members) != 3 or len(tets_around) != 3:
        raise ValueError("3-2 move requires an edge with exactly three "
                         "incidences in three distinct tetrahedra")
    if cls in tri.boundary_edge_classes:
        raise ValueError("3-2 move requires an interior edge")

    # walk the cycle of tets around the edge, transporting the edge ends;
    # leave each tet through the edge-containing face we did not enter by.
    # In tet k's own slots: a/b = edge ends, entry = slot opposite the face we
    # came in by (holds the shared vertex with tet k+1), exit = the remaining
    # slot (shared vertex with tet k-1).
    start_t, start_e = members[0]
    A, B = EDGES[start_e]
    cycle = []          # (tet, a, b, entry, exit)
    t, a, b = start_t, A, B
    entry = next(v for v in range(4) if v not in (A, B))
    for _ in range(3):
        exit_slot = next(v for v in range(4) if v not in (a, b, entry))
        cycle.append((t, a, b, entry, exit_slot))
        g = tri.gluings.get((t, exit_slot))
        if g is None:
            raise ValueError("3-2 move: edge touches the boundary")
        t2, f2, vmap = g
        t, a, b, entry = t2, vmap[a], vmap[b], f2
    if (t, a, b, entry) != (start_t, A, B, cycle[0][3]):
        raise ValueError("3-2 move inapplicable: edge link does not close into "
                         "a three-tetrahedron book")
    if sorted(c[0] for c in cycle) != tets_around:
        raise ValueError("3-2 move inapplicable: cycle does not cover the "
                         "three tetrahedra")

    # shared vertex s_k joins tets k and k+1: slot entry_k in tet k, slot
    # exit_{k+1} in tet k+1
    survivors = [x for x in range(tri.n_tets) if x not in tets_around]
    remap = {x: i for i, x in enumerate(survivors)}
    Ta, Tb = len(survivors), len(survivors) + 1
    # T_a = (A, s0, s1, s2), T_b = (B, s0, s1, s2); s_k sits at slot 1+k

    relocation = {}
    for x in survivors:
        for f in range(4):
            relocation[(x, f)] = (remap[x], f, None)
    for k in range(3):
        tk, ak, bk, entry_k, exit_k = cycle[k]
        s_here = 1 + k              # slot of s_k in the new tets
        s_prev = 1 + (k - 1) % 3    # slot of s_{k-1}
        miss = 1 + (k + 1) % 3
        # face of t_k opposite the A end contains (B, s_{k-1}, s_k) -> T_b
        relocation[(tk, ak)] = (Tb, miss,
                                {bk: 0, exit_k: s_prev, entry_k: s_here})
        relocation[(tk, bk)] = (Ta, miss,
                                {ak: 0, exit_k: s_prev, entry_k: s_here})

    # drop the six inner faces (those containing the collapsing edge)
    inner = set()
    for tk, ak, bk, entry_k, exit_k in cycle:
        inner.add((tk, entry_k))
        inner.add((tk, exit_k))
    old = {tf: g for tf, g in tri.gluings.items()
           if tf not in inner and g[:2] not in inner}
    extra = [((Ta, 0), (Tb, 0), {1: 1, 2: 2, 3: 3})]
    gluings = _relocate_gluings(old, relocation, Tb + 1, extra)
    return Triangulation3(Tb + 1, gluings)


def relabeled(tri, perm):
    """The same complex with tetrahedra renumbered by perm (old -> new)."""
    if sorted(perm) != list(range(tri.n_tets)):
        raise ValueError("perm must be a permutation of the tetrahedra")
    gluings = {}
    for (t, f), (t2, f2, vmap) in tri.gluings.items():
        gluings[(perm[t], f)] = (perm[t2], f2, dict(vmap))
    return Triangulation3(tri.n_tets, gluings)


# -- surfaces ----------------------------------------------------------------

class Triangulation2:
    """Triangles with side gluings; side s of a triangle is opposite corner s.

    gluings: dict (tri, side) -> (tri2, side2, cmap) with cmap mapping the two
    endpoint corner slots of the side to corner slots of tri2.
    """

    def __init__(self, n_tris, gluings):
        self.n_tris = n_tris
        self.gluings = dict(gluings)
        for (t, s), (t2, s2, cmap) in self.gluings.items():
            if (t, s) == (t2, s2):
                raise ValueError(f"side ({t},{s}) glued to itself")
            back = self.gluings.get((t2, s2))
            if back is None or back[:2] != (t, s) or \
                    any(back[2][v] != k for k, v in cmap.items()):
                raise ValueError(f"gluing ({t},{s}) not involutive")
            if sorted(cmap) != list(SIDE_VERTS[s]) or \
                    sorted(cmap.values()) != list(SIDE_VERTS[s2]):
                raise ValueError(f"bad corner map for side ({t},{s})")
        self._build()

    def _build(self):
        uf_e, uf_v = _UnionFind(), _UnionFind()
        for (t, s), (t2, s2, cmap) in self.gluings.items():
            uf_e.union((t, s), (t2, s2))
            for a in SIDE_VERTS[s]:
                uf_v.union((t, a), (t2, cmap[a]))
        ekeys = [(t, s) for t in range(self.n_tris) for s in range(3)]
        vkeys = [(t, c) for t in range(self.n_tris) for c in range(3)]
        for k in ekeys:
            uf_e.find(k)
        for k in vkeys:
            uf_v.find(k)
        self.edge_class, self.n_edge_classes = uf_e.classes(ekeys)
        self.vertex_class, self.n_vertex_classes = uf_v.classes(vkeys)
        self.boundary_sides = [k for k in ekeys if k not in self.gluings]
        self.tri_edges = [tuple(self.edge_class[(t, s)] for s in range(3))
                          for t in range(self.n_tris)]

    @property
    def closed(self):
        return not self.boundary_sides

    def __repr__(self):
        return (f"Triangulation2(tris={self.n_tris}, edges={self.n_edge_classes},"
                f" vertices={self.n_vertex_classes})")


def _triangulation2_from_vertex_tris(tris):
    by_side = {}
    for t, vs in enumerate(tris):
        if len(set(vs)) != 3:
            raise ValueError(f"triangle {t} has repeated vertices")
        for s in range(3):
            key = tuple(sorted(vs[a] for a in SIDE_VERTS[s]))
            by_side.setdefault(key, []).append((t, s))
    gluings = {}
    for key, occ in by_side.items():
        if len(occ) > 2:
            raise ValueError(f"edge {key} shared by more than two triangles")
        if len(occ) == 2:
            (t, s), (t2, s2) = occ
            cmap = {}
            for a in SIDE_VERTS[s]:
                gid = tris[t][a]
                b = next(b for b in SIDE_VERTS[s2] if tris[t2][b] == gid)
                cmap[a] = b
            gluings[(t, s)] = (t2, s2, cmap)
            gluings[(t2, s2)] = (t, s, {v: k for k, v in cmap.items()})
    return Triangulation2(len(tris), gluings)


def two_triangle_torus():
    """The standard one-vertex torus: two triangles, three edge classes."""
    # square P00 P10 P11 P01 cut along the diagonal P00-P11
    # tri 0 corners (P00, P10, P11); tri 1 corners (P00, P11, P01)
    gl = {}

    def glue(a, b, cmap):
        gl[a] = (b[0], b[1], cmap)
        gl[b] = (a[0], a[1], {v: k for k, v in cmap.items()})

    glue((0, 2), (1, 0), {0: 2, 1: 1})   # edge a: bottom <-> top
    glue((0, 0), (1, 1), {1: 0, 2: 2})   # edge b: right <-> left
    glue((0, 1), (1, 2), {0: 0, 2: 1})   # edge c: diagonal
    return Triangulation2(2, gl)


# -- dual of a trivalent lattice ---------------------------------------------

def dual_triangulation(lattice):
    """Dual triangulation of the surface carrying a trivalent lattice.

    One triangle per lattice vertex; triangle sides correspond to the three
    incident lattice edges, corners to the plaquette corners at the vertex.
    Returns (Triangulation2, edge_map) where edge_map[lattice_edge] is the
    dual edge class.
    """
    # corners at each lattice vertex: (plaquette, slot) between consecutive
    # plaquette slots, tagged with the unordered pair of edges it spans
    corners = {v: [] for v in range(lattice.n_vertices)}
    for p in range(lattice.n_plaquettes):
        cyc = lattice.plaquettes[p]
        verts = lattice.plaquette_vertices(p)
        L = len(cyc)
        for t in range(L):
            e_cur = cyc[t][0]
            e_next = cyc[(t + 1) % L][0]
            corners[verts[t]].append(((p, t), frozenset((e_cur, e_next))))

    for v, cs in corners.items():
        if len(cs) != 3:
            raise ValueError(f"vertex {v} has {len(cs)} plaquette corners, "
                             "expected 3 (lattice not a trivalent cellulation)")

    # triangle(v): corner slot i = corners[v][i]; side i carries the edge
    # absent from corner i's pair
    side_edge = {}
    corner_slot = {}
    for v in range(lattice.n_vertices):
        tags = [c[0] for c in corners[v]]
        pairs = [c[1] for c in corners[v]]
        all_edges = set().union(*pairs)
        if len(all_edges) != 3:
            raise ValueError(f"vertex {v}: incident edges not three distinct")
        for i in range(3):
            (missing,) = all_edges - pairs[i]
            side_edge[(v, i)] = missing
            corner_slot[tags[i]] = (v, i)

    # glue sides across each lattice edge, matching corners by the
    # plaquette-slot side tags of the edge
    gluings = {}
    for e in range(lattice.n_edges):
        occ = lattice.edge_plaquette_slots[e]   # two (p, slot) passages
        ends = []
        for v in lattice.edge_endpoints(e):
            s = next(i for i in range(3) if side_edge[(v, i)] == e)
            ends.append((v, s))
        (va, sa), (vb, sb) = ends
        if (va, sa) == (vb, sb):
            raise ValueError(f"edge {e} is a loop")
        cmap = {}
        for (p, t) in occ:
            # the corner containing e from passage (p, t) sits at both ends
            for which, (v, s) in enumerate(ends):
                cs = [i for i in SIDE_VERTS[s]
                      if _corner_has_passage(corners[v][i][0], (p, t),
                                             lattice, e)]
                if len(cs) != 1:
                    raise ValueError("ambiguous corner matching at lattice "
                                     f"edge {e}")
                if which == 0:
                    a = cs[0]
                else:
                    cmap[a] = cs[0]
        gluings[(va, sa)] = (vb, sb, cmap)
        gluings[(vb, sb)] = (va, sa, {v: k for k, v in cmap.items()})

    dual = Triangulation2(lattice.n_vertices, gluings)
    edge_map = {}
    for v in range(lattice.n_vertices):
        for s in range(3):
            edge_map.setdefault(side_edge[(v, s)], dual.edge_class[(v, s)])
    if len(set(edge_map.values())) != lattice.n_edges or \
            dual.n_edge_classes != lattice.n_edges:
        raise ValueError("dual edge classes do not biject with lattice edges")
    return dual, edge_map


def _corner_has_passage(corner_tag, passage, lattice, e):
    """Does corner (p,t) border the passage (p', t') of edge e?

    Corner (p,t) spans plaquette slots t (edge E_t) and t+1 (edge E_{t+1});
    it borders passage (p', t') iff p'==p and t' is one of those slots with
    edge e."""
    p, t = corner_tag
    pp, tt = passage
    if p != pp:
        return False
    cyc = lattice.plaquettes[p]
    L = len(cyc)
    slots = []
    if cyc[t][0] == e:
        slots.append(t)
    if cyc[(t + 1) % L][0] == e:
        slots.append((t + 1) % L)
    return tt in slots


# -- prism complex ------------------------------------------------------------

@dataclass
class PrismComplex:
    """Triangulation of X x [0,1] with three tets per triangle of X, plus the
    markings identifying both boundary components with X."""
    tri3: Triangulation3
    base: Triangulation2
    bottom_edge: dict      # X edge class -> edge class of tri3
    top_edge: dict
    diag_edge: dict        # X edge class -> interior diagonal class
    vert_edge: dict        # X vertex class -> interior vertical class
    bottom_faces: list = field(default_factory=list)
    top_faces: list = field(default_factory=list)
    corner_rank: dict = field(default_factory=dict)   # (tri, corner) -> 0,1,2


def _edge_directions(x2):
    """Choose a direction (tail corner) per edge class so that every triangle's
    side directions are acyclic; needed for consistent prism diagonals.

    Direction d for a class means: on the representative side, the tail is the
    smaller corner slot if d=0 else the larger; transported to the other side
    through the gluing corner map.
    """
    reps = {}
    for t in range(x2.n_tris):
        for s in range(3):
            reps.setdefault(x2.edge_class[(t, s)], (t, s))

    def tail_corner(t, s, directions):
        cls = x2.edge_class[(t, s)]
        rt, rs = reps[cls]
        lo, hi = SIDE_VERTS[rs]
        tail = lo if directions[cls] == 0 else hi
        if (t, s) == (rt, rs):
            return tail
        t2, s2, cmap = x2.gluings[(rt, rs)]
        assert (t2, s2) == (t, s)
        return cmap[tail]

    n = x2.n_edge_classes
    for bits in range(1 << n):
        directions = [(bits >> i) & 1 for i in range(n)]
        ok = True
        for t in range(x2.n_tris):
            tails = [tail_corner(t, s, directions) for s in range(3)]
            # side s joins the two corners != s; directed tail->head;
            # acyclic iff some corner is never a head (a source exists)
            heads = set()
            for s in range(3):
                a, b = SIDE_VERTS[s]
                heads.add(b if tails[s] == a else a)
            if len(heads) == 3:
                ok = False
                break
        if ok:
            return directions, tail_corner
    raise ValueError("no acyclic edge orientation exists; subdivide the surface")


def prism_complex(x2):
    """Prism triangulation of X x [0,1]: each triangle spans a prism cut into
    three tetrahedra, diagonals chosen consistently from a global acyclic
    orientation of X's edges."""
    if not x2.closed:
        raise ValueError("prism complex requires a closed surface")
    directions, tail_corner = _edge_directions(x2)

    # corner ranks per triangle: topological order of the acyclic tournament
    rank = {}
    for t in range(x2.n_tris):
        tails = [tail_corner(t, s, directions) for s in range(3)]
        indeg = {0: 0, 1: 0, 2: 0}
        for s in range(3):
            a, b = SIDE_VERTS[s]
            head = b if tails[s] == a else a
            indeg[head] += 1
        # indegrees are 0,1,2 exactly when acyclic
        for c in range(3):
            rank[(t, c)] = indeg[c]

    # tets per prism (indices 3t, 3t+1, 3t+2), slots by rank:
    #   T0 = (b0,b1,b2,t2)  T1 = (b0,b1,t1,t2)  T2 = (b0,t0,t1,t2)
    gluings = {}

    def glue(a, b, vmap):
        gluings[a] = (b[0], b[1], vmap)
        gluings[b] = (a[0], a[1], {v: k for k, v in vmap.items()})

    for t in range(x2.n_tris):
        T0, T1, T2 = 3 * t, 3 * t + 1, 3 * t + 2
        glue((T0, 2), (T1, 2), {0: 0, 1: 1, 3: 3})
        glue((T1, 1), (T2, 1), {0: 0, 2: 2, 3: 3})

    # quad faces over each X edge: lower triangle (b_i, b_j, t_j) and upper
    # (b_i, t_i, t_j), with (i, j) = ranks of (tail, head)
    LOWER = {(0, 1): (1, 3, (0, 1, 2)), (1, 2): (0, 0, (1, 2, 3)),
             (0, 2): (0, 1, (0, 2, 3))}
    UPPER = {(0, 1): (2, 3, (0, 1, 2)), (1, 2): (1, 0, (1, 2, 3)),
             (0, 2): (2, 2, (0, 1, 3))}

    def quad_tris(t, s):
        tail = tail_corner(t, s, directions)
        a, b = SIDE_VERTS[s]
        head = b if tail == a else a
        i, j = rank[(t, tail)], rank[(t, head)]
        assert i < j
        lo = LOWER[(i, j)]
        up = UPPER[(i, j)]
        return (3 * t + lo[0], lo[1], lo[2]), (3 * t + up[0], up[1], up[2])

    done = set()
    for (t, s), (t2, s2, cmap) in x2.gluings.items():
        key = tuple(sorted([(t, s), (t2, s2)]))
        if key in done:
            continue
        done.add(key)
        (lt, lf, lslots), (ut, uf, uslots) = quad_tris(t, s)
        (lt2, lf2, lslots2), (ut2, uf2, uslots2) = quad_tris(t2, s2)
        glue((lt, lf), (lt2, lf2), dict(zip(lslots, lslots2)))
        glue((ut, uf), (ut2, uf2), dict(zip(uslots, uslots2)))

    tri3 = Triangulation3(3 * x2.n_tris, gluings)

    # markings
    bottom_edge, top_edge, diag_edge, vert_edge = {}, {}, {}, {}
    DIAG = {(0, 1): (1, (0, 2)), (1, 2): (0, (1, 3)), (0, 2): (0, (0, 3))}
    VERT = {0: (2, (0, 1)), 1: (1, (1, 2)), 2: (0, (2, 3))}
    for t in range(x2.n_tris):
        for s in range(3):
            cls = x2.edge_class[(t, s)]
            tail = tail_corner(t, s, directions)
            a, b = SIDE_VERTS[s]
            head = b if tail == a else a
            i, j = rank[(t, tail)], rank[(t, head)]
            e_b = tri3.edge_class[(3 * t, EDGE_INDEX[(i, j)])]
            e_t = tri3.edge_class[(3 * t + 2, EDGE_INDEX[(i + 1, j + 1)])]
            dt, dpair = DIAG[(i, j)]
            e_d = tri3.edge_class[(3 * t + dt, EDGE_INDEX[dpair])]
            for store, val in ((bottom_edge, e_b), (top_edge, e_t),
                               (diag_edge, e_d)):
                if store.setdefault(cls, val) != val:
                    raise RuntimeError("inconsistent prism edge marking")
        for c in range(3):
            vcls = x2.vertex_class[(t, c)]
            vt, vpair = VERT[rank[(t, c)]]
            e_v = tri3.edge_class[(3 * t + vt, EDGE_INDEX[vpair])]
            if vert_edge.setdefault(vcls, e_v) != e_v:
                raise RuntimeError("inconsistent vertical edge marking")

    bottom_faces = [(3 * t, 3) for t in range(x2.n_tris)]
    top_faces = [(3 * t + 2, 0) for t in range(x2.n_tris)]
    return PrismComplex(tri3, x2, bottom_edge, top_edge, diag_edge, vert_edge,
                        bottom_faces, top_faces, rank)


def glue_top_to_bottom(pc):
    """Close X x [0,1] into X x S^1 by the identity marking between the two
    boundary copies of X."""
    gluings = dict(pc.tri3.gluings)
    for t in range(pc.base.n_tris):
        a = (3 * t + 2, 0)        # top face, slots (1,2,3) = (t0,t1,t2)
        b = (3 * t, 3)            # bottom face, slots (0,1,2) = (b0,b1,b2)
        vmap = {1: 0, 2: 1, 3: 2}
        gluings[a] = (b[0], b[1], vmap)
        gluings[b] = (a[0], a[1], {v: k for k, v in vmap.items()})
    return Triangulation3(pc.tri3.n_tets, gluings)


# -- coloring enumeration ------------------------------------------------------

def enumerate_colorings(obj, ctx, fixed=None, shard=None):
    """Yield admissible colorings (dict edge class -> label) of a 2- or 3-
    complex, extending the partial coloring `fixed`.

    shard=(k, n) keeps only branches where the first free edge takes labels
    congruent to k mod n, partitioning the space across workers.
    """
    if isinstance(obj, Triangulation3):
        n_edges, faces = obj.n_edge_classes, obj.face_edges
    elif isinstance(obj, Triangulation2):
        n_edges, faces = obj.n_edge_classes, obj.tri_edges
    else:
        raise TypeError(f"cannot enumerate colorings of {type(obj).__name__}")

    fixed_doubled = {}
    for e, lab in (fixed or {}).items():
        a = int(round(2 * lab))
        if not 0 <= e < n_edges:
            raise ValueError(f"fixed assignment on unknown edge {e}")
        if a >= ctx.num_labels:
            raise ValueError(f"fixed label {lab} outside context")
        fixed_doubled[e] = a

    for arr in _enumerate_doubled(n_edges, faces, ctx, fixed_doubled, shard):
        yield {e: arr[e] / 2 for e in range(n_edges)}


def _coloring_order(n_edges, faces, fixed):
    """Variable order that completes faces early: fixed edges first, then
    face by face."""
    order = sorted(fixed)
    seen = set(order)
    for tri in faces:
        for e in tri:
            if e not in seen:
                seen.add(e)
                order.append(e)
    for e in range(n_edges):
        if e not in seen:
            seen.add(e)
            order.append(e)
    return order


def _enumerate_doubled(n_edges, faces, ctx, fixed, shard=None):
    """DFS over doubled-label arrays with admissibility pruning."""
    order = _coloring_order(n_edges, faces, fixed)
    pos = {e: i for i, e in enumerate(order)}
    # faces checkable once their last edge (in DFS order) is assigned
    check_at = [[] for _ in range(n_edges)]
    for tri in faces:
        check_at[max(pos[e] for e in tri)].append(tri)

    nl = ctx.num_labels
    adm = ctx.admissible_doubled
    arr = [0] * n_edges
    first_free = next((i for i, e in enumerate(order) if e not in fixed), None)

    def choices(i):
        e = order[i]
        if e in fixed:
            return (fixed[e],)
        if shard is not None and i == first_free:
            k, n = shard
            return tuple(a for a in range(nl) if a % n == k)
        return tuple(range(nl))

    def rec(i):
        if i == n_edges:
            yield tuple(arr)
            return
        e = order[i]
        for a in choices(i):
            arr[e] = a
            if all(adm(arr[x], arr[y], arr[z]) for x, y, z in check_at[i]):
                yield from rec(i + 1)

    yield from rec(0)
