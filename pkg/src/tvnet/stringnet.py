"""Levin-Wen string-net model on trivalent lattices over closed surfaces:
vertex projectors, plaquette operators, Hamiltonian assembly, ground-state
projector and small exact diagonalization.

Basis states are edge labelings; the basis index is mixed-radix over the edge
list, with edge 0 least significant. Operators are scipy.sparse matrices with
real entries (all F-symbols are real in this convention).
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

__all__ = [
    "TrivalentLattice",
    "honeycomb_torus",
    "parse_lattice",
    "serialize_lattice",
    "state_index",
    "state_labels",
    "q_vertex",
    "b_plaquette_s",
    "b_plaquette",
    "hamiltonian",
    "ground_projector",
    "spectrum",
    "ground_degeneracy",
    "prune",
]

DENSE_LIMIT = 4096
DEGENERACY_TOL = 1e-8


class TrivalentLattice:
    """Trivalent cellulation of a closed oriented surface.

    edges: list of (tail, head) vertex pairs. plaquettes: list of cyclic
    (edge, sign) sequences, sign +1 when the edge is traversed tail->head.
    Every vertex must have degree 3, and every edge must appear in exactly two
    plaquette slots (possibly both in the same plaquette, which happens for
    small tori and is supported by the plaquette operators).
    """

    def __init__(self, n_vertices, edges, plaquettes):
        self.n_vertices = n_vertices
        self.edges = [tuple(e) for e in edges]
        self.n_edges = len(self.edges)
        self.plaquettes = [list(p) for p in plaquettes]
        self.n_plaquettes = len(self.plaquettes)
        self._validate()

    def _validate(self):
        deg = [0] * self.n_vertices
        for u, v in self.edges:
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise ValueError(f"edge endpoint out of range: {(u, v)}")
            if u == v:
                raise ValueError(f"self-loop edge at vertex {u}")
            deg[u] += 1
            deg[v] += 1
        bad = [v for v, d in enumerate(deg) if d != 3]
        if bad:
            raise ValueError(f"non-trivalent vertices: {bad}")

        if self.n_plaquettes < 2:
            raise ValueError("lattice must have at least two plaquettes "
                             "(single-plaquette tori are not supported)")

        self.edge_plaquette_slots = {e: [] for e in range(self.n_edges)}
        self._plaquette_vertices = []
        for p, cyc in enumerate(self.plaquettes):
            verts = []
            L = len(cyc)
            if L < 2:
                raise ValueError(f"plaquette {p} too short")
            for t, (e, sgn) in enumerate(cyc):
                if sgn not in (1, -1):
                    raise ValueError(f"plaquette {p} slot {t}: sign must be +-1")
                tail, head = self.edges[e]
                end = head if sgn == 1 else tail
                nxt_e, nxt_s = cyc[(t + 1) % L]
                ntail, nhead = self.edges[nxt_e]
                start_next = ntail if nxt_s == 1 else nhead
                if end != start_next:
                    raise ValueError(f"plaquette {p} not a closed walk at slot {t}")
                verts.append(end)
                self.edge_plaquette_slots[e].append((p, t))
            for t in range(L):
                if cyc[t][0] == cyc[(t + 1) % L][0]:
                    raise ValueError(f"plaquette {p} traverses edge "
                                     f"{cyc[t][0]} twice in a row")
            self._plaquette_vertices.append(verts)

        for e, occ in self.edge_plaquette_slots.items():
            if len(occ) != 2:
                raise ValueError(f"edge {e} borders {len(occ)} plaquette slots, "
                                 "expected 2 (surface not closed)")

        self.vertex_edges = [[] for _ in range(self.n_vertices)]
        for e, (u, v) in enumerate(self.edges):
            self.vertex_edges[u].append(e)
            self.vertex_edges[v].append(e)

        chi = self.n_vertices - self.n_edges + self.n_plaquettes
        if chi % 2:
            raise ValueError("odd Euler characteristic")
        self.genus = (2 - chi) // 2

    def plaquette_vertices(self, p):
        """Vertex sequence along plaquette p; entry t is the vertex between
        slots t and t+1."""
        return self._plaquette_vertices[p]

    def edge_endpoints(self, e):
        return self.edges[e]

    def leg(self, p, t):
        """The third edge at the vertex between plaquette slots t and t+1."""
        cyc = self.plaquettes[p]
        L = len(cyc)
        v = self._plaquette_vertices[p][t]
        e_cur, e_next = cyc[t][0], cyc[(t + 1) % L][0]
        here = [e for e in self.vertex_edges[v]]
        here.remove(e_cur)
        here.remove(e_next)
        if len(here) != 1:
            raise ValueError(f"cannot identify leg at plaquette {p} slot {t}")
        return here[0]

    def __repr__(self):
        return (f"TrivalentLattice(V={self.n_vertices}, E={self.n_edges}, "
                f"P={self.n_plaquettes}, genus={self.genus})")


def honeycomb_torus(rows, cols):
    """Honeycomb lattice on the torus with rows*cols hexagons.

    Vertices: A(r,c) and B(r,c) per cell; edges t0 = A(r,c)-B(r,c),
    t1 = B(r,c)-A(r,c+1), t2 = B(r,c)-A(r+1,c). rows*cols >= 2; single-row or
    single-column lattices have plaquettes visiting an edge twice, which the
    plaquette operators support.
    """
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise ValueError("need at least two hexagons")
    nv = 2 * rows * cols

    def A(r, c):
        return 2 * ((r % rows) * cols + (c % cols))

    def B(r, c):
        return A(r, c) + 1

    edges = []
    eidx = {}
    for r in range(rows):
        for c in range(cols):
            for ty, pair in ((0, (A(r, c), B(r, c))),
                             (1, (B(r, c), A(r, c + 1))),
                             (2, (B(r, c), A(r + 1, c)))):
                eidx[(ty, r, c)] = len(edges)
                edges.append(pair)

    def E(ty, r, c):
        return eidx[(ty, r % rows, c % cols)]

    plaquettes = []
    for r in range(rows):
        for c in range(cols):
            plaquettes.append([
                (E(0, r, c), 1),
                (E(1, r, c), 1),
                (E(2, r - 1, c + 1), -1),
                (E(0, r - 1, c + 1), -1),
                (E(1, r - 1, c), -1),
                (E(2, r - 1, c), 1),
            ])
    return TrivalentLattice(nv, edges, plaquettes)


def parse_lattice(text):
    """Parse the lattice format: `vertices N`, `edges M` + `e idx v1 v2`,
    `plaquettes K` + lines `p e0 s0 e1 s1 ...` with signs +-1."""
    n_vertices = None
    edges = {}
    n_edges = None
    plaquettes = []
    n_plaquettes = None
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "vertices":
            n_vertices = int(parts[1])
        elif parts[0] == "edges":
            n_edges = int(parts[1])
        elif parts[0] == "plaquettes":
            n_plaquettes = int(parts[1])
        elif parts[0] == "e":
            idx, u, v = map(int, parts[1:4])
            edges[idx] = (u, v)
        elif parts[0] == "p":
            vals = list(map(int, parts[1:]))
            if len(vals) % 2:
                raise ValueError(f"line {ln}: odd plaquette record")
            plaquettes.append(list(zip(vals[::2], vals[1::2])))
        else:
            raise ValueError(f"line {ln}: unrecognized record {parts[0]!r}")
    if n_vertices is None or n_edges is None:
        raise ValueError("missing vertices/edges header")
    if sorted(edges) != list(range(n_edges)):
        raise ValueError("edge indices must cover 0..M-1")
    if n_plaquettes is not None and n_plaquettes != len(plaquettes):
        raise ValueError("plaquette count mismatch")
    return TrivalentLattice(n_vertices, [edges[i] for i in range(n_edges)],
                            plaquettes)


def serialize_lattice(lat):
    lines = [f"vertices {lat.n_vertices}", f"edges {lat.n_edges}"]
    for i, (u, v) in enumerate(lat.edges):
        lines.append(f"e {i} {u} {v}")
    lines.append(f"plaquettes {lat.n_plaquettes}")
    for cyc in lat.plaquettes:
        lines.append("p " + " ".join(f"{e} {s}" for e, s in cyc))
    return "\n".join(lines) + "\n"


# -- basis ---------------------------------------------------------------------

def state_index(lat, ctx, labels):
    """Mixed-radix index of an edge labeling (edge 0 least significant)."""
    nl = ctx.num_labels
    idx = 0
    for e in range(lat.n_edges - 1, -1, -1):
        a = int(round(2 * labels[e]))
        if not 0 <= a < nl:
            raise ValueError(f"label {labels[e]} outside context")
        idx = idx * nl + a
    return idx


def state_labels(lat, ctx, index):
    """Inverse of state_index; returns doubled labels per edge."""
    nl = ctx.num_labels
    out = []
    for _ in range(lat.n_edges):
        out.append(index % nl)
        index //= nl
    return out


def _all_state_labels(lat, ctx):
    """(dim, n_edges) array of doubled labels for every basis state."""
    nl = ctx.num_labels
    dim = nl ** lat.n_edges
    idx = np.arange(dim)
    cols = [(idx // nl ** e) % nl for e in range(lat.n_edges)]
    return np.stack(cols, axis=1)


def _adm_table(ctx):
    nl = ctx.num_labels
    t = np.zeros((nl,) * 3, dtype=bool)
    for a in range(nl):
        for b in range(nl):
            for c in range(nl):
                t[a, b, c] = ctx.admissible_doubled(a, b, c)
    return t


# -- operators -------------------------------------------------------------------

def q_vertex(lat, ctx, vertex):
    """Diagonal projector: 1 iff the three labels at the vertex couple."""
    if not 0 <= vertex < lat.n_vertices:
        raise ValueError(f"vertex {vertex} out of range")
    x, y, z = lat.vertex_edges[vertex]
    labs = _all_state_labels(lat, ctx)
    diag = _adm_table(ctx)[labs[:, x], labs[:, y], labs[:, z]].astype(float)
    return sp.diags(diag).tocsr()


def _fusion_lists(ctx, s):
    """For each label a, the labels c with (a, s, c) admissible."""
    nl = ctx.num_labels
    return [tuple(c for c in range(nl) if ctx.admissible_doubled(a, s, c))
            for a in range(nl)]


def b_plaquette_s(lat, ctx, p, s):
    """Plaquette operator B_p^s: one F-symbol per plaquette vertex.

    Matrix element sum over new labels of the plaquette edges,
      prod_t F^{leg_t, old_t, old_{t+1}}_{s, new_{t+1}, new_t},
    acting as the identity off the plaquette. States violating vertex
    admissibility around p are annihilated.

    Plaquettes may visit an edge twice (small tori): the edge is then updated
    through a chained intermediate value which is summed over, and a leg that
    is itself a plaquette edge reads the value it has after the updates at
    slots earlier in the traversal, i.e. the factors implement the loop
    fusion sequentially in traversal order.
    """
    if not 0 <= p < lat.n_plaquettes:
        raise ValueError(f"plaquette {p} out of range")
    sd = int(round(2 * s))
    nl = ctx.num_labels
    if not 0 <= sd < nl:
        raise ValueError(f"label {s} outside context")

    cyc = lat.plaquettes[p]
    L = len(cyc)
    slot_edge = [cyc[t][0] for t in range(L)]
    legs = [lat.leg(p, t) for t in range(L)]
    slots_of = {}
    for t in range(L):
        slots_of.setdefault(slot_edge[t], []).append(t)

    F = ctx._F
    adm = _adm_table(ctx)
    fuse = _fusion_lists(ctx, sd)
    labs = _all_state_labels(lat, ctx)
    dim = labs.shape[0]
    powers = np.array([nl ** e for e in range(lat.n_edges)], dtype=np.int64)

    rows, cols, vals = [], [], []
    for ket in range(dim):
        kl = labs[ket]
        ok = True
        for t in range(L):
            if not adm[kl[legs[t]], kl[slot_edge[t]], kl[slot_edge[(t + 1) % L]]]:
                ok = False
                break
        if not ok:
            continue

        new = [0] * L   # value of slot t's edge after its slot-t update

        def old_val(t):
            e = slot_edge[t]
            first = slots_of[e][0]
            return kl[e] if t == first else new[first]

        def leg_val(t):
            e = legs[t]
            done = [u for u in slots_of.get(e, ()) if u < t]
            return new[done[-1]] if done else kl[e]

        def emit():
            coeff = 1.0
            for t in range(L):
                tn = (t + 1) % L
                coeff *= F[leg_val(t), old_val(t), old_val(tn),
                           sd, new[tn], new[t]]
                if coeff == 0.0:
                    return
            out = kl.copy()
            for t in range(L):
                out[slot_edge[t]] = new[t]
            bra = int(np.dot(out, powers))
            rows.append(bra)
            cols.append(ket)
            vals.append(coeff)

        def rec(t):
            if t == L:
                emit()
                return
            for c in fuse[old_val(t)]:
                new[t] = c
                rec(t + 1)

        rec(0)

    mat = sp.csr_matrix((vals, (rows, cols)), shape=(dim, dim))
    mat.sum_duplicates()
    return prune(mat)


def b_plaquette(lat, ctx, p, signed=False):
    """B_p = sum_s a_s B_p^s with a_s = d_s / sum_i d_i^2."""
    nl = ctx.num_labels
    dims = ctx.dims
    if signed:
        dims = dims * np.array([(-1.0) ** a for a in range(nl)])
    total = None
    for sd in range(nl):
        term = (dims[sd] / ctx.Dsq) * b_plaquette_s(lat, ctx, p, sd / 2)
        total = term if total is None else total + term
    return prune(total.tocsr())


def hamiltonian(lat, ctx):
    """H = -sum_I Q_I - sum_p B_p."""
    dim = ctx.num_labels ** lat.n_edges
    H = sp.csr_matrix((dim, dim))
    for v in range(lat.n_vertices):
        H = H - q_vertex(lat, ctx, v)
    for p in range(lat.n_plaquettes):
        H = H - b_plaquette(lat, ctx, p)
    return prune(H.tocsr())


def ground_projector(lat, ctx):
    """P = prod_I Q_I prod_p B_p; idempotent Hermitian, rank = ground-state
    degeneracy. The factors commute, so the ordering is immaterial."""
    P = None
    for v in range(lat.n_vertices):
        Q = q_vertex(lat, ctx, v)
        P = Q if P is None else P @ Q
    for p in range(lat.n_plaquettes):
        P = P @ b_plaquette(lat, ctx, p)
    return prune(P.tocsr())


def prune(mat, tol=1e-14):
    """Drop entries below tol in magnitude."""
    mat = mat.tocsr().copy()
    mat.data[np.abs(mat.data) < tol] = 0.0
    mat.eliminate_zeros()
    return mat


def spectrum(mat, k=None):
    """Eigenvalues of a Hermitian sparse operator, ascending (dense solve;
    dimension capped)."""
    dim = mat.shape[0]
    if dim > DENSE_LIMIT:
        raise ValueError(f"dimension {dim} exceeds dense-diagonalization limit "
                         f"{DENSE_LIMIT}")
    w = np.linalg.eigvalsh(mat.toarray())
    return w if k is None else w[:k]


def ground_degeneracy(lat, ctx):
    """(ground energy, degeneracy, gap) from exact diagonalization of H."""
    w = spectrum(hamiltonian(lat, ctx))
    e0 = w[0]
    deg = int(np.sum(w < e0 + DEGENERACY_TOL))
    gap = float(w[deg] - e0) if deg < len(w) else float("inf")
    return float(e0), deg, gap


def projector_rank(P):
    """Rank of an (approximately idempotent) projector by eigenvalue count."""
    w = np.linalg.eigvalsh(P.toarray() if sp.issparse(P) else P)
    return int(np.sum(w > 0.5))
