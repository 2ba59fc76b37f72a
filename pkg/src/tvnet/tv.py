"""Turaev-Viro state sums: closed 3-manifold invariants and cylinder
amplitudes over a triangulated surface with fixed boundary colorings.

Weights: d_j per interior edge, 1/Dsq per interior vertex, 1/sqrt(Dsq) per
boundary vertex, and the symmetric normalized 6j symbol per tetrahedron.
Boundary edge weights come in two conventions (see `tv_cylinder`); the
default splits sqrt(d_j) onto both boundary copies, which makes the cylinder
matrix Hermitian elementwise and is the convention under which it equals the
string-net ground-state projector.
"""

from __future__ import annotations

import numpy as np

from .complex3 import (EDGE_INDEX, Triangulation3, PrismComplex,
                       _coloring_order)

__all__ = ["tv_closed", "tv_cylinder", "tv_matrix", "tet_slot_classes"]

# 6j slots (j1..j6) in terms of tetrahedron edges: the coupled triples
# (j1,j2,j3), (j4,j5,j3), (j1,j5,j6), (j2,j4,j6) are the four faces.
_SLOT_EDGES = (EDGE_INDEX[(0, 1)], EDGE_INDEX[(0, 2)], EDGE_INDEX[(1, 2)],
               EDGE_INDEX[(2, 3)], EDGE_INDEX[(1, 3)], EDGE_INDEX[(0, 3)])


def tet_slot_classes(tri, t):
    """Edge classes of tet t in 6j slot order."""
    te = tri.tet_edges[t]
    return tuple(te[e] for e in _SLOT_EDGES)


def _edge_weights(ctx, signed):
    w = ctx.dims.copy()
    if signed:
        w = w * np.array([(-1.0) ** a for a in range(ctx.num_labels)])
    return w


def _statesum(tri, ctx, fixed, edge_weight_fn, vertex_factor, shard=None,
              kahan=False):
    """Core DFS: sum over admissible colorings of weight products.

    edge_weight_fn(edge_class, doubled_label) -> factor. Tetrahedron symbols
    are multiplied in as soon as all six of a tet's edges are assigned.
    """
    n_edges = tri.n_edge_classes
    order = _coloring_order(n_edges, tri.face_edges, fixed)
    pos = {e: i for i, e in enumerate(order)}

    face_at = [[] for _ in range(n_edges)]
    for trip in tri.face_edges:
        face_at[max(pos[e] for e in trip)].append(trip)
    tet_at = [[] for _ in range(n_edges)]
    for t in range(tri.n_tets):
        slots = tet_slot_classes(tri, t)
        tet_at[max(pos[e] for e in slots)].append(slots)

    nl = ctx.num_labels
    adm = ctx.admissible_doubled
    six = ctx._sym6j
    arr = [0] * n_edges
    first_free = next((i for i, e in enumerate(order) if e not in fixed), None)

    total = 0.0
    comp = 0.0  # Kahan compensation

    def add(x):
        nonlocal total, comp
        if kahan:
            y = x - comp
            t_ = total + y
            comp = (t_ - total) - y
            total = t_
        else:
            total += x

    def rec(i, weight):
        if weight == 0.0:
            return
        if i == n_edges:
            add(weight)
            return
        e = order[i]
        if e in fixed:
            labs = (fixed[e],)
        elif shard is not None and i == first_free:
            k, n = shard
            labs = tuple(a for a in range(nl) if a % n == k)
        else:
            labs = range(nl)
        for a in labs:
            arr[e] = a
            ok = True
            for x, y, z in face_at[i]:
                if not adm(arr[x], arr[y], arr[z]):
                    ok = False
                    break
            if not ok:
                continue
            w = weight * edge_weight_fn(e, a)
            for slots in tet_at[i]:
                w *= six[arr[slots[0]], arr[slots[1]], arr[slots[2]],
                         arr[slots[3]], arr[slots[4]], arr[slots[5]]]
                if w == 0.0:
                    break
            rec(i + 1, w)

    rec(0, vertex_factor)
    return total


def tv_closed(tri, ctx, signed=False, shard=None, kahan=False):
    """Turaev-Viro invariant of a closed triangulated 3-manifold.

    Sum over admissible edge colorings of
    Dsq^{-N0} * prod_edges d_j * prod_tets {6j}. Real by construction in the
    positive convention; the signed flag weights edges by (-1)^{2j} d_j
    instead (experimental, see the weight-convention notes).
    """
    if not isinstance(tri, Triangulation3):
        raise TypeError("tv_closed expects a Triangulation3")
    if not tri.closed:
        raise ValueError("tv_closed requires a closed complex "
                         f"({len(tri.boundary_faces)} boundary faces present)")
    w = _edge_weights(ctx, signed)
    return _statesum(tri, ctx, {}, lambda e, a: w[a],
                     ctx.Dsq ** (-tri.N0), shard=shard, kahan=kahan)


def _doubled_boundary_coloring(pc, ctx, coloring, which):
    marks = pc.bottom_edge if which == "bottom" else pc.top_edge
    out = {}
    for xe, cls in marks.items():
        try:
            lab = coloring[xe]
        except (KeyError, IndexError):
            raise ValueError(f"{which} coloring missing X edge {xe}") from None
        a = int(round(2 * lab))
        if not 0 <= a < ctx.num_labels:
            raise ValueError(f"label {lab} outside context")
        out[cls] = a
    return out


def _boundary_admissible(pc, ctx, doubled, which):
    marks = pc.bottom_edge if which == "bottom" else pc.top_edge
    for trip in pc.base.tri_edges:
        a, b, c = (doubled[marks[e]] for e in trip)
        if not ctx.admissible_doubled(a, b, c):
            return False
    return True


def _cylinder_weights(pc, ctx, boundary, signed):
    """Per-edge-class weight table for the cylinder sum, and the constant
    vertex factor."""
    tri = pc.tri3
    w = _edge_weights(ctx, signed)
    sqw = np.sqrt(np.abs(w)) * np.where(w < 0, 1j, 1.0) if signed else np.sqrt(w)
    bottom = set(pc.bottom_edge.values())
    top = set(pc.top_edge.values())

    def edge_weight(e, a):
        if e in bottom:
            return sqw[a] if boundary == "sqrt" else w[a]
        if e in top:
            return sqw[a] if boundary == "sqrt" else 1.0
        if e in tri.boundary_edge_classes:
            raise RuntimeError("unmarked boundary edge in cylinder complex")
        return w[a]

    n_interior_v = tri.n_vertex_classes - len(tri.boundary_vertex_classes)
    vfac = ctx.Dsq ** (-n_interior_v) * ctx.Dsq ** (-0.5 * len(tri.boundary_vertex_classes))
    return edge_weight, vfac


def tv_cylinder(pc, ctx, bottom, top, boundary="sqrt", signed=False,
                shard=None, kahan=False):
    """Cylinder amplitude of X x [0,1] between two colorings of X.

    bottom/top map X edge classes to labels. Inadmissible boundary colorings
    give exactly 0. boundary="sqrt" puts sqrt(d_j) on each boundary edge copy
    (both components); boundary="black-white" puts d_j on the bottom (black)
    copy and nothing on the top, reproducing the single-sided bookkeeping.
    """
    if boundary not in ("sqrt", "black-white"):
        raise ValueError(f"unknown boundary weight mode {boundary!r}")
    fixed = _doubled_boundary_coloring(pc, ctx, bottom, "bottom")
    fixed.update(_doubled_boundary_coloring(pc, ctx, top, "top"))
    db = {e: fixed[cls] for e, cls in pc.bottom_edge.items()}
    dt = {e: fixed[cls] for e, cls in pc.top_edge.items()}
    if not _boundary_admissible(pc, ctx, {pc.bottom_edge[e]: v for e, v in db.items()}, "bottom") \
            or not _boundary_admissible(pc, ctx, {pc.top_edge[e]: v for e, v in dt.items()}, "top"):
        return 0.0
    edge_weight, vfac = _cylinder_weights(pc, ctx, boundary, signed)
    return _statesum(pc.tri3, ctx, fixed, edge_weight, vfac, shard=shard,
                     kahan=kahan)


def _prism_tensors(pc, ctx):
    """Index layout for contracting the prism complex as a tensor network.

    Returns (operands, index-lists, bottom-axes, top-axes) for einsum over
    integer axis labels: one label per X edge for each of bottom/top/diagonal,
    one per X vertex for the verticals.
    """
    x2 = pc.base
    E, V = x2.n_edge_classes, x2.n_vertex_classes
    ax_bot = {e: e for e in range(E)}
    ax_top = {e: E + e for e in range(E)}
    ax_diag = {e: 2 * E + e for e in range(E)}
    ax_vert = {v: 3 * E + v for v in range(V)}

    inv = {}
    for xe, cls in pc.bottom_edge.items():
        inv[cls] = ax_bot[xe]
    for xe, cls in pc.top_edge.items():
        inv[cls] = ax_top[xe]
    for xe, cls in pc.diag_edge.items():
        inv[cls] = ax_diag[xe]
    for xv, cls in pc.vert_edge.items():
        inv[cls] = ax_vert[xv]

    operands, subscripts = [], []
    for t in range(pc.tri3.n_tets):
        slots = tet_slot_classes(pc.tri3, t)
        operands.append(ctx._sym6j)
        subscripts.append([inv[c] for c in slots])
    return operands, subscripts, ax_bot, ax_top, ax_diag, ax_vert


def tv_matrix(pc, ctx, edge_order=None, boundary="sqrt", signed=False,
              method="auto"):
    """All cylinder amplitudes as a matrix over boundary colorings of X.

    Rows index the top (bra) coloring, columns the bottom (ket) coloring.
    Basis index = sum_e label_index(e) * nl^position(e) following edge_order
    (default: X edge classes 0..E-1; pass the lattice edge order to align
    with string-net operators).

    method "contract" sums the interior by tensor contraction; "enumerate"
    runs the coloring DFS; "auto" picks contraction and falls back.
    """
    x2 = pc.base
    E = x2.n_edge_classes
    nl = ctx.num_labels
    if edge_order is None:
        edge_order = list(range(E))
    if sorted(edge_order) != list(range(E)):
        raise ValueError("edge_order must enumerate the X edge classes")
    dim = nl ** E

    if method == "auto":
        method = "contract"

    if method == "contract":
        w = _edge_weights(ctx, signed)
        sq = np.sqrt(np.abs(w)) * np.where(w < 0, 1j, 1.0) if signed else np.sqrt(w)
        operands, subscripts, ax_bot, ax_top, ax_diag, ax_vert = \
            _prism_tensors(pc, ctx)
        for e in range(E):
            operands.append(sq if boundary == "sqrt" else w)
            subscripts.append([ax_bot[e]])
            if boundary == "sqrt":
                operands.append(sq)
                subscripts.append([ax_top[e]])
            operands.append(w)
            subscripts.append([ax_diag[e]])
        for v in range(x2.n_vertex_classes):
            operands.append(w)
            subscripts.append([ax_vert[v]])
        # output: top axes then bottom axes, most significant edge first
        out = [ax_top[e] for e in reversed(edge_order)] + \
              [ax_bot[e] for e in reversed(edge_order)]
        args = []
        for op, sub in zip(operands, subscripts):
            args.extend((op, sub))
        args.append(out)
        M = np.einsum(*args, optimize=True)
        M = M.reshape(dim, dim)
        # two boundary vertices per X vertex, Dsq^{-1/2} each
        M = M * ctx.Dsq ** (-float(x2.n_vertex_classes))
        return M

    if method == "enumerate":
        M = np.zeros((dim, dim))
        edge_pos = {e: i for i, e in enumerate(edge_order)}
        bot_classes = {cls: xe for xe, cls in pc.bottom_edge.items()}
        top_classes = {cls: xe for xe, cls in pc.top_edge.items()}
        edge_weight, vfac = _cylinder_weights(pc, ctx, boundary, signed)
        tri = pc.tri3
        six = ctx._sym6j
        tslots = [tet_slot_classes(tri, t) for t in range(tri.n_tets)]
        from .complex3 import _enumerate_doubled
        for arr in _enumerate_doubled(tri.n_edge_classes, tri.face_edges,
                                      ctx, {}):
            wgt = vfac
            for e, a in enumerate(arr):
                wgt *= edge_weight(e, a)
            for slots in tslots:
                wgt *= six[arr[slots[0]], arr[slots[1]], arr[slots[2]],
                           arr[slots[3]], arr[slots[4]], arr[slots[5]]]
                if wgt == 0.0:
                    break
            if wgt == 0.0:
                continue
            bidx = sum(arr[cls] * nl ** edge_pos[xe]
                       for cls, xe in bot_classes.items())
            tidx = sum(arr[cls] * nl ** edge_pos[xe]
                       for cls, xe in top_classes.items())
            M[tidx, bidx] += wgt
        return M

    raise ValueError(f"unknown method {method!r}")
