"""Numerical verification that the string-net ground-state projector equals
the Turaev-Viro cylinder amplitude matrix over the dual triangulation.

The two sides are computed by independent code paths: the projector from
F-symbol products of plaquette operators, the cylinder matrix from the 6j
state sum on the prism complex. They share only the quantum-algebraic tables
(and the deterministic edge-orientation convention, which carries no quantum
data).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complex3 import dual_triangulation, prism_complex
from .stringnet import ground_projector, projector_rank, DENSE_LIMIT
from .tv import tv_matrix

__all__ = ["verify_projector_equals_tv", "EquivalenceReport"]

DEFAULT_TOL = 1e-9


@dataclass
class EquivalenceReport:
    r: int
    dimension: int
    max_deviation: float
    tol: float
    passed: bool
    rank_projector: int
    rank_tv: int
    trace_projector: float
    trace_tv: float
    fitted_scalar: float

    def __str__(self):
        lines = [
            f"state space dimension : {self.dimension}",
            f"max |P - Z_TV|        : {self.max_deviation:.3e}  "
            f"(tol {self.tol:.1e})",
            f"rank  P / Z_TV        : {self.rank_projector} / {self.rank_tv}",
            f"trace P / Z_TV        : {self.trace_projector:.9f} / "
            f"{self.trace_tv:.9f}",
            f"fitted scalar         : {self.fitted_scalar:.12f}",
            f"verdict               : {'PASS' if self.passed else 'FAIL'}",
        ]
        return "\n".join(lines)


def verify_projector_equals_tv(lat, ctx, tol=DEFAULT_TOL, boundary="sqrt"):
    """Compare ground_projector(lat) with tv_matrix over the prism complex of
    the dual triangulation, aligned through the lattice/dual edge bijection.

    Returns an EquivalenceReport; exceeding the tolerance yields a failing
    report, not an exception. Structural problems (dual edge bijection
    failure, oversized state space) raise.
    """
    dim = ctx.num_labels ** lat.n_edges
    if dim > DENSE_LIMIT:
        raise ValueError(f"state space dimension {dim} exceeds {DENSE_LIMIT}")

    dual, edge_map = dual_triangulation(lat)
    pc = prism_complex(dual)
    edge_order = [edge_map[e] for e in range(lat.n_edges)]

    P = ground_projector(lat, ctx).toarray()
    M = tv_matrix(pc, ctx, edge_order=edge_order, boundary=boundary)
    if M.shape != P.shape:
        raise RuntimeError("index alignment failure between lattice basis and "
                           "dual boundary colorings")

    dev = float(np.abs(P - M).max())
    denom = float(np.sum(M * M))
    scalar = float(np.sum(M * P) / denom) if denom > 0 else float("nan")
    return EquivalenceReport(
        r=ctx.r,
        dimension=dim,
        max_deviation=dev,
        tol=tol,
        passed=bool(dev < tol),
        rank_projector=projector_rank(P),
        rank_tv=projector_rank(0.5 * (M + M.T)),
        trace_projector=float(np.trace(P)),
        trace_tv=float(np.trace(M)),
        fitted_scalar=scalar,
    )
