"""SU(2)_q data at a root of unity: q-integers, quantum dimensions, admissibility,
q-6j symbols and normalized F-symbols.

Labels are the half-integers j = 0, 1/2, 1, ..., (r-2)/2. Internally every label
is stored doubled (a = 2j, an int), which keeps all arithmetic exact. Quantum
dimensions are taken positive, d_j = [2j+1]_q with q = exp(i*pi/r); this is the
loop convention in which all theta graphs evaluate positively, and it is the one
convention under which the whole identity suite below (triangle-exchange values,
index symmetries, pentagon, orthogonality) closes with real symbols.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "QContext",
    "LabelTriple",
    "qint",
    "quantum_dimension",
    "admissible",
    "q6j",
    "F_symbol",
    "sym6j",
    "theta",
    "identity_residuals",
]


def qint(n, r):
    """Quantum integer [n]_q = sin(n*pi/r)/sin(pi/r) for q = exp(i*pi/r).

    Satisfies [n] = [r-n]; [0] = 0, [1] = 1, [r] = 0.
    """
    if r < 3:
        raise ValueError(f"root-of-unity order r must be >= 3, got {r}")
    if not 0 <= n <= r:
        raise ValueError(f"qint argument n={n} outside [0, {r}]")
    return math.sin(n * math.pi / r) / math.sin(math.pi / r)


def _as_doubled(j):
    """Half-integer label -> exact doubled int, or raise."""
    a = 2 * j
    ai = int(round(a))
    if abs(a - ai) > 1e-9 or ai < 0:
        raise ValueError(f"label {j} is not a nonnegative half-integer")
    return ai


@dataclass(frozen=True)
class LabelTriple:
    """Three labels meeting at a vertex/triangle; admissibility is a pure
    function of the triple and r."""
    i: float
    j: float
    k: float

    def doubled(self):
        return (_as_doubled(self.i), _as_doubled(self.j), _as_doubled(self.k))


class QContext:
    """Immutable container for all SU(2)_q numerical data at a given r.

    Attributes
    ----------
    r : int               root-of-unity order, q = exp(i*pi/r)
    labels : tuple        admissible spins (0, 1/2, ..., (r-2)/2)
    d : dict              label -> quantum dimension [2j+1]_q (positive)
    Dsq : float           sum of d_j^2 over all labels
    num_labels : int      r - 1

    The 6j/F tables are dense arrays over doubled labels, built once at
    construction; all lookups afterwards are pure reads, safe to share
    across workers.
    """

    def __init__(self, r):
        if not isinstance(r, int) or r < 3:
            raise ValueError(f"r must be an integer >= 3, got {r!r}")
        self.r = r
        self.num_labels = nl = r - 1
        self.labels = tuple(a / 2 for a in range(nl))

        # [n]! for n = 0..r-1 ([r]! would vanish and never appears for
        # admissible data)
        qf = np.ones(r)
        for n in range(1, r):
            qf[n] = qf[n - 1] * qint(n, r)
        self._qfact = qf

        self.dims = np.array([qint(a + 1, r) for a in range(nl)])
        self.sqrt_dims = np.sqrt(self.dims)
        self.d = {self.labels[a]: float(self.dims[a]) for a in range(nl)}
        self.Dsq = float(np.sum(self.dims**2))

        self._theta = self._build_theta()
        self._sym6j = self._build_sym6j()
        # F^{ijm}_{kln} = v_m v_n * sym6j
        idx = np.indices((nl,) * 6)
        v = self.sqrt_dims
        self._F = v[idx[2]] * v[idx[5]] * self._sym6j
        for arr in (self.dims, self.sqrt_dims, self._theta, self._sym6j, self._F):
            arr.setflags(write=False)

    # -- admissibility ------------------------------------------------------

    def admissible_doubled(self, a, b, c):
        """Branching rule on doubled labels: parity, triangle, level cutoff."""
        return ((a + b + c) % 2 == 0
                and abs(a - b) <= c <= a + b
                and a + b + c <= 2 * (self.r - 2))

    # -- construction helpers ----------------------------------------------

    def _build_theta(self):
        """theta(a,b,c): value of the trivalent theta graph, all positive.

        theta = [s+1]! [s-a]! [s-b]! [s-c]! / ([a]! [b]! [c]!), s = (a+b+c)/2,
        in doubled labels.
        """
        nl, qf = self.num_labels, self._qfact
        th = np.zeros((nl,) * 3)
        for a in range(nl):
            for b in range(nl):
                for c in range(nl):
                    if not self.admissible_doubled(a, b, c):
                        continue
                    s = (a + b + c) // 2
                    th[a, b, c] = (qf[s + 1] * qf[s - a] * qf[s - b] * qf[s - c]
                                   / (qf[a] * qf[b] * qf[c]))
        return th

    def _chi_qfact(self, n):
        """(-1)^{n(n-1)/2} [n]!; zero for n >= r.

        This is the q-factorial carrying the sign that relates the positive
        loop convention to the tetrahedral-net evaluation.
        """
        if n < 0 or n >= self.r:
            return 0.0
        sign = -1.0 if (n * (n - 1) // 2) % 2 else 1.0
        return sign * self._qfact[n]

    def _tet(self, A, B, C, D, E, F):
        """Tetrahedral net evaluation Tet[A B E; C D F] (doubled labels).

        Coupled triples: (A,D,E), (B,C,E), (A,B,F), (C,D,F). Fully symmetric
        under the tetrahedral symmetry group. Racah-type single alternating
        sum over q-factorials.
        """
        adm = self.admissible_doubled
        if not (adm(A, D, E) and adm(B, C, E) and adm(A, B, F) and adm(C, D, F)):
            return 0.0
        QF = self._chi_qfact
        a = ((A + D + E) // 2, (B + C + E) // 2, (A + B + F) // 2, (C + D + F) // 2)
        b = ((B + D + E + F) // 2, (A + C + E + F) // 2, (A + B + C + D) // 2)
        pref = 1.0
        for bb in b:
            for aa in a:
                f = QF(bb - aa)
                if f == 0.0:
                    return 0.0
                pref *= f
        for x in (A, B, C, D, E, F):
            pref /= QF(x)
        tot = 0.0
        for s in range(max(a), min(b) + 1):
            num = QF(s + 1) if s % 2 == 0 else -QF(s + 1)
            if num == 0.0:
                continue
            den = 1.0
            for aa in a:
                den *= QF(s - aa)
            for bb in b:
                den *= QF(bb - s)
            tot += num / den
        return pref * tot

    def _build_sym6j(self):
        """Normalized symmetric 6j: Tet / sqrt of the four theta graphs.

        Invariant under all column permutations and upper/lower swaps of
        column pairs; this is the per-tetrahedron weight of the state sum.
        """
        nl = self.num_labels
        S = np.zeros((nl,) * 6)
        th = self._theta
        for i in range(nl):
            for j in range(nl):
                for m in range(nl):
                    if not self.admissible_doubled(i, j, m):
                        continue
                    for k in range(nl):
                        for l in range(nl):
                            if not self.admissible_doubled(k, l, m):
                                continue
                            for n in range(nl):
                                t = self._tet(i, j, k, l, n, m)
                                if t == 0.0:
                                    continue
                                den = math.sqrt(th[i, j, m] * th[k, l, m]
                                                * th[i, l, n] * th[j, k, n])
                                S[i, j, m, k, l, n] = t / den
        return S

    def __repr__(self):
        return f"QContext(r={self.r}, labels={len(self.labels)})"


@lru_cache(maxsize=32)
def _context_cache(r):
    return QContext(r)


def get_context(r):
    """Shared QContext instances (immutable, so caching is safe)."""
    return _context_cache(r)


def quantum_dimension(ctx, j):
    """d_j = [2j+1]_q; strictly positive for labels in ctx."""
    a = _as_doubled(j)
    if a >= ctx.num_labels:
        raise ValueError(f"label {j} outside context labels (r={ctx.r})")
    return float(ctx.dims[a])


def admissible(ctx, i, j=None, k=None):
    """True iff the triple couples: integer total spin, triangle inequality,
    and i+j+k <= r-2. Accepts a LabelTriple or three labels."""
    if isinstance(i, LabelTriple):
        a, b, c = i.doubled()
    else:
        a, b, c = _as_doubled(i), _as_doubled(j), _as_doubled(k)
    for x in (a, b, c):
        if x >= ctx.num_labels:
            raise ValueError("label outside context")
    return ctx.admissible_doubled(a, b, c)


def _six_doubled(ctx, i, j, m, k, l, n):
    t = tuple(_as_doubled(x) for x in (i, j, m, k, l, n))
    if max(t) >= ctx.num_labels:
        raise ValueError("label outside context")
    return t


def sym6j(ctx, i, j, m, k, l, n):
    """Fully symmetric normalized 6j symbol (the tetrahedron weight).

    Zero whenever any of the coupled triples (i,j,m), (k,l,m), (i,l,n),
    (j,k,n) is inadmissible.
    """
    t = _six_doubled(ctx, i, j, m, k, l, n)
    return float(ctx._sym6j[t])


def q6j(ctx, i, j, m, k, l, n):
    """q-6j symbol {i j m; k l n} normalized so that d_n * q6j = F^{ijm}_{kln}.

    Equals (v_m/v_n) * sym6j; symmetric under the subgroup of tetrahedral
    moves fixing the (m, n) column, and related to the remaining moves by
    ratios of sqrt-dimensions.
    """
    t = _six_doubled(ctx, i, j, m, k, l, n)
    val = ctx._sym6j[t]
    if val == 0.0:
        return 0.0
    return float(val * ctx.sqrt_dims[t[2]] / ctx.sqrt_dims[t[5]])


def F_symbol(ctx, i, j, m, k, l, n):
    """F^{ijm}_{kln} = v_m v_n * sym6j = d_n * q6j.

    Satisfies F^{ijk}_{ji0} = v_k/(v_i v_j) on admissible triples, the index
    symmetries F^{ijm}_{kln} = F^{lkm}_{jin} = F^{jim}_{lkn}, the pentagon
    identity, and row orthogonality.
    """
    t = _six_doubled(ctx, i, j, m, k, l, n)
    return float(ctx._F[t])


def theta(ctx, i, j, k):
    """Positive theta-graph evaluation for an admissible triple, else 0."""
    a, b, c = _as_doubled(i), _as_doubled(j), _as_doubled(k)
    if max(a, b, c) >= ctx.num_labels:
        raise ValueError("label outside context")
    return float(ctx._theta[a, b, c])


# -- built-in verification suite ------------------------------------------

def first_line_residual(ctx):
    """max |F^{ijk}_{ji0} - v_k/(v_i v_j) delta_ijk| over all triples."""
    nl, v, F = ctx.num_labels, ctx.sqrt_dims, ctx._F
    worst = 0.0
    for i in range(nl):
        for j in range(nl):
            for k in range(nl):
                want = v[k] / (v[i] * v[j]) if ctx.admissible_doubled(i, j, k) else 0.0
                worst = max(worst, abs(F[i, j, k, j, i, 0] - want))
    return worst


def symmetry_residual(ctx):
    """max deviation of F^{ijm}_{kln} = F^{lkm}_{jin} = F^{jim}_{lkn}."""
    F = ctx._F
    return float(max(np.abs(F - F.transpose(4, 3, 2, 1, 0, 5)).max(),
                     np.abs(F - F.transpose(1, 0, 2, 4, 3, 5)).max()))


def tetrahedral_residual(ctx):
    """max deviation of sym6j under generators of the full tetrahedral group."""
    S = ctx._sym6j
    gens = [(1, 0, 2, 4, 3, 5),   # swap first two columns
            (0, 2, 1, 3, 5, 4),   # swap last two columns
            (3, 4, 2, 0, 1, 5),   # upper/lower flip of columns 1,2
            (3, 1, 5, 0, 4, 2)]   # upper/lower flip of columns 1,3
    return float(max(np.abs(S - S.transpose(p)).max() for p in gens))


def pentagon_residual(ctx):
    """max residual of sum_n F^{mlq}_{kpn} F^{jip}_{mns} F^{jsn}_{lkr}
    - F^{jip}_{qkr} F^{riq}_{mls} over all label tuples."""
    F = ctx._F
    lhs = np.einsum("mlqkpn,jipmns,jsnlkr->mlqkpjisr", F, F, F, optimize=True)
    rhs = np.einsum("jipqkr,riqmls->mlqkpjisr", F, F, optimize=True)
    return float(np.abs(lhs - rhs).max())


def orthogonality_residual(ctx):
    """max residual of sum_n F^{ijm}_{kln} F^{ijm'}_{kln} = delta_{mm'}
    on admissible (i,j,m), (k,l,m)."""
    F = ctx._F
    nl = ctx.num_labels
    got = np.einsum("ijmkln,ijpkln->ijklmp", F, F, optimize=True)
    worst = 0.0
    for i in range(nl):
        for j in range(nl):
            for k in range(nl):
                for l in range(nl):
                    for m in range(nl):
                        ok = ctx.admissible_doubled(i, j, m) and \
                            ctx.admissible_doubled(k, l, m)
                        for p in range(nl):
                            want = 1.0 if (m == p and ok) else 0.0
                            worst = max(worst, abs(got[i, j, k, l, m, p] - want))
    return worst


def identity_residuals(ctx):
    """All consistency-condition residuals in one dict."""
    return {
        "first_line": first_line_residual(ctx),
        "symmetry": symmetry_residual(ctx),
        "tetrahedral": tetrahedral_residual(ctx),
        "pentagon": pentagon_residual(ctx),
        "orthogonality": orthogonality_residual(ctx),
    }
