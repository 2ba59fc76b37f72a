import math
from itertools import permutations, product

import numpy as np
import pytest

from tvnet import qalgebra
from tvnet.qalgebra import (QContext, LabelTriple, get_context, qint,
                            quantum_dimension, admissible, q6j, sym6j,
                            F_symbol, theta, identity_residuals)


def fusion_channels(j1, j2, r):
    """Independent oracle: truncated SU(2) fusion j1 x j2 at level k = r-2."""
    k = (r - 2) / 2
    out = []
    j = abs(j1 - j2)
    while j <= min(j1 + j2, 2 * k - j1 - j2):
        out.append(j)
        j += 1
    return out


class TestQint:
    def test_identity_case(self):
        for r in (3, 4, 5, 7, 11):
            assert qint(1, r) == pytest.approx(1.0, abs=1e-15)

    def test_golden_ratio(self):
        # sin(2pi/5)/sin(pi/5) = 2 cos(pi/5)
        assert qint(2, 5) == pytest.approx(2 * math.cos(math.pi / 5), abs=1e-14)
        assert qint(2, 5) == pytest.approx(1.6180339887, abs=1e-9)

    def test_reflection(self):
        assert qint(3, 4) == pytest.approx(1.0, abs=1e-14)
        for r in (3, 5, 8):
            for n in range(r + 1):
                assert qint(n, r) == pytest.approx(qint(r - n, r), abs=1e-13)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            qint(-1, 5)
        with pytest.raises(ValueError):
            qint(6, 5)
        with pytest.raises(ValueError):
            qint(1, 2)


class TestQContext:
    def test_labels(self):
        ctx = get_context(5)
        assert ctx.labels == (0.0, 0.5, 1.0, 1.5)
        assert ctx.num_labels == 4

    def test_dims_positive_and_d0(self):
        for r in (3, 4, 5, 6, 8):
            ctx = get_context(r)
            assert all(d > 0 for d in ctx.d.values())
            assert ctx.d[0.0] == pytest.approx(1.0, abs=1e-15)

    def test_dsq_is_sum_of_squares(self):
        for r in (3, 4, 5, 6, 8):
            ctx = get_context(r)
            assert ctx.Dsq == pytest.approx(
                sum(d * d for d in ctx.d.values()), abs=1e-12)

    def test_dsq_golden(self):
        phi = (1 + math.sqrt(5)) / 2
        assert get_context(5).Dsq == pytest.approx(2 + 2 * phi**2, abs=1e-12)

    def test_bad_r(self):
        with pytest.raises(ValueError):
            QContext(2)
        with pytest.raises(ValueError):
            QContext(3.5)


class TestQuantumDimension:
    def test_vacuum(self):
        assert quantum_dimension(get_context(4), 0) == pytest.approx(1.0)

    def test_half_at_r3(self):
        # qint(2,3) = sin(2pi/3)/sin(pi/3) = 1
        assert quantum_dimension(get_context(3), 0.5) == pytest.approx(1.0, abs=1e-14)

    def test_half_at_r5(self):
        assert quantum_dimension(get_context(5), 0.5) == pytest.approx(
            qint(2, 5), abs=1e-15)

    def test_outside_context(self):
        with pytest.raises(ValueError):
            quantum_dimension(get_context(3), 1.0)
        with pytest.raises(ValueError):
            quantum_dimension(get_context(3), 0.3)


class TestAdmissible:
    def test_vacuum_triple(self):
        assert admissible(get_context(3), 0, 0, 0)

    def test_parity_violation(self):
        assert not admissible(get_context(3), 0.5, 0.5, 0.5)

    def test_cutoff(self):
        assert not admissible(get_context(4), 1, 1, 1)
        assert admissible(get_context(5), 1, 1, 1)

    def test_against_fusion_rules(self):
        for r in (3, 4, 5, 6):
            ctx = get_context(r)
            for i, j, k in product(ctx.labels, repeat=3):
                want = k in fusion_channels(i, j, r)
                assert admissible(ctx, i, j, k) == want, (r, i, j, k)

    def test_permutation_symmetric(self):
        for r in (3, 5):
            ctx = get_context(r)
            for t in product(ctx.labels, repeat=3):
                vals = {admissible(ctx, *p) for p in permutations(t)}
                assert len(vals) == 1

    def test_label_triple(self):
        ctx = get_context(4)
        assert admissible(ctx, LabelTriple(0.5, 0.5, 1.0))
        assert not admissible(ctx, LabelTriple(0.5, 0.5, 0.5))


class TestQ6j:
    def test_all_vacuum(self):
        for r in (3, 4, 5):
            assert q6j(get_context(r), 0, 0, 0, 0, 0, 0) == pytest.approx(1.0)

    def test_paper_value_r3(self):
        # d_0 * {1/2 1/2 0; 1/2 1/2 0} = F^{hh0}_{hh0} = v_0/(v_h v_h) = 1 at r=3
        ctx = get_context(3)
        assert q6j(ctx, .5, .5, 0, .5, .5, 0) == pytest.approx(1.0, abs=1e-12)

    def test_eq12_relation(self):
        for r in (3, 4, 5):
            ctx = get_context(r)
            for t in product(ctx.labels, repeat=6):
                n = t[5]
                assert F_symbol(ctx, *t) == pytest.approx(
                    ctx.d[n] * q6j(ctx, *t), abs=1e-13)

    def test_zero_iff_inadmissible(self):
        for r in (3, 4, 5):
            ctx = get_context(r)
            for (i, j, m, k, l, n) in product(ctx.labels, repeat=6):
                coupled = (admissible(ctx, i, j, m) and admissible(ctx, k, l, m)
                           and admissible(ctx, i, l, n) and admissible(ctx, j, k, n))
                val = q6j(ctx, i, j, m, k, l, n)
                if not coupled:
                    assert val == 0.0
                else:
                    assert val != 0.0

    def test_column_stabilizer_symmetry(self):
        # exact symmetries of q6j: moves fixing the (m, n) column
        for r in (4, 5):
            ctx = get_context(r)
            for (i, j, m, k, l, n) in product(ctx.labels, repeat=6):
                v0 = q6j(ctx, i, j, m, k, l, n)
                assert q6j(ctx, j, i, m, l, k, n) == pytest.approx(v0, abs=1e-13)
                assert q6j(ctx, l, k, m, j, i, n) == pytest.approx(v0, abs=1e-13)
                assert q6j(ctx, k, l, m, i, j, n) == pytest.approx(v0, abs=1e-13)

    def test_orthogonality(self):
        # sum_n d_n d_m {i j m; k l n}{i j n; k l m} = delta on admissibility
        for r in (5,):
            ctx = get_context(r)
            for (i, j, k, l, m, m2) in product(ctx.labels, repeat=6):
                tot = sum(ctx.d[n] * math.sqrt(ctx.d[m] * ctx.d[m2])
                          * sym6j(ctx, i, j, m, k, l, n)
                          * sym6j(ctx, i, j, m2, k, l, n)
                          for n in ctx.labels)
                want = 1.0 if (m == m2 and admissible(ctx, i, j, m)
                               and admissible(ctx, k, l, m)) else 0.0
                assert tot == pytest.approx(want, abs=1e-10)


class TestSym6j:
    def test_full_tetrahedral_symmetry(self):
        for r in (3, 4, 5, 6):
            assert qalgebra.tetrahedral_residual(get_context(r)) < 1e-12

    def test_first_line_form(self):
        # sym6j(i,j,k,j,i,0) = 1/(v_i v_j) on admissible triples
        for r in (3, 4, 5):
            ctx = get_context(r)
            for i, j, k in product(ctx.labels, repeat=3):
                want = 1 / math.sqrt(ctx.d[i] * ctx.d[j]) \
                    if admissible(ctx, i, j, k) else 0.0
                assert sym6j(ctx, i, j, k, j, i, 0) == pytest.approx(want, abs=1e-12)


class TestFSymbol:
    def test_triangle_exchange_values(self):
        # F^{ijk}_{ji0} = v_k/(v_i v_j) delta_ijk
        for r in (3, 4, 5, 6):
            ctx = get_context(r)
            v = {lab: math.sqrt(d) for lab, d in ctx.d.items()}
            for i, j, k in product(ctx.labels, repeat=3):
                want = v[k] / (v[i] * v[j]) if admissible(ctx, i, j, k) else 0.0
                assert F_symbol(ctx, i, j, k, j, i, 0) == pytest.approx(
                    want, abs=1e-12)

    def test_all_vacuum(self):
        assert F_symbol(get_context(4), 0, 0, 0, 0, 0, 0) == pytest.approx(1.0)

    def test_index_symmetries(self):
        for r in (3, 4, 5, 6):
            assert qalgebra.symmetry_residual(get_context(r)) < 1e-12

    def test_pentagon(self):
        for r in (3, 4, 5, 6):
            assert qalgebra.pentagon_residual(get_context(r)) < 1e-10

    def test_pentagon_cross_check_r3(self):
        # F^{hh0}_{hhh}: the coupled triples (h,h,h) violate the branching
        # rule, so the value the pentagon suite admits is exactly zero
        ctx = get_context(3)
        assert F_symbol(ctx, .5, .5, 0, .5, .5, .5) == 0.0
        assert qalgebra.pentagon_residual(ctx) < 1e-12

    def test_pentagon_pins_nonzero_elements(self):
        # perturbing a single nonzero F entry must break the pentagon, i.e.
        # the identity suite genuinely determines the table
        ctx = get_context(3)
        F = ctx._F.copy()
        F.setflags(write=True)
        idx = (1, 0, 1, 1, 0, 1)   # doubled labels of F^{h 0 h}_{h 0 h}
        assert F[idx] != 0.0
        F[idx] += 1e-3
        lhs = np.einsum("mlqkpn,jipmns,jsnlkr->mlqkpjisr", F, F, F,
                        optimize=True)
        rhs = np.einsum("jipqkr,riqmls->mlqkpjisr", F, F, optimize=True)
        assert np.abs(lhs - rhs).max() > 1e-5

    def test_row_orthogonality(self):
        for r in (3, 4, 5):
            assert qalgebra.orthogonality_residual(get_context(r)) < 1e-10


class TestThetaFunction:
    def test_theta_positive(self):
        for r in (3, 4, 5, 6):
            ctx = get_context(r)
            for t in product(ctx.labels, repeat=3):
                th = theta(ctx, *t)
                if admissible(ctx, *t):
                    assert th > 0
                else:
                    assert th == 0.0

    def test_theta_loop_value(self):
        # theta(a, a, 0) = d_a
        for r in (4, 6):
            ctx = get_context(r)
            for a in ctx.labels:
                assert theta(ctx, a, a, 0) == pytest.approx(ctx.d[a], abs=1e-12)


def test_identity_residuals_all_small():
    res = identity_residuals(get_context(5))
    assert set(res) == {"first_line", "symmetry", "tetrahedral", "pentagon",
                        "orthogonality"}
    assert max(res.values()) < 1e-12


def test_context_immutability():
    ctx = get_context(3)
    with pytest.raises(ValueError):
        ctx._F[0, 0, 0, 0, 0, 0] = 2.0
