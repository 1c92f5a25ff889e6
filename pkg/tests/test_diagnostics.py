import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pipct import corpus
from pipct.adaptive import AdaptiveConfig, adaptive_partition
from pipct.chebyshev import ChebyshevExpansion, Interval, compute_coeffs, map_from_interval
from pipct.diagnostics import (
    check_decay_bound,
    classify_froissart,
    decay_bound,
    find_poles,
    multiple_root_mask,
    pole_abscissae,
    pole_report,
    polynomial_roots,
    residues,
    t_norm,
    t_variation,
)
from pipct.errors import EvaluationError, InvalidArgumentError
from pipct.pct import PCTApproximant, build_pct

UNIT = Interval(-1.0, 1.0)
P = np.polynomial.polynomial


def rational(p, q):
    return PCTApproximant(UNIT, 64, len(p) - 1, len(q) - 1, p, q)


@pytest.fixture(scope="module")
def jump_cell():
    cf = corpus.get("discondeg")
    res = adaptive_partition(cf, cf.interval, AdaptiveConfig(1e-2, 1 / 256, 20, 200))
    j = int(res.partition.locate(-0.4))
    assert res.scans[j].is_bad
    return cf, res.partition.cell(j)


class TestFindPoles:
    def test_linear(self):
        np.testing.assert_allclose(find_poles(rational([1, 0], [1, -2])), [0.5])

    def test_quadratic(self):
        z = np.sort_complex(find_poles(rational([1, 0, 0], [-0.25, 0, 1])))
        np.testing.assert_allclose(z, [-0.5, 0.5], atol=1e-15)

    def test_trailing_zeros_trimmed(self):
        z = polynomial_roots([1.0, -2.0, 1e-20, 0.0])
        np.testing.assert_allclose(z, [0.5])

    @pytest.mark.parametrize("q", [[0, 0], [3.0]])
    def test_degenerate(self, q):
        with pytest.raises(InvalidArgumentError):
            polynomial_roots(q)

    @settings(max_examples=50)
    @given(arrays(float, 9, elements=st.floats(-1, 1)).filter(lambda q: abs(q[-1]) > 1e-3))
    def test_root_fidelity(self, q):
        z = polynomial_roots(q)
        assert z.size == 8
        bound = 1e-8 * np.max(np.abs(q)) * np.maximum(1, np.abs(z)) ** 8
        assert np.all(np.abs(P.polyval(z, q)) <= bound)


class TestResidues:
    def test_simple(self):
        r = rational([1, 0], [-0.5, 1])
        np.testing.assert_allclose(residues(r, [0.5]), [1.0])

    def test_closed_form(self):
        r = rational([0, 1, 0], [-0.25, 0, 1])
        np.testing.assert_allclose(residues(r, [0.5]), [0.5])

    @given(arrays(float, 5, elements=st.floats(-2, 2)), arrays(float, 4, elements=st.floats(-2, 2)),
           st.floats(0.1, 100) | st.floats(-100, -0.1))
    def test_joint_scaling_invariance(self, p, q, lam):
        if abs(q[-1]) < 1e-2:
            q = q.copy()
            q[-1] = 1.0
        r1, r2 = rational(p, q), rational(lam * p, lam * q)
        z = find_poles(r1)
        z = z[~multiple_root_mask(r1, z)]
        a, b = residues(r1, z), residues(r2, z)
        assume(np.all(np.isfinite(a)))
        np.testing.assert_allclose(b, a, rtol=1e-12, atol=1e-12 * (1 + np.max(np.abs(a), initial=0)))

    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_double_root_flagged(self):
        r = rational([1, 0, 0], [0.25, -1, 1])
        z = np.array([0.5 + 0j])
        assert multiple_root_mask(r, z).all()
        assert not np.isfinite(residues(r, z)).all() or np.abs(residues(r, z)).min() > 1e10

    def test_exp_no_near_circle_poles(self):
        f = np.exp
        r = build_pct(compute_coeffs(f, (-1, 1), 64, 16), 8, 8)
        rep = pole_report(r)
        near = np.abs(np.abs(rep.poles) - 1) < 0.1
        assert np.all(np.abs(rep.residuals[near]) < 1e-8 * math.e)


class TestClassify:
    def test_all_zero(self):
        rep = classify_froissart([0.5, 2j], [0, 0])
        assert rep.spurious_flags.all() and rep.n_spurious == 2

    def test_all_one(self):
        rep = classify_froissart([0.5, 2j], [1, 1], 1e-10)
        assert not rep.spurious_flags.any()
        assert rep.genuine.size == 2

    def test_relative_scale(self):
        rep = classify_froissart([1.0], [1e-6], 1e-10, scale=1e5)
        assert rep.spurious_flags[0]

    def test_invalid(self):
        with pytest.raises(InvalidArgumentError):
            classify_froissart([1.0], [1.0], 0.0)
        with pytest.raises(InvalidArgumentError):
            classify_froissart([1.0, 2.0], [1.0])

    def test_deterministic(self, jump_cell):
        cf, cell = jump_cell
        r = build_pct(compute_coeffs(cf, cell, 200, 40), 20, 20)
        assert np.array_equal(pole_report(r).spurious_flags, pole_report(r).spurious_flags)

    def test_jump_cell_genuine_pole(self, jump_cell):
        cf, cell = jump_cell
        r = build_pct(compute_coeffs(cf, cell, 200, 40), 20, 20)
        rep = pole_report(r)
        xi0 = map_from_interval(cell, -0.4)
        assert np.min(np.abs(rep.genuine.real - xi0)) <= 0.05
        x = pole_abscissae(r, rep.genuine)
        assert np.nanmin(np.abs(x + 0.4)) <= 0.05 * cell.width

    def test_spurious_count_grows(self, jump_cell):
        cf, cell = jump_cell
        counts = []
        for m in (8, 16, 32):
            r = build_pct(compute_coeffs(cf, cell, 200, 2 * m), m, m)
            counts.append(pole_report(r).n_spurious)
        assert counts == sorted(counts)
        assert counts[-1] > counts[0]


class TestTNorm:
    def test_identity(self):
        assert t_norm(lambda x: np.ones_like(x), UNIT) == pytest.approx(math.pi, rel=1e-12)

    def test_shifted_T1(self):
        # f = T_1(G^{-1}(x)) = x - 1 on [0, 2]
        assert t_norm(lambda x: np.ones_like(x), (0, 2)) == pytest.approx(math.pi, rel=1e-12)

    def test_abs_6x(self):
        # int_0^pi |6 cos theta| d theta
        assert t_norm(lambda x: 6 * x, UNIT) == pytest.approx(12.0, rel=1e-6)

    def test_cube_V2(self):
        cf = corpus.get("cube")
        assert t_norm(cf.derivatives[3], UNIT) == pytest.approx(cf.t_norms[2], rel=1e-12)

    def test_exp(self):
        cf = corpus.get("exp")
        assert t_norm(np.exp, UNIT) == pytest.approx(cf.t_norms[0], rel=1e-10)

    def test_variation_jump(self):
        # f'' = 2 sign(x) jumps by 4
        cf = corpus.get("xabsx")
        assert t_variation(cf.derivatives[2], UNIT) == pytest.approx(cf.t_norms[2], rel=1e-6)

    def test_variation_matches_norm(self):
        assert t_variation(np.sin, UNIT, 8192) == pytest.approx(t_norm(np.cos, UNIT, 8192), rel=1e-6)

    def test_nonfinite(self):
        with pytest.raises(EvaluationError):
            t_norm(lambda x: np.where(np.abs(x) < 0.5, np.nan, 1.0), UNIT)

    def test_variation_off_centre_jump(self):
        # jump of 2 at y0 = 0.6 weighs 2 / sqrt(1 - 0.36)
        assert t_variation(lambda x: np.sign(np.asarray(x) - 0.6), UNIT) == pytest.approx(2.5, rel=1e-3)


class TestDecayBound:
    def test_bound_branches(self):
        # k = 0: 2V / (pi j) scaled by the half-width
        assert decay_bound(5, 0, 3.0, 1.0) == pytest.approx(6 / (5 * math.pi))
        # k = 1: 2V / (pi (j-1)(j+1))
        assert decay_bound(5, 1, 3.0, 1.0) == pytest.approx(6 / (24 * math.pi))
        # k = 2: 2V / (pi (j-2) j (j+2)) times h^3
        assert decay_bound(5, 2, 3.0, 0.5) == pytest.approx(0.125 * 6 / (105 * math.pi))

    @pytest.mark.parametrize("V", [12.0, 6 * math.pi])
    def test_cube(self, V):
        exp = compute_coeffs(lambda x: np.asarray(x) ** 3, (-1, 1), 200, 199)
        assert check_decay_bound(exp, 2, V).ok

    def test_cube_shifted_interval(self):
        cf = corpus.get("cube")
        exp = compute_coeffs(cf, (0, 2), 200, 199)
        V = t_norm(cf.derivatives[3], (0, 2))
        assert check_decay_bound(exp, 2, V).ok

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_exp(self, k):
        cf = corpus.get("exp")
        exp = compute_coeffs(cf, (-1, 1), 200, 199)
        assert check_decay_bound(exp, k, cf.t_norms[k]).ok

    def test_zero(self):
        exp = ChebyshevExpansion(UNIT, 50, np.zeros(50))
        chk = check_decay_bound(exp, 2, 0.0)
        assert chk.ok
        np.testing.assert_array_equal(chk.j, np.arange(3, 50))

    def test_xabsx_exact_coefficients(self):
        # closed form of the odd coefficients of x|x|; the bound is attained
        j = np.arange(3, 200, 2)
        exact = 8.0 / (math.pi * (j - 2) * j * (j + 2)) * np.where((j - 1) % 4 == 0, 1, -1)
        bound = np.array([decay_bound(int(i), 2, 4.0, 1.0) for i in j])
        np.testing.assert_allclose(np.abs(exact), bound, rtol=1e-14)

    @pytest.mark.xfail(strict=True, reason="aliasing pushes sharp-bound coefficients over it; see decisions ledger")
    def test_xabsx(self):
        cf = corpus.get("xabsx")
        exp = compute_coeffs(cf, (-1, 1), 200, 199)
        assert check_decay_bound(exp, 2, cf.t_norms[2]).ok

    def test_negative_k(self):
        with pytest.raises(InvalidArgumentError):
            check_decay_bound(ChebyshevExpansion(UNIT, 4, [1.0]), -1, 1.0)

