import numpy as np
import pytest
from numpy.testing import assert_allclose

from app.core.exceptions import (ClosingColumnError, DimensionMismatchError, NotInvertibleAtOriginError,
                                 ZeroRealizationError)
from app.models.polynomial import Polynomial, RationalTransform
from app.models.realization import LinearResolvent
from app.services.kulkarni_service import transform_eval, validate_mphstar
from app.services.ratfun_service import poly_eval
from app.services.realize_service import (assemble_kulkarni, assemble_kulkarni_with_report, closing_similarity,
                                          diag_lift, fm_add, fm_const, fm_eval, fm_from_polynomial,
                                          fm_from_rational, fm_inv, fm_mul, fm_scale, fm_var, lift_eval,
                                          normalize_closing_column, resolvent_eval, stabilize, stabilized_eval,
                                          to_linear_resolvent)
from app.utils.rng import substream
from tests.conftest import var

POINTS = [(0.01, -0.02), (0.05, 0.03), (-0.04, 0.0), (0.0, 0.07)]


def test_variable_and_constant():
    assert fm_eval(fm_var(2, 2), [0.3, -0.7]) == pytest.approx(-0.7)
    assert fm_eval(fm_const(2.5, 2), [0.3, 0.1]) == 2.5
    with pytest.raises(IndexError):
        fm_var(3, 2)


def test_closure_operations():
    f = fm_add(fm_const(1.0, 2), fm_var(1, 2))
    g = fm_add(fm_const(2.0, 2), fm_scale(fm_var(2, 2), 3.0))
    for s in POINTS:
        fs, gs = 1 + s[0], 2 + 3 * s[1]
        assert fm_eval(fm_add(f, g), s) == pytest.approx(fs + gs)
        assert fm_eval(fm_mul(f, g), s) == pytest.approx(fs * gs)
        assert fm_eval(fm_inv(g), s) == pytest.approx(1 / gs)
    assert fm_mul(f, g).rho == f.rho + g.rho
    assert fm_inv(g).rho == g.rho


def test_inverse_needs_nonzero_constant():
    with pytest.raises(NotInvertibleAtOriginError):
        fm_inv(fm_var(1, 1))


def test_mixed_dimensions_rejected():
    with pytest.raises(DimensionMismatchError):
        fm_add(fm_var(1, 1), fm_var(1, 2))


def test_polynomial_realization_matches_evaluation(wishart_Q):
    fm = fm_from_polynomial(wishart_Q)
    for s in [(0.1, 0.2, 0.3), (-0.05, 0.0, 0.4), (0.0, 0.0, 0.0)]:
        assert fm_eval(fm, s) == pytest.approx(float(poly_eval(wishart_Q, s)), rel=1e-12)


def test_wishart_state_dimensions(wishart_Q):
    fm = fm_from_rational(Polynomial.constant(3, 1), wishart_Q)
    resolvent = to_linear_resolvent(fm)
    assert fm.rho == 15
    assert resolvent.N == 16
    assert diag_lift(normalize_closing_column(resolvent)).q == 48


def test_resolvent_lift_preserves_value(wishart_Q):
    fm = fm_from_rational(Polynomial.constant(3, 1), wishart_Q)
    resolvent = to_linear_resolvent(fm)
    assert_allclose(resolvent.b, np.eye(resolvent.N)[0])
    for s in [(0.01, 0.02, 0.0), (0.0, -0.01, 0.03)]:
        assert resolvent_eval(resolvent, s) == pytest.approx(fm_eval(fm, s), rel=1e-12)


def test_closing_similarity_maps_b_to_ones():
    b = np.array([0.5, -2.0, 0.0])
    H = closing_similarity(b)
    assert_allclose(H @ b, np.ones(3), atol=1e-15)
    with pytest.raises(ZeroRealizationError):
        closing_similarity(np.zeros(3))


def test_normalization_keeps_transform(wishart_Q):
    resolvent = to_linear_resolvent(fm_from_rational(Polynomial.constant(3, 1), wishart_Q))
    normalized = normalize_closing_column(resolvent)
    assert_allclose(normalized.b, 1.0)
    for s in [(0.01, 0.0, 0.0), (0.003, -0.002, 0.004)]:
        assert resolvent_eval(normalized, s) == pytest.approx(resolvent_eval(resolvent, s), rel=1e-10)


def test_diag_lift_requires_unit_closing_column(wishart_Q):
    resolvent = to_linear_resolvent(fm_from_rational(Polynomial.constant(3, 1), wishart_Q))
    with pytest.raises(ClosingColumnError):
        diag_lift(resolvent)


def test_block_lift_determinant_identity():
    for trial in range(20):
        rng = substream(7, trial)
        n, N = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        A = rng.normal(size=(n, N, N))
        dl = diag_lift(LinearResolvent(n=n, eta=rng.normal(size=N), A=A, b=np.ones(N)))
        for _ in range(20):
            s = rng.uniform(-0.3, 0.3, size=n)
            lifted = np.linalg.det(np.eye(dl.q) - dl.U @ dl.S(s))
            direct = np.linalg.det(np.eye(N) - np.tensordot(s, A, axes=1))
            assert lifted == pytest.approx(direct, abs=1e-9)


def test_stabilized_generator_is_nilpotent_shift():
    rng = substream(3, 0)
    A = 0.3 * rng.normal(size=(2, 3, 3))
    dl = diag_lift(LinearResolvent(n=2, eta=rng.normal(size=3), A=A, b=np.ones(3)))
    st = stabilize(dl)
    shifted = st.T + np.eye(st.size)
    # the eigenvalue -1 is defective, so the nilpotency residual is the sharp test
    assert np.linalg.norm(shifted @ shifted) <= 1e-12 * max(1.0, np.linalg.norm(st.T) ** 2)
    assert np.max(np.abs(np.linalg.eigvals(st.T) + 1)) < 1e-6
    assert_allclose(st.alpha_hat[dl.q:], 0.0)
    for s in [(0.01, 0.02), (-0.02, 0.01)]:
        assert stabilized_eval(st, s) == pytest.approx(lift_eval(dl, s), rel=1e-8)


def test_realization_suite(realization_suite):
    for transform in realization_suite:
        rep, report = assemble_kulkarni_with_report(transform, seed=42, points=30)
        assert np.array_equal(rep.t, -rep.T.sum(axis=1))
        assert set(np.unique(rep.K)) <= {0.0, 1.0}
        assert rep.m == report.ell == 2 * transform.n * report.N
        assert report.max_relative_error < 1e-8
        assert rep.p0 == pytest.approx(float(transform.p0))
        shifted = rep.T + np.eye(rep.m)
        assert np.linalg.norm(shifted @ shifted) <= 1e-10 * max(1.0, np.linalg.norm(rep.T) ** 2)


def test_single_exponential(exp_transform):
    rep, report = assemble_kulkarni_with_report(exp_transform)
    assert report.ell == 2 * 1 * report.N
    for s in (0.0, 0.05, 0.5):
        assert transform_eval(rep, [s]) == pytest.approx(1 / (1 + s), rel=1e-8)


def test_wishart_realization(wishart_Q):
    transform = RationalTransform(p0=0, num=Polynomial.constant(3, 1), den=wishart_Q)
    rep, report = assemble_kulkarni_with_report(transform)
    assert (report.rho, report.N, report.q, report.ell) == (15, 16, 48, 96)
    assert report.max_relative_error < 1e-8
    assert transform_eval(rep, [1.0, 0.0, 0.0]) == pytest.approx(0.25, rel=1e-6)


def test_atom_carries_through(realization_suite):
    transform = realization_suite[8]
    rep = assemble_kulkarni(transform)
    assert rep.p0 == pytest.approx(0.3)
    assert transform_eval(rep, [0.0]) == pytest.approx(1.0, abs=1e-10)


def test_degenerate_point_mass():
    transform = RationalTransform(p0=1, num=Polynomial.zero(2), den=Polynomial.constant(2, 1))
    rep, report = assemble_kulkarni_with_report(transform)
    assert report.degenerate
    assert rep.m == 1 and rep.p0 == 1.0
    assert transform_eval(rep, [3.0, 4.0]) == 1.0
    assert validate_mphstar(rep).passed


def test_output_is_not_markovian_in_general(realization_suite):
    rep = assemble_kulkarni(realization_suite[7])
    assert not validate_mphstar(rep).passed


def test_verification_is_deterministic(exp_transform):
    _, first = assemble_kulkarni_with_report(exp_transform, seed=11)
    _, second = assemble_kulkarni_with_report(exp_transform, seed=11)
    assert first == second


def test_polynomial_numerator(realization_suite):
    transform = realization_suite[9]
    rep = assemble_kulkarni(transform)
    for s in [(0.01, 0.01), (0.02, -0.01)]:
        x1, x2 = s
        expected = (2 + x1) / ((1 + x1) * (2 + x2) + x1)
        assert transform_eval(rep, s) == pytest.approx(expected, rel=1e-8)


def test_fm_from_rational_zero_numerator():
    assert fm_from_rational(Polynomial.zero(1), 1 + var(1, 1)).rho == 0


def random_expression(rng, n, points, depth):
    """Random closure-algebra expression together with its values at points."""
    kind = int(rng.integers(0, 2 if depth == 0 else 6))
    if kind == 0:
        c = float(rng.uniform(-2, 2))
        return fm_const(c, n), np.full(len(points), c)
    if kind == 1:
        j = int(rng.integers(1, n + 1))
        return fm_var(j, n), points[:, j - 1].copy()
    f, fv = random_expression(rng, n, points, depth - 1)
    if kind == 2:
        g, gv = random_expression(rng, n, points, depth - 1)
        return fm_add(f, g), fv + gv
    if kind == 3:
        c = float(rng.uniform(-2, 2))
        return fm_scale(f, c), c * fv
    if kind == 4:
        g, gv = random_expression(rng, n, points, depth - 1)
        return fm_mul(f, g), fv * gv
    # points include the origin, so this also keeps the constant term away from zero
    if np.min(np.abs(fv)) < 0.25:
        return f, fv
    return fm_inv(f), 1.0 / fv


def test_evaluation_is_homomorphism():
    for k in range(100):
        rng = substream(97, k)
        n = int(rng.integers(1, 4))
        points = np.vstack([np.zeros(n), rng.uniform(-0.05, 0.05, size=(10, n))])
        fm, expected = random_expression(rng, n, points, depth=4)
        for s, value in zip(points, expected):
            assert fm_eval(fm, s) == pytest.approx(value, rel=1e-9, abs=1e-12)
