from fractions import Fraction

import pytest

from app.core.exceptions import FormDegreeError, InvalidTransformError
from app.models.polynomial import Polynomial
from app.models.verdict import Outcome, QuadraticForm, surd_sign
from app.services.criterion_service import (coefficient_matching_quadratic_3var, exact_sqrt, expand_factors,
                                            extract_qtop, factor_quadratic, format_surd, mphstar_certificate,
                                            restriction_reject)
from app.utils.rng import substream
from tests.conftest import var


def quadratic_3var(mixed23):
    s1, s2, s3 = (var(3, j) for j in (1, 2, 3))
    return s1 * s1 + 4 * s1 * s2 + 4 * s1 * s3 + 3 * s2 * s2 + mixed23 * s2 * s3 + 3 * s3 * s3


def factor_coeffs(verdict):
    return {factor.coeffs for factor in verdict.evidence.factors}


def test_wishart_rank_certificate(wishart_Q):
    verdict = mphstar_certificate(wishart_Q, minimal_declared=True)
    assert verdict.outcome is Outcome.IRREDUCIBLE_CERTIFIED
    assert verdict.route == "factor_quadratic"
    assert verdict.evidence.kind == "rank"
    assert verdict.evidence.rank == 3
    assert verdict.evidence.minor == 1
    assert verdict.excludes_mphstar
    assert verdict.nu is None


def test_wishart_coefficient_matching(wishart_Q):
    verdict = coefficient_matching_quadratic_3var(QuadraticForm.from_polynomial(extract_qtop(wishart_Q)))
    assert verdict.outcome is Outcome.IRREDUCIBLE_CERTIFIED
    assert verdict.evidence.kind == "coefficient_matching"
    assert verdict.evidence.candidates == ("6", "10")
    assert verdict.evidence.actual == 8
    assert verdict.evidence.discriminants == (4, 4)


@pytest.mark.parametrize("mixed, expected", [
    (10, {(1, 3, 1), (1, 1, 3)}),
    (6, {(1, 1, 1), (1, 3, 3)}),
])
def test_admissible_mixed_coefficients_split(mixed, expected):
    qf = QuadraticForm.from_polynomial(quadratic_3var(mixed))
    for verdict in (factor_quadratic(qf), coefficient_matching_quadratic_3var(qf)):
        assert verdict.outcome is Outcome.FACTORS_NONNEG
        assert factor_coeffs(verdict) == expected
        assert verdict.nu == 2
        assert expand_factors(verdict.evidence, 3) == quadratic_3var(mixed)


def test_product_of_exponentials_is_nonneg():
    s1, s2 = var(2, 1), var(2, 2)
    verdict = mphstar_certificate((1 + s1) * (1 + s2), minimal_declared=True)
    assert verdict.outcome is Outcome.FACTORS_NONNEG
    assert verdict.nu == 2
    assert factor_coeffs(verdict) == {(0, 1), (1, 0)}
    assert not verdict.excludes_mphstar


def test_constant_is_empty_product():
    verdict = mphstar_certificate(Polynomial.constant(3, 7), minimal_declared=True)
    assert verdict.outcome is Outcome.FACTORS_NONNEG
    assert verdict.evidence.kind == "empty_product"
    assert verdict.nu == 0
    assert verdict.degree == 0


def test_linear_with_mixed_signs():
    s1, s2 = var(2, 1), var(2, 2)
    verdict = mphstar_certificate(1 + s1 - s2, minimal_declared=True)
    assert verdict.outcome is Outcome.FACTORS_MIXED_SIGNS
    assert verdict.route == "linear"
    assert verdict.excludes_mphstar


def test_rational_mixed_sign_split():
    s1, s2 = var(2, 1), var(2, 2)
    verdict = mphstar_certificate(1 + (s1 - s2) * (s1 + s2), minimal_declared=True)
    assert verdict.outcome is Outcome.FACTORS_MIXED_SIGNS
    assert factor_coeffs(verdict) == {(1, 1), (1, -1)}
    assert expand_factors(verdict.evidence, 2) == s1 * s1 - s2 * s2


def test_irrational_split():
    s1, s2 = var(2, 1), var(2, 2)
    qtop = s1 * s1 - 2 * s2 * s2
    verdict = factor_quadratic(QuadraticForm.from_polynomial(qtop))
    assert verdict.outcome is Outcome.FACTORS_MIXED_SIGNS
    assert all(not f.is_rational for f in verdict.evidence.factors)
    assert expand_factors(verdict.evidence, 2) == qtop


def test_global_sign_is_free():
    s1, s2 = var(2, 1), var(2, 2)
    verdict = mphstar_certificate(1 - (s1 + s2) * (s1 + 2 * s2), minimal_declared=True)
    assert verdict.outcome is Outcome.FACTORS_NONNEG
    assert verdict.evidence.c0 == -1
    assert factor_coeffs(verdict) == {(1, 1), (1, 2)}


def test_definite_rank_two_form():
    s1, s2 = var(2, 1), var(2, 2)
    verdict = mphstar_certificate(1 + s1 * s1 + s2 * s2, minimal_declared=True)
    assert verdict.outcome is Outcome.IRREDUCIBLE_CERTIFIED
    assert verdict.evidence.kind == "signature"


def test_scaled_square():
    s1, s2 = var(2, 1), var(2, 2)
    qtop = (s1 + 2 * s2) * (s1 + 2 * s2)
    verdict = mphstar_certificate(1 + qtop, minimal_declared=True)
    assert verdict.outcome is Outcome.FACTORS_NONNEG
    assert expand_factors(verdict.evidence, 2) == qtop


def test_negative_discriminant_route():
    s1, s2, s3 = (var(3, j) for j in (1, 2, 3))
    verdict = coefficient_matching_quadratic_3var(
        QuadraticForm.from_polynomial(s1 * s1 + s1 * s2 + s2 * s2 + s3 * s3))
    assert verdict.outcome is Outcome.IRREDUCIBLE_CERTIFIED
    assert verdict.evidence.kind == "discriminant"


def test_restriction_certifies_cubic():
    s1, s2, s3 = (var(3, j) for j in (1, 2, 3))
    verdict = restriction_reject(s1 ** 3 + s2 ** 3 + s3 ** 3, trials=200, seed=42)
    assert verdict.outcome is Outcome.IRREDUCIBLE_CERTIFIED
    assert verdict.evidence.real_roots < verdict.evidence.distinct_roots


def test_restriction_on_wishart(wishart_Q):
    # about 2% of integer planes are definite for this form; seed 42 first certifies at trial 185
    verdict = restriction_reject(extract_qtop(wishart_Q), trials=500, seed=42)
    assert verdict.outcome is Outcome.IRREDUCIBLE_CERTIFIED
    assert verdict.evidence.plane is not None


def test_restriction_never_rejects_products():
    s1, s2, s3 = (var(3, j) for j in (1, 2, 3))
    verdict = mphstar_certificate((1 + s1) * (1 + s2 + s3) * (2 + s3), minimal_declared=True, trials=100)
    assert verdict.outcome is Outcome.INCONCLUSIVE
    assert verdict.evidence.trials == 100
    assert verdict.route == "restriction_reject"


def test_restriction_is_deterministic():
    s1, s2, s3 = (var(3, j) for j in (1, 2, 3))
    form = s1 ** 3 + s2 ** 3 + s3 ** 3
    assert restriction_reject(form, trials=50, seed=9) == restriction_reject(form, trials=50, seed=9)


def test_minimality_caveat(wishart_Q):
    verdict = mphstar_certificate(wishart_Q, minimal_declared=False)
    assert verdict.outcome is Outcome.IRREDUCIBLE_CERTIFIED
    assert not verdict.excludes_mphstar
    assert verdict.notes


def test_zero_at_origin_rejected():
    with pytest.raises(InvalidTransformError):
        mphstar_certificate(var(2, 1), minimal_declared=True)


def test_quadratic_form_requires_homogeneous_degree_two():
    s1 = var(1, 1)
    with pytest.raises(FormDegreeError):
        QuadraticForm.from_polynomial(1 + s1 * s1)
    with pytest.raises(FormDegreeError):
        QuadraticForm.from_polynomial(s1)


def test_surd_helpers():
    assert exact_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert exact_sqrt(Fraction(2)) is None
    assert surd_sign(Fraction(1), Fraction(-1), Fraction(2)) == -1
    assert surd_sign(Fraction(3), Fraction(-1), Fraction(2)) == 1
    assert surd_sign(Fraction(2), Fraction(-1), Fraction(4)) == 0
    assert format_surd(Fraction(8), Fraction(1, 2), Fraction(16)) == "10"
    assert format_surd(Fraction(1), Fraction(-1), Fraction(2)) == "1 - 1*sqrt(2)"


def test_restriction_counts_complex_roots():
    s1, s2 = var(2, 1), var(2, 2)
    verdict = restriction_reject(s1 * (s1 * s1 + s2 * s2), trials=20, seed=42)
    assert verdict.outcome is Outcome.IRREDUCIBLE_CERTIFIED
    assert verdict.evidence.real_roots == 1
    assert verdict.evidence.distinct_roots == 3


def test_restriction_passes_real_rooted_binary_cubic():
    s1, s2 = var(2, 1), var(2, 2)
    form = (s1 + s2) * (s1 + 2 * s2) * (s1 + 3 * s2)
    verdict = restriction_reject(form, trials=100, seed=42)
    assert verdict.outcome is Outcome.INCONCLUSIVE
    assert verdict.evidence.trials == 100


def random_quadratic_3var(rng):
    """Half products of two integer linear forms, half unstructured integer forms."""
    s = [var(3, j) for j in (1, 2, 3)]
    if rng.random() < 0.5:
        first, second = (sum(int(c) * x for c, x in zip(rng.integers(-3, 4, size=3), s)) for _ in range(2))
        return first * second
    monos = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]
    return sum(int(c) * s[i] * s[j] for c, (i, j) in zip(rng.integers(-3, 4, size=6), monos))


def test_quadratic_routes_agree():
    for k in range(200):
        qtop = random_quadratic_3var(substream(61, k))
        if qtop.is_zero():
            continue
        qf = QuadraticForm.from_polynomial(qtop)
        by_rank = factor_quadratic(qf)
        by_matching = coefficient_matching_quadratic_3var(qf)
        assert by_rank.outcome is by_matching.outcome
        if by_rank.outcome is not Outcome.IRREDUCIBLE_CERTIFIED:
            assert expand_factors(by_rank.evidence, 3) == qtop
            assert expand_factors(by_matching.evidence, 3) == qtop


def test_products_of_nonnegative_forms_never_certified():
    for k in range(100):
        rng = substream(67, k)
        n = int(rng.integers(2, 4))
        qtop = Polynomial.constant(n, 1)
        for _ in range(int(rng.integers(1, 5))):
            coeffs = rng.integers(0, 4, size=n)
            coeffs[rng.integers(0, n)] += 1
            qtop = qtop * Polynomial.linear_form([int(c) for c in coeffs])
        verdict = mphstar_certificate(1 + qtop, minimal_declared=True, trials=20, seed=k)
        assert verdict.outcome in (Outcome.FACTORS_NONNEG, Outcome.INCONCLUSIVE)
        assert not verdict.excludes_mphstar
