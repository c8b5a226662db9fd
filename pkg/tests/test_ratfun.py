from fractions import Fraction

import pytest
from pydantic import ValidationError

from app.core.exceptions import (DimensionMismatchError, InvalidTransformError, SingularEvaluationError,
                                 ZeroDivisorError, ZeroPolynomialError)
from app.models.polynomial import Polynomial, RationalTransform
from app.models.polynomial_schema import PolynomialSchema, from_json, to_json
from app.services.ratfun_service import (from_sympy, leading_part, poly_add, poly_divides, poly_embed, poly_eval,
                                         poly_mul, poly_restrict_zero, poly_substitute_line, rt_eval, to_sympy)
from app.utils.rng import substream
from tests.conftest import random_polynomial, random_rational_point, var


def test_add_cancels_terms():
    s1 = var(2, 1)
    assert poly_add(1 + s1, -s1) == Polynomial.constant(2, 1)
    assert len(poly_add(s1, -s1)) == 0


def test_mul_product_of_linear_forms():
    s1, s2 = var(2, 1), var(2, 2)
    product = poly_mul(1 + s1, 1 + s2)
    assert product == Polynomial(2, {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1})


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        poly_add(var(2, 1), var(3, 1))
    with pytest.raises(DimensionMismatchError):
        poly_eval(var(2, 1), [1])


def test_eval_exact_and_float():
    s1, s2 = var(2, 1), var(2, 2)
    p = s1 * s1 + Fraction(1, 3) * s2
    assert poly_eval(p, [Fraction(1, 2), 3]) == Fraction(5, 4)
    assert poly_eval(p, [0.5, 3.0]) == pytest.approx(1.25)


def test_leading_part_wishart(wishart_Q):
    top = leading_part(wishart_Q)
    assert top.is_homogeneous() and top.degree == 2
    assert top.coefficient((1, 1, 0)) == 4
    assert top.coefficient((0, 1, 1)) == 8
    assert top.coefficient((1, 0, 0)) == 0


def test_leading_part_of_constant_and_zero():
    assert leading_part(Polynomial.constant(2, 5)) == Polynomial.constant(2, 5)
    with pytest.raises(ZeroPolynomialError):
        leading_part(Polynomial.zero(2))


def test_wishart_polynomial_has_ten_terms(wishart_Q):
    expected = {(0, 0, 0): 1, (1, 0, 0): 2, (0, 1, 0): 4, (0, 0, 1): 4, (2, 0, 0): 1,
                (1, 1, 0): 4, (1, 0, 1): 4, (0, 2, 0): 3, (0, 1, 1): 8, (0, 0, 2): 3}
    assert wishart_Q == Polynomial(3, expected)
    assert len(wishart_Q) == 10


def test_divides_exact_quotient():
    s1, s2 = var(2, 1), var(2, 2)
    g = 1 + s1 + s2
    h = 2 - s1 * s2
    assert poly_divides(g, g * h) == h
    assert poly_divides(1 + s1, 1 + s2) is None
    with pytest.raises(ZeroDivisorError):
        poly_divides(Polynomial.zero(2), g)


def test_rt_eval():
    s1 = var(1, 1)
    t = RationalTransform(p0=Fraction(1, 4), num=Polynomial.constant(1, Fraction(3, 4)), den=1 + s1)
    assert rt_eval(t, [1]) == Fraction(5, 8)
    assert rt_eval(t, [0]) == 1


def test_rt_eval_singular():
    s1 = var(1, 1)
    t = RationalTransform(p0=0, num=Polynomial.constant(1, 1), den=1 + s1)
    with pytest.raises(SingularEvaluationError):
        rt_eval(t, [-1])


def test_transform_validation():
    s1 = var(1, 1)
    with pytest.raises(InvalidTransformError):
        RationalTransform(p0=0, num=Polynomial.constant(1, 1), den=s1)
    with pytest.raises(InvalidTransformError):
        RationalTransform(p0=0, num=Polynomial.constant(1, 2), den=1 + s1)
    with pytest.raises(InvalidTransformError):
        RationalTransform(p0=0, num=1 + s1, den=1 + s1)


def test_embed_and_restrict_are_inverse(wishart_Q):
    embedded = poly_embed(wishart_Q, 5)
    assert embedded.n == 5
    assert poly_restrict_zero(embedded, 3) == wishart_Q


def test_restrict_drops_terms_with_removed_variables():
    s1, s2 = var(2, 1), var(2, 2)
    assert poly_restrict_zero(1 + s1 + s2 + s1 * s2, 1) == 1 + var(1, 1)


def test_substitute_line():
    s1, s2 = var(2, 1), var(2, 2)
    line = poly_substitute_line(s1 * s2, [Fraction(1), Fraction(2)], [Fraction(0), Fraction(1)])
    t = var(1, 1)
    assert line == t * (2 * t + 1)


def test_sympy_round_trip(wishart_Q):
    assert from_sympy(to_sympy(wishart_Q), 3) == wishart_Q


def test_json_is_canonical_and_exact():
    s1, s2 = var(2, 1), var(2, 2)
    p = Fraction(1, 3) * s1 * s2 - 7 + Fraction(-5, 2) * s2
    text = to_json(p)
    assert from_json(text) == p
    assert to_json(from_json(text)) == text
    assert '"c":"1/3"' in text
    assert '"schema":1' in text


def test_json_rejects_floats_and_bad_lengths():
    with pytest.raises(ValidationError):
        PolynomialSchema.model_validate({"n": 1, "terms": [{"e": [1], "c": 0.1}]})
    with pytest.raises(ValidationError):
        PolynomialSchema.model_validate({"n": 2, "terms": [{"e": [1], "c": "1"}]})
    with pytest.raises(ValidationError):
        PolynomialSchema.model_validate({"n": 1, "terms": [{"e": [-1], "c": "1"}]})


def random_triples(seed, count=20):
    for k in range(count):
        rng = substream(seed, k)
        n = int(rng.integers(1, 5))
        yield rng, n, [random_polynomial(rng, n) for _ in range(3)]


def test_ring_axioms():
    for _, n, (p, q, r) in random_triples(71):
        assert p + q == q + p
        assert p * q == q * p
        assert (p + q) + r == p + (q + r)
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r
        assert p + (-p) == Polynomial.zero(n)
        assert p * Polynomial.constant(n, 1) == p


def test_evaluation_is_ring_homomorphism():
    for rng, n, (p, q, _) in random_triples(73):
        for _ in range(5):
            x = random_rational_point(rng, n)
            assert poly_eval(p + q, x) == poly_eval(p, x) + poly_eval(q, x)
            assert poly_eval(p * q, x) == poly_eval(p, x) * poly_eval(q, x)


def test_leading_part_is_multiplicative():
    for _, n, (p, q, _) in random_triples(79):
        if p.is_zero() or q.is_zero():
            continue
        assert leading_part(p * q) == leading_part(p) * leading_part(q)


def test_divides_finds_exact_quotients():
    for rng, n, (g, h, _) in random_triples(83):
        if g.is_zero():
            continue
        f = g * h
        assert poly_divides(g, f) == h
        for _ in range(50):
            x = random_rational_point(rng, n)
            assert poly_eval(f, x) == poly_eval(g, x) * poly_eval(h, x)


def test_divides_rejects_nonzero_constant_remainder():
    for rng, n, (g, h, _) in random_triples(89):
        if g.degree < 1:
            continue
        f = g * h + Fraction(int(rng.integers(1, 6)))
        assert poly_divides(g, f) is None
        for _ in range(50):
            x = random_rational_point(rng, n)
            assert poly_eval(f, x) != poly_eval(g, x) * poly_eval(h, x)
