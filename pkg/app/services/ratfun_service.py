import logging
import math
from fractions import Fraction
from numbers import Integral, Rational
from typing import Dict, Optional, Sequence, Tuple, Union

import sympy

from app.core.exceptions import (DimensionMismatchError, SingularEvaluationError, ZeroDivisorError,
                                 ZeroPolynomialError)
from app.models.polynomial import Monomial, Polynomial, RationalTransform, graded_lex_key

logger = logging.getLogger(__name__)

Number = Union[int, float, Fraction]


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    """Exact coefficient-wise sum."""
    _check_dims(p, q)
    return p + q


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    """Exact convolution product."""
    _check_dims(p, q)
    return p * q


def poly_eval(p: Polynomial, point: Sequence[Number]) -> Number:
    """Evaluate exactly on rational points, in floating point otherwise."""
    if len(point) != p.n:
        raise DimensionMismatchError(p.n, len(point), "evaluation point")
    if all(isinstance(x, Rational) for x in point):
        exact = [Fraction(int(x)) if isinstance(x, Integral) else Fraction(x) for x in point]
        total = Fraction(0)
        for mono, c in p.terms.items():
            total += c * math.prod(x ** e for x, e in zip(exact, mono) if e)
        return total
    values = [float(x) for x in point]
    return math.fsum(float(c) * math.prod(x ** e for x, e in zip(values, mono) if e)
                     for mono, c in p.terms.items())


def leading_part(p: Polynomial) -> Polynomial:
    """Homogeneous part of maximal total degree."""
    if p.is_zero():
        raise ZeroPolynomialError()
    top = p.degree
    return Polynomial(p.n, {mono: c for mono, c in p.terms.items() if sum(mono) == top})


def poly_divides(g: Polynomial, f: Polynomial) -> Optional[Polynomial]:
    """
    Return h with f = g*h, or None if g does not divide f.

    Multivariate division by a single divisor in graded lex order. A single
    polynomial is a Groebner basis of the ideal it generates, so a zero
    remainder is equivalent to divisibility.
    """
    if g.is_zero():
        raise ZeroDivisorError()
    _check_dims(g, f)

    g_terms = g.terms
    lead_mono = max(g_terms, key=graded_lex_key)
    lead_coeff = g_terms[lead_mono]

    work: Dict[Monomial, Fraction] = f.terms
    quotient: Dict[Monomial, Fraction] = {}
    remainder_found = False

    while work:
        mono = max(work, key=graded_lex_key)
        coeff = work[mono]
        shift = tuple(a - b for a, b in zip(mono, lead_mono))
        if any(e < 0 for e in shift):
            remainder_found = True
            break
        factor = coeff / lead_coeff
        quotient[shift] = quotient.get(shift, Fraction(0)) + factor
        for g_mono, g_coeff in g_terms.items():
            target = tuple(a + b for a, b in zip(g_mono, shift))
            value = work.get(target, Fraction(0)) - factor * g_coeff
            if value:
                work[target] = value
            else:
                work.pop(target, None)

    if remainder_found:
        return None
    return Polynomial(f.n, quotient)


def rt_eval(t: RationalTransform, point: Sequence[Number]) -> Number:
    """p0 + num(point)/den(point)."""
    den = poly_eval(t.den, point)
    if den == 0:
        raise SingularEvaluationError()
    num = poly_eval(t.num, point)
    if isinstance(den, Fraction):
        return t.p0 + num / den
    return float(t.p0) + num / den


def poly_embed(p: Polynomial, n: int) -> Polynomial:
    """View p as a polynomial in n >= p.n variables."""
    if n < p.n:
        raise DimensionMismatchError(p.n, n, "embedding")
    pad = (0,) * (n - p.n)
    return Polynomial(n, {mono + pad: c for mono, c in p.terms.items()})


def poly_restrict_zero(p: Polynomial, keep: int) -> Polynomial:
    """Set s_{keep+1}, ..., s_n to zero and drop those variables."""
    if not 0 <= keep <= p.n:
        raise DimensionMismatchError(p.n, keep, "restriction")
    return Polynomial(keep, {mono[:keep]: c for mono, c in p.terms.items() if not any(mono[keep:])})


def poly_substitute_line(p: Polynomial, v: Sequence[Fraction], w: Sequence[Fraction]) -> Polynomial:
    """Univariate polynomial t -> p(t*v + w), computed exactly."""
    if len(v) != p.n or len(w) != p.n:
        raise DimensionMismatchError(p.n, len(v), "line direction")
    coords = [Polynomial(1, {(1,): vj, (0,): wj}) for vj, wj in zip(v, w)]
    result = Polynomial.zero(1)
    for mono, c in p.terms.items():
        term = Polynomial.constant(1, c)
        for coord, e in zip(coords, mono):
            if e:
                term = term * coord ** e
        result = result + term
    return result


def _check_dims(p: Polynomial, q: Polynomial) -> None:
    if p.n != q.n:
        raise DimensionMismatchError(p.n, q.n)


def sympy_symbols(n: int) -> Tuple[sympy.Symbol, ...]:
    return tuple(sympy.symbols(f"s1:{n + 1}")) if n else ()


def to_sympy(p: Polynomial) -> sympy.Poly:
    """Exact sympy image of p over QQ in the symbols s1..sn."""
    gens = sympy_symbols(max(p.n, 1))
    terms = {mono if p.n else (0,): sympy.Rational(c.numerator, c.denominator) for mono, c in p.terms.items()}
    return sympy.Poly.from_dict(terms, *gens, domain=sympy.QQ)


def from_sympy(expr, n: int) -> Polynomial:
    """Polynomial from a sympy expression or Poly in s1..sn with rational coefficients."""
    gens = sympy_symbols(max(n, 1))
    poly = expr if isinstance(expr, sympy.Poly) else sympy.Poly(sympy.expand(expr), *gens, domain=sympy.QQ)
    terms = {}
    for mono, c in poly.terms():
        c = sympy.Rational(c)
        terms[tuple(mono[:n]) if n else ()] = Fraction(int(c.p), int(c.q))
    return Polynomial(n, terms)
