import itertools
import logging
import math
from dataclasses import replace
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import sympy
from sympy.polys.matrices import DomainMatrix

from app.core.config import DEFAULT_SEED, RESTRICTION_TRIALS
from app.core.exceptions import FormDegreeError, InvalidTransformError, ZeroPolynomialError
from app.models.polynomial import Polynomial
from app.models.verdict import CriterionVerdict, Evidence, LinearFactor, Outcome, QuadraticForm
from app.services.ratfun_service import leading_part, poly_divides, poly_substitute_line
from app.utils.rng import substream

logger = logging.getLogger(__name__)

PLANE_RANGE = 9


def extract_qtop(Q: Polynomial) -> Polynomial:
    return leading_part(Q)


def exact_sqrt(r: Fraction) -> Optional[Fraction]:
    """Rational square root of r >= 0, or None if r is not a rational square."""
    if r < 0:
        return None
    num, den = math.isqrt(r.numerator), math.isqrt(r.denominator)
    if num * num == r.numerator and den * den == r.denominator:
        return Fraction(num, den)
    return None


def format_surd(p: Fraction, q: Fraction, r: Fraction) -> str:
    if q == 0 or r == 0:
        return str(p)
    root = exact_sqrt(r)
    if root is not None:
        return str(p + q * root)
    surd = f"{abs(q)}*sqrt({r})"
    if p == 0:
        return surd if q > 0 else f"-{surd}"
    return f"{p} {'+' if q > 0 else '-'} {surd}"


def normalize_factors(factors: Sequence[LinearFactor], c0: Fraction) -> Tuple[Tuple[LinearFactor, ...], Fraction]:
    """Flip every factor whose first non-zero coefficient is negative, absorbing signs into c0."""
    out = []
    for factor in factors:
        lead = next((s for s in factor.signs() if s != 0), 0)
        if lead < 0:
            factor, c0 = factor.negated(), -c0
        out.append(factor)
    return tuple(out), c0


def factored_verdict(factors: Sequence[LinearFactor], c0: Fraction, route: str, degree: int) -> CriterionVerdict:
    """
    FACTORS_NONNEG when every normalized factor has non-negative coefficients.
    The global sign of c0 is free since Q and -Q describe the same transform.
    """
    factors, c0 = normalize_factors(factors, c0)
    nonneg = all(s >= 0 for factor in factors for s in factor.signs())
    outcome = Outcome.FACTORS_NONNEG if nonneg else Outcome.FACTORS_MIXED_SIGNS
    return CriterionVerdict(outcome=outcome, evidence=Evidence(kind="factors", c0=c0, factors=factors),
                            route=route, degree=degree)


def expand_factors(evidence: Evidence, n: int) -> Polynomial:
    """
    c0 * prod(factors) computed exactly in Q(sqrt(r)); the surd part must cancel.
    """
    radicands = {f.radicand for f in evidence.factors if not f.is_rational}
    if len(radicands) > 1:
        raise FormDegreeError("factors use more than one radicand")
    r = radicands.pop() if radicands else Fraction(0)
    rational = Polynomial.constant(n, evidence.c0 if evidence.c0 is not None else 1)
    surd = Polynomial.zero(n)
    for factor in evidence.factors:
        u = factor.rational_part()
        w = factor.surd_part() if not factor.is_rational else Polynomial.zero(n)
        rational, surd = rational * u + surd * w * r, rational * w + surd * u
    if not surd.is_zero():
        raise FormDegreeError("surd part of the factor product does not cancel")
    return rational


def factor_quadratic(qf: QuadraticForm) -> CriterionVerdict:
    """
    Decide whether s^T M s splits into two real linear forms.

    Rank 1 is a scaled square. Rank 2 splits iff it is indefinite; completing the
    square on a non-zero pivot gives Q = (1/a)(L^2 - r L'^2) with r = -a/b.
    Rank 3 or more never splits.
    """
    n, M = qf.n, qf.M
    rank = _rank(M)
    route = "factor_quadratic"
    logger.debug("Quadratic form rank", extra={"operation": "factor_quadratic", "rank": rank, "n": n})

    if rank == 0:
        raise FormDegreeError("zero quadratic form")
    if rank >= 3:
        rows, value = _nonzero_minor(M)
        return CriterionVerdict(outcome=Outcome.IRREDUCIBLE_CERTIFIED,
                                evidence=Evidence(kind="rank", rank=rank, minor=value, minor_rows=rows),
                                route=route, degree=2)

    pivot = next((i for i in range(n) if M[i][i] != 0), None)
    if pivot is None:
        return _split_zero_diagonal(qf, route)

    a = M[pivot][pivot]
    L = M[pivot]
    if rank == 1:
        factor = LinearFactor(L)
        return factored_verdict((factor, factor), 1 / a, route, 2)

    reduced = [[M[i][j] - M[i][pivot] * M[pivot][j] / a for j in range(n)] for i in range(n)]
    second = next(j for j in range(n) if reduced[j][j] != 0)
    b = reduced[second][second]
    L2 = reduced[second]
    if a * b > 0:
        return CriterionVerdict(outcome=Outcome.IRREDUCIBLE_CERTIFIED,
                                evidence=Evidence(kind="signature", rank=2, pivots=(a, b)),
                                route=route, degree=2)

    r = -a / b
    root = exact_sqrt(r)
    if root is not None:
        factors = (LinearFactor(tuple(x - root * y for x, y in zip(L, L2))),
                   LinearFactor(tuple(x + root * y for x, y in zip(L, L2))))
    else:
        factors = (LinearFactor(L, tuple(-y for y in L2), r), LinearFactor(L, L2, r))
    return factored_verdict(factors, 1 / a, route, 2)


def coefficient_matching_quadratic_3var(qf: QuadraticForm) -> CriterionVerdict:
    """
    Normalize the s1^2 coefficient to 1 and match
    (s1 + u s2 + v s3)(s1 + r s2 + t s3) term by term.

    u, r solve x^2 - c12 x + c22 and v, t solve x^2 - c13 x + c33; the mixed
    coefficient ut + vr can only be (c12 c13 -+ sqrt(D1 D2)) / 2.
    """
    if qf.n != 3:
        raise FormDegreeError(f"coefficient matching needs 3 variables, got {qf.n}")
    c11 = qf.coefficient(1, 1)
    if c11 == 0:
        logger.info("Zero s1^2 coefficient, deferring to the rank test",
                    extra={"operation": "coefficient_matching_quadratic_3var"})
        return factor_quadratic(qf)

    route = "coefficient_matching"
    c12, c13 = qf.coefficient(1, 2) / c11, qf.coefficient(1, 3) / c11
    c22, c33 = qf.coefficient(2, 2) / c11, qf.coefficient(3, 3) / c11
    c23 = qf.coefficient(2, 3) / c11
    d1, d2 = c12 * c12 - 4 * c22, c13 * c13 - 4 * c33
    if d1 < 0 or d2 < 0:
        return CriterionVerdict(outcome=Outcome.IRREDUCIBLE_CERTIFIED,
                                evidence=Evidence(kind="discriminant", discriminants=(d1, d2)),
                                route=route, degree=2)

    base = c12 * c13 / 2
    product = d1 * d2
    candidates = (format_surd(base, Fraction(-1, 2), product), format_surd(base, Fraction(1, 2), product))
    gap = 2 * c23 - c12 * c13
    if gap * gap != product:
        return CriterionVerdict(outcome=Outcome.IRREDUCIBLE_CERTIFIED,
                                evidence=Evidence(kind="coefficient_matching", discriminants=(d1, d2),
                                                  candidates=candidates, actual=c23),
                                route=route, degree=2)

    # sqrt(D1) = sqrt(r) and sqrt(D2) = k sqrt(r) with k rational since D1 D2 is a square
    if d1 != 0:
        r, k1, k2 = d1, Fraction(1), abs(gap) / d1
    else:
        r, k1, k2 = d2, Fraction(0), Fraction(1)
    # sign pairing from c12 c13 - 2 c23 = e1 e2 sqrt(D1 D2)
    e = -1 if gap > 0 else 1
    first = LinearFactor((Fraction(1), c12 / 2, c13 / 2), (Fraction(0), k1 / 2, e * k2 / 2), r)
    second = LinearFactor((Fraction(1), c12 / 2, c13 / 2), (Fraction(0), -k1 / 2, -e * k2 / 2), r)
    root = exact_sqrt(r)
    if root is not None:
        first, second = _rationalize(first, root), _rationalize(second, root)
    return factored_verdict((first, second), c11, route, 2)


def restriction_reject(Qtop: Polynomial, trials: int = RESTRICTION_TRIALS,
                       seed: int = DEFAULT_SEED) -> CriterionVerdict:
    """
    Restrict Q_top to random integer planes t v + w and count real roots exactly.

    A product of real linear forms restricts to a real-rooted binary form on every
    plane, so one restriction with fewer real roots than distinct roots certifies
    that Q_top does not split. Passing every trial proves nothing.
    """
    if Qtop.is_zero():
        raise ZeroPolynomialError()
    if not Qtop.is_homogeneous() or Qtop.degree < 1:
        raise FormDegreeError(f"expected a homogeneous form of degree >= 1, got {Qtop}")

    t = sympy.Symbol("t")
    for trial in range(trials):
        rng = substream(seed, trial)
        v = [int(x) for x in rng.integers(-PLANE_RANGE, PLANE_RANGE + 1, size=Qtop.n)]
        w = [int(x) for x in rng.integers(-PLANE_RANGE, PLANE_RANGE + 1, size=Qtop.n)]
        line = poly_substitute_line(Qtop, [Fraction(x) for x in v], [Fraction(x) for x in w])
        if line.is_zero():
            continue
        distinct, real = _real_root_count(_univariate(line, t))
        if real < distinct:
            logger.info("Restriction certifies irreducibility",
                        extra={"operation": "restriction_reject", "trial": trial, "seed": seed})
            return CriterionVerdict(outcome=Outcome.IRREDUCIBLE_CERTIFIED,
                                    evidence=Evidence(kind="restriction", plane=(tuple(v), tuple(w)), trial=trial,
                                                      real_roots=real, distinct_roots=distinct),
                                    route="restriction_reject", degree=Qtop.degree)
    return CriterionVerdict(outcome=Outcome.INCONCLUSIVE,
                            evidence=Evidence(kind="restriction_passed", trials=trials),
                            route="restriction_reject", degree=Qtop.degree)


def mphstar_certificate(Q: Polynomial, minimal_declared: bool, trials: int = RESTRICTION_TRIALS,
                        seed: int = DEFAULT_SEED) -> CriterionVerdict:
    """
    Necessary condition for a Markovian reward representation: the leading part of
    the minimal denominator is c0 times a product of non-negative linear forms.
    """
    if Q.constant_term == 0:
        raise InvalidTransformError("denominator vanishes at the origin")
    Qtop = extract_qtop(Q)
    degree = Qtop.degree

    if degree == 0:
        verdict = CriterionVerdict(outcome=Outcome.FACTORS_NONNEG,
                                   evidence=Evidence(kind="empty_product", c0=Qtop.constant_term),
                                   route="constant", degree=0)
    elif degree == 1:
        coeffs = [Qtop.coefficient(mono) for mono in _unit_monomials(Q.n)]
        verdict = factored_verdict((LinearFactor(tuple(coeffs)),), Fraction(1), "linear", 1)
    elif degree == 2:
        verdict = factor_quadratic(QuadraticForm.from_polynomial(Qtop))
    else:
        verdict = restriction_reject(Qtop, trials=trials, seed=seed)

    notes = ()
    if not minimal_declared:
        notes = ("denominator not declared minimal: a certified outcome does not exclude a Markovian "
                 "representation unless the minimal denominator shares the leading part",)
    verdict = replace(verdict, minimal_declared=minimal_declared, notes=notes)
    logger.info(
        f"Criterion outcome {verdict.outcome.value} via {verdict.route}",
        extra={"operation": "mphstar_certificate", "degree": degree, "minimal_declared": minimal_declared}
    )
    return verdict


def _rank(M) -> int:
    n = len(M)
    QQ = sympy.QQ
    return DomainMatrix([[QQ(x.numerator, x.denominator) for x in row] for row in M], (n, n), QQ).rank()


def _nonzero_minor(M) -> Tuple[Tuple[int, ...], Fraction]:
    """First non-zero 3x3 minor in lexicographic row/column order (1-based rows then columns)."""
    n = len(M)
    QQ = sympy.QQ
    for rows in itertools.combinations(range(n), 3):
        for cols in itertools.combinations(range(n), 3):
            sub = [[QQ(M[i][j].numerator, M[i][j].denominator) for j in cols] for i in rows]
            value = DomainMatrix(sub, (3, 3), QQ).det()
            if value != 0:
                return (tuple(i + 1 for i in rows) + tuple(j + 1 for j in cols),
                        Fraction(int(value.numerator), int(value.denominator)))
    raise FormDegreeError("rank is below 3")


def _split_zero_diagonal(qf: QuadraticForm, route: str) -> CriterionVerdict:
    """
    Zero diagonal: s_i is isotropic, so Q = s_i L_i + R with L_i = 2 sum_k M_ik s_k
    and L_i divides Q.
    """
    n, M = qf.n, qf.M
    i = next(k for k in range(n) if any(M[k]))
    L = LinearFactor(tuple(2 * x for x in M[i]))
    quotient = poly_divides(L.rational_part(), qf.to_polynomial())
    if quotient is None:
        raise FormDegreeError("zero-diagonal form of rank 2 did not split")
    other = LinearFactor(tuple(quotient.coefficient(mono) for mono in _unit_monomials(n)))
    return factored_verdict((L, other), Fraction(1), route, 2)


def _rationalize(factor: LinearFactor, root: Fraction) -> LinearFactor:
    return LinearFactor(tuple(p + q * root for p, q in zip(factor.coeffs, factor.sqrt_coeffs)))


def _unit_monomials(n: int):
    return [tuple(1 if k == j else 0 for k in range(n)) for j in range(n)]


def _univariate(line: Polynomial, t: sympy.Symbol) -> sympy.Poly:
    coeffs = {(mono[0],): sympy.Rational(c.numerator, c.denominator) for mono, c in line.terms.items()}
    return sympy.Poly.from_dict(coeffs, t, domain=sympy.QQ)


def _real_root_count(poly: sympy.Poly) -> Tuple[int, int]:
    """(distinct roots, distinct real roots) of poly via its square-free part and a Sturm sequence."""
    sqf = poly.sqf_part()
    degree = sqf.degree()
    if degree <= 0:
        return 0, 0
    chain = sympy.sturm(sqf)
    at_plus = [_sign(p.LC()) for p in chain]
    at_minus = [_sign(p.LC()) * (-1) ** p.degree() for p in chain]
    return degree, _sign_changes(at_minus) - _sign_changes(at_plus)


def _sign(x) -> int:
    # sympy comparisons return BooleanAtoms, which do not subtract
    return int(sympy.sign(sympy.Rational(x)))


def _sign_changes(signs) -> int:
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)
