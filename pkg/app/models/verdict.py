from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from app.core.exceptions import FormDegreeError
from app.models.polynomial import Polynomial

ExactVector = Tuple[Fraction, ...]


class Outcome(str, Enum):
    FACTORS_NONNEG = "FACTORS_NONNEG"
    FACTORS_MIXED_SIGNS = "FACTORS_MIXED_SIGNS"
    IRREDUCIBLE_CERTIFIED = "IRREDUCIBLE_CERTIFIED"
    INCONCLUSIVE = "INCONCLUSIVE"


def surd_sign(p: Fraction, q: Fraction, r: Fraction) -> int:
    """Exact sign of p + q*sqrt(r) for r >= 0."""
    p_sign = (p > 0) - (p < 0)
    if q == 0 or r == 0:
        return p_sign
    q_sign = (q > 0) - (q < 0)
    if p_sign in (0, q_sign):
        return q_sign
    square, surd = p * p, q * q * r
    if square == surd:
        return 0
    return p_sign if square > surd else q_sign


@dataclass(frozen=True)
class LinearFactor:
    """
    Linear form sum_j (coeffs[j] + sqrt_coeffs[j] * sqrt(radicand)) s_j.

    radicand is 0 and sqrt_coeffs are zero for rational factors.
    """

    coeffs: ExactVector
    sqrt_coeffs: ExactVector = ()
    radicand: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        sqrt_coeffs = self.sqrt_coeffs or (Fraction(0),) * len(self.coeffs)
        object.__setattr__(self, "sqrt_coeffs", tuple(Fraction(c) for c in sqrt_coeffs))
        object.__setattr__(self, "radicand", Fraction(self.radicand))
        if len(self.sqrt_coeffs) != len(self.coeffs):
            raise ValueError("rational and surd parts differ in length")
        if self.radicand < 0:
            raise ValueError("radicand must be non-negative")

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @property
    def is_rational(self) -> bool:
        return self.radicand == 0 or not any(self.sqrt_coeffs)

    def signs(self) -> Tuple[int, ...]:
        return tuple(surd_sign(p, q, self.radicand) for p, q in zip(self.coeffs, self.sqrt_coeffs))

    def negated(self) -> "LinearFactor":
        return LinearFactor(tuple(-c for c in self.coeffs), tuple(-c for c in self.sqrt_coeffs), self.radicand)

    def rational_part(self) -> Polynomial:
        return Polynomial.linear_form(self.coeffs)

    def surd_part(self) -> Polynomial:
        return Polynomial.linear_form(self.sqrt_coeffs)

    def approx(self) -> Tuple[float, ...]:
        root = float(self.radicand) ** 0.5
        return tuple(float(p) + float(q) * root for p, q in zip(self.coeffs, self.sqrt_coeffs))


@dataclass(frozen=True)
class QuadraticForm:
    """Q_top(s) = s^T M s with M symmetric; off-diagonal entries are half the mixed coefficients."""

    n: int
    M: Tuple[ExactVector, ...]

    def __post_init__(self):
        M = tuple(tuple(Fraction(x) for x in row) for row in self.M)
        if len(M) != self.n or any(len(row) != self.n for row in M):
            raise FormDegreeError(f"matrix must be {self.n}x{self.n}")
        if any(M[i][j] != M[j][i] for i in range(self.n) for j in range(i)):
            raise FormDegreeError("matrix is not symmetric")
        object.__setattr__(self, "M", M)

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "QuadraticForm":
        if p.is_zero() or p.degree != 2 or not p.is_homogeneous():
            raise FormDegreeError(f"expected a homogeneous quadratic, got degree {p.degree} polynomial {p}")
        M = [[Fraction(0)] * p.n for _ in range(p.n)]
        for mono, c in p.terms.items():
            idx = [j for j, e in enumerate(mono) for _ in range(e)]
            i, j = idx
            if i == j:
                M[i][i] = c
            else:
                M[i][j] = M[j][i] = c / 2
        return cls(p.n, tuple(tuple(row) for row in M))

    def to_polynomial(self) -> Polynomial:
        terms = {}
        for i in range(self.n):
            for j in range(i, self.n):
                mono = [0] * self.n
                mono[i] += 1
                mono[j] += 1
                terms[tuple(mono)] = self.coefficient(i + 1, j + 1)
        return Polynomial(self.n, terms)

    def coefficient(self, i: int, j: int) -> Fraction:
        """Coefficient of s_i s_j in the polynomial (1-based)."""
        return self.M[i - 1][j - 1] * (1 if i == j else 2)


@dataclass(frozen=True)
class Evidence:
    """
    Certificate attached to a verdict. kind selects which fields are populated:

    factors             c0 and the linear factors with Q_top = c0 * prod(factors)
    empty_product       c0 only (constant Q)
    rank                rank and a non-zero 3x3 minor with its row/column indices
    signature           rank-2 pivots (a, b) with a*b > 0, so the form is definite
    discriminant        negative discriminant in the normalized coefficient system
    coefficient_matching  the two admissible mixed coefficients and the actual one
    restriction         witness plane (v, w), real and distinct root counts
    restriction_passed  number of real-rooted trials
    """

    kind: str
    c0: Optional[Fraction] = None
    factors: Tuple[LinearFactor, ...] = ()
    rank: Optional[int] = None
    minor: Optional[Fraction] = None
    minor_rows: Tuple[int, ...] = ()
    pivots: Tuple[Fraction, ...] = ()
    discriminants: Tuple[Fraction, ...] = ()
    candidates: Tuple[str, ...] = ()
    actual: Optional[Fraction] = None
    plane: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]] = None
    trial: Optional[int] = None
    real_roots: Optional[int] = None
    distinct_roots: Optional[int] = None
    trials: Optional[int] = None


@dataclass(frozen=True)
class CriterionVerdict:
    outcome: Outcome
    evidence: Evidence
    route: str
    degree: int
    minimal_declared: Optional[bool] = None
    notes: Tuple[str, ...] = field(default=())

    @property
    def nu(self) -> Optional[int]:
        """Number of linear factors when the form factors."""
        if self.outcome in (Outcome.FACTORS_NONNEG, Outcome.FACTORS_MIXED_SIGNS):
            return len(self.evidence.factors)
        return None

    @property
    def excludes_mphstar(self) -> bool:
        """True only for a declared-minimal denominator whose leading part cannot be a non-negative product."""
        return bool(self.minimal_declared) and self.outcome in (Outcome.IRREDUCIBLE_CERTIFIED,
                                                                 Outcome.FACTORS_MIXED_SIGNS)


def linear_factor(coeffs: Sequence) -> LinearFactor:
    return LinearFactor(tuple(Fraction(c) for c in coeffs))
