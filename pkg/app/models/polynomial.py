from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from app.core.exceptions import DimensionMismatchError, InvalidTransformError

Monomial = Tuple[int, ...]
Scalar = Union[int, Fraction]


def graded_lex_key(mono: Monomial) -> Tuple[int, Monomial]:
    """Sort key for graded lexicographic order (total degree first, then lex)."""
    return sum(mono), mono


class Polynomial:
    """
    Exact multivariate polynomial with rational coefficients.

    Terms map exponent tuples (one entry per variable) to Fraction coefficients.
    Zero coefficients are never stored, and instances are immutable.
    """

    __slots__ = ("_n", "_terms")

    def __init__(self, n: int, terms: Optional[Mapping[Sequence[int], Scalar]] = None):
        if n < 0:
            raise ValueError("Variate dimension must be non-negative")
        clean: Dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            key = tuple(int(e) for e in mono)
            if len(key) != n:
                raise DimensionMismatchError(n, len(key), "monomial length")
            if any(e < 0 for e in key):
                raise ValueError(f"Negative exponent in monomial {key}")
            clean[key] = clean.get(key, Fraction(0)) + Fraction(coeff)
        self._n = n
        self._terms = {mono: c for mono, c in clean.items() if c != 0}

    # Constructors

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls(n)

    @classmethod
    def constant(cls, n: int, value: Scalar) -> "Polynomial":
        return cls(n, {(0,) * n: value})

    @classmethod
    def variable(cls, n: int, j: int) -> "Polynomial":
        """The coordinate s_j, with j counted from 1."""
        if not 1 <= j <= n:
            raise IndexError(f"Variable index {j} out of range 1..{n}")
        mono = [0] * n
        mono[j - 1] = 1
        return cls(n, {tuple(mono): 1})

    @classmethod
    def linear_form(cls, coeffs: Sequence[Scalar]) -> "Polynomial":
        n = len(coeffs)
        terms = {}
        for j, c in enumerate(coeffs):
            mono = [0] * n
            mono[j] = 1
            terms[tuple(mono)] = c
        return cls(n, terms)

    # Accessors

    @property
    def n(self) -> int:
        return self._n

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> List[Tuple[Monomial, Fraction]]:
        """Terms in descending graded lexicographic order."""
        return sorted(self._terms.items(), key=lambda kv: graded_lex_key(kv[0]), reverse=True)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient(self, mono: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(mono) for mono in self._terms)

    def is_homogeneous(self) -> bool:
        return len({sum(mono) for mono in self._terms}) <= 1

    @property
    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self._n)

    # Ring operations

    def _check(self, other: "Polynomial") -> None:
        if other.n != self._n:
            raise DimensionMismatchError(self._n, other.n)

    def _lift(self, other: Union["Polynomial", Scalar]) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self._n, other)

    def __add__(self, other: Union["Polynomial", Scalar]) -> "Polynomial":
        other = self._lift(other)
        out = dict(self._terms)
        for mono, c in other._terms.items():
            out[mono] = out.get(mono, Fraction(0)) + c
        return Polynomial(self._n, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self._n, {mono: -c for mono, c in self._terms.items()})

    def __sub__(self, other: Union["Polynomial", Scalar]) -> "Polynomial":
        return self + (-self._lift(other))

    def __rsub__(self, other: Scalar) -> "Polynomial":
        return self._lift(other) - self

    def __mul__(self, other: Union["Polynomial", Scalar]) -> "Polynomial":
        if not isinstance(other, Polynomial):
            factor = Fraction(other)
            return Polynomial(self._n, {mono: c * factor for mono, c in self._terms.items()})
        self._check(other)
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                out[mono] = out.get(mono, Fraction(0)) + c1 * c2
        return Polynomial(self._n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("Negative powers are not polynomials")
        result = Polynomial.constant(self._n, 1)
        for _ in range(k):
            result = result * self
        return result

    # Comparison

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self._n == other._n and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self._n, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self._n, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"Polynomial(n={self._n}, {self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.items():
            factors = [f"s{j + 1}" + (f"^{e}" if e > 1 else "") for j, e in enumerate(mono) if e]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")


@dataclass(frozen=True)
class RationalTransform:
    """
    Candidate multivariate Laplace transform p0 + num(s)/den(s).

    p0 is the atom at the origin; num/den is the non-atomic part, which must
    equal 1 - p0 at s = 0 and be strictly proper in total degree.
    """

    p0: Fraction
    num: Polynomial
    den: Polynomial
    coprime_declared: bool = False

    def __post_init__(self):
        object.__setattr__(self, "p0", Fraction(self.p0))
        if self.num.n != self.den.n:
            raise DimensionMismatchError(self.den.n, self.num.n, "numerator")
        if not 0 <= self.p0 <= 1:
            raise InvalidTransformError(f"atom p0 = {self.p0} outside [0, 1]")
        den0 = self.den.constant_term
        if den0 == 0:
            raise InvalidTransformError("denominator vanishes at the origin")
        if self.num.constant_term / den0 != 1 - self.p0:
            raise InvalidTransformError("transform does not equal 1 at the origin")
        if not self.num.is_zero() and self.num.degree >= self.den.degree:
            raise InvalidTransformError("non-atomic part is not strictly proper")

    @property
    def n(self) -> int:
        return self.den.n
