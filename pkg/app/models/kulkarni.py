from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import expm

from app.core.exceptions import InvalidRepresentationError, SingularEvaluationError

ExactMatrix = Tuple[Tuple[Fraction, ...], ...]


def _frozen(values, ndim: int, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise InvalidRepresentationError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidRepresentationError(f"{name} has non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ExactCoefficients:
    """Exact rational rendering of the sub-generator and reward matrix."""

    T: ExactMatrix
    K: ExactMatrix

    @classmethod
    def from_rows(cls, T: Sequence[Sequence], K: Sequence[Sequence]) -> "ExactCoefficients":
        return cls(tuple(tuple(Fraction(x) for x in row) for row in T),
                   tuple(tuple(Fraction(x) for x in row) for row in K))


@dataclass(frozen=True, eq=False)
class KulkarniRep:
    """
    Reward representation (alpha, T, K, t, p0) with transform
    p0 + alpha (-T + diag(K s))^{-1} t.
    """

    alpha: np.ndarray
    T: np.ndarray
    K: np.ndarray
    t: np.ndarray
    p0: float
    exact: Optional[ExactCoefficients] = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "alpha", _frozen(self.alpha, 1, "alpha"))
        object.__setattr__(self, "T", _frozen(self.T, 2, "T"))
        object.__setattr__(self, "K", _frozen(self.K, 2, "K"))
        object.__setattr__(self, "t", _frozen(self.t, 1, "t"))
        object.__setattr__(self, "p0", float(self.p0))
        m = self.alpha.shape[0]
        if self.T.shape != (m, m):
            raise InvalidRepresentationError(f"T must be {m}x{m}, got {self.T.shape}")
        if self.K.shape[0] != m or self.K.shape[1] < 1:
            raise InvalidRepresentationError(f"K must have {m} rows and at least one column, got {self.K.shape}")
        if self.t.shape != (m,):
            raise InvalidRepresentationError(f"t must have length {m}, got {self.t.shape}")
        if self.exact is not None:
            if len(self.exact.T) != m or len(self.exact.K) != m:
                raise InvalidRepresentationError("exact coefficients do not match the state count")

    @classmethod
    def markovian(cls, alpha, T, K, exact: Optional[ExactCoefficients] = None) -> "KulkarniRep":
        """Build a representation with t = -T1 and p0 = 1 - alpha 1."""
        T = np.array(T, dtype=float)
        alpha = np.array(alpha, dtype=float)
        return cls(alpha=alpha, T=T, K=K, t=-T.sum(axis=1), p0=1.0 - alpha.sum(), exact=exact)

    @property
    def m(self) -> int:
        return self.alpha.shape[0]

    @property
    def n(self) -> int:
        return self.K.shape[1]


@dataclass(frozen=True, eq=False)
class UnivariateME:
    """
    Univariate matrix-exponential law with transform p0 + alpha (u diag(rates) - T)^{-1} t.

    rates defaults to all ones, which is the usual (alpha, T, t) form. Projections
    of reward representations keep their zero-rate states, so rates may vanish.
    """

    alpha: np.ndarray
    T: np.ndarray
    t: np.ndarray
    p0: float
    rates: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", _frozen(self.alpha, 1, "alpha"))
        object.__setattr__(self, "T", _frozen(self.T, 2, "T"))
        object.__setattr__(self, "t", _frozen(self.t, 1, "t"))
        rates = np.ones(self.alpha.shape[0]) if self.rates is None else self.rates
        object.__setattr__(self, "rates", _frozen(rates, 1, "rates"))
        object.__setattr__(self, "p0", float(self.p0))

    def laplace(self, u: float) -> float:
        matrix = u * np.diag(self.rates) - self.T
        try:
            return self.p0 + float(self.alpha @ np.linalg.solve(matrix, self.t))
        except np.linalg.LinAlgError:
            raise SingularEvaluationError(f"Resolvent is singular at u = {u}")

    def mean(self) -> float:
        """Minus the derivative of the transform at u = 0."""
        inner = np.linalg.solve(-self.T, self.t)
        return float(self.alpha @ np.linalg.solve(-self.T, self.rates * inner))

    def to_standard(self) -> "UnivariateME":
        """Rescale to unit rates; every rate must be positive."""
        if np.any(self.rates <= 0):
            raise InvalidRepresentationError("zero-rate states cannot be rescaled to unit rates")
        return UnivariateME(alpha=self.alpha, T=self.T / self.rates[:, None],
                            t=self.t / self.rates, p0=self.p0)

    def density(self, x: float) -> float:
        """alpha exp(x T) t of the absolutely continuous part, x > 0."""
        standard = self.to_standard()
        return float(standard.alpha @ expm(x * standard.T) @ standard.t)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: Tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> Tuple[Check, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def check(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)


@dataclass(frozen=True)
class HurwitzReport:
    stable: bool
    max_real_part: float
    eigenvalues: Tuple[complex, ...]
