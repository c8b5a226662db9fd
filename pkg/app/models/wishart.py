from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Tuple

import numpy as np


class SupportRegion(str, Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class SymMatrix2:
    """Symmetric 2x2 matrix [[z11, z12], [z12, z22]]."""

    z11: float
    z12: float
    z22: float

    @property
    def trace(self) -> float:
        return self.z11 + self.z22

    @property
    def det(self) -> float:
        return self.z11 * self.z22 - self.z12 * self.z12

    def is_psd(self, tol: float = 0.0) -> bool:
        return self.trace >= -tol and self.det >= -tol

    def as_array(self) -> np.ndarray:
        return np.array([[self.z11, self.z12], [self.z12, self.z22]])

    @classmethod
    def from_array(cls, z: np.ndarray) -> "SymMatrix2":
        return cls(float(z[0, 0]), float(z[0, 1]), float(z[1, 1]))


def _spd(rows) -> np.ndarray:
    arr = np.array(rows, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class WishartExample:
    """Trace functionals X_j = Tr(H_j Z) of Z ~ W_2(2, I/2)."""

    H: Tuple[np.ndarray, ...] = field(default_factory=lambda: (
        _spd([[1, 0], [0, 1]]),
        _spd([[2, 1], [1, 2]]),
        _spd([[3, 0], [0, 1]]),
    ))

    def combination(self, a: Sequence[float]) -> np.ndarray:
        """H(a) = a1 H1 + a2 H2 + a3 H3."""
        return np.tensordot(np.asarray(a, dtype=float), np.stack(self.H), axes=1)

    def eigenvalues(self, a: Sequence[float]) -> Tuple[float, float]:
        lam = np.linalg.eigvalsh(self.combination(a))
        return float(lam[0]), float(lam[1])


@dataclass(frozen=True)
class DensityValue:
    """Density at a point; boundary points carry an infinite value and the flag."""

    value: float
    region: SupportRegion

    @property
    def boundary(self) -> bool:
        return self.region is SupportRegion.BOUNDARY


@dataclass(frozen=True)
class DensityNormalization:
    integral: float
    x1_max: float
    expected: float
    nodes: Tuple[int, int, int]

    @property
    def error(self) -> float:
        return abs(self.integral - self.expected)


@dataclass(frozen=True)
class ProjectionLaw:
    a: Tuple[float, ...]
    eigenvalues: Tuple[float, float]
    u: float
    value: float
