from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np


@dataclass(frozen=True, eq=False)
class RewardPath:
    """Visited transient states, holding times and accumulated rewards of one absorbed path."""

    states: Tuple[int, ...]
    holds: Tuple[float, ...]
    rewards: np.ndarray

    @property
    def absorbed_at_zero(self) -> bool:
        return not self.states

    @property
    def absorption_time(self) -> float:
        return float(sum(self.holds))


@dataclass(frozen=True)
class TransformRow:
    point: Tuple[float, ...]
    estimate: float
    standard_error: float
    exact: float

    @property
    def z_score(self) -> float:
        gap = abs(self.estimate - self.exact)
        if self.standard_error == 0:
            return 0.0 if gap == 0 else float("inf")
        return gap / self.standard_error


@dataclass(frozen=True)
class ProjectionTable:
    a: Tuple[float, ...]
    rows: Tuple[TransformRow, ...]
    samples: int
    seed: int

    @property
    def max_z(self) -> float:
        return max((row.z_score for row in self.rows), default=0.0)


@dataclass(frozen=True, eq=False)
class SimulationSummary:
    samples: int
    seed: int
    means: np.ndarray
    covariance: np.ndarray
    transform_table: Tuple[TransformRow, ...]
