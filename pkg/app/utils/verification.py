from __future__ import annotations

from typing import Callable, List, Optional

import numpy as np

from app.utils.rng import substream

CONDITION_CUTOFF = 1e12
MAX_REDRAWS = 100


def verification_radius(A: np.ndarray) -> float:
    """0.1 / (1 + max_j ||A_j||_2) for a stack of coefficient matrices."""
    A = np.asarray(A, dtype=float)
    if A.size == 0:
        return 0.1
    return 0.1 / (1.0 + max(np.linalg.norm(Aj, 2) for Aj in A))


def ball_point(rng: np.random.Generator, n: int, radius: float) -> np.ndarray:
    """Uniform draw from the closed n-ball of the given radius."""
    direction = rng.standard_normal(n)
    norm = np.linalg.norm(direction)
    if norm == 0:
        return np.zeros(n)
    return direction / norm * radius * rng.random() ** (1.0 / n)


def verification_points(n: int, count: int, seed: int, radius: float,
                        condition: Optional[Callable[[np.ndarray], float]] = None) -> List[np.ndarray]:
    """
    Seeded points in the ball around the origin.

    A point whose condition estimate exceeds CONDITION_CUTOFF is redrawn from
    the same substream, so the list is a pure function of the arguments.
    """
    points = []
    for i in range(count):
        rng = substream(seed, i)
        s = ball_point(rng, n, radius)
        for _ in range(MAX_REDRAWS):
            if condition is None or condition(s) <= CONDITION_CUTOFF:
                break
            s = ball_point(rng, n, radius)
        points.append(s)
    return points
