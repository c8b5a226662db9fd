import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from app.core.config import CHUNK_SIZE, DEFAULT_SEED, WORKERS
from app.core.exceptions import DimensionMismatchError, InvalidRepresentationError, InvalidSampleCountError
from app.models.kulkarni import KulkarniRep
from app.models.simulation import ProjectionTable, RewardPath, SimulationSummary, TransformRow
from app.services.kulkarni_service import check_direction, project, transform_eval, validate_mphstar
from app.utils.rng import mean_and_se, run_chunked

logger = logging.getLogger(__name__)


class JumpChain:
    """Embedded jump chain of a validated representation; column m is absorption."""

    def __init__(self, rep: KulkarniRep):
        report = validate_mphstar(rep)
        if not report.passed:
            names = ", ".join(c.name for c in report.failures)
            raise InvalidRepresentationError(f"simulation needs a valid Markovian representation; fails {names}")
        m = rep.m
        self.m = m
        self.K = rep.K
        self.rates = -np.diag(rep.T)
        probs = np.zeros((m, m + 1))
        probs[:, :m] = rep.T / self.rates[:, None]
        probs[np.arange(m), np.arange(m)] = 0.0
        probs[:, m] = rep.t / self.rates
        probs = np.clip(probs, 0.0, None)
        self.cumulative = np.cumsum(probs, axis=1) / probs.sum(axis=1, keepdims=True)
        initial = np.clip(np.concatenate([rep.alpha, [rep.p0]]), 0.0, None)
        self.initial = np.cumsum(initial) / initial.sum()

    def next_states(self, states: np.ndarray, u: np.ndarray) -> np.ndarray:
        return (self.cumulative[states] <= u[:, None]).sum(axis=1)

    def start_states(self, u: np.ndarray) -> np.ndarray:
        return (self.initial[None, :] <= u[:, None]).sum(axis=1)


def simulate_path(rep: KulkarniRep, rng: np.random.Generator, chain: Optional[JumpChain] = None) -> RewardPath:
    """
    One trajectory: start from alpha (absorbed at time zero with probability p0),
    hold an exponential time with rate -T_ii in state i, then jump with
    probabilities T_ij / (-T_ii) or absorb with t_i / (-T_ii).
    """
    chain = chain or JumpChain(rep)
    rewards = np.zeros(rep.n)
    states: List[int] = []
    holds: List[float] = []
    state = int(chain.start_states(rng.random(1))[0])
    while state < chain.m:
        hold = float(rng.standard_exponential()) / chain.rates[state]
        states.append(state)
        holds.append(hold)
        rewards = rewards + hold * chain.K[state]
        state = int(chain.next_states(np.array([state]), rng.random(1))[0])
    return RewardPath(states=tuple(states), holds=tuple(holds), rewards=rewards)


def simulate_rewards(rep: KulkarniRep, size: int, rng: np.random.Generator,
                     chain: Optional[JumpChain] = None) -> np.ndarray:
    """Accumulated reward vectors of `size` independent paths, advanced together."""
    chain = chain or JumpChain(rep)
    rewards = np.zeros((size, rep.n))
    states = chain.start_states(rng.random(size))
    active = np.flatnonzero(states < chain.m)
    while active.size:
        current = states[active]
        holds = rng.standard_exponential(active.size) / chain.rates[current]
        rewards[active] += holds[:, None] * chain.K[current]
        states[active] = chain.next_states(current, rng.random(active.size))
        active = active[states[active] < chain.m]
    return rewards


def mc_transform(rep: KulkarniRep, s: Sequence[float], samples: int, seed: int = DEFAULT_SEED,
                 chunk_size: int = CHUNK_SIZE, workers: int = WORKERS) -> Tuple[float, float]:
    """Mean of exp(-<s, rewards>) over seeded paths with its standard error."""
    if samples < 1:
        raise InvalidSampleCountError(samples)
    s = _point(s, rep.n)
    chain = JumpChain(rep)
    if not np.any(s):
        return 1.0, 0.0

    def chunk(rng: np.random.Generator, size: int):
        w = np.exp(-simulate_rewards(rep, size, rng, chain) @ s)
        return float(w.sum()), float(np.dot(w, w))

    parts = run_chunked(chunk, samples, seed, chunk_size=chunk_size, workers=workers)
    logger.info("Reward-path Monte Carlo transform",
                extra={"operation": "mc_transform", "seed": seed, "samples": samples, "chunks": len(parts)})
    return mean_and_se([p[0] for p in parts], [p[1] for p in parts], samples)


def mc_projection_check(rep: KulkarniRep, a: Sequence[float], u_grid: Sequence[float], samples: int,
                        seed: int = DEFAULT_SEED, chunk_size: int = CHUNK_SIZE,
                        workers: int = WORKERS) -> ProjectionTable:
    """Empirical E exp(-u <a, X>) on a grid against the projected univariate transform."""
    if samples < 1:
        raise InvalidSampleCountError(samples)
    a = check_direction(a, rep.n)
    u_grid = np.asarray(u_grid, dtype=float)
    chain = JumpChain(rep)
    law = project(rep, a)

    def chunk(rng: np.random.Generator, size: int):
        w = np.exp(-np.outer(simulate_rewards(rep, size, rng, chain) @ a, u_grid))
        return w.sum(axis=0), (w * w).sum(axis=0)

    parts = run_chunked(chunk, samples, seed, chunk_size=chunk_size, workers=workers)
    rows = []
    for k, u in enumerate(u_grid):
        estimate, se = mean_and_se([p[0][k] for p in parts], [p[1][k] for p in parts], samples)
        rows.append(TransformRow(point=(float(u),), estimate=estimate, standard_error=se, exact=law.laplace(u)))
    return ProjectionTable(a=tuple(a.tolist()), rows=tuple(rows), samples=samples, seed=seed)


def default_grid(n: int) -> List[np.ndarray]:
    """Origin, each unit axis and the all-ones point."""
    return [np.zeros(n)] + [np.eye(n)[j] for j in range(n)] + [np.ones(n)]


def summarize(rep: KulkarniRep, samples: int, seed: int = DEFAULT_SEED,
              grid: Optional[Sequence[Sequence[float]]] = None, chunk_size: int = CHUNK_SIZE,
              workers: int = WORKERS) -> SimulationSummary:
    """Sample means, covariance and a transform table from one seeded batch of paths."""
    if samples < 1:
        raise InvalidSampleCountError(samples)
    chain = JumpChain(rep)
    points = [_point(s, rep.n) for s in (grid if grid is not None else default_grid(rep.n))]

    parts = run_chunked(lambda rng, size: simulate_rewards(rep, size, rng, chain), samples, seed,
                        chunk_size=chunk_size, workers=workers)
    rewards = np.vstack(parts)
    means = rewards.mean(axis=0)
    covariance = np.cov(rewards, rowvar=False).reshape(rep.n, rep.n) if samples > 1 else np.zeros((rep.n, rep.n))

    table = []
    for s in points:
        w = np.exp(-rewards @ s)
        estimate, se = mean_and_se([w.sum()], [np.dot(w, w)], samples)
        table.append(TransformRow(point=tuple(s.tolist()), estimate=estimate, standard_error=se,
                                  exact=transform_eval(rep, s)))
    logger.info("Simulated reward summary", extra={"operation": "summarize", "seed": seed, "samples": samples})
    return SimulationSummary(samples=samples, seed=seed, means=means, covariance=covariance,
                             transform_table=tuple(table))


def _point(s: Sequence[float], n: int) -> np.ndarray:
    s = np.asarray(s, dtype=float).reshape(-1)
    if s.size != n:
        raise DimensionMismatchError(n, s.size, "transform argument")
    return s
