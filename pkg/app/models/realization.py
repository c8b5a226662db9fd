from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _readonly(values, shape) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(shape)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FMRealization:
    """
    Linear-fractional state-space form of a function analytic at the origin:

        f(s) = d + c (I - sum_j s_j R_j)^{-1} (sum_j s_j binp_j)

    R has shape (n, rho, rho) and binp has shape (n, rho); rho may be zero.
    """

    n: int
    d: float
    c: np.ndarray
    R: np.ndarray
    binp: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.c).size
        object.__setattr__(self, "d", float(self.d))
        object.__setattr__(self, "c", _readonly(self.c, (rho,)))
        object.__setattr__(self, "R", _readonly(self.R, (self.n, rho, rho)))
        object.__setattr__(self, "binp", _readonly(self.binp, (self.n, rho)))

    @property
    def rho(self) -> int:
        return self.c.shape[0]


@dataclass(frozen=True, eq=False)
class LinearResolvent:
    """Constant-input form f(s) = eta (I_N - sum_j s_j A_j)^{-1} b."""

    n: int
    eta: np.ndarray
    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        N = np.asarray(self.eta).size
        object.__setattr__(self, "eta", _readonly(self.eta, (N,)))
        object.__setattr__(self, "A", _readonly(self.A, (self.n, N, N)))
        object.__setattr__(self, "b", _readonly(self.b, (N,)))

    @property
    def N(self) -> int:
        return self.eta.shape[0]


@dataclass(frozen=True, eq=False)
class DiagLift:
    """
    Block lift alpha0 (I_q - U S(s))^{-1} 1_q with q = nN and
    S(s) = diag(s_1 I_N, ..., s_n I_N).
    """

    n: int
    N: int
    alpha0: np.ndarray
    U: np.ndarray
    E: np.ndarray

    def __post_init__(self):
        q = self.n * self.N
        object.__setattr__(self, "alpha0", _readonly(self.alpha0, (q,)))
        object.__setattr__(self, "U", _readonly(self.U, (q, q)))
        object.__setattr__(self, "E", _readonly(self.E, (q, self.N)))

    @property
    def q(self) -> int:
        return self.n * self.N

    def S(self, s) -> np.ndarray:
        return np.diag(np.repeat(np.asarray(s, dtype=float), self.N))


@dataclass(frozen=True, eq=False)
class StabilizedSystem:
    """Hurwitz-stable embedding: alpha_hat (-T + diag(K s))^{-1} (-T 1)."""

    T: np.ndarray
    alpha_hat: np.ndarray
    K: np.ndarray

    @property
    def size(self) -> int:
        return self.T.shape[0]


@dataclass(frozen=True)
class PipelineReport:
    """Stage dimensions and verification outcome of one realization run."""

    n: int
    rho: int
    N: int
    q: int
    ell: int
    degenerate: bool
    h_condition: float
    verification_points: int
    max_relative_error: float
    seed: int
