import logging
import math
from typing import Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from app.core.config import CHUNK_SIZE, DEFAULT_SEED, WORKERS
from app.core.exceptions import (DimensionMismatchError, InvalidSampleCountError, InvalidTransformError,
                                 SingularEvaluationError)
from app.models.kulkarni import UnivariateME
from app.models.polynomial import Polynomial, RationalTransform
from app.models.wishart import (DensityNormalization, DensityValue, ProjectionLaw, SupportRegion, SymMatrix2,
                                WishartExample)
from app.services.kulkarni_service import check_direction
from app.services.ratfun_service import poly_embed
from app.utils.rng import mean_and_se, run_chunked

logger = logging.getLogger(__name__)

WISHART = WishartExample()
BOUNDARY_TOL = 1e-12

# (z11, z12, z22) -> x
TRACE_MAP = np.array([[1.0, 0.0, 1.0],
                      [2.0, 2.0, 2.0],
                      [3.0, 0.0, 1.0]])


# Sampling

def sample_Z_batch(rng: np.random.Generator, size: int) -> np.ndarray:
    """Rows (z11, z12, z22) of Z = (G1 G1^T + G2 G2^T) / 2 with independent standard Gaussian G1, G2."""
    g = rng.standard_normal((size, 2, 2))
    z = 0.5 * np.einsum("kij,klj->kil", g, g)
    return np.column_stack([z[:, 0, 0], z[:, 0, 1], z[:, 1, 1]])


def sample_Z(rng: np.random.Generator) -> SymMatrix2:
    z11, z12, z22 = sample_Z_batch(rng, 1)[0]
    return SymMatrix2(float(z11), float(z12), float(z22))


def sample_X_batch(rng: np.random.Generator, size: int) -> np.ndarray:
    return sample_Z_batch(rng, size) @ TRACE_MAP.T


def sample_X(rng: np.random.Generator) -> np.ndarray:
    return sample_X_batch(rng, 1)[0]


# Change of variables

def to_trace_coordinates(z: SymMatrix2) -> np.ndarray:
    """x_j = Tr(H_j z)."""
    return TRACE_MAP @ np.array([z.z11, z.z12, z.z22])


def from_trace_coordinates(x: Sequence[float]) -> SymMatrix2:
    x1, x2, x3 = (float(v) for v in x)
    return SymMatrix2(z11=(x3 - x1) / 2, z12=(x2 - 2 * x1) / 2, z22=(3 * x1 - x3) / 2)


def radicand(x) -> np.ndarray:
    """-7x1^2 - x2^2 - x3^2 + 4x1x2 + 4x1x3, which equals 4 det(z)."""
    x = np.asarray(x, dtype=float)
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    return x1 * x1 - (x2 - 2 * x1) ** 2 - (x3 - 2 * x1) ** 2


# Support and density

def in_support(x: Sequence[float]) -> SupportRegion:
    """Position relative to the cone (x2 - 2x1)^2 + (x3 - 2x1)^2 <= x1^2, x1 >= 0."""
    x = np.asarray(x, dtype=float)
    rad = float(radicand(x))
    scale = max(1.0, float(x[0]) ** 2)
    if x[0] < -BOUNDARY_TOL:
        return SupportRegion.OUTSIDE
    if abs(rad) <= BOUNDARY_TOL * scale:
        return SupportRegion.BOUNDARY
    return SupportRegion.INTERIOR if rad > 0 else SupportRegion.OUTSIDE


def density(x: Sequence[float]) -> DensityValue:
    """exp(-x1) / (2 pi sqrt(radicand)) on the open cone, 0 outside, flagged on the boundary."""
    region = in_support(x)
    if region is SupportRegion.OUTSIDE:
        return DensityValue(0.0, region)
    if region is SupportRegion.BOUNDARY:
        return DensityValue(math.inf, region)
    return DensityValue(float(_interior_density(np.asarray(x, dtype=float))), region)


def z_density(z: SymMatrix2) -> float:
    """W_2(2, I/2) density det(z)^{-1/2} exp(-Tr z) / pi on positive-definite z."""
    if z.trace <= 0 or z.det <= 0:
        return 0.0
    return math.exp(-z.trace) / (math.pi * math.sqrt(z.det))


def density_normalization(x1_max: float = 30.0,
                          nodes: Tuple[int, int, int] = (96, 24, 24)) -> DensityNormalization:
    """
    Integrate the density over the cone truncated at x1 <= x1_max.

    Each section is the disk of radius x1 around (2x1, 2x1); with r = x1 sin(phi)
    the square-root singularity at the rim cancels against the Jacobian.
    """
    n1, n_phi, n_theta = nodes
    t1, w1 = leggauss(n1)
    tp, wp = leggauss(n_phi)
    tt, wt = leggauss(n_theta)
    x1 = 0.5 * x1_max * (t1 + 1)
    w1 = 0.5 * x1_max * w1
    phi = 0.25 * np.pi * (tp + 1)
    wp = 0.25 * np.pi * wp
    theta = np.pi * (tt + 1)
    wt = np.pi * wt

    X1, PHI, THETA = np.meshgrid(x1, phi, theta, indexing="ij")
    W = w1[:, None, None] * wp[None, :, None] * wt[None, None, :]
    r = X1 * np.sin(PHI)
    points = np.stack([X1, 2 * X1 + r * np.cos(THETA), 2 * X1 + r * np.sin(THETA)], axis=-1)
    # area element r dr dtheta with dr = x1 cos(phi) dphi
    jacobian = r * X1 * np.cos(PHI)
    integral = float(np.sum(W * jacobian * _interior_density(points)))
    expected = 1.0 - (1.0 + x1_max) * math.exp(-x1_max)
    logger.debug("Density normalization", extra={"operation": "density_normalization", "integral": integral})
    return DensityNormalization(integral=integral, x1_max=x1_max, expected=expected, nodes=tuple(nodes))


def section_coordinates(x) -> np.ndarray:
    """Position of x/x1 inside the x1 = 1 section, centred at (2, 2); support points have norm <= 1."""
    x = np.asarray(x, dtype=float)
    return np.stack([x[..., 1] / x[..., 0] - 2, x[..., 2] / x[..., 0] - 2], axis=-1)


# Transform

def transform_poly() -> Polynomial:
    """Q(s) = det(I_2 + s1 H1 + s2 H2 + s3 H3), exactly."""
    s1, s2, s3 = (Polynomial.variable(3, j) for j in (1, 2, 3))
    return (1 + s1 + 2 * s2 + 3 * s3) * (1 + s1 + 2 * s2 + s3) - s2 * s2


def transform_rational() -> RationalTransform:
    return RationalTransform(p0=0, num=Polynomial.constant(3, 1), den=transform_poly(), coprime_declared=True)


def transform_closed(s: Sequence[float]) -> float:
    """det(I_2 + H(s))^{-1}."""
    h = WISHART.combination(_vector(s, 3))
    det = (1 + h[0, 0]) * (1 + h[1, 1]) - h[0, 1] * h[1, 0]
    if det == 0:
        raise SingularEvaluationError(f"I + H(s) is singular at s = {list(s)}")
    return 1.0 / det


def projection_transform(a: Sequence[float], u: float) -> ProjectionLaw:
    """<a, X> is a sum of independent exponentials with means lambda_1(a), lambda_2(a)."""
    a = check_direction(a, 3)
    lam = WISHART.eigenvalues(a)
    if min(lam) <= 0:
        raise InvalidTransformError(f"H(a) is not positive definite for a = {a.tolist()}")
    value = 1.0 / ((1 + u * lam[0]) * (1 + u * lam[1]))
    return ProjectionLaw(a=tuple(a.tolist()), eigenvalues=lam, u=float(u), value=value)


def projection_ph(a: Sequence[float]) -> UnivariateME:
    """Two-phase series representation with rates 1/lambda_1(a) and 1/lambda_2(a)."""
    lam = projection_transform(a, 0.0).eigenvalues
    mu1, mu2 = 1.0 / lam[0], 1.0 / lam[1]
    return UnivariateME(alpha=np.array([1.0, 0.0]), T=np.array([[-mu1, mu1], [0.0, -mu2]]),
                        t=np.array([0.0, mu2]), p0=0.0)


def extend_to_n(n: int) -> RationalTransform:
    """(1/Q(s1, s2, s3)) * prod_{j >= 4} (1 + s_j)^{-1}: independent Exp(1) coordinates appended."""
    if n < 4:
        raise InvalidTransformError(f"extension needs n >= 4, got {n}")
    den = poly_embed(transform_poly(), n)
    for j in range(4, n + 1):
        den = den * (1 + Polynomial.variable(n, j))
    return RationalTransform(p0=0, num=Polynomial.constant(n, 1), den=den, coprime_declared=True)


def mc_transform(s: Sequence[float], samples: int, seed: int = DEFAULT_SEED, chunk_size: int = CHUNK_SIZE,
                 workers: int = WORKERS) -> Tuple[float, float]:
    """Mean of exp(-<s, X>) over seeded samples with its standard error."""
    if samples < 1:
        raise InvalidSampleCountError(samples)
    s = _vector(s, 3)
    if not np.any(s):
        return 1.0, 0.0

    def chunk(rng: np.random.Generator, size: int):
        w = np.exp(-sample_X_batch(rng, size) @ s)
        return float(w.sum()), float(np.dot(w, w))

    parts = run_chunked(chunk, samples, seed, chunk_size=chunk_size, workers=workers)
    estimate, se = mean_and_se([p[0] for p in parts], [p[1] for p in parts], samples)
    logger.info("Wishart Monte Carlo transform",
                extra={"operation": "mc_transform", "seed": seed, "samples": samples, "chunks": len(parts)})
    return estimate, se


def _interior_density(x: np.ndarray) -> np.ndarray:
    return np.exp(-x[..., 0]) / (2 * np.pi * np.sqrt(radicand(x)))


def _vector(s: Sequence[float], n: int) -> np.ndarray:
    s = np.asarray(s, dtype=float).reshape(-1)
    if s.size != n:
        raise DimensionMismatchError(n, s.size, "evaluation point")
    return s
