import logging
from typing import Sequence, Tuple

import numpy as np

from app.core.config import DEFAULT_SEED, VERIFY_POINTS
from app.core.exceptions import (ClosingColumnError, DimensionMismatchError, InvalidTransformError,
                                 MatrixAnalyticError, NotInvertibleAtOriginError, SingularEvaluationError,
                                 ZeroRealizationError)
from app.models.kulkarni import KulkarniRep
from app.models.polynomial import Polynomial, RationalTransform
from app.models.realization import DiagLift, FMRealization, LinearResolvent, PipelineReport, StabilizedSystem
from app.services.kulkarni_service import transform_eval
from app.services.ratfun_service import rt_eval
from app.utils.verification import verification_points, verification_radius

logger = logging.getLogger(__name__)

# Relative agreement required between the assembled representation and the transform
AGREEMENT_TOL = 1e-8
CLOSING_TOL = 1e-12


# Closure algebra

def fm_const(v: float, n: int) -> FMRealization:
    return FMRealization(n=n, d=v, c=np.zeros(0), R=np.zeros((n, 0, 0)), binp=np.zeros((n, 0)))


def fm_var(j: int, n: int) -> FMRealization:
    """Realization of the coordinate s_j (1-based)."""
    if not 1 <= j <= n:
        raise IndexError(f"Variable index {j} out of range 1..{n}")
    binp = np.zeros((n, 1))
    binp[j - 1, 0] = 1.0
    return FMRealization(n=n, d=0.0, c=np.ones(1), R=np.zeros((n, 1, 1)), binp=binp)


def fm_add(f: FMRealization, g: FMRealization) -> FMRealization:
    _check_same_n(f, g)
    rf, rg = f.rho, g.rho
    R = np.zeros((f.n, rf + rg, rf + rg))
    R[:, :rf, :rf] = f.R
    R[:, rf:, rf:] = g.R
    return FMRealization(n=f.n, d=f.d + g.d, c=np.concatenate([f.c, g.c]), R=R,
                         binp=np.hstack([f.binp, g.binp]))


def fm_scale(f: FMRealization, v: float) -> FMRealization:
    return FMRealization(n=f.n, d=v * f.d, c=v * f.c, R=f.R, binp=f.binp)


def fm_mul(f: FMRealization, g: FMRealization) -> FMRealization:
    """
    Product realization on the stacked state (x_f * g(s), x_g).

    R'_j = [[R_fj, b_fj c_g], [0, R_gj]], b'_j = (d_g b_fj, b_gj),
    c' = (c_f, d_f c_g), d' = d_f d_g.
    """
    _check_same_n(f, g)
    rf, rg = f.rho, g.rho
    R = np.zeros((f.n, rf + rg, rf + rg))
    R[:, :rf, :rf] = f.R
    R[:, rf:, rf:] = g.R
    R[:, :rf, rf:] = f.binp[:, :, None] * g.c[None, None, :]
    binp = np.hstack([g.d * f.binp, g.binp])
    c = np.concatenate([f.c, f.d * g.c])
    return FMRealization(n=f.n, d=f.d * g.d, c=c, R=R, binp=binp)


def fm_inv(f: FMRealization) -> FMRealization:
    """Realization of 1/f; the state dimension is unchanged."""
    if f.d == 0:
        raise NotInvertibleAtOriginError()
    R = f.R - f.binp[:, :, None] * f.c[None, None, :] / f.d
    return FMRealization(n=f.n, d=1.0 / f.d, c=-f.c / f.d, R=R, binp=f.binp / f.d)


def fm_eval(f: FMRealization, s: Sequence[float]) -> float:
    s = _point(s, f.n)
    if f.rho == 0:
        return f.d
    M = np.eye(f.rho) - np.tensordot(s, f.R, axes=1)
    u = s @ f.binp
    try:
        return f.d + float(f.c @ np.linalg.solve(M, u))
    except np.linalg.LinAlgError:
        raise SingularEvaluationError(f"Realization is singular at s = {s.tolist()}")


def fm_from_polynomial(p: Polynomial) -> FMRealization:
    """Termwise realization: each monomial is a product of coordinate realizations."""
    result = fm_const(0.0, p.n)
    for mono, coeff in p.items():
        term = fm_const(float(coeff), p.n)
        for j, e in enumerate(mono, start=1):
            for _ in range(e):
                term = fm_mul(term, fm_var(j, p.n))
        result = fm_add(result, term)
    return result


def fm_from_rational(num: Polynomial, den: Polynomial) -> FMRealization:
    if num.n != den.n:
        raise DimensionMismatchError(den.n, num.n, "numerator")
    if den.constant_term == 0:
        raise InvalidTransformError("denominator vanishes at the origin")
    if num.is_zero():
        return fm_const(0.0, den.n)
    return fm_mul(fm_from_polynomial(num), fm_inv(fm_from_polynomial(den)))


# Pipeline stages

def to_linear_resolvent(f: FMRealization) -> LinearResolvent:
    """
    One-state augmentation: z = (1, x) gives A_j = [[0, 0], [b_j, R_j]],
    b = (1, 0) and eta = (d, c).
    """
    N = f.rho + 1
    A = np.zeros((f.n, N, N))
    A[:, 1:, 0] = f.binp
    A[:, 1:, 1:] = f.R
    b = np.zeros(N)
    b[0] = 1.0
    return LinearResolvent(n=f.n, eta=np.concatenate([[f.d], f.c]), A=A, b=b)


def closing_similarity(b: np.ndarray) -> np.ndarray:
    """H = I + c e_k^T with k = argmax |b_k| and c_i = (1 - b_i)/b_k, so that H b = 1."""
    k = int(np.argmax(np.abs(b)))
    if abs(b[k]) < CLOSING_TOL:
        raise ZeroRealizationError()
    H = np.eye(b.size)
    H[:, k] += (1.0 - b) / b[k]
    return H


def normalize_closing_column(r: LinearResolvent) -> LinearResolvent:
    H = closing_similarity(r.b)
    k = int(np.argmax(np.abs(r.b)))
    c = H[:, k] - np.eye(r.N)[:, k]
    # (I + c e_k^T)^{-1} = I - b_k c e_k^T since 1 + c_k = 1/b_k
    H_inv = np.eye(r.N)
    H_inv[:, k] -= r.b[k] * c
    A = np.stack([H @ Aj @ H_inv for Aj in r.A])
    return LinearResolvent(n=r.n, eta=r.eta @ H_inv, A=A, b=np.ones(r.N))


def diag_lift(r: LinearResolvent) -> DiagLift:
    if not np.allclose(r.b, 1.0, rtol=0.0, atol=CLOSING_TOL):
        raise ClosingColumnError()
    E = np.tile(np.eye(r.N), (r.n, 1))
    U = E @ np.hstack(list(r.A))
    alpha0 = np.concatenate([r.eta, np.zeros((r.n - 1) * r.N)])
    return DiagLift(n=r.n, N=r.N, alpha0=alpha0, U=U, E=E)


def stabilize(dl: DiagLift) -> StabilizedSystem:
    """
    T = B^{-1} = [[-U - 2I, I], [-(U + I)^2, U]] for B = [[U, -I], [(U + I)^2, -U - 2I]].
    (T + I)^2 = 0, so every eigenvalue of T is -1.
    """
    q = dl.q
    I = np.eye(q)
    V = dl.U + I
    T = np.block([[-dl.U - 2 * I, I], [-(V @ V), dl.U]])
    alpha_hat = np.concatenate([dl.alpha0, np.zeros(q)])
    K = np.vstack([np.kron(np.eye(dl.n), np.ones((dl.N, 1))), np.zeros((q, dl.n))])
    return StabilizedSystem(T=T, alpha_hat=alpha_hat, K=K)


def resolvent_eval(r: LinearResolvent, s: Sequence[float]) -> float:
    s = _point(s, r.n)
    M = np.eye(r.N) - np.tensordot(s, r.A, axes=1)
    return float(r.eta @ _solve(M, r.b, s))


def lift_eval(dl: DiagLift, s: Sequence[float]) -> float:
    s = _point(s, dl.n)
    M = np.eye(dl.q) - dl.U @ dl.S(s)
    return float(dl.alpha0 @ _solve(M, np.ones(dl.q), s))


def stabilized_eval(st: StabilizedSystem, s: Sequence[float]) -> float:
    s = np.asarray(s, dtype=float)
    M = -st.T + np.diag(st.K @ s)
    return float(st.alpha_hat @ _solve(M, -st.T.sum(axis=1), s))


def degenerate_rep(n: int) -> KulkarniRep:
    """Point mass at the origin: alpha = 0 with the fixed stable T = (-1)."""
    return KulkarniRep(alpha=np.zeros(1), T=-np.ones((1, 1)), K=np.zeros((1, n)), t=np.ones(1), p0=1.0)


def assemble_kulkarni(transform: RationalTransform, seed: int = DEFAULT_SEED,
                      points: int = VERIFY_POINTS) -> KulkarniRep:
    rep, _ = assemble_kulkarni_with_report(transform, seed=seed, points=points)
    return rep


def assemble_kulkarni_with_report(transform: RationalTransform, seed: int = DEFAULT_SEED,
                                  points: int = VERIFY_POINTS) -> Tuple[KulkarniRep, PipelineReport]:
    """
    Rational transform to Kulkarni representation:
    FM realization, resolvent lift, closing column, block lift, stabilization.

    Returns (rep, PipelineReport). The representation has t = -T1 by construction,
    K with entries in {0, 1} and final state count 2nN.
    """
    n = transform.n
    if transform.num.is_zero():
        rep = degenerate_rep(n)
        logger.info("Degenerate law at the origin", extra={"operation": "assemble_kulkarni", "n": n})
        return rep, PipelineReport(n=n, rho=0, N=0, q=0, ell=1, degenerate=True, h_condition=1.0,
                                   verification_points=0, max_relative_error=0.0, seed=seed)

    fm = fm_from_rational(transform.num, transform.den)
    lifted = to_linear_resolvent(fm)
    h_condition = float(np.linalg.cond(closing_similarity(lifted.b)))
    normalized = normalize_closing_column(lifted)
    dl = diag_lift(normalized)
    st = stabilize(dl)

    ell = st.size
    if ell != 2 * n * lifted.N:
        raise MatrixAnalyticError(500, f"state count {ell} differs from 2nN = {2 * n * lifted.N}")

    rep = KulkarniRep(alpha=st.alpha_hat, T=st.T, K=st.K, t=-st.T.sum(axis=1), p0=float(transform.p0))
    logger.info(
        f"Assembled representation with {ell} states",
        extra={"operation": "assemble_kulkarni", "rho": fm.rho, "N": lifted.N, "q": dl.q, "ell": ell}
    )
    if h_condition > 1e8:
        logger.warning("Ill-conditioned closing-column similarity",
                       extra={"operation": "normalize_closing_column", "condition": h_condition})

    max_err = verify_against_transform(rep, transform, lifted, seed=seed, points=points)
    report = PipelineReport(n=n, rho=fm.rho, N=lifted.N, q=dl.q, ell=ell, degenerate=False,
                            h_condition=h_condition, verification_points=points,
                            max_relative_error=max_err, seed=seed)
    return rep, report


def verify_against_transform(rep: KulkarniRep, transform: RationalTransform, resolvent: LinearResolvent,
                             seed: int = DEFAULT_SEED, points: int = VERIFY_POINTS) -> float:
    """Max relative gap between rep and transform over seeded points near the origin."""
    radius = verification_radius(resolvent.A)
    n = transform.n

    def condition(s):
        return np.linalg.cond(np.eye(resolvent.N) - np.tensordot(s, resolvent.A, axes=1))

    max_err = 0.0
    for s in verification_points(n, points, seed, radius, condition):
        expected = float(rt_eval(transform, [float(x) for x in s]))
        got = transform_eval(rep, s)
        max_err = max(max_err, abs(got - expected) / max(abs(expected), 1e-300))
    if max_err > AGREEMENT_TOL:
        logger.warning("Representation disagrees with transform",
                       extra={"operation": "assemble_kulkarni", "max_relative_error": max_err})
    return max_err


def _check_same_n(f, g) -> None:
    if f.n != g.n:
        raise DimensionMismatchError(f.n, g.n)


def _point(s: Sequence[float], n: int) -> np.ndarray:
    s = np.asarray(s, dtype=float).reshape(-1)
    if s.size != n:
        raise DimensionMismatchError(n, s.size, "evaluation point")
    return s


def _solve(M: np.ndarray, rhs: np.ndarray, s) -> np.ndarray:
    try:
        return np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError:
        raise SingularEvaluationError(f"Resolvent is singular at s = {np.asarray(s).tolist()}")
