import itertools
import logging
import math
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np
import sympy
from scipy.sparse.csgraph import breadth_first_order
from sympy.polys.matrices import DomainMatrix

from app.core.config import DEFAULT_SEED
from app.core.exceptions import (DimensionMismatchError, InvalidDirectionError, InvalidRepresentationError,
                                 NonRationalInputError, SingularEvaluationError, SubsetGuardError)
from app.models.kulkarni import (Check, ExactCoefficients, ExactMatrix, HurwitzReport, KulkarniRep,
                                 UnivariateME, ValidationReport)
from app.models.polynomial import Polynomial
from app.services.ratfun_service import from_sympy, sympy_symbols
from app.utils.rng import substream

logger = logging.getLogger(__name__)

# Validation constants
EQUALITY_TOL = 1e-10
HURWITZ_TOL = 1e-10
SUBSET_GUARD = 20
SAMPLED_MINORS = 32


def transform_eval(rep: KulkarniRep, s: Sequence[float]) -> float:
    """p0 + alpha (-T + diag(K s))^{-1} t."""
    s = np.asarray(s, dtype=float).reshape(-1)
    if s.size != rep.n:
        raise DimensionMismatchError(rep.n, s.size, "transform argument")
    matrix = -rep.T + np.diag(rep.K @ s)
    try:
        return rep.p0 + float(rep.alpha @ np.linalg.solve(matrix, rep.t))
    except np.linalg.LinAlgError:
        raise SingularEvaluationError(f"Resolvent -T + diag(Ks) is singular at s = {s.tolist()}")


def check_direction(a: Sequence[float], n: int) -> np.ndarray:
    a = np.asarray(a, dtype=float).reshape(-1)
    if a.size != n:
        raise DimensionMismatchError(n, a.size, "projection direction")
    if np.any(a < 0) or not np.any(a > 0):
        raise InvalidDirectionError()
    return a


def project(rep: KulkarniRep, a: Sequence[float]) -> UnivariateME:
    """
    Law of <a, X> as a univariate object with rates K a.

    Zero-rate states are kept, so the transform at u equals transform_eval(rep, u a)
    for every u.
    """
    a = check_direction(a, rep.n)
    return UnivariateME(alpha=rep.alpha, T=rep.T, t=rep.t, p0=rep.p0, rates=rep.K @ a)


def hurwitz_check(T: np.ndarray) -> HurwitzReport:
    T = np.asarray(T, dtype=float)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise InvalidRepresentationError(f"T must be square, got shape {T.shape}")
    eigenvalues = np.linalg.eigvals(T) if T.size else np.zeros(0, dtype=complex)
    max_real = float(eigenvalues.real.max()) if eigenvalues.size else -math.inf
    return HurwitzReport(stable=max_real < -HURWITZ_TOL, max_real_part=max_real,
                         eigenvalues=tuple(complex(v) for v in eigenvalues))


def exact_coefficients(rep: KulkarniRep) -> ExactCoefficients:
    """Exact rational rendering of T and K; floats convert without rounding."""
    if rep.exact is not None:
        return rep.exact
    for value in itertools.chain(rep.T.ravel(), rep.K.ravel()):
        if not math.isfinite(value):
            raise NonRationalInputError(value)
    return ExactCoefficients.from_rows(rep.T.tolist(), rep.K.tolist())


def principal_minor(A: ExactMatrix, subset: Sequence[int]) -> Fraction:
    """Determinant of the principal submatrix on subset (1-based); the empty minor is 1."""
    m = len(A)
    rows = sorted(set(subset))
    for i in rows:
        if not 1 <= i <= m:
            raise InvalidRepresentationError(f"subset index {i} out of range 1..{m}")
    if not rows:
        return Fraction(1)
    return _det([[A[i - 1][j - 1] for j in rows] for i in rows])


def symbolic_denominator(rep: KulkarniRep, coeffs: Optional[ExactCoefficients] = None) -> Polynomial:
    """
    F(s) = det(-T + diag(K s)) through the subset expansion

        F(s) = sum_J det((-T)_{J^c, J^c}) prod_{i in J} kappa_i(s),

    with kappa_i(s) = sum_j K_ij s_j. Subsets that contain a zero reward row vanish
    and are skipped.
    """
    m = rep.m
    if m > SUBSET_GUARD:
        raise SubsetGuardError(m, SUBSET_GUARD)
    coeffs = coeffs or exact_coefficients(rep)
    neg_T = _negated(coeffs.T)
    kappa = [Polynomial.linear_form(row) for row in coeffs.K]
    rewarded = [i for i in range(m) if not kappa[i].is_zero()]

    total = Polynomial.zero(rep.n)
    for size in range(len(rewarded) + 1):
        for J in itertools.combinations(rewarded, size):
            complement = [i + 1 for i in range(m) if i not in J]
            minor = principal_minor(neg_T, complement)
            if minor == 0:
                continue
            term = Polynomial.constant(rep.n, minor)
            for i in J:
                term = term * kappa[i]
            total = total + term
    logger.debug("Expanded symbolic denominator",
                 extra={"operation": "symbolic_denominator", "m": m, "rewarded": len(rewarded)})
    return total


def denominator_by_elimination(rep: KulkarniRep, coeffs: Optional[ExactCoefficients] = None) -> Polynomial:
    """det(-T + diag(K s)) by fraction-free elimination over the polynomial ring."""
    coeffs = coeffs or exact_coefficients(rep)
    gens = sympy_symbols(rep.n)
    kappa = [sum(_rational(c) * g for c, g in zip(row, gens)) for row in coeffs.K]
    matrix = sympy.Matrix(rep.m, rep.m, lambda i, j: -_rational(coeffs.T[i][j]) + (kappa[i] if i == j else 0))
    return from_sympy(matrix.det(method="bareiss"), rep.n)


def validate_mphstar(rep: KulkarniRep, seed: int = DEFAULT_SEED) -> ValidationReport:
    """Pass/fail per structural condition of a Markovian reward representation."""
    T, K, alpha = rep.T, rep.K, rep.alpha
    off_diagonal = T[~np.eye(rep.m, dtype=bool)]
    row_sums = T.sum(axis=1)
    checks = [
        Check("T_ii < 0", bool(np.all(np.diag(T) < 0)), f"max diagonal {np.diag(T).max():.6g}"),
        Check("T_ij >= 0 (i != j)", bool(np.all(off_diagonal >= 0)),
              f"min off-diagonal {off_diagonal.min():.6g}" if off_diagonal.size else "no off-diagonal entries"),
        Check("T1 <= 0", bool(np.all(row_sums <= EQUALITY_TOL)), f"max row sum {row_sums.max():.6g}"),
        _transience_check(rep, seed),
        Check("alpha >= 0", bool(np.all(alpha >= 0)), f"min entry {alpha.min():.6g}"),
        Check("alpha1 <= 1", bool(alpha.sum() <= 1 + EQUALITY_TOL), f"alpha1 = {alpha.sum():.12g}"),
        Check("K >= 0", bool(np.all(K >= 0)), f"min entry {K.min():.6g}"),
        Check("t = -T1", bool(np.allclose(rep.t, -row_sums, rtol=0, atol=EQUALITY_TOL)),
              f"max gap {np.abs(rep.t + row_sums).max():.3g}"),
        Check("p0 = 1 - alpha1", bool(abs(rep.p0 - (1 - alpha.sum())) <= EQUALITY_TOL),
              f"p0 = {rep.p0:.12g}"),
    ]
    report = ValidationReport(checks=tuple(checks))
    if not report.passed:
        logger.info("Representation fails MPH* validation",
                    extra={"operation": "validate_mphstar", "failures": [c.name for c in report.failures]})
    return report


def reward_cone(rep: KulkarniRep) -> np.ndarray:
    """
    Distinct non-zero reward rows of the states reachable from the initial law.
    The support of the law lies in the union of cones spanned along visited paths.
    """
    graph = (rep.T != 0) & ~np.eye(rep.m, dtype=bool)
    reachable = set()
    for start in np.flatnonzero(rep.alpha > 0):
        order = breadth_first_order(graph.astype(float), int(start), directed=True, return_predecessors=False)
        reachable.update(int(i) for i in order)
    rows = [rep.K[i] for i in sorted(reachable) if np.any(rep.K[i] != 0)]
    if not rows:
        return np.zeros((0, rep.n))
    return np.unique(np.array(rows), axis=0)


def _transience_check(rep: KulkarniRep, seed: int) -> Check:
    spectrum = hurwitz_check(rep.T)
    detail = f"max Re(eig T) = {spectrum.max_real_part:.6g}"
    passed = spectrum.stable
    if passed and rep.exact is not None:
        neg_T = _negated(rep.exact.T)
        for subset in _sampled_subsets(rep.m, seed):
            if principal_minor(neg_T, subset) <= 0:
                passed = False
                detail += f"; principal minor on {subset} is not positive"
                break
    return Check("transient", bool(passed), detail)


def _sampled_subsets(m: int, seed: int) -> List[List[int]]:
    """Singletons, the full index set and seeded random subsets."""
    subsets = [[i] for i in range(1, m + 1)] + [list(range(1, m + 1))]
    rng = substream(seed, m)
    for _ in range(SAMPLED_MINORS):
        mask = rng.random(m) < 0.5
        if mask.any():
            subsets.append([i + 1 for i in np.flatnonzero(mask)])
    return subsets


def _rational(x: Fraction) -> sympy.Rational:
    return sympy.Rational(x.numerator, x.denominator)


def _negated(A: ExactMatrix) -> ExactMatrix:
    return tuple(tuple(-x for x in row) for row in A)


def _det(rows: List[List[Fraction]]) -> Fraction:
    k = len(rows)
    QQ = sympy.QQ
    matrix = DomainMatrix([[QQ(x.numerator, x.denominator) for x in row] for row in rows], (k, k), QQ)
    value = matrix.det()
    return Fraction(int(value.numerator), int(value.denominator))
