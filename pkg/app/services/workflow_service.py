"""
Commands shared by the CLI and the HTTP routes.

Each command takes parsed pydantic documents plus run flags and returns a
response model; the output is a pure function of its arguments.
"""
import functools
import logging
from contextlib import contextmanager
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from pydantic import ValidationError

from app.core.config import DEFAULT_SAMPLES, DEFAULT_SEED, RESTRICTION_TRIALS, VERIFY_POINTS
from app.core.exceptions import InputParseError, MatrixAnalyticError, SingularEvaluationError
from app.models.kulkarni import KulkarniRep
from app.models.kulkarni_schema import KulkarniRepSchema
from app.models.polynomial import Polynomial
from app.models.polynomial_schema import PolynomialSchema
from app.models.responses import (LaplaceValue, NormalizationSchema, PipelineReportSchema, ProjectionCheck,
                                  ProjectionTableSchema, ProjectResponse, RealizeResponse, SimulateResponse,
                                  TransformRowSchema, UnivariateSchema, VerdictResponse, VerdictSchema,
                                  WishartDemoResponse)
from app.models.simulation import TransformRow
from app.models.transform_schema import TransformSchema
from app.models.verdict import QuadraticForm
from app.services import kulkarni_service, realize_service, wishart_service
from app.services.criterion_service import (coefficient_matching_quadratic_3var, extract_qtop, format_surd,
                                            mphstar_certificate)
from app.services.kulkarni_service import check_direction, project, symbolic_denominator
from app.services.mcsim_service import mc_projection_check, summarize
from app.services.ratfun_service import rt_eval
from app.utils import verification

logger = logging.getLogger(__name__)

# --tol KEY=VALUE targets
TOLERANCES = {
    "agreement": (realize_service, "AGREEMENT_TOL"),
    "closing": (realize_service, "CLOSING_TOL"),
    "equality": (kulkarni_service, "EQUALITY_TOL"),
    "hurwitz": (kulkarni_service, "HURWITZ_TOL"),
    "boundary": (wishart_service, "BOUNDARY_TOL"),
    "condition": (verification, "CONDITION_CUTOFF"),
}

DEMO_GRID: Tuple[Tuple[float, float, float], ...] = (
    (0.0, 0.0, 0.0),
    (0.2, 0.0, 0.0), (1.0, 0.0, 0.0),
    (0.0, 0.2, 0.0), (0.0, 1.0, 0.0),
    (0.0, 0.0, 0.2), (0.0, 0.0, 1.0),
    (0.2, 0.1, 0.1),
)
DEMO_DIRECTIONS: Tuple[Tuple[float, float, float], ...] = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 3))
DEMO_U = (0.5, 1.0, 2.0)


def translate_errors(func):
    """Domain errors pass through; LinAlgError becomes a 422, anything else a logged 500."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except MatrixAnalyticError:
            raise
        except np.linalg.LinAlgError as exc:
            raise SingularEvaluationError(f"Linear algebra failure: {exc}")
        except Exception as exc:
            logger.exception("Unexpected failure", extra={"operation": func.__name__})
            raise MatrixAnalyticError(500, f"Internal error in {func.__name__}: {exc}")

    return wrapper


@contextmanager
def tolerance_overrides(tolerances: Optional[Mapping[str, float]]) -> Iterator[None]:
    """Temporarily replace module tolerances named by TOLERANCES keys."""
    saved = []
    try:
        for key, value in (tolerances or {}).items():
            if key not in TOLERANCES:
                raise InputParseError(f"unknown tolerance {key!r}; expected one of {sorted(TOLERANCES)}")
            module, name = TOLERANCES[key]
            saved.append((module, name, getattr(module, name)))
            setattr(module, name, float(value))
        yield
    finally:
        for module, name, value in reversed(saved):
            setattr(module, name, value)


# Input documents

def load_rep(doc: Mapping[str, Any]) -> KulkarniRep:
    """A representation document, or a realize report carrying one under "rep"."""
    if "rep" in doc:
        doc = doc["rep"]
    try:
        return KulkarniRepSchema.model_validate(doc).to_rep()
    except ValidationError as exc:
        raise InputParseError(f"representation: {exc.errors()[0]['msg']}")
    except ValueError as exc:
        raise InputParseError(f"representation: {exc}")


def load_transform(doc: Mapping[str, Any]) -> TransformSchema:
    try:
        return TransformSchema.model_validate(doc)
    except ValidationError as exc:
        raise InputParseError(f"transform: {exc.errors()[0]['msg']}")


def load_check_input(doc: Mapping[str, Any]) -> Tuple[Optional[Polynomial], Optional[KulkarniRep], bool]:
    """
    Polynomial documents (with "terms") give Q directly; a "Q" key may wrap one
    together with "minimal_declared". Anything carrying "T" or "rep" is a representation.
    """
    if "Q" in doc:
        return _polynomial(doc["Q"]), None, bool(doc.get("minimal_declared", False))
    if "terms" in doc:
        return _polynomial(doc), None, bool(doc.get("minimal_declared", False))
    if "rep" in doc or "T" in doc:
        return None, load_rep(doc), False
    raise InputParseError("expected a polynomial (terms), a representation (T) or a realize report (rep)")


def _polynomial(doc: Mapping[str, Any]) -> Polynomial:
    try:
        return PolynomialSchema.model_validate(doc).to_polynomial()
    except ValidationError as exc:
        raise InputParseError(f"polynomial: {exc.errors()[0]['msg']}")


# Commands

@translate_errors
def cmd_realize(transform: TransformSchema, seed: int = DEFAULT_SEED, points: int = VERIFY_POINTS,
                tolerances: Optional[Mapping[str, float]] = None) -> RealizeResponse:
    with tolerance_overrides(tolerances):
        rep, report = realize_service.assemble_kulkarni_with_report(transform.to_transform(), seed=seed,
                                                                    points=points)
    return RealizeResponse(rep=KulkarniRepSchema.from_rep(rep), report=PipelineReportSchema.from_report(report))


@translate_errors
def cmd_check_mphstar(Q: Optional[Polynomial] = None, rep: Optional[KulkarniRep] = None,
                      minimal_declared: bool = False, trials: int = RESTRICTION_TRIALS,
                      seed: int = DEFAULT_SEED) -> VerdictResponse:
    """
    Verdict on Q, or on the symbolic denominator of rep. A representation's
    determinant is never declared minimal: the numerator may cancel part of it.
    """
    if (Q is None) == (rep is None):
        raise InputParseError("provide exactly one of a polynomial or a representation")
    source = "polynomial"
    if rep is not None:
        Q = symbolic_denominator(rep)
        minimal_declared = False
        source = "representation"
    verdict = mphstar_certificate(Q, minimal_declared=minimal_declared, trials=trials, seed=seed)
    schema = VerdictSchema.from_verdict(verdict, format_surd)
    if rep is not None:
        schema.notes.append("Q is det(-T + diag(Ks)) of the given representation; cancellation against "
                            "the numerator was not checked")
    return VerdictResponse(Q=PolynomialSchema.from_polynomial(Q), source=source, verdict=schema)


@translate_errors
def cmd_project(rep: KulkarniRep, a: Sequence[float], u_grid: Sequence[float] = (0.0, 0.5, 1.0, 2.0),
                samples: int = 0, seed: int = DEFAULT_SEED) -> ProjectResponse:
    """Univariate law of <a, X>; with samples > 0 the transform is also checked by path simulation."""
    a = check_direction(a, rep.n)
    law = project(rep, a)
    laplace = [LaplaceValue(u=float(u), value=law.laplace(float(u))) for u in u_grid]
    table = None
    if samples > 0:
        table = ProjectionTableSchema.from_table(mc_projection_check(rep, a, u_grid, samples, seed=seed))
    return ProjectResponse(a=a.tolist(), law=UnivariateSchema.from_law(law), mean=law.mean(), laplace=laplace,
                           monte_carlo=table)


@translate_errors
def cmd_simulate(rep: KulkarniRep, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
                 grid: Optional[Sequence[Sequence[float]]] = None,
                 tolerances: Optional[Mapping[str, float]] = None) -> SimulateResponse:
    with tolerance_overrides(tolerances):
        summary = summarize(rep, samples, seed=seed, grid=grid)
    return SimulateResponse.from_summary(summary)


@translate_errors
def cmd_wishart_demo(seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES) -> WishartDemoResponse:
    """
    The Wishart separation end to end: exact Q, both irreducibility routes,
    product-of-exponentials projections, Monte Carlo transform rows and the
    density normalization. samples = 0 keeps only the exact sections.
    """
    Q = wishart_service.transform_poly()
    verdict = mphstar_certificate(Q, minimal_declared=True, seed=seed)
    matching = coefficient_matching_quadratic_3var(QuadraticForm.from_polynomial(extract_qtop(Q)))

    projections: List[ProjectionCheck] = []
    for a in DEMO_DIRECTIONS:
        for u in DEMO_U:
            law = wishart_service.projection_transform(a, u)
            closed = wishart_service.transform_closed([u * x for x in law.a])
            projections.append(ProjectionCheck(a=list(law.a), eigenvalues=list(law.eigenvalues), u=u,
                                               product_form=law.value, closed_form=closed))

    monte_carlo = None
    if samples > 0:
        transform = wishart_service.transform_rational()
        monte_carlo = []
        for s in DEMO_GRID:
            estimate, se = wishart_service.mc_transform(s, samples, seed=seed)
            row = TransformRow(point=s, estimate=estimate, standard_error=se, exact=float(rt_eval(transform, s)))
            monte_carlo.append(TransformRowSchema.from_row(row))

    logger.info("Wishart demonstration assembled",
                extra={"operation": "wishart_demo", "seed": seed, "samples": samples,
                       "outcome": verdict.outcome.value})
    return WishartDemoResponse(
        seed=seed, samples=samples, Q=PolynomialSchema.from_polynomial(Q), Q_text=str(Q),
        verdict=VerdictSchema.from_verdict(verdict, format_surd),
        coefficient_matching=VerdictSchema.from_verdict(matching, format_surd),
        routes_agree=verdict.outcome == matching.outcome,
        projections=projections, monte_carlo=monte_carlo,
        normalization=NormalizationSchema.from_result(wishart_service.density_normalization()),
    )


def dump(response, **kwargs: Any) -> Dict[str, Any]:
    return response.model_dump(by_alias=True, **kwargs)
