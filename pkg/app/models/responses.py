from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from app.core.config import SCHEMA_VERSION
from app.models.kulkarni import UnivariateME
from app.models.kulkarni_schema import KulkarniRepSchema
from app.models.polynomial_schema import PolynomialSchema
from app.models.realization import PipelineReport
from app.models.simulation import ProjectionTable, SimulationSummary, TransformRow
from app.models.verdict import CriterionVerdict, Evidence, LinearFactor
from app.models.wishart import DensityNormalization


class VersionedResponse(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")


class ErrorResponse(VersionedResponse):
    success: bool = False
    error: str
    error_code: str
    status_code: int
    details: Optional[Dict[str, Any]] = None


# Realization

class PipelineReportSchema(BaseModel):
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

    @classmethod
    def from_report(cls, report: PipelineReport) -> "PipelineReportSchema":
        return cls(**{name: getattr(report, name) for name in cls.model_fields})


class RealizeResponse(VersionedResponse):
    rep: KulkarniRepSchema
    report: PipelineReportSchema


# Criterion

class LinearFactorSchema(BaseModel):
    coeffs: List[str]
    sqrt_coeffs: List[str]
    radicand: str
    rendered: List[str]
    approx: List[float]

    @classmethod
    def from_factor(cls, factor: LinearFactor, render) -> "LinearFactorSchema":
        return cls(coeffs=[str(c) for c in factor.coeffs], sqrt_coeffs=[str(c) for c in factor.sqrt_coeffs],
                   radicand=str(factor.radicand),
                   rendered=[render(p, q, factor.radicand) for p, q in zip(factor.coeffs, factor.sqrt_coeffs)],
                   approx=list(factor.approx()))


class EvidenceSchema(BaseModel):
    kind: str
    c0: Optional[str] = None
    factors: List[LinearFactorSchema] = []
    rank: Optional[int] = None
    minor: Optional[str] = Field(None, serialization_alias="detM")
    minor_rows: List[int] = []
    pivots: List[str] = []
    discriminants: List[str] = []
    candidates: List[str] = []
    actual: Optional[str] = None
    plane: Optional[List[List[int]]] = None
    trial: Optional[int] = None
    real_roots: Optional[int] = None
    distinct_roots: Optional[int] = None
    trials: Optional[int] = None

    @classmethod
    def from_evidence(cls, evidence: Evidence, render) -> "EvidenceSchema":
        def text(x):
            return None if x is None else str(x)

        return cls(kind=evidence.kind, c0=text(evidence.c0),
                   factors=[LinearFactorSchema.from_factor(f, render) for f in evidence.factors],
                   rank=evidence.rank, minor=text(evidence.minor), minor_rows=list(evidence.minor_rows),
                   pivots=[str(p) for p in evidence.pivots], discriminants=[str(d) for d in evidence.discriminants],
                   candidates=list(evidence.candidates), actual=text(evidence.actual),
                   plane=[list(evidence.plane[0]), list(evidence.plane[1])] if evidence.plane else None,
                   trial=evidence.trial, real_roots=evidence.real_roots, distinct_roots=evidence.distinct_roots,
                   trials=evidence.trials)


class VerdictSchema(BaseModel):
    outcome: str
    route: str
    degree: int
    nu: Optional[int] = None
    minimal_declared: Optional[bool] = None
    excludes_mphstar: bool
    notes: List[str] = []
    evidence: EvidenceSchema

    @classmethod
    def from_verdict(cls, verdict: CriterionVerdict, render) -> "VerdictSchema":
        return cls(outcome=verdict.outcome.value, route=verdict.route, degree=verdict.degree, nu=verdict.nu,
                   minimal_declared=verdict.minimal_declared, excludes_mphstar=verdict.excludes_mphstar,
                   notes=list(verdict.notes), evidence=EvidenceSchema.from_evidence(verdict.evidence, render))


class VerdictResponse(VersionedResponse):
    Q: PolynomialSchema
    source: str
    verdict: VerdictSchema


# Projection and simulation

class TransformRowSchema(BaseModel):
    point: List[float]
    estimate: float
    standard_error: float
    exact: float
    z_score: float

    @classmethod
    def from_row(cls, row: TransformRow) -> "TransformRowSchema":
        return cls(point=list(row.point), estimate=row.estimate, standard_error=row.standard_error,
                   exact=row.exact, z_score=row.z_score)


class ProjectionTableSchema(BaseModel):
    a: List[float]
    samples: int
    seed: int
    max_z: float
    rows: List[TransformRowSchema]

    @classmethod
    def from_table(cls, table: ProjectionTable) -> "ProjectionTableSchema":
        return cls(a=list(table.a), samples=table.samples, seed=table.seed, max_z=table.max_z,
                   rows=[TransformRowSchema.from_row(r) for r in table.rows])


class UnivariateSchema(BaseModel):
    alpha: List[float]
    T: List[List[float]]
    t: List[float]
    rates: List[float]
    p0: float

    @classmethod
    def from_law(cls, law: UnivariateME) -> "UnivariateSchema":
        return cls(alpha=law.alpha.tolist(), T=law.T.tolist(), t=law.t.tolist(), rates=law.rates.tolist(),
                   p0=law.p0)


class LaplaceValue(BaseModel):
    u: float
    value: float


class ProjectResponse(VersionedResponse):
    a: List[float]
    law: UnivariateSchema
    mean: float
    laplace: List[LaplaceValue]
    monte_carlo: Optional[ProjectionTableSchema] = None


class SimulateResponse(VersionedResponse):
    samples: int
    seed: int
    means: List[float]
    covariance: List[List[float]]
    transform_table: List[TransformRowSchema]

    @classmethod
    def from_summary(cls, summary: SimulationSummary) -> "SimulateResponse":
        return cls(samples=summary.samples, seed=summary.seed, means=summary.means.tolist(),
                   covariance=summary.covariance.tolist(),
                   transform_table=[TransformRowSchema.from_row(r) for r in summary.transform_table])


# Wishart demonstration

class ProjectionCheck(BaseModel):
    a: List[float]
    eigenvalues: List[float]
    u: float
    product_form: float
    closed_form: float


class NormalizationSchema(BaseModel):
    integral: float
    expected: float
    error: float
    x1_max: float
    nodes: List[int]

    @classmethod
    def from_result(cls, result: DensityNormalization) -> "NormalizationSchema":
        return cls(integral=result.integral, expected=result.expected, error=result.error,
                   x1_max=result.x1_max, nodes=list(result.nodes))


class WishartDemoResponse(VersionedResponse):
    seed: int
    samples: int
    Q: PolynomialSchema
    Q_text: str
    verdict: VerdictSchema
    coefficient_matching: VerdictSchema
    routes_agree: bool
    projections: List[ProjectionCheck]
    monte_carlo: Optional[List[TransformRowSchema]] = None
    normalization: NormalizationSchema
