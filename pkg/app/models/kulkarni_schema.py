from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.core.config import SCHEMA_VERSION
from app.models.kulkarni import ExactCoefficients, KulkarniRep
from app.models.polynomial_schema import parse_rational


class ExactCoefficientsSchema(BaseModel):
    T: List[List[str]]
    K: List[List[str]]

    @field_validator("T", "K", mode="before")
    @classmethod
    def exact_entries(cls, rows):
        return [[str(parse_rational(x)) for x in row] for row in rows]

    def to_exact(self) -> ExactCoefficients:
        return ExactCoefficients.from_rows([[parse_rational(x) for x in row] for row in self.T],
                                           [[parse_rational(x) for x in row] for row in self.K])


class KulkarniRepSchema(BaseModel):
    """
    (alpha, T, K) with optional t and p0. When t and p0 are omitted the
    representation is taken as Markovian: t = -T1 and p0 = 1 - alpha1.
    """

    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    m: Optional[int] = None
    n: Optional[int] = None
    alpha: List[float]
    T: List[List[float]]
    K: List[List[float]]
    t: Optional[List[float]] = None
    p0: Optional[float] = None
    exact: Optional[ExactCoefficientsSchema] = None

    @model_validator(mode="after")
    def declared_dimensions(self) -> "KulkarniRepSchema":
        if self.m is not None and self.m != len(self.alpha):
            raise ValueError(f"m = {self.m} but alpha has {len(self.alpha)} entries")
        if self.n is not None and any(len(row) != self.n for row in self.K):
            raise ValueError(f"n = {self.n} does not match the columns of K")
        return self

    @classmethod
    def from_rep(cls, rep: KulkarniRep) -> "KulkarniRepSchema":
        exact = None
        if rep.exact is not None:
            exact = ExactCoefficientsSchema(T=[[str(x) for x in row] for row in rep.exact.T],
                                            K=[[str(x) for x in row] for row in rep.exact.K])
        return cls(m=rep.m, n=rep.n, alpha=rep.alpha.tolist(), T=rep.T.tolist(), K=rep.K.tolist(),
                   t=rep.t.tolist(), p0=rep.p0, exact=exact)

    def to_rep(self) -> KulkarniRep:
        exact = self.exact.to_exact() if self.exact is not None else None
        if self.t is None and self.p0 is None:
            return KulkarniRep.markovian(self.alpha, self.T, np.array(self.K, dtype=float), exact=exact)
        T = np.array(self.T, dtype=float)
        alpha = np.array(self.alpha, dtype=float)
        t = np.array(self.t, dtype=float) if self.t is not None else -T.sum(axis=1)
        p0 = self.p0 if self.p0 is not None else 1.0 - float(alpha.sum())
        return KulkarniRep(alpha=alpha, T=T, K=np.array(self.K, dtype=float), t=t, p0=p0, exact=exact)
