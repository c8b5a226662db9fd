from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.config import DEFAULT_SAMPLES, DEFAULT_SEED, SCHEMA_VERSION
from app.models.kulkarni_schema import KulkarniRepSchema
from app.models.polynomial_schema import PolynomialSchema


class CheckRequest(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    Q: Optional[PolynomialSchema] = None
    rep: Optional[KulkarniRepSchema] = None
    minimal_declared: bool = False

    @model_validator(mode="after")
    def exactly_one_input(self) -> "CheckRequest":
        if (self.Q is None) == (self.rep is None):
            raise ValueError("provide exactly one of Q or rep")
        return self


class ProjectRequest(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    rep: KulkarniRepSchema
    a: List[float]
    u_grid: List[float] = [0.0, 0.5, 1.0, 2.0]
    samples: int = Field(0, ge=0)
    seed: int = Field(DEFAULT_SEED, ge=0)


class SimulateRequest(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    rep: KulkarniRepSchema
    samples: int = DEFAULT_SAMPLES
    seed: int = Field(DEFAULT_SEED, ge=0)
    grid: Optional[List[List[float]]] = None
