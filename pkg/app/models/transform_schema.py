from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.core.config import SCHEMA_VERSION
from app.models.polynomial import RationalTransform
from app.models.polynomial_schema import PolynomialSchema, parse_rational


class TransformSchema(BaseModel):
    """p0 + num/den with exact coefficients."""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    p0: str = "0"
    num: PolynomialSchema
    den: PolynomialSchema
    coprime_declared: bool = False

    @field_validator("p0", mode="before")
    @classmethod
    def exact_atom(cls, p0) -> str:
        return str(parse_rational(p0))

    @model_validator(mode="after")
    def same_dimension(self) -> "TransformSchema":
        if self.num.n != self.den.n:
            raise ValueError(f"numerator has {self.num.n} variables, denominator {self.den.n}")
        return self

    @classmethod
    def from_transform(cls, transform: RationalTransform) -> "TransformSchema":
        return cls(p0=str(transform.p0), num=PolynomialSchema.from_polynomial(transform.num),
                   den=PolynomialSchema.from_polynomial(transform.den),
                   coprime_declared=transform.coprime_declared)

    def to_transform(self) -> RationalTransform:
        return RationalTransform(p0=parse_rational(self.p0), num=self.num.to_polynomial(),
                                 den=self.den.to_polynomial(), coprime_declared=self.coprime_declared)
