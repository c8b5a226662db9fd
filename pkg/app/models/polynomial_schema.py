from fractions import Fraction
from typing import List

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.core.config import SCHEMA_VERSION
from app.models.polynomial import Polynomial


def parse_rational(value) -> Fraction:
    """Exact rational from "a/b", a decimal string or an integer."""
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"{value!r} is not an exact rational; write it as a string like \"3/4\"")
    try:
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError):
        raise ValueError(f"{value!r} is not a rational number")


class TermSchema(BaseModel):
    e: List[int]
    c: str

    @field_validator("e")
    @classmethod
    def exponents_non_negative(cls, e: List[int]) -> List[int]:
        if any(x < 0 for x in e):
            raise ValueError("exponents must be non-negative")
        return e

    @field_validator("c", mode="before")
    @classmethod
    def exact_coefficient(cls, c) -> str:
        return str(parse_rational(c))


class PolynomialSchema(BaseModel):
    """Polynomial in n variables as a list of (exponent vector, exact coefficient) terms."""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    n: int = Field(ge=0)
    terms: List[TermSchema] = []

    @model_validator(mode="after")
    def term_lengths(self) -> "PolynomialSchema":
        for term in self.terms:
            if len(term.e) != self.n:
                raise ValueError(f"term {term.e} has {len(term.e)} exponents, expected {self.n}")
        return self

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "PolynomialSchema":
        return cls(n=p.n, terms=[TermSchema(e=list(mono), c=str(c)) for mono, c in p.items()])

    def to_polynomial(self) -> Polynomial:
        terms = {}
        for term in self.terms:
            key = tuple(term.e)
            terms[key] = terms.get(key, Fraction(0)) + Fraction(term.c)
        return Polynomial(self.n, terms)


def to_json(p: Polynomial) -> str:
    """Canonical compact JSON: terms in descending graded lexicographic order."""
    return PolynomialSchema.from_polynomial(p).model_dump_json(by_alias=True)


def from_json(text: str) -> Polynomial:
    return PolynomialSchema.model_validate_json(text).to_polynomial()
