from typing import Dict, List, Literal, Optional, Sequence

from pydantic import BaseModel, Field, field_validator

from app.core.config import DEFAULT_SAMPLES, DEFAULT_SEED, RESTRICTION_TRIALS, VERIFY_POINTS

Command = Literal["realize", "check-mphstar", "project", "simulate", "wishart-demo"]


def parse_tolerances(pairs: Optional[Sequence[str]]) -> Dict[str, float]:
    """KEY=VALUE strings to a tolerance mapping."""
    out: Dict[str, float] = {}
    for pair in pairs or ():
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise ValueError(f"tolerance {pair!r} is not of the form KEY=VALUE")
        out[key.strip()] = float(value)
    return out


def parse_floats(text: Optional[str]) -> Optional[List[float]]:
    if text is None:
        return None
    return [float(x) for x in text.split(",") if x.strip()]


class RunConfig(BaseModel):
    command: Command
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    seed: int = Field(DEFAULT_SEED, ge=0, lt=2 ** 64)
    samples: int = Field(DEFAULT_SAMPLES, ge=0)
    tolerances: Dict[str, float] = {}
    trials: int = Field(RESTRICTION_TRIALS, ge=1)
    points: int = Field(VERIFY_POINTS, ge=1)
    minimal: bool = False
    direction: Optional[List[float]] = None
    u_grid: List[float] = [0.0, 0.5, 1.0, 2.0]

    @field_validator("tolerances")
    @classmethod
    def positive_tolerances(cls, tolerances: Dict[str, float]) -> Dict[str, float]:
        for key, value in tolerances.items():
            if value <= 0:
                raise ValueError(f"tolerance {key} must be positive")
        return tolerances
