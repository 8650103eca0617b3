"""Pydantic request/response models for the HTTP service.

Angles in requests may be numbers (radians) or strings in the CLI grammar
("pi/4", "3pi/4", ...); validators parse and normalize them into [0, 2*pi)
so handlers only ever see floats.
"""

from __future__ import annotations

from typing import Literal, Union

from pydantic import BaseModel, Field, field_validator

from .config import parse_angle
from .experiment import DEFAULT_CHSH_ANGLES, DEFAULT_SEED, DEFAULT_TRIALS

AngleInput = Union[float, int, str]


def _parse_angles(values: list[AngleInput]) -> list[float]:
    return [parse_angle(v) for v in values]


def _parse_context_rows(rows: list) -> list[tuple[float, float]]:
    parsed = []
    for row in rows:
        if len(row) != 2:
            raise ValueError(f"each context needs exactly two angles, got {row!r}")
        parsed.append((parse_angle(row[0]), parse_angle(row[1])))
    return parsed


class SimulateRequest(BaseModel):
    """Configuration of one seeded run; mirrors the CLI `simulate` flags."""

    model: Literal["quantum", "realist", "lhv"] = "quantum"
    angles: list[AngleInput] = Field(
        default_factory=lambda: list(DEFAULT_CHSH_ANGLES),
        min_length=4,
        max_length=4,
        description="CHSH angles (a, a', b, b'); radians or pi fractions",
    )
    contexts: list[list[AngleInput]] = Field(
        default_factory=list, description="extra (theta, phi) contexts to measure"
    )
    trials_per_pair: int = Field(default=DEFAULT_TRIALS, ge=1)
    seed: int = DEFAULT_SEED
    format: Literal["json", "csv"] = "json"
    out: str | None = None
    workers: int = Field(default=1, ge=1, le=256)
    gof_alpha: float = Field(default=0.01, gt=0.0, lt=1.0)
    no_signaling_tolerance: float | None = Field(default=None, gt=0.0)

    @field_validator("angles")
    @classmethod
    def _angles(cls, v: list[AngleInput]) -> list[float]:
        return _parse_angles(v)

    @field_validator("contexts")
    @classmethod
    def _contexts(cls, v: list) -> list[tuple[float, float]]:
        return _parse_context_rows(v)


class ChshRequest(BaseModel):
    model: Literal["quantum", "realist", "lhv"] = "quantum"
    angles: list[AngleInput] = Field(
        default_factory=lambda: list(DEFAULT_CHSH_ANGLES), min_length=4, max_length=4
    )

    @field_validator("angles")
    @classmethod
    def _angles(cls, v: list[AngleInput]) -> list[float]:
        return _parse_angles(v)


class ChshResponse(BaseModel):
    model: str
    angles: list[float]
    pair_correlations: list[float] = Field(
        description="E at (a,b), (a,b'), (a',b), (a',b')"
    )
    s_value: float


class Table1Request(BaseModel):
    contexts: list[list[AngleInput]] = Field(min_length=1)
    seed: int = DEFAULT_SEED

    @field_validator("contexts")
    @classmethod
    def _contexts(cls, v: list) -> list[tuple[float, float]]:
        return _parse_context_rows(v)


class Table1Response(BaseModel):
    table: str
    csv: str


class VerifyRequest(BaseModel):
    quick: bool = False
    checks: list[str] | None = None


class CheckResultModel(BaseModel):
    name: str
    passed: bool
    detail: str


class VerifyResponse(BaseModel):
    passed: bool
    checks: list[CheckResultModel]


class ServiceInfo(BaseModel):
    name: str
    version: str
    endpoints: list[str]
