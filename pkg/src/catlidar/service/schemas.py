"""Request and response models for the HTTP layer.

Responses carry plain column arrays so clients can serialize them without
knowing the physics.  Diverged sensitivity points are encoded as nulls;
JSON has no inf.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator


class StateParams(BaseModel):
    state: str = "cs"
    nbar: Optional[float] = Field(default=None, gt=0)
    alpha: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _exactly_one_intensity(self):
        if (self.nbar is None) == (self.alpha is None):
            raise ValueError("exactly one of nbar and alpha must be given")
        return self


class CurveRequest(StateParams):
    scheme: str = "z"
    r2: float = Field(default=0.0, ge=0.0, le=1.0)
    phi_points: int = Field(default=2048, ge=2, le=1_000_000)


class CurveResponse(BaseModel):
    phi: list[float]
    value: list[float]
    state: str
    scheme: str
    nbar: float
    alpha: float
    r2: float


class PeakMetricsRequest(CurveRequest):
    peak: Literal["global", "pi"] = "global"
    min_prominence: float = Field(default=0.10, ge=0.0, le=1.0)


class PeakMetricsResponse(BaseModel):
    peak_positions: list[float]
    peak_heights: list[float]
    fwhm: Optional[float]
    fold_count: int
    state: str
    scheme: str
    nbar: float
    r2: float


class LossSweepRequest(StateParams):
    scheme: str = "z4n-agg:include-zero"
    r2: str = "grid:0:1:0.02"
    variant: Literal["auto", "low", "high"] = "auto"
    nbar_threshold: float = Field(default=50.0, gt=0)
    phi_points: int = Field(default=2048, ge=2, le=1_000_000)


class LossSweepResponse(BaseModel):
    r2: list[float]
    difference: list[float]
    variant: Literal["low", "high"]
    at_pi: Optional[list[float]] = None
    minimum: Optional[list[float]] = None
    state_at_pi: Optional[list[float]] = None
    cs_at_pi: Optional[list[float]] = None
    state: str
    scheme: str
    nbar: float


class SensitivityRequest(StateParams):
    scheme: str = "z"
    r2: float = Field(default=0.0, ge=0.0, le=1.0)
    phi_points: int = Field(default=2048, ge=2, le=1_000_000)
    threshold: float = Field(default=1.05, gt=0)


class SensitivityResponse(BaseModel):
    phi: list[float]
    ratio: list[Optional[float]]
    working_points: list[tuple[float, float]]
    threshold: float
    min_ratio: Optional[float]
    state: str
    scheme: str
    nbar: float
    r2: float


class OracleCheckRequest(BaseModel):
    nbar: float = Field(default=3.0, gt=0)
    states: list[str] = ["cs", "ecss", "sfcs"]
    phi_count: int = Field(default=13, ge=2, le=256)
    r2_values: list[float] = [0.0, 0.1, 0.3, 0.5, 0.9]
    lmax: int = Field(default=40, ge=0, le=200)


class ErrataEntry(BaseModel):
    equation: str
    state: str
    printed: float
    derived: float
    relative_deviation: float


class OracleGridEntry(BaseModel):
    state: str
    phi: float
    r2: float
    max_abs_deviation: float
    total_with_tail: float


class OracleCheckResponse(BaseModel):
    passed: bool
    max_deviation: float
    worst_total_error: float
    selected_reading: Optional[str]
    minima: dict[str, dict[str, float]]
    entries: list[OracleGridEntry]
    errata: list[ErrataEntry]
    report_text: str


class HealthResponse(BaseModel):
    status: Literal["ok"]
    version: str
