"""HTTP facade over the library.

Every endpoint is a pure function of its request body; no state is kept
between calls, so responses are deterministic and cacheable.  Error
mapping: malformed parameters and guard violations are 422 (client
error); numeric failures inside an otherwise valid run are 500 with a
structured body.
"""

from __future__ import annotations

import math

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..analysis import (
    fwhm,
    loss_robustness_high,
    loss_robustness_low,
    observable_curve,
    peak_metrics,
    sensitivity_curve,
    working_points,
)
from ..errors import (
    AmplitudeSolveError,
    FwhmUndefinedError,
    InsufficientCutoffError,
    OracleRangeError,
    ResidueError,
    SimulatorError,
)
from ..params import TokenError, parse_r2_token, parse_scheme_token, resolve_state
from ..report import run_oracle_check
from .schemas import (
    CurveRequest,
    CurveResponse,
    ErrataEntry,
    HealthResponse,
    LossSweepRequest,
    LossSweepResponse,
    OracleCheckRequest,
    OracleCheckResponse,
    OracleGridEntry,
    PeakMetricsRequest,
    PeakMetricsResponse,
    SensitivityRequest,
    SensitivityResponse,
)

_CONFIG_ERRORS = (TokenError, OracleRangeError)
_NUMERIC_ERRORS = (
    AmplitudeSolveError,
    InsufficientCutoffError,
    FwhmUndefinedError,
    ResidueError,
)


def create_app() -> FastAPI:
    app = FastAPI(title="catlidar", version=__version__)

    @app.exception_handler(SimulatorError)
    async def _simulator_error(request: Request, exc: SimulatorError) -> JSONResponse:
        if isinstance(exc, _CONFIG_ERRORS):
            return JSONResponse(status_code=422, content={"detail": str(exc), "kind": "config"})
        kind = "numeric" if isinstance(exc, _NUMERIC_ERRORS) else "config"
        status = 500 if kind == "numeric" else 422
        return JSONResponse(status_code=status, content={"detail": str(exc), "kind": kind})

    @app.get("/api/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/api/curve", response_model=CurveResponse)
    def curve(req: CurveRequest) -> CurveResponse:
        label, spec, nbar = resolve_state(req.state, req.nbar, req.alpha)
        scheme = parse_scheme_token(req.scheme)
        grid = np.linspace(0.0, 2.0 * math.pi, req.phi_points)
        result = observable_curve(spec, scheme, req.r2, grid)
        return CurveResponse(
            phi=[float(v) for v in result.abscissa],
            value=[float(v) for v in result.ordinate],
            state=label,
            scheme=scheme.label(),
            nbar=nbar,
            alpha=abs(spec.alpha),
            r2=req.r2,
        )

    @app.post("/api/peak-metrics", response_model=PeakMetricsResponse)
    def peaks(req: PeakMetricsRequest) -> PeakMetricsResponse:
        label, spec, nbar = resolve_state(req.state, req.nbar, req.alpha)
        scheme = parse_scheme_token(req.scheme)
        grid = np.linspace(0.0, 2.0 * math.pi, req.phi_points)
        result = observable_curve(spec, scheme, req.r2, grid)
        metrics = peak_metrics(result, req.peak, req.min_prominence)
        width = metrics.fwhm if math.isfinite(metrics.fwhm) else None
        return PeakMetricsResponse(
            peak_positions=list(metrics.peak_positions),
            peak_heights=list(metrics.peak_heights),
            fwhm=width,
            fold_count=metrics.fold_count,
            state=label,
            scheme=scheme.label(),
            nbar=nbar,
            r2=req.r2,
        )

    @app.post("/api/loss-sweep", response_model=LossSweepResponse)
    def loss_sweep(req: LossSweepRequest) -> LossSweepResponse:
        label, spec, nbar = resolve_state(req.state, req.nbar, req.alpha)
        scheme = parse_scheme_token(req.scheme)
        _, r2s = parse_r2_token(req.r2)
        variant = req.variant
        if variant == "auto":
            variant = "high" if nbar >= req.nbar_threshold else "low"
        if variant == "low":
            result = loss_robustness_low(spec, scheme, None, r2s, req.phi_points)
            return LossSweepResponse(
                r2=[float(v) for v in result.abscissa],
                difference=[float(v) for v in result.ordinate],
                variant="low",
                at_pi=[float(v) for v in result.meta["at_pi"]],
                minimum=[float(v) for v in result.meta["minimum"]],
                state=label,
                scheme=scheme.label(),
                nbar=nbar,
            )
        result = loss_robustness_high(spec, scheme, None, r2s)
        return LossSweepResponse(
            r2=[float(v) for v in result.abscissa],
            difference=[float(v) for v in result.ordinate],
            variant="high",
            state_at_pi=[float(v) for v in result.meta["state_at_pi"]],
            cs_at_pi=[float(v) for v in result.meta["cs_at_pi"]],
            state=label,
            scheme=scheme.label(),
            nbar=nbar,
        )

    @app.post("/api/sensitivity", response_model=SensitivityResponse)
    def sensitivity(req: SensitivityRequest) -> SensitivityResponse:
        label, spec, nbar = resolve_state(req.state, req.nbar, req.alpha)
        scheme = parse_scheme_token(req.scheme)
        grid = np.linspace(0.0, 2.0 * math.pi, req.phi_points)
        result = sensitivity_curve(spec, scheme, req.r2, grid)
        ratio = [
            float(v) if math.isfinite(v) else None for v in result.ordinate
        ]
        finite = result.ordinate[np.isfinite(result.ordinate)]
        intervals = working_points(spec, scheme, req.r2, req.threshold, grid)
        return SensitivityResponse(
            phi=[float(v) for v in result.abscissa],
            ratio=ratio,
            working_points=[(float(a), float(b)) for a, b in intervals],
            threshold=req.threshold,
            min_ratio=float(finite.min()) if finite.size else None,
            state=label,
            scheme=scheme.label(),
            nbar=nbar,
            r2=req.r2,
        )

    @app.post("/api/oracle-check", response_model=OracleCheckResponse)
    def oracle_check(req: OracleCheckRequest) -> OracleCheckResponse:
        for token in req.states:
            if token not in ("cs", "ecss", "sfcs"):
                raise TokenError(f"oracle grid supports preset states only, got {token!r}")
        report = run_oracle_check(
            nbar=req.nbar,
            states=tuple(req.states),
            phi_count=req.phi_count,
            r2_values=tuple(req.r2_values),
            lmax=req.lmax,
        )
        return OracleCheckResponse(
            passed=report.passed,
            max_deviation=report.max_deviation,
            worst_total_error=report.worst_total_error,
            selected_reading=report.selected_reading,
            minima=report.minima,
            entries=[
                OracleGridEntry(
                    state=e.state,
                    phi=e.phi,
                    r2=e.r_squared,
                    max_abs_deviation=e.max_abs_deviation,
                    total_with_tail=e.total_with_tail,
                )
                for e in report.entries
            ],
            errata=[
                ErrataEntry(
                    equation=row.equation,
                    state=row.state,
                    printed=row.printed,
                    derived=row.derived,
                    relative_deviation=row.relative_deviation,
                )
                for row in report.errata
            ],
            report_text=report.render_text(),
        )

    return app
