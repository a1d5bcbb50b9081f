"""Validation report: oracle arbitration grid and closed-form errata table.

Two independent jobs live here.  The arbitration grid sweeps the preset
states over phases and losses, compares the analytic photon distribution
against brute-force Fock propagation entry by entry, and decides which
reading of the multiple-of-four observable (single projector, aggregate
with vacuum, aggregate without vacuum) reproduces the known fringe-depth
anchor values.  The errata table evaluates compact closed-form variants
of the normalization, the photon probability and the observable
derivative, whose exponent and prefactor bookkeeping differs from the
overlap-sum ground truth, and quantifies the deviation on a fixed probe
set; it is informational and never gates a run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import special

from .analysis import _refined_min, default_phi_grid
from .detection import DetectionScheme, photon_distribution, scheme_expectation_grid
from .errors import OracleRangeError
from .interferometer import InterferometerConfig, pq
from .oracle import MAX_ORACLE_NBAR, oracle_distribution
from .states import StateSpec, normalization, state_for_nbar

DEVIATION_TOL = 1e-8
ANCHORS = {"sfcs": 0.37, "ecss": 0.25}
ANCHOR_TOL = 0.03

_READINGS = (
    ("z4n:1", DetectionScheme.single(1)),
    ("z4n-agg", DetectionScheme.aggregate(include_zero=False)),
    ("z4n-agg:include-zero", DetectionScheme.aggregate(include_zero=True)),
)


@dataclass(frozen=True)
class GridEntry:
    state: str
    phi: float
    r_squared: float
    max_abs_deviation: float
    total_with_tail: float


@dataclass(frozen=True)
class ErrataRow:
    equation: str
    state: str
    printed: float
    derived: float

    @property
    def relative_deviation(self) -> float:
        scale = max(abs(self.derived), 1e-30)
        return abs(self.printed - self.derived) / scale


@dataclass
class OracleCheckReport:
    nbar: float
    lmax: int
    entries: list[GridEntry] = field(default_factory=list)
    minima: dict[str, dict[str, float]] = field(default_factory=dict)
    selected_reading: Optional[str] = None
    errata: list[ErrataRow] = field(default_factory=list)

    @property
    def max_deviation(self) -> float:
        return max((e.max_abs_deviation for e in self.entries), default=0.0)

    @property
    def worst_total_error(self) -> float:
        return max((abs(e.total_with_tail - 1.0) for e in self.entries), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_deviation <= DEVIATION_TOL

    def render_text(self) -> str:
        lines = [
            "oracle cross-check report",
            f"mean photon number: {self.nbar!r}   photon numbers: 0..{self.lmax}",
            "",
            f"grid entries: {len(self.entries)}",
            f"max |analytic - oracle| over all entries: {self.max_deviation:.3e}"
            f"   (tolerance {DEVIATION_TOL:.0e})",
            f"worst |sum + tail - 1|: {self.worst_total_error:.3e}",
            f"verdict: {'PASS' if self.passed else 'FAIL'}",
            "",
            "worst entries per state:",
        ]
        by_state: dict[str, GridEntry] = {}
        for e in self.entries:
            cur = by_state.get(e.state)
            if cur is None or e.max_abs_deviation > cur.max_abs_deviation:
                by_state[e.state] = e
        for name, e in sorted(by_state.items()):
            lines.append(
                f"  {name:5s} phi={e.phi:.6f} r2={e.r_squared:.2f}"
                f" dev={e.max_abs_deviation:.3e}"
            )
        if self.minima:
            lines += ["", "fringe-depth minima by multiple-of-four reading (r2=0):"]
            for label, per_state in self.minima.items():
                vals = "  ".join(f"{s}={v:.6f}" for s, v in sorted(per_state.items()))
                mark = "  <-- selected" if label == self.selected_reading else ""
                lines.append(f"  {label:22s} {vals}{mark}")
            target = "  ".join(
                f"{s}~{v:.2f}+/-{ANCHOR_TOL}" for s, v in sorted(ANCHORS.items())
            )
            lines.append(f"  anchor targets: {target}")
            if self.selected_reading is None:
                lines.append("  no reading lands inside the anchor tolerances")
        if self.errata:
            lines += [
                "",
                "closed-form errata (informational):",
                f"  {'equation':36s} {'state':5s} {'printed':>24s} {'derived':>24s} {'rel deviation':>14s}",
            ]
            for row in self.errata:
                lines.append(
                    f"  {row.equation:36s} {row.state:5s} {row.printed:24.16e}"
                    f" {row.derived:24.16e} {row.relative_deviation:14.3e}"
                )
        lines.append("")
        return "\n".join(lines)


def printed_norm_mag(spec: StateSpec) -> float:
    """Compact closed-form |N| whose middle term re-uses the single-|alpha|^2 exponent.

    The overlap-sum ground truth carries e^{-2|alpha|^2} on the
    cross-pair weight y_sum; this variant has e^{-|alpha|^2} there, which
    is the difference the errata table quantifies.  Weights are taken as
    magnitudes, as the compact forms assume.
    """
    nc = normalization(spec)
    x = abs(spec.alpha) ** 2
    inv_sq = (
        nc.x_sum
        + 2.0 * math.exp(-x) * abs(nc.y_sum)
        + 2.0 * math.exp(-x) * abs(nc.v_sum) * math.cos(x)
    )
    if inv_sq <= 0.0:
        return math.nan
    return 1.0 / math.sqrt(inv_sq)


def _bracket(spec: StateSpec, q: float, l: int) -> float:
    """X + 2(-1)^l e^{-2q} Y + 2 e^{-q} V cos(q + l pi/2), magnitudes as printed."""
    nc = normalization(spec)
    return (
        nc.x_sum
        + 2.0 * (-1.0) ** l * math.exp(-2.0 * q) * abs(nc.y_sum)
        + 2.0 * math.exp(-q) * abs(nc.v_sum) * math.cos(q + 0.5 * l * math.pi)
    )


def printed_probability(spec: StateSpec, config: InterferometerConfig, l: int) -> float:
    """Compact closed-form P(l) evaluated with the compact normalization."""
    p, q = pq(config, spec.alpha)
    log_pois = special.xlogy(l, p) - p - special.gammaln(l + 1.0)
    return printed_norm_mag(spec) ** 2 * math.exp(log_pois) * _bracket(spec, q, l)


def printed_derivative(spec: StateSpec, config: InterferometerConfig, n: int) -> float:
    """Compact closed-form dP(4n)/dphi.

    Besides the compact normalization, this variant defines the intensity
    slope with sin^2(phi) where the chain rule gives sin(phi); both
    differences are part of what the errata table measures.
    """
    l = 4 * n
    p, q = pq(config, spec.alpha)
    a2 = abs(spec.alpha) ** 2
    t2 = config.t * config.t
    dp_printed = 0.5 * a2 * t2 * math.sin(config.phi) ** 2
    dq_printed = -dp_printed
    nc = normalization(spec)
    log_pois = special.xlogy(l, p) - p - special.gammaln(l + 1.0)
    bracket = _bracket(spec, q, l)
    dbracket_dq = (
        -4.0 * math.exp(-2.0 * q) * abs(nc.y_sum)
        - 2.0 * math.exp(-q) * abs(nc.v_sum)
        * (math.cos(q + 0.5 * l * math.pi) + math.sin(q + 0.5 * l * math.pi))
    )
    ratio = (l / p - 1.0) if p > 0.0 else (math.inf if l > 0 else -1.0)
    return (
        printed_norm_mag(spec) ** 2
        * math.exp(log_pois)
        * (ratio * dp_printed * bracket + dbracket_dq * dq_printed)
    )


def derived_derivative_reference(spec: StateSpec, config: InterferometerConfig, n: int) -> float:
    from .detection import z4n_derivative

    return z4n_derivative(spec, config, DetectionScheme.single(n))


def errata_table(probe_alpha: float = math.sqrt(3.0)) -> list[ErrataRow]:
    """Printed-vs-derived comparison on a fixed probe set.

    Probes: the three preset shapes at alpha = sqrt(3); probability at
    (phi = pi/2, r^2 = 0.3, l = 4); derivative at (phi = 2, r^2 = 0.3,
    n = 1).  For the normalization and probability rows the coherent
    state is a built-in control: it has no cross terms, so both forms
    coincide.  The derivative row deviates for every state because the
    printed slope differs in a state-independent prefactor.
    """
    from .detection import photon_probability
    from .states import preset_state

    rows: list[ErrataRow] = []
    prob_cfg = InterferometerConfig.from_loss(math.pi / 2.0, 0.3)
    deriv_cfg = InterferometerConfig.from_loss(2.0, 0.3)
    for name in ("cs", "ecss", "sfcs"):
        spec = preset_state(name, probe_alpha)
        rows.append(
            ErrataRow(
                equation="normalization (closed form)",
                state=name,
                printed=printed_norm_mag(spec),
                derived=normalization(spec).n_mag,
            )
        )
    for name in ("cs", "ecss", "sfcs"):
        spec = preset_state(name, probe_alpha)
        rows.append(
            ErrataRow(
                equation="photon probability (closed form)",
                state=name,
                printed=printed_probability(spec, prob_cfg, 4),
                derived=photon_probability(spec, prob_cfg, 4),
            )
        )
    for name in ("cs", "ecss", "sfcs"):
        spec = preset_state(name, probe_alpha)
        rows.append(
            ErrataRow(
                equation="observable derivative (closed form)",
                state=name,
                printed=printed_derivative(spec, deriv_cfg, 1),
                derived=derived_derivative_reference(spec, deriv_cfg, 1),
            )
        )
    return rows


def run_oracle_check(
    nbar: float = 3.0,
    states: tuple[str, ...] = ("cs", "ecss", "sfcs"),
    phi_count: int = 13,
    r2_values: tuple[float, ...] = (0.0, 0.1, 0.3, 0.5, 0.9),
    lmax: int = 40,
) -> OracleCheckReport:
    """Run the full arbitration grid and assemble the report.

    Raises OracleRangeError before doing any work if nbar exceeds the
    brute-force guard.
    """
    if nbar > MAX_ORACLE_NBAR:
        raise OracleRangeError(
            f"oracle grid guarded to mean photon number <= {MAX_ORACLE_NBAR}, got {nbar!r}"
        )
    report = OracleCheckReport(nbar=nbar, lmax=lmax)
    phis = np.linspace(0.0, 2.0 * math.pi, phi_count)
    specs = {name: state_for_nbar(name, nbar) for name in states}
    for name, spec in specs.items():
        for r2 in r2_values:
            for phi in phis:
                config = InterferometerConfig.from_loss(float(phi), float(r2))
                analytic = photon_distribution(spec, config, lmax)
                oracle = oracle_distribution(spec, config, lmax)
                dev = float(np.max(np.abs(analytic.probs - oracle.probs)))
                report.entries.append(
                    GridEntry(
                        state=name,
                        phi=float(phi),
                        r_squared=float(r2),
                        max_abs_deviation=dev,
                        total_with_tail=oracle.total() + oracle.tail_bound,
                    )
                )

    grid = default_phi_grid()
    for label, scheme in _READINGS:
        per_state: dict[str, float] = {}
        for name in ANCHORS:
            if name not in specs:
                continue
            curve = scheme_expectation_grid(specs[name], grid, 0.0, scheme)
            per_state[name] = _refined_min(grid, curve)
        if per_state:
            report.minima[label] = per_state
    for label, per_state in report.minima.items():
        if all(
            abs(per_state.get(s, math.inf) - anchor) <= ANCHOR_TOL
            for s, anchor in ANCHORS.items()
            if s in per_state
        ) and per_state:
            report.selected_reading = label
            break

    report.errata = errata_table()
    return report
