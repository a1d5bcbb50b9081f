"""Photon statistics at the counted port and the click observables built on them.

Ground truth for every probability is the branch-overlap form.  After the
network, the state is a four-component superposition of product coherent
states, so the photon-number distribution at port a is

    P(l) = |N|^2 sum_jk c_j c_k conj(A_k(l)) A_j(l) G_jk,

where A_j(l) is the port-a Fock amplitude of component j and G_jk is the
product of coherent overlaps of components k and j across the traced-out
modes (port b and the two environments).  All components share the same
counted intensity p and traced intensity q, so the Poisson factor
e^{-p} p^l / l! pulls out of the double sum and is evaluated in log space;
what remains is an exact 16-term phase sum

    W(l, q) = sum_jk c_j c_k i^{(j-k) l} exp(q (i^{j-k} - 1)),

whose unit phases are looked up exactly (never built from floating-point
powers of i).  The same structure yields closed-form phase derivatives,
so sensitivities never rely on finite differences.

Observables: the vacuum projector (expect_z), a single projector onto
photon number 4n (expect_z4n), and the aggregate over all multiples of
four with or without the vacuum term (expect_z4n_aggregate).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import special

from .errors import InsufficientCutoffError, ResidueError, SimulatorError
from .interferometer import InterferometerConfig
from .states import StateSpec, mean_photon_number, normalization

_IMAG_TOL = 1e-12
_DERIV_FLOOR = 1e-300
TAIL_TOL = 1e-6

# i**d for d = 0..3; all phase arithmetic reduces mod 4 in integers first.
_I4 = np.array([1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j])


@dataclass(frozen=True)
class DetectionScheme:
    """Which click observable to evaluate.

    kind "z" is the vacuum projector.  kind "z4n" is the projector onto
    the single photon number 4n (n = 0 reduces to "z").  kind "z4n-agg"
    sums the projectors over every multiple of four up to `cutoff`,
    including or excluding the vacuum term.
    """

    kind: str
    n: int = 0
    include_zero: bool = False
    cutoff: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind not in ("z", "z4n", "z4n-agg"):
            raise SimulatorError(f"unknown detection scheme kind {self.kind!r}")
        if self.kind == "z4n" and (self.n < 0 or self.n != int(self.n)):
            raise SimulatorError("projector index n must be a nonnegative integer")
        if self.cutoff is not None and self.cutoff < 0:
            raise SimulatorError("cutoff must be nonnegative")

    @classmethod
    def z(cls) -> "DetectionScheme":
        return cls(kind="z")

    @classmethod
    def single(cls, n: int) -> "DetectionScheme":
        return cls(kind="z4n", n=int(n))

    @classmethod
    def aggregate(cls, include_zero: bool = False, cutoff: Optional[int] = None) -> "DetectionScheme":
        return cls(kind="z4n-agg", include_zero=include_zero, cutoff=cutoff)

    def label(self) -> str:
        if self.kind == "z":
            return "z"
        if self.kind == "z4n":
            return f"z4n:{self.n}"
        return "z4n-agg:include-zero" if self.include_zero else "z4n-agg"


@dataclass(frozen=True)
class PhotonDistribution:
    """P(l) for l = 0..cutoff plus a bound on the probability beyond it."""

    probs: np.ndarray
    cutoff: int
    tail_bound: float

    def total(self) -> float:
        return float(self.probs.sum())


def default_aggregate_cutoff(nbar: float) -> int:
    """Smallest multiple of four safely past the Poisson bulk at mean nbar."""
    reach = nbar + 6.0 * math.sqrt(max(nbar, 1.0)) + 20.0
    return 4 * math.ceil(reach / 4.0)


def _log_poisson(ls: np.ndarray, p: np.ndarray) -> np.ndarray:
    """log of e^{-p} p^l / l!, safe at p = 0 (returns -inf for l > 0)."""
    return special.xlogy(ls, p) - p - special.gammaln(ls + 1.0)


def _phase_sum(c, q, ls, extra_qfactor: bool = False) -> np.ndarray:
    """The 16-term component-pair sum W(l, q), complex.

    With extra_qfactor the summand gains a factor (i^{j-k} - 1), which
    turns W into its derivative with respect to q.
    """
    q = np.asarray(q, dtype=float)
    ls = np.asarray(ls)
    out = np.zeros(np.broadcast_shapes(q.shape, ls.shape), dtype=complex)
    for j in range(4):
        for k in range(4):
            w = c[j] * c[k]
            if w == 0.0:
                continue
            d = (j - k) % 4
            term = w * _I4[(d * ls) % 4] * np.exp(q * (_I4[d] - 1.0))
            if extra_qfactor:
                term = term * (_I4[d] - 1.0)
            out = out + term
    return out


def _real_with_check(values: np.ndarray, what: str) -> np.ndarray:
    worst = float(np.max(np.abs(values.imag))) if values.size else 0.0
    if worst > _IMAG_TOL:
        raise ResidueError(f"{what} has imaginary residue {worst!r}")
    return values.real


def _pq_arrays(spec: StateSpec, phis: np.ndarray, r: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """p(phi), q(phi) and dp/dphi for a fixed loss setting."""
    a2 = abs(spec.alpha) ** 2
    t2 = 1.0 - r * r
    s = np.sin(0.5 * phis)
    cc = np.cos(0.5 * phis)
    p = a2 * t2 * s * s
    q = a2 * (t2 * cc * cc + r * r)
    dp = 0.5 * a2 * t2 * np.sin(phis)
    return p, q, dp


def probability_grid(spec: StateSpec, phis, r: float, ls) -> np.ndarray:
    """P(l) on a phase grid; shape (len(ls), len(phis)).  Clamped to [0, 1]."""
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    ls = np.atleast_1d(np.asarray(ls, dtype=np.int64))
    n2 = normalization(spec).n_mag ** 2
    p, q, _ = _pq_arrays(spec, phis, r)
    logpois = _log_poisson(ls[:, None].astype(float), p[None, :])
    w = _phase_sum(spec.c, q[None, :], ls[:, None])
    with np.errstate(under="ignore"):
        vals = n2 * np.exp(logpois) * w
    return np.clip(_real_with_check(vals, "photon probability"), 0.0, 1.0)


def derivative_grid(spec: StateSpec, phis, r: float, ls) -> np.ndarray:
    """dP(l)/dphi on a phase grid; shape (len(ls), len(phis)).

    Uses d/dphi [e^{-p} p^l / l! W(l,q)] with dq/dphi = -dp/dphi:

        dP/dphi = |N|^2 p' [(Pois(l-1,p) - Pois(l,p)) W - Pois(l,p) dW/dq]

    with Pois(-1, .) := 0, which is finite at p = 0 for every l.
    """
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    ls = np.atleast_1d(np.asarray(ls, dtype=np.int64))
    n2 = normalization(spec).n_mag ** 2
    p, q, dp = _pq_arrays(spec, phis, r)
    lcol = ls[:, None].astype(float)
    with np.errstate(under="ignore"):
        pois = np.exp(_log_poisson(lcol, p[None, :]))
        pois_prev = np.zeros_like(pois)
        nonzero = ls > 0
        if np.any(nonzero):
            pois_prev[nonzero, :] = np.exp(_log_poisson(lcol[nonzero] - 1.0, p[None, :]))
        w = _phase_sum(spec.c, q[None, :], ls[:, None])
        wq = _phase_sum(spec.c, q[None, :], ls[:, None], extra_qfactor=True)
        vals = n2 * dp[None, :] * ((pois_prev - pois) * w - pois * wq)
    return _real_with_check(vals, "probability derivative")


def _tail_scale(spec: StateSpec) -> float:
    """sup_l |N|^2 |W(l, q)| <= |N|^2 (sum_j |c_j|)^2, any q >= 0."""
    n2 = normalization(spec).n_mag ** 2
    return n2 * sum(abs(v) for v in spec.c) ** 2


def _aggregate_ls(include_zero: bool, cutoff: int) -> np.ndarray:
    start = 0 if include_zero else 4
    return np.arange(start, cutoff + 1, 4, dtype=np.int64)


def aggregate_grid(
    spec: StateSpec, phis, r: float, include_zero: bool, cutoff: Optional[int] = None
) -> tuple[np.ndarray, np.ndarray]:
    """Sum of P(4n) on a phase grid, plus a per-point truncation bound.

    The tail beyond the cutoff is bounded by the worst-case phase sum
    times the Poisson survival function; the bound must stay below
    TAIL_TOL or the cutoff is rejected.
    """
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    if cutoff is None:
        cutoff = default_aggregate_cutoff(mean_photon_number(spec))
    if cutoff < 8:
        raise InsufficientCutoffError("aggregate cutoff must be at least 8")
    ls = _aggregate_ls(include_zero, cutoff)
    values = probability_grid(spec, phis, r, ls).sum(axis=0)
    p, _, _ = _pq_arrays(spec, phis, r)
    tail = _tail_scale(spec) * special.pdtrc(cutoff, p)
    worst = float(tail.max()) if tail.size else 0.0
    if worst > TAIL_TOL:
        raise InsufficientCutoffError(
            f"aggregate tail bound {worst!r} exceeds {TAIL_TOL} at cutoff {cutoff}"
        )
    return np.clip(values, 0.0, 1.0), tail


def aggregate_derivative_grid(
    spec: StateSpec, phis, r: float, include_zero: bool, cutoff: Optional[int] = None
) -> np.ndarray:
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    if cutoff is None:
        cutoff = default_aggregate_cutoff(mean_photon_number(spec))
    if cutoff < 8:
        raise InsufficientCutoffError("aggregate cutoff must be at least 8")
    ls = _aggregate_ls(include_zero, cutoff)
    return derivative_grid(spec, phis, r, ls).sum(axis=0)


def photon_probability(
    spec: StateSpec, config: InterferometerConfig, l: int, *, with_flag: bool = False
):
    """P(l) for a single setting.

    With with_flag=True also reports whether the Poisson factor
    underflowed to exactly zero while the intensity was nonzero.
    """
    if l < 0 or l != int(l):
        raise SimulatorError("photon number must be a nonnegative integer")
    value = float(probability_grid(spec, [config.phi], config.r, [int(l)])[0, 0])
    if not with_flag:
        return value
    p, _, _ = _pq_arrays(spec, np.array([config.phi]), config.r)
    log_pois = float(_log_poisson(np.array([float(l)]), p)[0])
    underflowed = value == 0.0 and float(p[0]) > 0.0 and log_pois < math.log(5e-324)
    return value, underflowed


def photon_distribution(spec: StateSpec, config: InterferometerConfig, cutoff: int) -> PhotonDistribution:
    """P(0..cutoff) with an explicit bound on the truncated tail."""
    if cutoff < 0:
        raise SimulatorError("cutoff must be nonnegative")
    ls = np.arange(0, cutoff + 1, dtype=np.int64)
    probs = probability_grid(spec, [config.phi], config.r, ls)[:, 0]
    p, _, _ = _pq_arrays(spec, np.array([config.phi]), config.r)
    tail = float(_tail_scale(spec) * special.pdtrc(cutoff, p[0]))
    return PhotonDistribution(probs=probs, cutoff=cutoff, tail_bound=tail)


def expect_z(spec: StateSpec, config: InterferometerConfig) -> float:
    """Vacuum-projector expectation, i.e. P(0)."""
    return float(probability_grid(spec, [config.phi], config.r, [0])[0, 0])


def expect_z4n(spec: StateSpec, config: InterferometerConfig, n: int) -> float:
    """Expectation of the projector onto photon number 4n."""
    if n < 0 or n != int(n):
        raise SimulatorError("projector index n must be a nonnegative integer")
    return float(probability_grid(spec, [config.phi], config.r, [4 * int(n)])[0, 0])


def expect_z4n_aggregate(
    spec: StateSpec,
    config: InterferometerConfig,
    include_zero: bool = False,
    cutoff: Optional[int] = None,
) -> float:
    """Summed projector expectation over photon numbers 0 or 4, 8, ... cutoff."""
    values, _ = aggregate_grid(spec, [config.phi], config.r, include_zero, cutoff)
    return float(values[0])


def scheme_expectation_grid(spec: StateSpec, phis, r: float, scheme: DetectionScheme) -> np.ndarray:
    if scheme.kind == "z":
        return probability_grid(spec, phis, r, [0])[0]
    if scheme.kind == "z4n":
        return probability_grid(spec, phis, r, [4 * scheme.n])[0]
    values, _ = aggregate_grid(spec, phis, r, scheme.include_zero, scheme.cutoff)
    return values


def scheme_derivative_grid(spec: StateSpec, phis, r: float, scheme: DetectionScheme) -> np.ndarray:
    if scheme.kind == "z":
        return derivative_grid(spec, phis, r, [0])[0]
    if scheme.kind == "z4n":
        return derivative_grid(spec, phis, r, [4 * scheme.n])[0]
    return aggregate_derivative_grid(spec, phis, r, scheme.include_zero, scheme.cutoff)


def scheme_expectation(spec: StateSpec, config: InterferometerConfig, scheme: DetectionScheme) -> float:
    return float(scheme_expectation_grid(spec, [config.phi], config.r, scheme)[0])


def z4n_derivative(spec: StateSpec, config: InterferometerConfig, scheme: DetectionScheme) -> float:
    """Closed-form d<observable>/dphi for any scheme."""
    return float(scheme_derivative_grid(spec, [config.phi], config.r, scheme)[0])


def sensitivity_grid(spec: StateSpec, phis, r: float, scheme: DetectionScheme) -> np.ndarray:
    """Error-propagation phase uncertainty on a grid; +inf where it degenerates.

    The observables are projector sums, so the variance is P(1 - P).
    Two degeneracies get the +inf sentinel: a vanishing slope, and a
    saturated expectation (P exactly 0 or 1 in double precision).  A
    smooth bounded observable only touches its bounds at zero-slope
    points, so saturation is the same 0/0 limit reached from the other
    side of the rounding.
    """
    values = scheme_expectation_grid(spec, phis, r, scheme)
    slopes = scheme_derivative_grid(spec, phis, r, scheme)
    var = np.clip(values * (1.0 - values), 0.0, None)
    out = np.full(values.shape, math.inf)
    ok = (np.abs(slopes) >= _DERIV_FLOOR) & (var > 0.0)
    out[ok] = np.sqrt(var[ok]) / np.abs(slopes[ok])
    return out


def phase_sensitivity(spec: StateSpec, config: InterferometerConfig, scheme: DetectionScheme) -> float:
    """Delta phi at one setting; +inf marks a diverging (zero-slope) point."""
    return float(sensitivity_grid(spec, [config.phi], config.r, scheme)[0])


def snl_ratio(spec: StateSpec, config: InterferometerConfig, scheme: DetectionScheme) -> float:
    """Delta phi divided by the shot-noise level 1/sqrt(nbar)."""
    nbar = mean_photon_number(spec)
    if nbar <= 0.0:
        raise SimulatorError("shot-noise comparison needs a positive mean photon number")
    value = phase_sensitivity(spec, config, scheme)
    return value * math.sqrt(nbar) if math.isfinite(value) else math.inf


def snl_ratio_grid(spec: StateSpec, phis, r: float, scheme: DetectionScheme) -> np.ndarray:
    nbar = mean_photon_number(spec)
    if nbar <= 0.0:
        raise SimulatorError("shot-noise comparison needs a positive mean photon number")
    sens = sensitivity_grid(spec, phis, r, scheme)
    out = np.full(sens.shape, math.inf)
    ok = np.isfinite(sens)
    out[ok] = sens[ok] * math.sqrt(nbar)
    return out
