"""Input states: real-weighted superpositions of four phase-rotated coherent states.

The bright input port of the interferometer carries

    |psi> = N * (c1|a> + c2|ia> + c3|-a> + c4|-ia>),    a = alpha,

with real weights c1..c4 and N fixed by normalization.  Useful special
cases are the single coherent state (1,0,0,0), the even two-component
superposition (0,1,0,1), and the equal-weight four-component
superposition (1,1,1,1), whose Fock support is restricted to photon
numbers divisible by four.

Every quantity here is computed from the exact coherent-state overlap

    <b|g> = exp(-(|b|^2 + |g|^2)/2 + conj(b) g),

summed over the 4x4 grid of component pairs.  That sum is the ground
truth; compact closed forms are cross-checked against it in the test
suite and in the consistency report.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import AmplitudeSolveError, InvalidStateError, ResidueError

# Component j sits at amplitude (i**j) * alpha, j = 0..3.
COMPONENT_PHASES = (1 + 0j, 1j, -1 + 0j, -1j)

# Preset weight vectors selectable by name.
PRESET_SHAPES = {
    "cs": (1.0, 0.0, 0.0, 0.0),
    "ecss": (0.0, 1.0, 0.0, 1.0),
    "sfcs": (1.0, 1.0, 1.0, 1.0),
}

_IMAG_TOL = 1e-12


@dataclass(frozen=True)
class StateSpec:
    """Four real component weights plus the base coherent amplitude."""

    c: tuple[float, float, float, float]
    alpha: complex

    def __post_init__(self) -> None:
        if len(self.c) != 4:
            raise InvalidStateError("exactly four component weights are required")
        coeffs = tuple(float(v) for v in self.c)
        if any(not math.isfinite(v) for v in coeffs):
            raise InvalidStateError("component weights must be finite")
        if all(v == 0.0 for v in coeffs):
            raise InvalidStateError("at least one component weight must be nonzero")
        alpha = complex(self.alpha)
        if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
            raise InvalidStateError("alpha must be finite")
        object.__setattr__(self, "c", coeffs)
        object.__setattr__(self, "alpha", alpha)

    def component_amplitudes(self) -> tuple[complex, complex, complex, complex]:
        """Coherent amplitude of each superposition component."""
        return tuple(ph * self.alpha for ph in COMPONENT_PHASES)


@dataclass(frozen=True)
class NormConstants:
    """Weight sums entering the closed forms, plus the exact norm factor.

    x_sum, y_sum and v_sum are the quadratic weight combinations that the
    compact closed forms are written in; n_mag is |N| obtained from the
    exact overlap sum, not from any closed form.
    """

    x_sum: float
    y_sum: float
    v_sum: float
    n_mag: float


def make_state(c1: float, c2: float, c3: float, c4: float, alpha) -> StateSpec:
    """Validated constructor for a state specification."""
    return StateSpec((float(c1), float(c2), float(c3), float(c4)), complex(alpha))


def preset_state(name: str, alpha) -> StateSpec:
    """Build one of the named preset shapes at the given amplitude."""
    try:
        shape = PRESET_SHAPES[name]
    except KeyError:
        raise InvalidStateError(f"unknown preset state {name!r}") from None
    return make_state(*shape, alpha)


def coherent_overlap(beta: complex, gamma: complex) -> complex:
    """Exact overlap <beta|gamma> of two coherent states."""
    return cmath.exp(-0.5 * (abs(beta) ** 2 + abs(gamma) ** 2) + beta.conjugate() * gamma)


def _real_part(value: complex, what: str) -> float:
    # scale-aware residue check: these sums are O(1) or larger
    tol = _IMAG_TOL * max(1.0, abs(value))
    if abs(value.imag) > tol:
        raise ResidueError(f"{what} has imaginary residue {value.imag!r}")
    return value.real


def unnormalized_norm_sq(spec: StateSpec) -> float:
    """<psi~|psi~> of the weighted superposition before normalizing."""
    mus = spec.component_amplitudes()
    total = 0j
    for j in range(4):
        for k in range(4):
            w = spec.c[j] * spec.c[k]
            if w == 0.0:
                continue
            total += w * coherent_overlap(mus[k], mus[j])
    return _real_part(total, "norm overlap sum")


def normalization(spec: StateSpec) -> NormConstants:
    """Weight sums and the exact normalization magnitude |N|."""
    c1, c2, c3, c4 = spec.c
    x_sum = c1 * c1 + c2 * c2 + c3 * c3 + c4 * c4
    y_sum = c1 * c3 + c2 * c4
    v_sum = (c1 + c3) * (c2 + c4)
    raw = unnormalized_norm_sq(spec)
    if raw <= 0.0:
        raise InvalidStateError("state has nonpositive norm")
    return NormConstants(x_sum=x_sum, y_sum=y_sum, v_sum=v_sum, n_mag=1.0 / math.sqrt(raw))


def mean_photon_number(spec: StateSpec) -> float:
    """Exact mean photon number of the normalized superposition."""
    mus = spec.component_amplitudes()
    total = 0j
    for j in range(4):
        for k in range(4):
            w = spec.c[j] * spec.c[k]
            if w == 0.0:
                continue
            total += w * mus[k].conjugate() * mus[j] * coherent_overlap(mus[k], mus[j])
    raw = unnormalized_norm_sq(spec)
    if raw <= 0.0:
        # weight vectors like (1, -1, 1, -1) cancel exactly as alpha -> 0
        raise InvalidStateError("state vector vanishes at this amplitude")
    value = _real_part(total, "photon-number overlap sum") / raw
    return max(0.0, value)


def solve_amplitude(shape, target_nbar: float, *, tol: float = 1e-10) -> complex:
    """Find the real positive alpha whose state has the requested mean photon number.

    The mean photon number is solved by bisection over |alpha|; the map is
    required to be monotone over the bracket, which holds for the preset
    shapes and for every well-behaved weight vector.
    """
    if not math.isfinite(target_nbar) or target_nbar <= 0.0:
        raise AmplitudeSolveError("target mean photon number must be positive")

    def nbar_at(a: float) -> float:
        if a == 0.0:
            return 0.0
        try:
            return mean_photon_number(StateSpec(tuple(shape), complex(a)))
        except InvalidStateError as exc:
            raise AmplitudeSolveError(
                f"state degenerates near |alpha| = {a!r}: {exc}"
            ) from exc

    lo, hi = 0.0, 2.0 * math.sqrt(target_nbar) + 10.0
    samples = [nbar_at(lo + (hi - lo) * i / 64.0) for i in range(65)]
    slack = 1e-9 * max(1.0, target_nbar)
    if any(b < a - slack for a, b in zip(samples, samples[1:])):
        raise AmplitudeSolveError("mean photon number is not monotone over the bracket")
    if samples[-1] < target_nbar:
        raise AmplitudeSolveError(
            f"target {target_nbar} unreachable below |alpha| = {hi}"
        )

    f_lo = -target_nbar
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        f_mid = nbar_at(mid) - target_nbar
        if f_mid == 0.0:
            lo = hi = mid
            break
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    achieved = nbar_at(root)
    if abs(achieved - target_nbar) > tol:
        raise AmplitudeSolveError(
            f"bisection landed at nbar = {achieved!r}, outside tolerance of {target_nbar}"
        )
    return complex(root, 0.0)


def state_for_nbar(shape_or_name, target_nbar: float) -> StateSpec:
    """Convenience: preset name or weight tuple plus a target mean photon number."""
    shape = PRESET_SHAPES.get(shape_or_name) if isinstance(shape_or_name, str) else tuple(shape_or_name)
    if shape is None:
        raise InvalidStateError(f"unknown preset state {shape_or_name!r}")
    alpha = solve_amplitude(shape, target_nbar)
    return make_state(*shape, alpha)
