"""Lossy Mach-Zehnder network acting on the coherent components.

Layout: a 50:50 splitter mixes the bright port a with the vacuum port b,
mode a picks up the phase phi, both arms couple to their own vacuum
environment through a transmission-t / reflection-r splitter, and a final
50:50 splitter recombines a and b.  Every splitter follows the
exp[i theta (a^dag b + a b^dag)] convention, so a single photon in the
first input scatters to t|1,0> + i r|0,1>.

Coherent states stay coherent under this network, which is why each input
component maps to a four-mode product of coherent states.  The closed
forms for the per-component output amplitudes are given in
`branch_amplitudes`; the oracle module re-derives them by brute-force
Fock propagation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import SimulatorError
from .states import StateSpec

_UNITARITY_TOL = 1e-12
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class InterferometerConfig:
    """Phase and arm-loss setting.  r, t are the loss-splitter coefficients.

    r^2 is the lost intensity fraction per arm, t^2 the kept fraction;
    r and t must be nonnegative with r^2 + t^2 = 1.  phi is kept exactly
    as given; `phi_canonical` folds it into [0, 2*pi) for reporting.
    """

    phi: float
    r: float
    t: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.phi):
            raise SimulatorError("phase must be finite")
        if not (math.isfinite(self.r) and math.isfinite(self.t)):
            raise SimulatorError("loss coefficients must be finite")
        if self.r < 0.0 or self.t < 0.0:
            raise SimulatorError("loss coefficients must be nonnegative")
        if abs(self.r * self.r + self.t * self.t - 1.0) > _UNITARITY_TOL:
            raise SimulatorError("loss coefficients must satisfy r^2 + t^2 = 1")

    @classmethod
    def from_loss(cls, phi: float, r_squared: float) -> "InterferometerConfig":
        """Build from the lost intensity fraction r^2 in [0, 1]."""
        if not math.isfinite(r_squared) or not 0.0 <= r_squared <= 1.0:
            raise SimulatorError("r^2 must lie in [0, 1]")
        return cls(phi=float(phi), r=math.sqrt(r_squared), t=math.sqrt(1.0 - r_squared))

    @property
    def phi_canonical(self) -> float:
        return self.phi % TWO_PI

    @property
    def r_squared(self) -> float:
        return self.r * self.r


@dataclass(frozen=True)
class BranchSet:
    """Output coherent amplitudes of each input component.

    Mode order is (a, b, E_a, E_b): the two interferometer ports followed
    by the two loss environments.  Component j of the input becomes the
    product coherent state with amplitudes (mode_a[j], mode_b[j],
    mode_ea[j], mode_eb[j]); the superposition weights are unchanged.
    """

    weights: tuple[float, float, float, float]
    mode_a: tuple[complex, complex, complex, complex]
    mode_b: tuple[complex, complex, complex, complex]
    mode_ea: tuple[complex, complex, complex, complex]
    mode_eb: tuple[complex, complex, complex, complex]


def port_factors(config: InterferometerConfig) -> tuple[complex, complex, complex]:
    """Per-unit-input amplitudes (f_a, f_b, f_loss) of the network.

    A coherent input of amplitude mu exits with mu*f_a at port a, mu*f_b
    at port b and mu*f_loss*e^{i phi} / mu*i*f_loss at the two
    environments.  Closed forms:

        f_a    = i t e^{i phi/2} sin(phi/2)
        f_b    = i t e^{i phi/2} cos(phi/2)
        f_loss = i r / sqrt(2)
    """
    half = 0.5 * config.phi
    rot = 1j * config.t * cmath.exp(1j * half)
    return rot * math.sin(half), rot * math.cos(half), 1j * config.r / math.sqrt(2.0)


def branch_amplitudes(spec: StateSpec, config: InterferometerConfig) -> BranchSet:
    """Coherent amplitudes of all four output modes for each component."""
    f_a, f_b, f_loss = port_factors(config)
    phase = cmath.exp(1j * config.phi)
    mus = spec.component_amplitudes()
    return BranchSet(
        weights=spec.c,
        mode_a=tuple(mu * f_a for mu in mus),
        mode_b=tuple(mu * f_b for mu in mus),
        mode_ea=tuple(mu * f_loss * phase for mu in mus),
        mode_eb=tuple(mu * f_loss * 1j for mu in mus),
    )


def pq(config: InterferometerConfig, alpha: complex) -> tuple[float, float]:
    """Intensity p at the counted port and q summed over the traced modes.

    p + q = |alpha|^2 for any setting (energy conservation), and every
    component shares the same p and q because the component amplitudes
    differ only by unit phases.
    """
    a2 = abs(alpha) ** 2
    s = math.sin(0.5 * config.phi)
    c = math.cos(0.5 * config.phi)
    t2 = config.t * config.t
    p = a2 * t2 * s * s
    q = a2 * (t2 * c * c + config.r * config.r)
    return p, q
