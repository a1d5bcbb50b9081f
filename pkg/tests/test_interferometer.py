import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catlidar.errors import SimulatorError
from catlidar.interferometer import (
    InterferometerConfig,
    branch_amplitudes,
    port_factors,
    pq,
)
from catlidar.states import make_state, preset_state


def test_config_requires_unit_magnitude():
    with pytest.raises(SimulatorError):
        InterferometerConfig(phi=0.0, r=0.5, t=0.5)
    with pytest.raises(SimulatorError):
        InterferometerConfig(phi=0.0, r=-0.1, t=math.sqrt(1 - 0.01))


def test_from_loss_round_trip():
    cfg = InterferometerConfig.from_loss(1.2, 0.3)
    assert cfg.r_squared == pytest.approx(0.3, abs=1e-15)
    assert cfg.r * cfg.r + cfg.t * cfg.t == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(SimulatorError):
        InterferometerConfig.from_loss(1.2, 1.5)


def test_port_factors_conserve_intensity():
    for phi in (0.0, 0.7, math.pi, 5.1):
        for r2 in (0.0, 0.2, 0.8, 1.0):
            cfg = InterferometerConfig.from_loss(phi, r2)
            f_a, f_b, f_loss = port_factors(cfg)
            total = abs(f_a) ** 2 + abs(f_b) ** 2 + 2.0 * abs(f_loss) ** 2
            assert total == pytest.approx(1.0, abs=1e-14)


def test_port_factors_closed_form():
    cfg = InterferometerConfig.from_loss(0.9, 0.36)
    f_a, f_b, f_loss = port_factors(cfg)
    t = math.sqrt(0.64)
    half = cmath.exp(1j * 0.45)
    assert f_a == pytest.approx(1j * t * half * math.sin(0.45), abs=1e-15)
    assert f_b == pytest.approx(1j * t * half * math.cos(0.45), abs=1e-15)
    assert f_loss == pytest.approx(1j * math.sqrt(0.36 / 2.0), abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(
    phi=st.floats(0.0, 2.0 * math.pi),
    r2=st.floats(0.0, 1.0),
    a=st.floats(0.05, 12.0),
)
def test_pq_energy_conservation(phi, r2, a):
    cfg = InterferometerConfig.from_loss(phi, r2)
    p, q = pq(cfg, complex(a))
    assert p >= 0.0 and q >= 0.0
    assert p + q == pytest.approx(a * a, rel=1e-12, abs=1e-12)


def test_pq_closed_form():
    cfg = InterferometerConfig.from_loss(1.1, 0.25)
    p, q = pq(cfg, complex(2.0))
    x = 4.0
    assert p == pytest.approx(x * 0.75 * math.sin(0.55) ** 2, rel=1e-14)
    assert q == pytest.approx(x * (0.75 * math.cos(0.55) ** 2 + 0.25), rel=1e-14)


def test_pq_lossless_extremes():
    lossless_pi = InterferometerConfig.from_loss(math.pi, 0.0)
    p, q = pq(lossless_pi, complex(1.7))
    assert p == pytest.approx(1.7 ** 2, rel=1e-14)
    assert q == pytest.approx(0.0, abs=1e-14)
    dark = InterferometerConfig.from_loss(0.0, 0.0)
    p, q = pq(dark, complex(1.7))
    assert p == 0.0


def test_branch_amplitudes_single_component():
    alpha = 1.3
    cfg = InterferometerConfig.from_loss(2.2, 0.4)
    branches = branch_amplitudes(preset_state("cs", alpha), cfg)
    f_a, f_b, f_loss = port_factors(cfg)
    assert branches.weights == (1.0, 0.0, 0.0, 0.0)
    assert branches.mode_a[0] == pytest.approx(alpha * f_a, abs=1e-15)
    assert branches.mode_b[0] == pytest.approx(alpha * f_b, abs=1e-15)
    assert branches.mode_ea[0] == pytest.approx(alpha * f_loss * cmath.exp(1j * 2.2), abs=1e-15)
    assert branches.mode_eb[0] == pytest.approx(alpha * f_loss * 1j, abs=1e-15)


def test_branch_amplitudes_quarter_turn_scaling():
    # every component is the first one rotated by i^j, in all four ports
    cfg = InterferometerConfig.from_loss(0.8, 0.15)
    branches = branch_amplitudes(make_state(1.0, 1.0, 1.0, 1.0, 0.9), cfg)
    for ports in (branches.mode_a, branches.mode_b, branches.mode_ea, branches.mode_eb):
        for j in range(4):
            assert ports[j] == pytest.approx(ports[0] * (1j ** j), abs=1e-15)


def test_branch_intensity_conservation():
    cfg = InterferometerConfig.from_loss(1.9, 0.55)
    branches = branch_amplitudes(preset_state("cs", 2.4), cfg)
    total = sum(
        abs(ports[0]) ** 2
        for ports in (branches.mode_a, branches.mode_b, branches.mode_ea, branches.mode_eb)
    )
    assert total == pytest.approx(2.4 ** 2, rel=1e-14)


def test_phi_canonical_wraps():
    cfg = InterferometerConfig.from_loss(2.0 * math.pi + 0.3, 0.0)
    assert cfg.phi_canonical == pytest.approx(0.3, abs=1e-12)
