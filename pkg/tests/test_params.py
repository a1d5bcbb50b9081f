import math

import numpy as np
import pytest

from catlidar.params import (
    TokenError,
    parse_r2_token,
    parse_scheme_token,
    parse_state_token,
    resolve_state,
)
from catlidar.states import mean_photon_number


def test_state_tokens():
    assert parse_state_token("cs") == ("cs", (1.0, 0.0, 0.0, 0.0))
    assert parse_state_token("ecss") == ("ecss", (0.0, 1.0, 0.0, 1.0))
    assert parse_state_token("sfcs") == ("sfcs", (1.0, 1.0, 1.0, 1.0))
    label, weights = parse_state_token("custom:0.5,-1,0,2")
    assert weights == (0.5, -1.0, 0.0, 2.0)
    assert label.startswith("custom:")
    for bad in ("CS", "custom:1,2,3", "custom:1,2,3,x", "custom:", "cat"):
        with pytest.raises(TokenError):
            parse_state_token(bad)


def test_scheme_tokens():
    assert parse_scheme_token("z").label() == "z"
    assert parse_scheme_token("z4n:0").label() == "z4n:0"
    assert parse_scheme_token("z4n:7").n == 7
    agg = parse_scheme_token("z4n-agg")
    assert agg.kind == "z4n-agg" and not agg.include_zero
    assert parse_scheme_token("z4n-agg:include-zero").include_zero
    for bad in ("z4n", "z4n:", "z4n:-1", "z4n:1.5", "parity", "z4n-agg:zero"):
        with pytest.raises(TokenError):
            parse_scheme_token(bad)


def test_r2_tokens():
    single = parse_r2_token("0.3")
    assert single[0] is False
    np.testing.assert_allclose(single[1], [0.3])
    is_grid, values = parse_r2_token("grid:0:1:0.25")
    assert is_grid
    np.testing.assert_allclose(values, [0.0, 0.25, 0.5, 0.75, 1.0])
    for bad in ("1.2", "-0.1", "grid:0:2:0.5", "grid:1:0:0.1", "grid:0:1:0", "grid:0:1", "x"):
        with pytest.raises(TokenError):
            parse_r2_token(bad)


def test_resolve_state_intensity_modes():
    label, spec, nbar = resolve_state("sfcs", 3.0, None)
    assert label == "sfcs"
    assert nbar == pytest.approx(3.0, abs=1e-8)
    label2, spec2, nbar2 = resolve_state("cs", None, math.sqrt(3.0))
    assert nbar2 == pytest.approx(3.0, rel=1e-12)
    assert mean_photon_number(spec2) == pytest.approx(nbar2, rel=1e-12)
    with pytest.raises(TokenError):
        resolve_state("cs", 3.0, 1.0)
    with pytest.raises(TokenError):
        resolve_state("cs", None, None)
