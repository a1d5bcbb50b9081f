import math
import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from catlidar.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(), raise_server_exceptions=False)


def test_health(client):
    body = client.get("/api/health").json()
    assert body["status"] == "ok"


def test_curve_columns_and_determinism(client):
    payload = {"state": "sfcs", "nbar": 3.0, "scheme": "z4n-agg:include-zero", "phi_points": 65}
    first = client.post("/api/curve", json=payload)
    assert first.status_code == 200
    body = first.json()
    assert body["state"] == "sfcs"
    assert body["scheme"] == "z4n-agg:include-zero"
    assert body["nbar"] == 3.0
    assert len(body["phi"]) == 65 and len(body["value"]) == 65
    assert body["phi"][0] == 0.0
    assert body["phi"][-1] == pytest.approx(2.0 * math.pi, rel=1e-15)
    assert body["alpha"] == pytest.approx(1.6712867162874003, abs=1e-9)
    again = client.post("/api/curve", json=payload).json()
    assert again == body


def test_curve_alpha_mode(client):
    body = client.post(
        "/api/curve",
        json={"state": "cs", "alpha": 1.5, "scheme": "z", "phi_points": 9},
    ).json()
    assert body["alpha"] == 1.5
    assert body["nbar"] == pytest.approx(2.25, rel=1e-12)


def test_curve_rejects_double_intensity(client):
    resp = client.post("/api/curve", json={"state": "cs", "nbar": 3.0, "alpha": 1.0})
    assert resp.status_code == 422


def test_curve_rejects_bad_tokens(client):
    assert client.post("/api/curve", json={"state": "cat", "nbar": 3.0}).status_code == 422
    assert (
        client.post(
            "/api/curve", json={"state": "cs", "nbar": 3.0, "scheme": "z4n:x"}
        ).status_code
        == 422
    )
    assert (
        client.post("/api/curve", json={"state": "cs", "nbar": 3.0, "r2": 2.0}).status_code
        == 422
    )


def test_custom_state_curve(client):
    body = client.post(
        "/api/curve",
        json={"state": "custom:1,0,1,0", "nbar": 3.0, "scheme": "z", "phi_points": 17},
    ).json()
    assert body["state"] == "custom:1,0,1,0"


def test_unreachable_intensity_is_numeric_error(client):
    # the alternating-sign family cannot reach a unit mean photon number
    resp = client.post(
        "/api/curve",
        json={"state": "custom:1,-1,1,-1", "nbar": 1.0, "phi_points": 9},
    )
    assert resp.status_code == 500
    assert resp.json()["kind"] == "numeric"


def test_peak_metrics_endpoint(client):
    body = client.post(
        "/api/peak-metrics",
        json={"state": "ecss", "nbar": 3.0, "scheme": "z4n-agg:include-zero"},
    ).json()
    assert body["fold_count"] == 2
    assert body["fwhm"] == pytest.approx(1.6265411229406834, abs=1e-9)


def test_peak_metrics_flat_curve(client):
    body = client.post(
        "/api/peak-metrics",
        json={"state": "cs", "nbar": 3.0, "scheme": "z", "r2": 1.0, "phi_points": 257},
    ).json()
    assert body["fold_count"] == 0
    assert body["fwhm"] is None


def test_sensitivity_nulls_and_working_points(client):
    body = client.post(
        "/api/sensitivity",
        json={
            "state": "sfcs",
            "nbar": 3.0,
            "scheme": "z4n-agg:include-zero",
            "phi_points": 513,
        },
    ).json()
    assert body["ratio"][0] is None  # saturated at phi = 0
    assert body["ratio"][256] is None  # saturated at phi = pi
    assert any(v is not None for v in body["ratio"])
    assert body["min_ratio"] == pytest.approx(1.0, abs=0.01)
    assert body["working_points"]
    for lo, hi in body["working_points"]:
        assert lo < hi


def test_loss_sweep_variant_selection(client):
    low = client.post(
        "/api/loss-sweep",
        json={"state": "sfcs", "nbar": 3.0, "r2": "grid:0:1:0.5"},
    ).json()
    assert low["variant"] == "low"
    assert low["at_pi"] is not None and low["state_at_pi"] is None
    forced = client.post(
        "/api/loss-sweep",
        json={
            "state": "sfcs",
            "nbar": 3.0,
            "r2": "grid:0:0.2:0.1",
            "variant": "auto",
            "nbar_threshold": 2.0,
        },
    ).json()
    assert forced["variant"] == "high"
    assert forced["state_at_pi"] is not None and forced["at_pi"] is None


def test_loss_sweep_single_value(client):
    body = client.post(
        "/api/loss-sweep",
        json={"state": "sfcs", "nbar": 3.0, "r2": "grid:0:0.5:0.25", "phi_points": 257},
    ).json()
    assert len(body["r2"]) == 3
    assert all(d >= 0.0 for d in body["difference"])


def test_oracle_check_endpoint_small(client):
    body = client.post(
        "/api/oracle-check",
        json={"nbar": 3.0, "states": ["sfcs"], "phi_count": 3, "r2_values": [0.0], "lmax": 16},
    ).json()
    assert body["passed"] is True
    assert body["max_deviation"] < 1e-10
    assert body["selected_reading"] == "z4n-agg:include-zero"
    assert len(body["errata"]) == 9
    assert "verdict: PASS" in body["report_text"]


def test_oracle_check_guard(client):
    resp = client.post("/api/oracle-check", json={"nbar": 30.0})
    assert resp.status_code == 422
    assert resp.json()["kind"] == "config"


def test_oracle_check_rejects_custom_states(client):
    resp = client.post("/api/oracle-check", json={"nbar": 3.0, "states": ["custom:1,0,0,0"]})
    assert resp.status_code == 422
