import pytest

from catlidar.svgplot import render_svg


def test_render_basic_polyline():
    svg = render_svg([0.0, 1.0, 2.0], [("curve", [0.0, 1.0, 0.5])], "t", "x", "y")
    assert svg.startswith("<svg")
    assert svg.count("<polyline") == 1
    assert "curve" in svg


def test_gaps_split_polylines():
    svg = render_svg(
        [0.0, 1.0, 2.0, 3.0, 4.0],
        [("s", [0.1, 0.2, None, 0.4, 0.3])],
        "t",
        "x",
        "y",
    )
    assert svg.count("<polyline") == 2


def test_multiple_series_and_determinism():
    xs = [float(i) for i in range(10)]
    series = [("a", [v * 0.1 for v in xs]), ("b", [v * 0.2 for v in xs])]
    one = render_svg(xs, series, "t", "x", "y")
    two = render_svg(xs, series, "t", "x", "y")
    assert one == two
    assert one.count("<polyline") == 2


def test_empty_input_rejected():
    with pytest.raises(ValueError):
        render_svg([], [("s", [])], "t", "x", "y")
    with pytest.raises(ValueError):
        render_svg([1.0, 2.0], [("s", [None, None])], "t", "x", "y")
