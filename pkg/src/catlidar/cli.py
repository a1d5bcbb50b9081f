"""Command-line front end.

The CLI is a thin client of the HTTP layer: it builds a request from
flags (plus an optional flat key = value config file), sends it to an
in-process app instance by default or to a remote server with --server,
and turns the JSON response into CSV / JSON / SVG files.  All numeric
work happens behind the service boundary.

Exit codes: 0 success, 2 configuration error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Any, Callable, Optional

from .svgplot import render_svg

_CONFIG_EXIT = 2
_NUMERIC_EXIT = 3


def _comma_floats(text: str) -> list[float]:
    return [float(p) for p in str(text).split(",") if p.strip() != ""]


def _comma_names(text: str) -> list[str]:
    return [p.strip() for p in str(text).split(",") if p.strip() != ""]


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


class Option:
    def __init__(self, name: str, conv: Callable[[str], Any], default: Any, help_text: str):
        self.name = name
        self.conv = conv
        self.default = default
        self.help_text = help_text


_COMMON = [
    Option("config", str, None, "flat key = value config file; flags override it"),
    Option("server", str, None, "base URL of a running service; default is in-process"),
    Option("out", str, None, "output data file path"),
    Option("format", str, "csv", "output data format: csv or json"),
    Option("svg", str, None, "optional SVG plot path"),
]

_STATEFUL = [
    Option("state", str, "cs", "cs | ecss | sfcs | custom:c1,c2,c3,c4"),
    Option("nbar", float, None, "target mean photon number (exclusive with --alpha)"),
    Option("alpha", float, None, "explicit coherent amplitude (exclusive with --nbar)"),
]

_OPTIONS: dict[str, list[Option]] = {
    "curve": _COMMON + _STATEFUL + [
        Option("scheme", str, "z", "z | z4n:<n> | z4n-agg | z4n-agg:include-zero"),
        Option("r2", str, "0", "lost intensity fraction in [0, 1]"),
        Option("phi_points", int, 2048, "phase grid size over [0, 2*pi]"),
        Option("metrics", str, None, "optional JSON path for peak metrics"),
        Option("peak", str, "global", "peak selection for metrics: global or pi"),
        Option("min_prominence", float, 0.10, "relative prominence floor for peaks"),
    ],
    "loss-sweep": _COMMON + _STATEFUL + [
        Option("scheme", str, "z4n-agg:include-zero", "observable to sweep"),
        Option("r2", str, "grid:0:1:0.02", "loss grid: grid:lo:hi:step or single value"),
        Option("variant", str, "auto", "auto | low | high"),
        Option("nbar_threshold", float, 50.0, "auto variant switches to high at this nbar"),
        Option("phi_points", int, 2048, "phase grid for per-loss minima"),
    ],
    "sensitivity": _COMMON + _STATEFUL + [
        Option("scheme", str, "z", "observable whose slope sets the sensitivity"),
        Option("r2", str, "0", "lost intensity fraction in [0, 1]"),
        Option("phi_points", int, 2048, "phase grid size over [0, 2*pi]"),
        Option("threshold", float, 1.05, "working-point threshold on the ratio"),
        Option("working_points", str, None, "optional JSON path for interval summary"),
    ],
    "oracle-check": _COMMON + [
        Option("nbar", float, 3.0, "mean photon number for the grid (guarded to <= 8)"),
        Option("states", str, "cs,ecss,sfcs", "comma-separated preset states"),
        Option("phi_count", int, 13, "uniform phase points in [0, 2*pi]"),
        Option("r2_values", str, "0,0.1,0.3,0.5,0.9", "comma-separated loss values"),
        Option("lmax", int, 40, "largest photon number compared"),
    ],
    "serve": [
        Option("host", str, "127.0.0.1", "bind address"),
        Option("port", int, 8000, "bind port"),
    ],
}

_DEFAULT_OUT = {
    "curve": "curve.csv",
    "loss-sweep": "loss_sweep.csv",
    "sensitivity": "sensitivity.csv",
    "oracle-check": "oracle_check.txt",
}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catlidar",
        description="Fringe statistics and phase sensitivity of a lossy "
        "interferometer fed by coherent-state superpositions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, options in _OPTIONS.items():
        p = sub.add_parser(cmd)
        for opt in options:
            p.add_argument(
                _flag(opt.name),
                dest=opt.name,
                default=argparse.SUPPRESS,
                help=f"{opt.help_text} (default: {opt.default})",
            )
        p.add_argument(
            "--seedless",
            action="store_true",
            default=argparse.SUPPRESS,
            help="accepted for interface stability; the pipeline is deterministic",
        )
    return parser


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise CliError(
                        f"{path}:{lineno}: expected key = value", _CONFIG_EXIT
                    )
                key, value = (part.strip() for part in line.split("=", 1))
                values[key.replace("-", "_")] = value
    except OSError as exc:
        raise CliError(f"cannot read config file {path}: {exc}", _CONFIG_EXIT) from exc
    return values


def _merge_options(command: str, args: argparse.Namespace) -> dict[str, Any]:
    table = {opt.name: opt for opt in _OPTIONS[command]}
    merged: dict[str, Any] = {name: opt.default for name, opt in table.items()}
    merged["seedless"] = False
    provided = vars(args)
    config_path = provided.get("config", None)
    if config_path:
        for key, raw in _read_config_file(config_path).items():
            if key == "seedless":
                merged["seedless"] = raw.lower() in ("1", "true", "yes", "on")
                continue
            if key not in table:
                raise CliError(f"unknown config key {key!r} for {command}", _CONFIG_EXIT)
            try:
                merged[key] = table[key].conv(raw)
            except ValueError as exc:
                raise CliError(f"bad config value for {key!r}: {raw!r}", _CONFIG_EXIT) from exc
    for key, value in provided.items():
        if key in ("command",):
            continue
        if key == "seedless":
            merged["seedless"] = bool(value)
            continue
        if key in table and value is not None:
            try:
                merged[key] = table[key].conv(value) if isinstance(value, str) else value
            except ValueError as exc:
                raise CliError(f"bad value for {_flag(key)}: {value!r}", _CONFIG_EXIT) from exc
    return merged


class _Client:
    """POSTs to either an in-process app or a remote base URL."""

    def __init__(self, server: Optional[str]):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server.rstrip("/"), timeout=600.0)
        else:
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service import create_app

            self._client = TestClient(create_app(), raise_server_exceptions=False)

    def post(self, path: str, payload: dict) -> dict:
        response = self._client.post(path, json=payload)
        if response.status_code >= 400:
            try:
                detail = response.json()
            except ValueError:
                detail = {"detail": response.text}
            message = detail.get("detail", str(detail))
            if response.status_code in (400, 422):
                raise CliError(f"configuration rejected: {message}", _CONFIG_EXIT)
            raise CliError(f"numeric failure: {message}", _NUMERIC_EXIT)
        return response.json()


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: str, header: list[str], rows: list[list[Any]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, allow_nan=False)
        fh.write("\n")


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _single_r2(token: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise CliError(
            f"this command needs a single loss value, got {token!r}", _CONFIG_EXIT
        ) from None
    if not 0.0 <= value <= 1.0:
        raise CliError("loss value must lie in [0, 1]", _CONFIG_EXIT)
    return value


def _state_payload(opts: dict[str, Any]) -> dict[str, Any]:
    if (opts["nbar"] is None) == (opts["alpha"] is None):
        raise CliError("exactly one of --nbar and --alpha is required", _CONFIG_EXIT)
    return {"state": opts["state"], "nbar": opts["nbar"], "alpha": opts["alpha"]}


def cmd_curve(opts: dict[str, Any], client: _Client) -> int:
    payload = _state_payload(opts) | {
        "scheme": opts["scheme"],
        "r2": _single_r2(opts["r2"]),
        "phi_points": opts["phi_points"],
    }
    data = client.post("/api/curve", payload)
    out = opts["out"] or _DEFAULT_OUT["curve"]
    if opts["format"] == "json":
        _write_json(out, data)
    else:
        rows = [
            [phi, value, data["scheme"], data["state"], data["nbar"], data["r2"]]
            for phi, value in zip(data["phi"], data["value"])
        ]
        _write_csv(out, ["phi", "value", "scheme", "state", "nbar", "r2"], rows)
    print(f"wrote {out}")
    if opts["svg"]:
        svg = render_svg(
            data["phi"],
            [(data["scheme"], data["value"])],
            f"{data['state']} nbar={data['nbar']:g} r2={data['r2']:g}",
            "phase",
            "observable",
        )
        _write_text(opts["svg"], svg)
        print(f"wrote {opts['svg']}")
    if opts["metrics"]:
        metrics = client.post(
            "/api/peak-metrics",
            payload | {"peak": opts["peak"], "min_prominence": opts["min_prominence"]},
        )
        _write_json(opts["metrics"], metrics)
        print(f"wrote {opts['metrics']}")
    return 0


def cmd_loss_sweep(opts: dict[str, Any], client: _Client) -> int:
    payload = _state_payload(opts) | {
        "scheme": opts["scheme"],
        "r2": opts["r2"],
        "variant": opts["variant"],
        "nbar_threshold": opts["nbar_threshold"],
        "phi_points": opts["phi_points"],
    }
    data = client.post("/api/loss-sweep", payload)
    out = opts["out"] or _DEFAULT_OUT["loss-sweep"]
    if opts["format"] == "json":
        _write_json(out, data)
    else:
        if data["variant"] == "low":
            header = ["r2", "difference", "at_pi", "minimum", "scheme", "state", "nbar"]
            extras = zip(data["at_pi"], data["minimum"])
        else:
            header = ["r2", "difference", "state_at_pi", "cs_at_pi", "scheme", "state", "nbar"]
            extras = zip(data["state_at_pi"], data["cs_at_pi"])
        rows = [
            [r2, diff, e1, e2, data["scheme"], data["state"], data["nbar"]]
            for (r2, diff), (e1, e2) in zip(zip(data["r2"], data["difference"]), extras)
        ]
        _write_csv(out, header, rows)
    print(f"wrote {out}")
    if opts["svg"]:
        svg = render_svg(
            data["r2"],
            [("difference", data["difference"])],
            f"{data['state']} {data['variant']} nbar={data['nbar']:g}",
            "lost fraction r^2",
            "difference",
        )
        _write_text(opts["svg"], svg)
        print(f"wrote {opts['svg']}")
    return 0


def cmd_sensitivity(opts: dict[str, Any], client: _Client) -> int:
    payload = _state_payload(opts) | {
        "scheme": opts["scheme"],
        "r2": _single_r2(opts["r2"]),
        "phi_points": opts["phi_points"],
        "threshold": opts["threshold"],
    }
    data = client.post("/api/sensitivity", payload)
    out = opts["out"] or _DEFAULT_OUT["sensitivity"]
    if opts["format"] == "json":
        _write_json(out, data)
    else:
        rows = [
            [phi, ratio, data["scheme"], data["state"], data["nbar"], data["r2"]]
            for phi, ratio in zip(data["phi"], data["ratio"])
        ]
        _write_csv(out, ["phi", "ratio", "scheme", "state", "nbar", "r2"], rows)
    print(f"wrote {out}")
    if opts["working_points"]:
        summary = {
            "threshold": data["threshold"],
            "intervals": data["working_points"],
            "count": len(data["working_points"]),
            "min_ratio": data["min_ratio"],
        }
        _write_json(opts["working_points"], summary)
        print(f"wrote {opts['working_points']}")
    if opts["svg"]:
        svg = render_svg(
            data["phi"],
            [("ratio", data["ratio"])],
            f"{data['state']} {data['scheme']} nbar={data['nbar']:g}",
            "phase",
            "sensitivity / shot noise",
        )
        _write_text(opts["svg"], svg)
        print(f"wrote {opts['svg']}")
    return 0


def cmd_oracle_check(opts: dict[str, Any], client: _Client) -> int:
    payload = {
        "nbar": opts["nbar"],
        "states": _comma_names(opts["states"]),
        "phi_count": opts["phi_count"],
        "r2_values": _comma_floats(opts["r2_values"]),
        "lmax": opts["lmax"],
    }
    data = client.post("/api/oracle-check", payload)
    out = opts["out"] or _DEFAULT_OUT["oracle-check"]
    if opts["format"] == "json":
        _write_json(out, data)
    else:
        _write_text(out, data["report_text"])
    print(f"wrote {out}")
    print(
        f"max deviation {data['max_deviation']:.3e}; "
        f"{'PASS' if data['passed'] else 'FAIL'}"
    )
    return 0 if data["passed"] else _NUMERIC_EXIT


def cmd_serve(opts: dict[str, Any]) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=opts["host"], port=opts["port"])
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        opts = _merge_options(args.command, args)
        if args.command == "serve":
            return cmd_serve(opts)
        client = _Client(opts["server"])
        if opts["format"] not in ("csv", "json"):
            raise CliError(f"unknown format {opts['format']!r}", _CONFIG_EXIT)
        if args.command == "curve":
            return cmd_curve(opts, client)
        if args.command == "loss-sweep":
            return cmd_loss_sweep(opts, client)
        if args.command == "sensitivity":
            return cmd_sensitivity(opts, client)
        return cmd_oracle_check(opts, client)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
