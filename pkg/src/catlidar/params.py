"""Token grammars shared by the command line and the HTTP layer.

States:  cs | ecss | sfcs | custom:c1,c2,c3,c4
Schemes: z | z4n:<n> | z4n-agg | z4n-agg:include-zero
Loss:    a single float in [0, 1] or grid:lo:hi:step
"""

from __future__ import annotations

import numpy as np

from .detection import DetectionScheme
from .errors import SimulatorError
from .states import PRESET_SHAPES, StateSpec, solve_amplitude


class TokenError(SimulatorError, ValueError):
    """A textual parameter does not match its grammar."""


def parse_state_token(token: str) -> tuple[str, tuple[float, float, float, float]]:
    """Returns (label, weights).  The label round-trips into output tables."""
    token = token.strip()
    if token in PRESET_SHAPES:
        return token, PRESET_SHAPES[token]
    if token.startswith("custom:"):
        parts = token[len("custom:"):].split(",")
        if len(parts) != 4:
            raise TokenError("custom state needs exactly four comma-separated weights")
        try:
            weights = tuple(float(p) for p in parts)
        except ValueError as exc:
            raise TokenError(f"bad custom weight in {token!r}") from exc
        if all(w == 0.0 for w in weights):
            raise TokenError("custom state needs at least one nonzero weight")
        return token, weights
    raise TokenError(
        f"unknown state {token!r}; expected cs, ecss, sfcs or custom:c1,c2,c3,c4"
    )


def parse_scheme_token(token: str) -> DetectionScheme:
    token = token.strip()
    if token == "z":
        return DetectionScheme.z()
    if token.startswith("z4n-agg"):
        rest = token[len("z4n-agg"):]
        if rest == "":
            return DetectionScheme.aggregate(include_zero=False)
        if rest == ":include-zero":
            return DetectionScheme.aggregate(include_zero=True)
        raise TokenError(f"unknown aggregate qualifier in {token!r}")
    if token.startswith("z4n:"):
        try:
            n = int(token[len("z4n:"):])
        except ValueError as exc:
            raise TokenError(f"bad projector index in {token!r}") from exc
        if n < 0:
            raise TokenError("projector index must be nonnegative")
        return DetectionScheme.single(n)
    raise TokenError(
        f"unknown scheme {token!r}; expected z, z4n:<n>, z4n-agg or z4n-agg:include-zero"
    )


def parse_r2_token(token) -> tuple[bool, np.ndarray]:
    """Returns (is_grid, values); a bare float yields a single-element array."""
    if isinstance(token, (int, float)):
        values = np.array([float(token)])
        is_grid = False
    else:
        token = str(token).strip()
        if token.startswith("grid:"):
            parts = token.split(":")
            if len(parts) != 4:
                raise TokenError("loss grid must look like grid:lo:hi:step")
            try:
                lo, hi, step = (float(p) for p in parts[1:])
            except ValueError as exc:
                raise TokenError(f"bad number in {token!r}") from exc
            if step <= 0.0 or hi < lo:
                raise TokenError("loss grid needs step > 0 and hi >= lo")
            values = np.arange(lo, hi + 0.5 * step, step)
            is_grid = True
        else:
            try:
                values = np.array([float(token)])
            except ValueError as exc:
                raise TokenError(f"bad loss value {token!r}") from exc
            is_grid = False
    if np.any(values < 0.0) or np.any(values > 1.0):
        raise TokenError("loss values must lie in [0, 1]")
    return is_grid, values


def resolve_state(token: str, nbar, alpha) -> tuple[str, StateSpec, float]:
    """Build the state from a token plus exactly one of nbar / alpha.

    Returns (label, spec, nbar_actual).
    """
    from .states import make_state, mean_photon_number

    label, weights = parse_state_token(token)
    if (nbar is None) == (alpha is None):
        raise TokenError("exactly one of nbar and alpha must be given")
    if nbar is not None:
        if nbar <= 0:
            raise TokenError("nbar must be positive")
        spec = make_state(*weights, solve_amplitude(weights, float(nbar)))
        return label, spec, float(nbar)
    spec = make_state(*weights, complex(alpha))
    return label, spec, mean_photon_number(spec)
