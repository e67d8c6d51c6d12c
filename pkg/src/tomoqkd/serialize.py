"""State JSON parsing and byte-stable JSON emission.

Output files must be reproducible byte for byte, so floats are always
rendered with %.17g (full float64 round-trip precision) and mappings
are emitted with sorted keys.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .states import AngleParameterization, BellDiagonalState, from_angles, from_probabilities

__all__ = ["format_float", "dumps", "parse_state", "state_to_obj"]


def format_float(value: float) -> str:
    if not math.isfinite(value):
        raise ValueError(f"cannot serialize non-finite float {value!r}")
    return f"{value:.17g}"


def _emit(obj, pieces: list[str], indent: int | None, level: int) -> None:
    if isinstance(obj, (np.bool_, np.integer, np.floating)):
        obj = obj.item()
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        items = sorted(obj.items())
        if not items:
            pieces.append("{}")
            return
        open_, close, sep, pad = _layout("{", "}", indent, level)
        pieces.append(open_)
        for i, (key, value) in enumerate(items):
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            pieces.append(f"{pad}{json.dumps(key)}: ")
            _emit(value, pieces, indent, level + 1)
            if i < len(items) - 1:
                pieces.append(sep)
        pieces.append(close)
    elif isinstance(obj, (list, tuple)):
        if not obj:
            pieces.append("[]")
            return
        open_, close, sep, pad = _layout("[", "]", indent, level)
        pieces.append(open_)
        for i, value in enumerate(obj):
            pieces.append(pad)
            _emit(value, pieces, indent, level + 1)
            if i < len(obj) - 1:
                pieces.append(sep)
        pieces.append(close)
    elif isinstance(obj, bool) or obj is None:
        pieces.append(json.dumps(obj))
    elif isinstance(obj, int):
        pieces.append(str(obj))
    elif isinstance(obj, float):
        pieces.append(format_float(obj))
    elif isinstance(obj, str):
        pieces.append(json.dumps(obj))
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def _layout(open_: str, close: str, indent: int | None, level: int):
    if indent is None:
        return open_, close, ", ", ""
    pad = "\n" + " " * (indent * (level + 1))
    close_pad = "\n" + " " * (indent * level)
    return open_ + "", close_pad + close, ",", pad


def dumps(obj, indent: int | None = None) -> str:
    """Deterministic JSON text: sorted keys, %.17g floats."""
    pieces: list[str] = []
    _emit(obj, pieces, indent, 0)
    return "".join(pieces)


def parse_state(spec) -> BellDiagonalState:
    """Build a state from its JSON form.

    Accepts {"p": [p00, p01, p10, p11]} (nonnegative weights, normalized
    internally) or {"p00": x, "theta": t, "phi": f} with angles in
    radians.  A JSON string is parsed first.
    """
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed state JSON: {exc}") from exc
    if not isinstance(spec, dict):
        raise ValueError(f"state spec must be a JSON object, got {type(spec).__name__}")
    if "p" in spec:
        weights = spec["p"]
        if not isinstance(weights, (list, tuple)) or len(weights) != 4:
            raise ValueError("'p' must be a list of four weights")
        values = []
        for w in weights:
            w = float(w)
            if not math.isfinite(w) or w < -1e-12:
                raise ValueError(f"invalid weight {w!r}")
            values.append(max(w, 0.0))
        total = math.fsum(values)
        if total <= 0.0:
            raise ValueError("weights must have a positive sum")
        return from_probabilities(*(v / total for v in values))
    if {"p00", "theta", "phi"} <= spec.keys():
        return from_angles(
            AngleParameterization(float(spec["p00"]), float(spec["theta"]), float(spec["phi"]))
        )
    raise ValueError("state spec needs either 'p' or the keys 'p00', 'theta', 'phi'")


def state_to_obj(state: BellDiagonalState) -> dict:
    """Probability-form JSON object for a state."""
    return {"p": [state.p00, state.p01, state.p10, state.p11]}
