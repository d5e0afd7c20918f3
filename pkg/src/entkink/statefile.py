"""JSON density-matrix files: ``{"dims": [2, 2], "re": [[...]], "im": [[...]]}``."""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .qstate import DensityMatrix, InvalidStateError

__all__ = ["StateFileError", "to_json_obj", "from_json_obj", "load_state", "dump_state", "write_atomic"]


class StateFileError(ValueError):
    """Malformed state file; ``invariant`` names what was violated."""

    def __init__(self, invariant: str, message: str):
        self.invariant = invariant
        super().__init__(f"{invariant}: {message}")


def to_json_obj(rho: DensityMatrix) -> dict:
    m = rho.matrix
    return {"dims": list(rho.dims), "re": m.real.tolist(), "im": m.imag.tolist()}


def _real_grid(obj, key: str) -> np.ndarray:
    rows = obj.get(key)
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise StateFileError("schema", f"'{key}' must be a non-empty list of rows")
    if len({len(r) for r in rows}) != 1:
        raise StateFileError("schema", f"'{key}' has rows of different lengths")
    for r in rows:
        for v in r:
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise StateFileError("schema", f"'{key}' entries must be finite numbers, found {v!r}")
    return np.array(rows, dtype=float)


def from_json_obj(obj) -> DensityMatrix:
    if not isinstance(obj, dict):
        raise StateFileError("schema", "state file must hold a JSON object")
    missing = {"dims", "re", "im"} - set(obj)
    if missing:
        raise StateFileError("schema", f"missing keys {sorted(missing)}")
    dims = obj["dims"]
    if not isinstance(dims, list) or not dims or not all(
        isinstance(d, int) and not isinstance(d, bool) and d > 0 for d in dims
    ):
        raise StateFileError("schema", "'dims' must be a list of positive integers")
    re = _real_grid(obj, "re")
    im = _real_grid(obj, "im")
    if re.shape != im.shape:
        raise StateFileError("schema", f"'re' shape {re.shape} differs from 'im' shape {im.shape}")
    if re.shape[0] != re.shape[1]:
        raise StateFileError("schema", f"matrix must be square, got {re.shape}")
    try:
        return DensityMatrix(re + 1j * im, tuple(dims))
    except InvalidStateError as exc:
        raise StateFileError(exc.invariant, str(exc).split(": ", 1)[-1]) from None


def load_state(path) -> DensityMatrix:
    """Read and validate a state file. ``OSError`` propagates unchanged."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError("json", str(exc)) from None
    return from_json_obj(obj)


def write_atomic(path, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def dump_state(rho: DensityMatrix, path) -> None:
    write_atomic(path, json.dumps(to_json_obj(rho), indent=1) + "\n")
