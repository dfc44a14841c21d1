"""Matrix JSON format: ``{"dim": n, "entries": [[[re, im], ...], ...]}``.

Entries are row-major. Both a nested ``n x n`` layout and a flat list of
``n * n`` pairs are accepted; anything ragged or non-finite is rejected.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import ParseError


def _pair(v, where: str) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        re, im = float(v), 0.0
    elif isinstance(v, (list, tuple)) and len(v) == 2 and all(
        isinstance(c, (int, float)) and not isinstance(c, bool) for c in v
    ):
        re, im = float(v[0]), float(v[1])
    else:
        raise ParseError(f"{where}: expected [re, im], got {v!r}")
    if not (math.isfinite(re) and math.isfinite(im)):
        raise ParseError(f"{where}: non-finite entry {v!r}")
    return complex(re, im)


def matrix_from_obj(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "dim" not in obj or "entries" not in obj:
        raise ParseError('matrix JSON needs "dim" and "entries"')
    n = obj["dim"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"dim must be a positive integer, got {n!r}")
    entries = obj["entries"]
    if not isinstance(entries, list):
        raise ParseError("entries must be a list")
    if len(entries) == n and all(isinstance(r, list) and r and isinstance(r[0], list) for r in entries):
        for i, row in enumerate(entries):
            if len(row) != n:
                raise ParseError(f"row {i} has {len(row)} entries, expected {n}")
        flat = [v for row in entries for v in row]
    elif len(entries) == n * n:
        flat = entries
    else:
        raise ParseError(f"entries do not form a {n}x{n} matrix")
    values = [_pair(v, f"entry {i}") for i, v in enumerate(flat)]
    return np.array(values, dtype=complex).reshape(n, n)


def loads_matrix(text: str) -> np.ndarray:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return matrix_from_obj(obj)


def read_matrix(path) -> np.ndarray:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return loads_matrix(text)


def matrix_to_obj(a) -> dict:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ParseError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ParseError("matrix has non-finite entries")
    return {
        "dim": a.shape[0],
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in a],
    }


def write_matrix(path, a) -> None:
    Path(path).write_text(json.dumps(matrix_to_obj(a)) + "\n")
