"""JSON formats for matrices, polynomials and reports.

A matrix file is ``{"rows": r, "cols": c, "data": [[re, im], ...]}`` in
row-major order.  A polynomial file is ``{"degree": n, "dim": d,
"coeffs": [matrix, ...]}`` with ``S_1`` first.  Floats are written with 17
significant digits so that reading them back is bit-exact.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .bounds import MatrixPolynomial
from .errors import DimensionMismatch, SemiOpError


class FormatError(SemiOpError, ValueError):
    """Malformed JSON input."""


def matrix_to_obj(M) -> dict:
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {M.shape}")
    return {
        "rows": M.shape[0],
        "cols": M.shape[1],
        "data": [[float(z.real), float(z.imag)] for z in M.reshape(-1)],
    }


def _count(obj: dict, key: str) -> int:
    v = obj.get(key)
    if not isinstance(v, int) or isinstance(v, bool) or v < 0:
        raise FormatError(f"field {key!r} must be a nonnegative integer")
    return v


def matrix_from_obj(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise FormatError("matrix must be a JSON object")
    rows, cols = _count(obj, "rows"), _count(obj, "cols")
    data = obj.get("data")
    if not isinstance(data, list):
        raise FormatError("field 'data' must be a list of [re, im] pairs")
    if len(data) != rows * cols:
        raise FormatError(f"'data' has {len(data)} entries, expected {rows * cols}")
    out = np.empty(rows * cols, dtype=np.complex128)
    for k, pair in enumerate(data):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)):
            raise FormatError(f"data[{k}] is not a [re, im] pair of numbers")
        re, im = float(pair[0]), float(pair[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise FormatError(f"data[{k}] is not finite")
        out[k] = complex(re, im)
    return out.reshape(rows, cols)


def poly_to_obj(P: MatrixPolynomial) -> dict:
    return {"degree": P.degree, "dim": P.dim, "coeffs": [matrix_to_obj(S) for S in P.coeffs]}


def poly_from_obj(obj) -> MatrixPolynomial:
    if not isinstance(obj, dict):
        raise FormatError("polynomial must be a JSON object")
    degree, dim = _count(obj, "degree"), _count(obj, "dim")
    coeffs = obj.get("coeffs")
    if not isinstance(coeffs, list) or len(coeffs) != degree:
        raise FormatError(f"'coeffs' must be a list of {degree} matrices")
    mats = [matrix_from_obj(c) for c in coeffs]
    for k, S in enumerate(mats):
        if S.shape != (dim, dim):
            raise DimensionMismatch(f"S_{k + 1} has shape {S.shape}, expected {(dim, dim)}")
    return MatrixPolynomial(mats)


def _parse(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None


def read_matrix(path) -> np.ndarray:
    return matrix_from_obj(_parse(Path(path).read_text()))


def read_poly(path) -> MatrixPolynomial:
    return poly_from_obj(_parse(Path(path).read_text()))


def write_matrix(path, M) -> None:
    Path(path).write_text(dumps(matrix_to_obj(M)) + "\n")


def write_poly(path, P: MatrixPolynomial) -> None:
    Path(path).write_text(dumps(poly_to_obj(P)) + "\n")


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = f"{x:.17g}"
    if "." not in s and "e" not in s and "n" not in s:
        s += ".0"
    return s


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def _emit(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_emit(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _emit(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [pad + json.dumps(k) + ": " + _emit(v, indent, level + 1) for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """Deterministic JSON with every float printed to 17 significant digits."""
    return _emit(_plain(obj), indent, 0)
