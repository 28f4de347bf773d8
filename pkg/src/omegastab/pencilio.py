"""JSON pencil/result files and whitespace .dat plot rows.

PencilFile schema: {"n", "field", "A_re", "A_im", "B_re", "B_im"} with
row-major n^2 arrays; the imaginary arrays are omitted for real pencils.
Floats are serialized with Python's shortest round-trip repr, so parsing a
written file reproduces the arrays bitwise.  Plot rows are "<index> <value>"
lines with 17 significant digits, one per sweep point.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .pencil import EigKind, Field, GeneralizedEigenvalue, Pencil

__all__ = [
    "PencilParseError",
    "pencil_to_dict",
    "pencil_from_dict",
    "write_pencil",
    "read_pencil",
    "matrix_to_fields",
    "matrix_from_fields",
    "eigenvalue_to_dict",
    "write_result",
    "read_result",
    "write_dat",
    "read_dat",
]


class PencilParseError(ValueError):
    """Malformed pencil or result file contents."""


def matrix_to_fields(M: np.ndarray, prefix: str, real: bool) -> dict[str, list[float]]:
    out = {f"{prefix}_re": [float(v) for v in np.asarray(M).real.ravel(order="C")]}
    if not real:
        out[f"{prefix}_im"] = [float(v) for v in np.asarray(M).imag.ravel(order="C")]
    return out


def matrix_from_fields(data: dict, prefix: str, n: int, real: bool) -> np.ndarray:
    try:
        re = np.asarray(data[f"{prefix}_re"], dtype=float)
    except KeyError as exc:
        raise PencilParseError(f"missing field {prefix}_re") from exc
    if re.shape != (n * n,):
        raise PencilParseError(f"{prefix}_re must have length {n * n}, got {re.shape}")
    if real:
        if f"{prefix}_im" in data:
            raise PencilParseError(f"real pencil must not carry {prefix}_im")
        return re.reshape(n, n)
    try:
        im = np.asarray(data[f"{prefix}_im"], dtype=float)
    except KeyError as exc:
        raise PencilParseError(f"missing field {prefix}_im") from exc
    if im.shape != (n * n,):
        raise PencilParseError(f"{prefix}_im must have length {n * n}, got {im.shape}")
    return (re + 1j * im).reshape(n, n)


def pencil_to_dict(P: Pencil) -> dict[str, Any]:
    real = P.field is Field.REAL
    out: dict[str, Any] = {"n": P.n, "field": P.field.value}
    out.update(matrix_to_fields(P.A, "A", real))
    out.update(matrix_to_fields(P.B, "B", real))
    return out


def pencil_from_dict(data: dict) -> Pencil:
    if not isinstance(data, dict):
        raise PencilParseError("pencil file must contain a JSON object")
    try:
        n = int(data["n"])
        field = Field(data["field"])
    except (KeyError, ValueError, TypeError) as exc:
        raise PencilParseError(f"bad pencil header: {exc}") from exc
    if n < 1:
        raise PencilParseError(f"n must be positive, got {n}")
    real = field is Field.REAL
    A = matrix_from_fields(data, "A", n, real)
    B = matrix_from_fields(data, "B", n, real)
    if not (np.all(np.isfinite(A.real)) and np.all(np.isfinite(B.real))):
        raise PencilParseError("non-finite entries in pencil file")
    return Pencil(A, B, field)


def write_pencil(path, P: Pencil):
    with open(path, "w") as fh:
        json.dump(pencil_to_dict(P), fh)
        fh.write("\n")


def read_pencil(path) -> Pencil:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise PencilParseError(f"invalid JSON in {path}: {exc}") from exc
    return pencil_from_dict(data)


def eigenvalue_to_dict(eig: GeneralizedEigenvalue) -> dict[str, Any]:
    out = {
        "a_re": float(eig.a.real),
        "a_im": float(eig.a.imag),
        "b_re": float(eig.b.real),
        "b_im": float(eig.b.imag),
        "kind": eig.kind.value,
    }
    if eig.kind is EigKind.FINITE:
        v = eig.value
        out["value_re"] = float(v.real)
        out["value_im"] = float(v.imag)
    return out


def eigenvalue_from_dict(data: dict) -> GeneralizedEigenvalue:
    return GeneralizedEigenvalue(
        complex(data["a_re"], data["a_im"]),
        complex(data["b_re"], data["b_im"]),
        EigKind(data["kind"]),
    )


def write_result(path, payload: dict):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def read_result(path) -> dict:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise PencilParseError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise PencilParseError("result file must contain a JSON object")
    return data


def write_dat(path, rows):
    """Rows of (index, value) as '<index> <value>' lines, 17 significant digits."""
    with open(path, "w") as fh:
        for index, value in rows:
            fh.write(f"{int(index)} {value:.17g}\n")


def read_dat(path) -> list[tuple[int, float]]:
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise PencilParseError(f"malformed .dat row: {line!r}")
            out.append((int(parts[0]), float(parts[1])))
    return out
