"""Unitary JSON files: ``{"n": int, "entries": [[re, im], ...]}``, row-major, ``4**n`` pairs.

Floats are written with 17 significant digits so a write/read round trip is
exact.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .pauli import DenseUnitary, unitarity_error


class UnitaryParseError(ValidationError):
    pass


def _g17(x: float) -> str:
    return format(float(x), ".17g")


def dumps_unitary(U) -> str:
    m = np.asarray(getattr(U, "matrix", U), dtype=np.complex128)
    n = m.shape[0].bit_length() - 1
    pairs = ",".join(f"[{_g17(z.real)},{_g17(z.imag)}]" for z in m.reshape(-1))
    return f'{{"n":{n},"entries":[{pairs}]}}\n'


def write_unitary_json(U, path) -> None:
    Path(path).write_text(dumps_unitary(U))


def loads_unitary(text: str, *, source: str = "<string>") -> DenseUnitary:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise UnitaryParseError(f"{source}:{e.lineno}:{e.colno}: {e.msg}") from None
    if not isinstance(doc, dict) or "n" not in doc or "entries" not in doc:
        raise UnitaryParseError(f"{source}: expected an object with keys 'n' and 'entries'")
    n = doc["n"]
    entries = doc["entries"]
    if not isinstance(n, int) or n < 1:
        raise UnitaryParseError(f"{source}: 'n' must be a positive integer")
    if not isinstance(entries, list) or len(entries) != 4**n:
        raise UnitaryParseError(f"{source}: 'entries' must hold 4**n = {4**n} [re, im] pairs")
    try:
        arr = np.array(entries, dtype=np.float64)
    except (TypeError, ValueError):
        raise UnitaryParseError(f"{source}: entries must be numeric [re, im] pairs") from None
    if arr.shape != (4**n, 2):
        raise UnitaryParseError(f"{source}: entries must be [re, im] pairs")
    m = (arr[:, 0] + 1j * arr[:, 1]).reshape(2**n, 2**n)
    try:
        return DenseUnitary(m)
    except ValidationError:
        raise ValidationError(
            f"{source}: matrix is not unitary, ||U^dag U - I||_F/sqrt(N) = {unitarity_error(m):.3e}"
        ) from None


def read_unitary_json(path) -> DenseUnitary:
    path = Path(path)
    return loads_unitary(path.read_text(), source=str(path))
