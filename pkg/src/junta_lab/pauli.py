"""Pauli strings, Pauli-spectrum decomposition and qubit influence.

Conventions used throughout the package:

* Qubits are labelled ``1..n``. Qubit 1 is the most significant bit of a
  computational-basis index, so ``X (x) I`` on two qubits maps ``|00> -> |10>``.
* A Pauli string is a length-``n`` digit tuple over ``{0, 1, 2, 3}`` meaning
  ``I, X, Y, Z`` with ``Y = [[0, -i], [i, 0]]``.
* Dense spectra are stored as complex arrays of shape ``(4,) * n`` indexed
  by the digit tuple.
* Qubit subsets are often passed around as bitmasks built by
  :func:`qubit_mask` (same bit order as basis indices).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np

from .errors import NumericalError, ResourceLimitError, ValidationError

MAX_QUBITS = 10
UNITARY_ATOL = 1e-10
_LABELS = "IXYZ"
# digit -> (x bit, z bit); sigma = i^(x&z) X^x Z^z
_XBIT = (0, 1, 1, 0)
_ZBIT = (0, 0, 1, 1)


def check_qubits(S: Iterable[int], n: int) -> frozenset[int]:
    S = frozenset(int(i) for i in S)
    bad = sorted(i for i in S if not 1 <= i <= n)
    if bad:
        raise ValueError(f"qubit indices {bad} out of range 1..{n}")
    return S


def qubit_mask(S: Iterable[int], n: int) -> int:
    """Bitmask of a 1-based qubit set, qubit 1 being the most significant bit."""
    mask = 0
    for i in check_qubits(S, n):
        mask |= 1 << (n - i)
    return mask


def mask_to_qubits(mask: int, n: int) -> frozenset[int]:
    return frozenset(i for i in range(1, n + 1) if mask >> (n - i) & 1)


@dataclass(frozen=True)
class PauliIndex:
    digits: tuple[int, ...]

    def __post_init__(self):
        digits = tuple(int(d) for d in self.digits)
        if not digits:
            raise ValueError("a Pauli index needs at least one qubit")
        if any(d not in (0, 1, 2, 3) for d in digits):
            raise ValueError(f"Pauli digits must be in {{0,1,2,3}}, got {digits}")
        object.__setattr__(self, "digits", digits)

    @classmethod
    def from_label(cls, label: str) -> PauliIndex:
        try:
            return cls(tuple(_LABELS.index(c) for c in label.upper()))
        except ValueError:
            raise ValueError(f"bad Pauli label {label!r}") from None

    @property
    def n(self) -> int:
        return len(self.digits)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i + 1 for i, d in enumerate(self.digits) if d)

    @property
    def label(self) -> str:
        return "".join(_LABELS[d] for d in self.digits)

    @property
    def x_mask(self) -> int:
        return _pack_bits(_XBIT[d] for d in self.digits)

    @property
    def z_mask(self) -> int:
        return _pack_bits(_ZBIT[d] for d in self.digits)

    def __str__(self) -> str:
        return self.label


def _pack_bits(bits: Iterable[int]) -> int:
    out = 0
    for b in bits:
        out = out << 1 | b
    return out


class DenseUnitary:
    """A ``2**n x 2**n`` complex matrix checked for unitarity on construction.

    The stored matrix is a read-only copy. Unitarity is measured as
    ``||U^dag U - I||_F / sqrt(N)`` and must not exceed ``atol``.
    """

    __slots__ = ("matrix", "n")

    def __init__(self, matrix, *, max_qubits: int = MAX_QUBITS, atol: float = UNITARY_ATOL):
        m = np.array(matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"expected a square matrix, got shape {m.shape}")
        dim = m.shape[0]
        n = dim.bit_length() - 1
        if dim < 2 or 1 << n != dim:
            raise ValidationError(f"dimension {dim} is not 2**n with n >= 1")
        if n > max_qubits:
            raise ResourceLimitError(f"{n} qubits exceeds the cap of {max_qubits}")
        err = unitarity_error(m)
        if not err <= atol:
            raise ValidationError(f"matrix is not unitary: ||U^dag U - I||_F/sqrt(N) = {err:.3e}")
        m.setflags(write=False)
        self.matrix = m
        self.n = n

    @property
    def dim(self) -> int:
        return 1 << self.n

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __repr__(self) -> str:
        return f"DenseUnitary(n={self.n})"


def unitarity_error(m: np.ndarray) -> float:
    dim = m.shape[0]
    return float(np.linalg.norm(m.conj().T @ m - np.eye(dim)) / np.sqrt(dim))


@dataclass(frozen=True)
class SparsePauli:
    """A Pauli tensor in one-nonzero-per-row form: row ``r`` holds ``values[r]`` at column ``cols[r]``."""

    cols: np.ndarray
    values: np.ndarray

    def to_dense(self) -> np.ndarray:
        dim = len(self.cols)
        out = np.zeros((dim, dim), dtype=np.complex128)
        out[np.arange(dim), self.cols] = self.values
        return out


def _parity(a: np.ndarray) -> np.ndarray:
    return (np.bitwise_count(a) & 1).astype(np.int64)


def pauli_matrix(x: PauliIndex | str | Iterable[int]) -> SparsePauli:
    x = _as_index(x)
    dim = 1 << x.n
    rows = np.arange(dim)
    cols = rows ^ x.x_mask
    n_y = x.digits.count(2)
    signs = 1 - 2 * _parity(cols & x.z_mask)
    values = (1j) ** n_y * signs.astype(np.complex128)
    return SparsePauli(cols, values)


def _as_index(x) -> PauliIndex:
    if isinstance(x, PauliIndex):
        return x
    if isinstance(x, str):
        return PauliIndex.from_label(x)
    return PauliIndex(tuple(x))


class PauliSpectrum:
    """Dense table of Pauli coefficients ``coeffs[x] = Tr(sigma_x^dag A) / 2**n``."""

    def __init__(self, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        n = coeffs.ndim
        if n < 1 or coeffs.shape != (4,) * n:
            raise ValueError(f"coefficient table must have shape (4,)*n, got {coeffs.shape}")
        coeffs = coeffs.copy()
        coeffs.setflags(write=False)
        self.coeffs = coeffs
        self.n = n

    def __getitem__(self, x) -> complex:
        x = _as_index(x)
        if x.n != self.n:
            raise ValueError(f"Pauli index on {x.n} qubits, spectrum has {self.n}")
        return complex(self.coeffs[x.digits])

    def __len__(self) -> int:
        return self.coeffs.size

    @cached_property
    def weights(self) -> np.ndarray:
        w = np.abs(self.coeffs) ** 2
        w.setflags(write=False)
        return w

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    def items(self, min_mag: float = 0.0) -> Iterator[tuple[PauliIndex, complex]]:
        """Yield ``(index, coefficient)`` in lexicographic digit order, skipping ``|c| < min_mag``."""
        for flat in np.flatnonzero(np.abs(self.coeffs).ravel() >= min_mag):
            digits = np.unravel_index(flat, self.coeffs.shape)
            yield PauliIndex(tuple(int(d) for d in digits)), complex(self.coeffs.flat[flat])

    @cached_property
    def support_weights(self) -> np.ndarray:
        """``w[mask] = sum of |c_x|^2 over x whose support is exactly mask``."""
        w = self.weights
        for axis in range(self.n):
            identity = np.take(w, [0], axis=axis)
            other = np.take(w, [1, 2, 3], axis=axis).sum(axis=axis, keepdims=True)
            w = np.concatenate([identity, other], axis=axis)
        w = w.reshape(-1)
        w.setflags(write=False)
        return w

    def reconstruct(self) -> np.ndarray:
        dim = 1 << self.n
        out = np.zeros((dim, dim), dtype=np.complex128)
        rows = np.arange(dim)
        for x, c in self.items(min_mag=1e-300):
            p = pauli_matrix(x)
            out[rows, p.cols] += c * p.values
        return out


def _walsh_hadamard(a: np.ndarray, n: int) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along the last axis (length ``2**n``)."""
    lead = a.shape[:-1]
    a = a.reshape(lead + (2,) * n)
    for axis in range(len(lead), len(lead) + n):
        lo = np.take(a, 0, axis=axis)
        hi = np.take(a, 1, axis=axis)
        a = np.stack([lo + hi, lo - hi], axis=axis)
    return a.reshape(lead + (1 << n,))


# local index (2*xbit + zbit) of I, X, Y, Z
_DIGIT_FROM_LOCAL = [0, 2, 3, 1]


def decompose(U: DenseUnitary | np.ndarray) -> PauliSpectrum:
    """Full Pauli spectrum of ``U``.

    For a fixed X-part ``f`` every ``sigma_x`` touches only the entries
    ``U[c ^ f, c]``, so all coefficients sharing ``f`` come out of one
    Walsh-Hadamard transform of that gathered vector.
    """
    m = U.matrix if isinstance(U, DenseUnitary) else np.asarray(U, dtype=np.complex128)
    dim = m.shape[0]
    n = dim.bit_length() - 1
    if n > MAX_QUBITS:
        raise ResourceLimitError(f"{n} qubits exceeds the cap of {MAX_QUBITS}")
    idx = np.arange(dim)
    gathered = m[idx[:, None] ^ idx[None, :], idx[None, :]]  # [f, c] -> U[c^f, c]
    table = _walsh_hadamard(gathered, n)  # [f, z]
    n_y = np.bitwise_count(idx[:, None] & idx[None, :]).astype(np.int64)
    table = table * (-1j) ** (n_y % 4) / dim
    # [f bits..., z bits...] -> interleave per qubit -> (4,)*n
    t = table.reshape((2,) * (2 * n))
    order = [ax for q in range(n) for ax in (q, n + q)]
    t = t.transpose(order).reshape((4,) * n)
    t = t[np.ix_(*([_DIGIT_FROM_LOCAL] * n))] if n else t
    spec = PauliSpectrum(t)
    if isinstance(U, DenseUnitary) and abs(spec.total_weight - 1.0) > 1e-9:
        raise NumericalError(f"spectrum weight {spec.total_weight!r} is not 1")
    return spec


def influence_exact(spec: PauliSpectrum, S: Iterable[int], *, tol: float = 1e-9) -> float:
    """Total squared Pauli weight on strings whose support meets ``S``.

    Summed directly over supports and cross-checked against ``1 - weight on
    strings supported off S``; a mismatch beyond ``tol`` raises.
    """
    S = check_qubits(S, spec.n)
    if not S:
        return 0.0
    mask = qubit_mask(S, spec.n)
    masks = np.arange(1 << spec.n)
    direct = float(spec.support_weights[(masks & mask) != 0].sum())

    outside = tuple(0 if q in S else slice(None) for q in range(1, spec.n + 1))
    complement = 1.0 - float(spec.weights[outside].sum())
    if abs(direct - complement) > tol:
        raise NumericalError(f"influence routes disagree: {direct!r} vs {complement!r}")
    return min(max(direct, 0.0), 1.0)


def influence_table(spec: PauliSpectrum) -> np.ndarray:
    """Influence of every qubit subset, indexed by :func:`qubit_mask`.

    Uses a subset-sum transform over support weights, so the whole table
    costs ``O(4**n)``.
    """
    n = spec.n
    f = np.array(spec.support_weights).reshape((2,) * n)
    for axis in range(n):
        f = np.cumsum(f, axis=axis)
    below = f.reshape(-1)  # below[mask] = weight supported inside mask
    table = spec.total_weight - below[::-1]
    table[0] = 0.0
    return np.clip(table, 0.0, 1.0)
