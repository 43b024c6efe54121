"""Brute-force reference values, deliberately sharing no code path with the fast routines.

Everything here is dense and naive: explicit Kronecker products for Pauli
strings, plain ``itertools`` subset loops, and full ``4**n x 4**n``
projectors on the CJ vector. Sizes are capped accordingly.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from functools import reduce
from itertools import combinations, product

import numpy as np

from .errors import ResourceLimitError

ORACLE_MAX_QUBITS = 5
ORACLE_MAX_PARTS = 16

_PAULIS = [
    np.array([[1, 0], [0, 1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
]


def _dense(U) -> np.ndarray:
    m = np.asarray(getattr(U, "matrix", U), dtype=complex)
    n = int(round(np.log2(m.shape[0])))
    if n > ORACLE_MAX_QUBITS:
        raise ResourceLimitError(f"oracles handle at most {ORACLE_MAX_QUBITS} qubits, got {n}")
    return m


def naive_coefficients(U) -> dict[tuple[int, ...], complex]:
    m = _dense(U)
    n = int(round(np.log2(m.shape[0])))
    out = {}
    for x in product(range(4), repeat=n):
        sigma = reduce(np.kron, [_PAULIS[d] for d in x])
        out[x] = np.trace(sigma.conj().T @ m) / 2**n
    return out


def _influence_from(coeffs: dict, S) -> float:
    S = set(S)
    total = 0.0
    for x, c in coeffs.items():
        support = {i + 1 for i, d in enumerate(x) if d != 0}
        if support & S:
            total += abs(c) ** 2
    return total


def oracle_influence(U, S) -> float:
    return _influence_from(naive_coefficients(U), S)


def oracle_rho_subset_influence(U, partition, S, rho: float) -> float:
    S = sorted(S)
    if len(S) > ORACLE_MAX_PARTS:
        raise ResourceLimitError(f"|S| = {len(S)} exceeds {ORACLE_MAX_PARTS}")
    coeffs = naive_coefficients(U)
    assignment = list(partition.assignment)
    total = 0.0
    for size in range(len(S) + 1):
        for sub in combinations(S, size):
            qubits = {q + 1 for q, p in enumerate(assignment) if p in sub}
            weight = rho**size * (1 - rho) ** (len(S) - size)
            total += weight * _influence_from(coeffs, qubits)
    return total


def _bit(index: np.ndarray, qubit: int, width: int) -> np.ndarray:
    return (index >> (width - qubit)) & 1


def oracle_epr_probability(U, S) -> float:
    """``<v(U)| P |v(U)>`` with ``P`` the dense product of per-pair EPR projectors."""
    m = _dense(U)
    n = int(round(np.log2(m.shape[0])))
    psi = np.zeros(4**n, dtype=complex)
    for i in range(2**n):
        for j in range(2**n):
            psi[i * 2**n + j] = m[i, j] / np.sqrt(2**n)

    width = 2 * n
    a = np.arange(4**n)[:, None]
    b = np.arange(4**n)[None, :]
    P = np.eye(4**n, dtype=complex)
    for l in sorted(S):
        pair = (1 << (width - l)) | (1 << (width - (l + n)))
        same_rest = (a & ~pair) == (b & ~pair)
        a_diag = _bit(a, l, width) == _bit(a, l + n, width)
        b_diag = _bit(b, l, width) == _bit(b, l + n, width)
        P_l = (same_rest & a_diag & b_diag) / 2.0
        P = P @ P_l
    return float(np.real(psi.conj() @ P @ psi))


@dataclass(frozen=True)
class OracleReport:
    case_id: str
    exact_value: float
    estimate: float
    sigma: float
    pass_: bool

    @classmethod
    def check(cls, case_id: str, exact_value: float, estimate: float, sigma: float = 0.0, *, tol: float | None = None):
        bound = 4 * sigma if tol is None else tol
        return cls(case_id, float(exact_value), float(estimate), float(sigma), abs(estimate - exact_value) <= bound)

    def to_json(self) -> str:
        d = asdict(self)
        d["pass"] = d.pop("pass_")
        return json.dumps(d, sort_keys=True)
