"""Phase-invariant distance between unitaries and exact distance to juntas."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .pauli import DenseUnitary, check_qubits

_TIE_TOL = 1e-12


def _matrix(A) -> np.ndarray:
    return A.matrix if isinstance(A, DenseUnitary) else np.asarray(A, dtype=np.complex128)


def _aligned_norm(a: np.ndarray, b: np.ndarray, phase: complex) -> float:
    # ||phase * a - b||_F / sqrt(2N); stays accurate near zero, where
    # sqrt(1 - overlap) would amplify rounding in the overlap to ~1e-8
    return min(float(np.linalg.norm(phase * a - b)) / np.sqrt(2 * a.shape[0]), 1.0)


def dist(A, B) -> float:
    """``min_theta ||e^{i theta} A - B||_F / sqrt(2N)``, which equals ``sqrt(1 - |Tr(A^dag B)| / N)``.

    The optimal phase is read off ``Tr(A^dag B)`` and the norm is evaluated directly.
    """
    a, b = _matrix(A), _matrix(B)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    overlap = np.vdot(a, b)
    if abs(overlap) == 0.0:
        return 1.0
    return _aligned_norm(a, b, overlap / abs(overlap))


@dataclass(frozen=True)
class JuntaWitness:
    T: tuple[int, ...]
    distance: float
    core: np.ndarray | None = None


def embed(V: np.ndarray, T: Iterable[int], n: int) -> np.ndarray:
    """``V`` acting on qubits ``T`` tensored with identity on the rest, in qubit order 1..n."""
    T = sorted(check_qubits(T, n))
    rest = [q for q in range(1, n + 1) if q not in T]
    V = np.asarray(V, dtype=np.complex128)
    if V.shape != (1 << len(T),) * 2:
        raise ValueError(f"core has shape {V.shape}, expected {(1 << len(T),) * 2}")
    full = np.kron(V, np.eye(1 << len(rest)))
    order = [q - 1 for q in T + rest]
    perm = list(np.argsort(order))
    t = full.reshape((2,) * (2 * n)).transpose(perm + [n + p for p in perm])
    return t.reshape(1 << n, 1 << n)


def partial_trace_complement(U, T: Iterable[int], n: int | None = None) -> np.ndarray:
    """Trace ``U`` over every qubit not in ``T``; returns a ``2**|T|`` square matrix."""
    m = _matrix(U)
    if n is None:
        n = m.shape[0].bit_length() - 1
    T = sorted(check_qubits(T, n))
    rest = [q for q in range(1, n + 1) if q not in T]
    keep = [q - 1 for q in T]
    drop = [q - 1 for q in rest]
    t = m.reshape((2,) * (2 * n))
    t = t.transpose(keep + drop + [n + q for q in keep] + [n + q for q in drop])
    dt, dr = 1 << len(T), 1 << len(rest)
    return np.einsum("iaja->ij", t.reshape(dt, dr, dt, dr))


def nearest_junta_distance(U, T: Iterable[int], *, with_core: bool = True) -> JuntaWitness:
    """Exact ``min_V dist(U, V (x) I)`` over unitaries ``V`` acting on ``T``.

    With ``M`` the partial trace of ``U`` over the complement of ``T``,
    ``max_V |Tr((V (x) I)^dag U)| = ||M||_*``, attained by the polar unitary of ``M``
    with zero relative phase. The distance is ``sqrt(1 - ||M||_* / N)``, evaluated
    as the Frobenius norm of ``U`` minus that junta.
    """
    m = _matrix(U)
    n = m.shape[0].bit_length() - 1
    T = tuple(sorted(check_qubits(T, n)))
    M = partial_trace_complement(m, T, n)
    w, _, vh = np.linalg.svd(M)
    core = w @ vh
    d = _aligned_norm(embed(core, T, n), m, 1.0)
    return JuntaWitness(T, d, core if with_core else None)


def dist_to_k_juntas(U, k: int) -> tuple[float, JuntaWitness]:
    m = _matrix(U)
    n = m.shape[0].bit_length() - 1
    if not 0 <= k <= n:
        raise ValueError(f"k must be in [0, {n}], got {k}")
    if k == n:
        return 0.0, JuntaWitness(tuple(range(1, n + 1)), 0.0, m.copy())
    best = None
    for T in combinations(range(1, n + 1), k):
        w = nearest_junta_distance(m, T, with_core=False)
        if best is None or w.distance < best.distance - _TIE_TOL:
            best = w
    best = nearest_junta_distance(m, best.T)
    return best.distance, best
