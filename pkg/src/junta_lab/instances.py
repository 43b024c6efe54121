"""Seeded benchmark unitaries with known junta structure."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from .errors import CalibrationError
from .metric import dist_to_k_juntas, embed
from .pauli import MAX_QUBITS, DenseUnitary, check_qubits
from .seeding import make_rng


KINDS = ("exact_junta", "perturbed_junta", "haar_random", "labeled_file")
CALIBRATION_TOL = 0.005
MAX_BISECTION_STEPS = 60
_MAX_TARGET = 0.9


def haar_matrix(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def gen_haar(n: int, seed: int) -> DenseUnitary:
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"n must be in [1, {MAX_QUBITS}], got {n}")
    return DenseUnitary(haar_matrix(1 << n, make_rng(seed)))


def _junta_matrix(n: int, T: frozenset[int], seed: int) -> np.ndarray:
    V = haar_matrix(1 << len(T), make_rng(seed, 0))
    return embed(V, T, n)


def gen_exact_junta(n: int, T: Iterable[int], seed: int) -> DenseUnitary:
    T = check_qubits(T, n)
    return DenseUnitary(_junta_matrix(n, T, seed))


def gen_perturbed_junta(n: int, T: Iterable[int], target_distance: float, seed: int) -> DenseUnitary:
    """``exp(i delta H) (V_T (x) I)`` with ``delta`` bisected to hit a target junta distance.

    ``H`` is a seeded random Hermitian matrix scaled to ``||H||_F / sqrt(N) = 1``.
    The calibrated quantity is ``dist_to_k_juntas(result, |T|)``.
    """
    T = check_qubits(T, n)
    if not 0.0 <= target_distance <= _MAX_TARGET:
        raise ValueError(f"target_distance must be in [0, {_MAX_TARGET}], got {target_distance}")
    if target_distance > 0.0 and len(T) == n:
        raise ValueError("every unitary is a junta on all n qubits; a positive target distance is unreachable")
    J = _junta_matrix(n, T, seed)
    if target_distance == 0.0:
        return DenseUnitary(J)

    dim = 1 << n
    rng = make_rng(seed, 1)
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    H = (a + a.conj().T) / 2
    H /= np.linalg.norm(H) / np.sqrt(dim)
    evals, evecs = np.linalg.eigh(H)
    k = len(T)

    def at(delta: float) -> tuple[np.ndarray, float]:
        m = (evecs * np.exp(1j * delta * evals)) @ evecs.conj().T @ J
        return m, dist_to_k_juntas(m, k)[0]

    lo, hi = 0.0, 0.25
    m, d = at(hi)
    while d < target_distance:
        lo, hi = hi, 2 * hi
        if hi > 64:
            raise CalibrationError(f"could not bracket target distance {target_distance}")
        m, d = at(hi)
    for _ in range(MAX_BISECTION_STEPS):
        if abs(d - target_distance) <= CALIBRATION_TOL:
            return DenseUnitary(m)
        mid = (lo + hi) / 2
        m, d = at(mid)
        if d < target_distance:
            lo = mid
        else:
            hi = mid
    if abs(d - target_distance) <= CALIBRATION_TOL:
        return DenseUnitary(m)
    raise CalibrationError(
        f"calibration to {target_distance} failed after {MAX_BISECTION_STEPS} steps (last {d:.4f})"
    )


@dataclass(frozen=True)
class InstanceSpec:
    """Provenance of a benchmark unitary; :meth:`build` regenerates it bit-for-bit."""

    kind: str
    n: int
    T: tuple[int, ...] = ()
    k: int | None = None
    target_distance: float = 0.0
    seed: int = 0
    path: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not 0.0 <= self.target_distance < 1.0:
            raise ValueError("target_distance must be in [0, 1)")
        object.__setattr__(self, "T", tuple(sorted(int(t) for t in self.T)))
        if self.k is None and self.kind != "haar_random":
            object.__setattr__(self, "k", len(self.T))

    def build(self) -> DenseUnitary:
        if self.kind == "exact_junta":
            return gen_exact_junta(self.n, self.T, self.seed)
        if self.kind == "perturbed_junta":
            return gen_perturbed_junta(self.n, self.T, self.target_distance, self.seed)
        if self.kind == "haar_random":
            return gen_haar(self.n, self.seed)
        from .io import read_unitary_json

        if self.path is None:
            raise ValueError("labeled_file instances need a path")
        return read_unitary_json(self.path)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["T"] = list(self.T)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> InstanceSpec:
        d = dict(d)
        d["T"] = tuple(d.get("T", ()))
        return cls(**d)
