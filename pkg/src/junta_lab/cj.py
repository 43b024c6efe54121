"""Influence sampling through the Choi-Jamiolkowski state.

One query to ``U`` prepares ``|v(U)> = sum_ij U[i,j] |i>|j> / sqrt(2**n)``
on ``2n`` qubits, qubit ``l`` paired with qubit ``l + n``. Measuring the pairs
``(l, l+n)`` for ``l`` in ``S`` in the Bell basis and reporting whether any
pair left the EPR state yields a bit with mean ``Inf_U[S]``.

Two backends produce that bit:

``statevector``
    Builds the CJ state and measures pair by pair. Each pair's
    EPR-vs-not outcome is drawn from its conditional probability given the
    earlier pairs came out EPR; the first non-EPR pair ends the shot.
``analytic``
    Draws ``Bernoulli(Inf_U[S])`` from the exact Pauli spectrum.

Both consume exactly one uniform ``u`` per shot and return ``0`` iff
``u`` falls below the all-EPR probability, so with a shared stream they agree
shot for shot up to rounding. Each shot is charged as one query.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np

from .pauli import DenseUnitary, PauliSpectrum, check_qubits, decompose, influence_exact, influence_table, qubit_mask
from .seeding import make_rng

BACKENDS = ("statevector", "analytic")
_INV_SQRT2 = 1 / np.sqrt(2)


class QueryCounter:
    """Thread-safe tally of oracle queries."""

    def __init__(self):
        self._lock = threading.Lock()
        self._count = 0

    @property
    def count(self) -> int:
        return self._count

    def add(self, k: int = 1) -> None:
        with self._lock:
            self._count += int(k)


GLOBAL_COUNTER = QueryCounter()


class UnitaryOracle:
    """Black-box handle on a unitary; every state preparation is charged to ``counter``."""

    def __init__(self, unitary: DenseUnitary | np.ndarray, counter: QueryCounter | None = None):
        if not isinstance(unitary, DenseUnitary):
            unitary = DenseUnitary(unitary)
        self.unitary = unitary
        self.counter = counter if counter is not None else QueryCounter()

    @property
    def n(self) -> int:
        return self.unitary.n

    @property
    def queries(self) -> int:
        return self.counter.count

    # simulator-side knowledge used by the analytic backend; not charged
    @cached_property
    def spectrum(self) -> PauliSpectrum:
        return decompose(self.unitary)

    @cached_property
    def influences(self) -> np.ndarray:
        return influence_table(self.spectrum)


@dataclass(frozen=True)
class CJState:
    n: int
    amplitudes: np.ndarray

    @classmethod
    def of(cls, U: DenseUnitary) -> CJState:
        amps = U.matrix.reshape(-1) / np.sqrt(U.dim)
        amps.setflags(write=False)
        return cls(U.n, amps)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * (2 * self.n))


def build_cj(U: UnitaryOracle | DenseUnitary) -> CJState:
    """Prepare ``|v(U)>`` with one query (charged to the oracle, or the global counter)."""
    if isinstance(U, UnitaryOracle):
        U.counter.add(1)
        return CJState.of(U.unitary)
    GLOBAL_COUNTER.add(1)
    return CJState.of(U)


def _projected_weights(state: CJState, S: Iterable[int]) -> list[float]:
    """Squared norms after projecting pairs of ``S`` (ascending) onto EPR one at a time."""
    n = state.n
    order = sorted(check_qubits(S, n))
    pair_axes = [ax for l in order for ax in (l - 1, n + l - 1)]
    rest = [ax for ax in range(2 * n) if ax not in pair_axes]
    psi = state.tensor().transpose(pair_axes + rest).reshape((2, 2) * len(order) + (-1,))
    weights = [float(np.vdot(psi, psi).real)]
    for _ in order:
        psi = (psi[0, 0] + psi[1, 1]) * _INV_SQRT2
        weights.append(float(np.vdot(psi, psi).real))
    return weights


def epr_chain(state: CJState, S: Iterable[int]) -> list[float]:
    """Conditional probability that each pair is found in EPR, given all earlier ones were."""
    w = _projected_weights(state, S)
    return [b / a if a > 0 else 0.0 for a, b in zip(w, w[1:])]


def epr_projection_probability(state: CJState, S: Iterable[int]) -> float:
    return min(max(_projected_weights(state, S)[-1], 0.0), 1.0)


@dataclass
class SamplerBackend:
    mode: str = "analytic"
    rng_seed: int = 0
    rng: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        if self.mode not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}, got {self.mode!r}")
        self.rng = make_rng(self.rng_seed)


def _walk_chain(u: np.ndarray, chain: list[float]) -> np.ndarray:
    alive = np.ones(u.shape, dtype=bool)
    u = u.copy()
    for q in chain:
        alive &= u < q
        if q > 0:
            u = np.where(alive, u / q, u)
    return (~alive).astype(np.uint8)


def sample_influence_bit(oracle: UnitaryOracle, S: Iterable[int], backend: SamplerBackend) -> int:
    S = check_qubits(S, oracle.n)
    u = backend.rng.random()
    if backend.mode == "statevector":
        state = build_cj(oracle)
        for q in epr_chain(state, S):
            if u >= q:
                return 1
            u /= q
        return 0
    oracle.counter.add(1)
    return int(u >= 1.0 - influence_exact(oracle.spectrum, S))


def epr_probability_for(oracle: UnitaryOracle, S: Iterable[int], mode: str) -> tuple[list[float], float]:
    """``(chain, all-EPR probability)`` for one pre-measurement state, without charging queries."""
    if mode == "statevector":
        chain = epr_chain(CJState.of(oracle.unitary), S)
        return chain, float(np.prod(chain)) if chain else 1.0
    p = 1.0 - float(oracle.influences[qubit_mask(S, oracle.n)])
    return [p], p


def bits_from_uniforms(oracle: UnitaryOracle, S: Iterable[int], u: np.ndarray, mode: str) -> np.ndarray:
    """Measurement outcomes for shots whose randomness is ``u``; charges ``len(u)`` queries.

    Every shot starts from the same freshly prepared CJ state, so the
    statevector chain is computed once and walked per shot.
    """
    if mode not in BACKENDS:
        raise ValueError(f"backend must be one of {BACKENDS}, got {mode!r}")
    chain, _ = epr_probability_for(oracle, S, mode)
    oracle.counter.add(len(u))
    return _walk_chain(np.asarray(u, dtype=np.float64), chain)


def sample_influence_bits(oracle: UnitaryOracle, S: Iterable[int], backend: SamplerBackend, size: int) -> np.ndarray:
    S = check_qubits(S, oracle.n)
    return bits_from_uniforms(oracle, S, backend.rng.random(size), backend.mode)
