"""Random qubit partitions, rho-biased subsets and the part-union map phi."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import ResourceLimitError
from .pauli import PauliSpectrum, influence_table
from .seeding import as_rng

MAX_ENUMERATION = 20


@dataclass(frozen=True)
class QubitPartition:
    """Assignment of qubits ``1..n`` to parts ``1..l``; parts may be empty."""

    n: int
    l: int
    assignment: tuple[int, ...]

    def __post_init__(self):
        a = tuple(int(x) for x in self.assignment)
        if len(a) != self.n:
            raise ValueError(f"assignment has {len(a)} entries for n={self.n}")
        if self.l < 1 or any(not 1 <= x <= self.l for x in a):
            raise ValueError(f"part labels must lie in 1..{self.l}")
        object.__setattr__(self, "assignment", a)

    @cached_property
    def parts(self) -> tuple[frozenset[int], ...]:
        return tuple(
            frozenset(q for q, p in enumerate(self.assignment, start=1) if p == j)
            for j in range(1, self.l + 1)
        )

    @cached_property
    def part_masks(self) -> np.ndarray:
        """Qubit bitmask of each part (index ``j - 1`` for part ``j``)."""
        masks = np.zeros(self.l, dtype=np.int64)
        for q, p in enumerate(self.assignment, start=1):
            masks[p - 1] |= 1 << (self.n - q)
        return masks


def check_parts(S: Iterable[int], l: int) -> frozenset[int]:
    S = frozenset(int(i) for i in S)
    bad = sorted(i for i in S if not 1 <= i <= l)
    if bad:
        raise ValueError(f"part indices {bad} out of range 1..{l}")
    return S


def random_partition(n: int, l: int, seed: int | np.random.Generator) -> QubitPartition:
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    labels = as_rng(seed).integers(1, l + 1, size=n)
    return QubitPartition(n, l, tuple(int(x) for x in labels))


def phi(partition: QubitPartition, S: Iterable[int]) -> frozenset[int]:
    S = check_parts(S, partition.l)
    return frozenset().union(*(partition.parts[j - 1] for j in S))


def phi_mask(partition: QubitPartition, S: Iterable[int]) -> int:
    mask = 0
    for j in check_parts(S, partition.l):
        mask |= int(partition.part_masks[j - 1])
    return mask


def check_rho(rho: float, *, allow_endpoints: bool = False) -> float:
    rho = float(rho)
    ok = 0.0 <= rho <= 1.0 if allow_endpoints else 0.0 < rho < 1.0
    if not ok:
        raise ValueError("rho must be in (0,1)" if not allow_endpoints else "rho must be in [0,1]")
    return rho


def rho_biased_subset(
    S: Iterable[int], rho: float, rng: int | np.random.Generator, *, allow_endpoints: bool = False
) -> frozenset[int]:
    """Keep each element of ``S`` independently with probability ``rho``.

    Elements are visited in ascending order, one uniform each.
    """
    rho = check_rho(rho, allow_endpoints=allow_endpoints)
    members = sorted(int(i) for i in S)
    keep = as_rng(rng).random(len(members)) < rho
    return frozenset(m for m, k in zip(members, keep) if k)


def rho_subset_influence_exact(
    spec: PauliSpectrum,
    partition: QubitPartition,
    S: Iterable[int],
    rho: float,
    *,
    allow_endpoints: bool = False,
    table: np.ndarray | None = None,
) -> float:
    """``E_{S' ~rho S} Inf_U[phi(S')]`` by enumerating all ``2**|S|`` subsets.

    ``table`` may carry a precomputed :func:`influence_table` for ``spec``.
    """
    rho = check_rho(rho, allow_endpoints=allow_endpoints)
    members = sorted(check_parts(S, partition.l))
    if len(members) > MAX_ENUMERATION:
        raise ResourceLimitError(f"|S| = {len(members)} exceeds the enumeration bound {MAX_ENUMERATION}")
    if spec.n != partition.n:
        raise ValueError("spectrum and partition disagree on n")
    if table is None:
        table = influence_table(spec)

    masks = np.zeros(1, dtype=np.int64)
    sizes = np.zeros(1, dtype=np.int64)
    for j in members:
        masks = np.concatenate([masks, masks | partition.part_masks[j - 1]])
        sizes = np.concatenate([sizes, sizes + 1])
    s = len(members)
    weights = rho**sizes * (1.0 - rho) ** (s - sizes)
    return float(np.dot(weights, table[masks]))
