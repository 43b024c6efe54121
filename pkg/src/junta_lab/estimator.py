"""rho-subset influence estimator.

A single pool of ``m`` samples ``(S^i, X^i)`` is shared by every
``S`` of size ``l - k``: ``S^i`` is a rho-biased subset of the parts and
``X^i`` one influence bit for ``phi(S^i)``. The estimate for ``S`` is the
mean bit over pool entries with ``S^i`` contained in ``S``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping

import numpy as np

from .cj import BACKENDS, UnitaryOracle, epr_probability_for
from .partition import QubitPartition, check_rho
from .pauli import mask_to_qubits
from .seeding import as_rng

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EstimatorConfig:
    rho: float
    beta: float
    gamma: float
    k: int
    l: int
    C: float = 1.0

    def __post_init__(self):
        check_rho(self.rho)
        for name in ("beta", "gamma"):
            if not 0.0 < getattr(self, name) < 1.0:
                raise ValueError(f"{name} must be in (0,1)")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.l < self.k:
            raise ValueError("l must be >= k")
        if not self.C >= 1.0:
            raise ValueError("C must be >= 1")

    @property
    def m(self) -> int:
        """``ceil(C k log2(l) / (gamma^2 beta rho (1-rho)^k))``, at least 1."""
        raw = self.C * self.k * math.log2(self.l) / (
            self.gamma**2 * self.beta * self.rho * (1.0 - self.rho) ** self.k
        )
        if not math.isfinite(raw):
            raise OverflowError("sample count is not finite")
        return max(1, math.ceil(raw))


@dataclass(frozen=True)
class SamplePool:
    subsets: np.ndarray  # (m, l) bool; column j-1 is part j
    bits: np.ndarray  # (m,) uint8

    @property
    def m(self) -> int:
        return len(self.bits)

    @property
    def l(self) -> int:
        return self.subsets.shape[1]

    @property
    def records(self) -> list[tuple[frozenset[int], int]]:
        return [
            (frozenset(int(j) + 1 for j in np.flatnonzero(row)), int(x))
            for row, x in zip(self.subsets, self.bits)
        ]

    @classmethod
    def from_records(cls, records, l: int) -> SamplePool:
        subsets = np.zeros((len(records), l), dtype=bool)
        bits = np.zeros(len(records), dtype=np.uint8)
        for i, (S, x) in enumerate(records):
            subsets[i, [j - 1 for j in S]] = True
            bits[i] = x
        return cls(subsets, bits)

    def tobytes(self) -> bytes:
        return self.subsets.tobytes() + self.bits.tobytes()


def sample_pool(
    oracle: UnitaryOracle,
    partition: QubitPartition,
    cfg: EstimatorConfig,
    seed: int | np.random.Generator,
    backend: str = "analytic",
    *,
    m: int | None = None,
) -> SamplePool:
    """Draw ``m`` (default ``cfg.m``) rho-biased part subsets and one influence bit for each.

    Randomness: an ``(m, l)`` block of uniforms for the subsets, then ``m``
    uniforms, one per measurement shot. Exactly ``m`` queries are charged.
    """
    if partition.l != cfg.l:
        raise ValueError(f"partition has {partition.l} parts, config expects {cfg.l}")
    if backend not in BACKENDS:
        raise ValueError(f"backend must be one of {BACKENDS}, got {backend!r}")
    m = cfg.m if m is None else int(m)
    rng = as_rng(seed)
    subsets = rng.random((m, cfg.l)) < cfg.rho
    u = rng.random(m)

    qmasks = np.zeros(m, dtype=np.int64)
    for j, pm in enumerate(partition.part_masks):
        qmasks |= np.where(subsets[:, j], pm, 0)
    # shots with the same phi(S^i) see the same pre-measurement state
    uniq, inverse = np.unique(qmasks, return_inverse=True)
    p_epr = np.empty(len(uniq))
    for idx, qm in enumerate(uniq):
        _, p_epr[idx] = epr_probability_for(oracle, mask_to_qubits(int(qm), oracle.n), backend)
    oracle.counter.add(m)
    bits = (u >= p_epr[inverse]).astype(np.uint8)
    return SamplePool(subsets, bits)


@dataclass(frozen=True)
class Estimate:
    v: float | None  # None when no pool entry fits inside S
    count: int


class EstimateTable:
    """Estimates keyed by ``S`` (sorted tuple of parts), in lexicographic order of ``S``."""

    def __init__(self, entries: Mapping[tuple[int, ...], Estimate], k: int, l: int):
        self.entries = dict(entries)
        self.k = k
        self.l = l

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, S) -> Estimate:
        return self.entries[tuple(sorted(S))]

    def __iter__(self):
        return iter(self.entries)

    def items(self):
        return self.entries.items()

    @property
    def undefined(self) -> list[tuple[int, ...]]:
        return [S for S, e in self.entries.items() if e.v is None]

    def summary(self) -> dict:
        vals = [e.v for e in self.entries.values() if e.v is not None]
        return {
            "min": min(vals) if vals else None,
            "median": float(np.median(vals)) if vals else None,
            "undefined": len(self.entries) - len(vals),
        }


def build_estimates(pool: SamplePool, k: int, l: int) -> EstimateTable:
    """Compute ``v_S`` for every ``S`` of size ``l - k``.

    ``S^i`` is inside ``S`` exactly when it misses the ``k`` parts outside
    ``S``, so each part's membership column is bit-packed once and every
    ``S`` costs ``k`` ORs plus a popcount over the pool.
    """
    if pool.l != l:
        raise ValueError(f"pool has {pool.l} parts, expected {l}")
    if not 1 <= k <= l:
        raise ValueError("need 1 <= k <= l")
    cols = np.packbits(pool.subsets, axis=0)  # (ceil(m/8), l)
    live = np.packbits(np.ones(pool.m, dtype=bool))
    ones = np.packbits(pool.bits.astype(bool))
    parts = range(1, l + 1)
    entries = {}
    for S in combinations(parts, l - k):
        outside = sorted(set(parts).difference(S))
        hit = np.bitwise_or.reduce(cols[:, [j - 1 for j in outside]], axis=1)
        fits = live & ~hit
        count = int(np.bitwise_count(fits).sum())
        if count:
            v = int(np.bitwise_count(fits & ones).sum()) / count
        else:
            v = None
        entries[S] = Estimate(v, count)
    table = EstimateTable(entries, k, l)
    if table.undefined:
        log.warning("%d of %d estimates undefined (no pool entry inside S)", len(table.undefined), len(table))
    return table


@dataclass(frozen=True)
class BandReport:
    n_case1: int
    n_case2: int
    n_gap: int
    violations: tuple[tuple[int, ...], ...]
    total: int

    @property
    def violation_fraction(self) -> float:
        return len(self.violations) / self.total if self.total else 0.0


def estimate_guarantee_check(
    table: EstimateTable, exact: Mapping[tuple[int, ...], float], cfg: EstimatorConfig
) -> BandReport:
    """Check each ``v_S`` against the accuracy band for its exact rho-subset influence ``E``.

    * ``E > rho beta / 3``: need ``(1-gamma) E <= v <= (1+gamma) E``.
    * ``E <= rho beta / 4``: need ``v <= (1+gamma) rho beta / 4`` (upper side only).

    An undefined estimate counts as a violation in either case.
    """
    hi_cut = cfg.rho * cfg.beta / 3
    lo_cut = cfg.rho * cfg.beta / 4
    cap = (1 + cfg.gamma) * lo_cut
    n1 = n2 = gap = 0
    bad = []
    for S, est in table.items():
        E = exact[S]
        v = est.v
        if E > hi_cut:
            n1 += 1
            if v is None or not (1 - cfg.gamma) * E <= v <= (1 + cfg.gamma) * E:
                bad.append(S)
        elif E <= lo_cut:
            n2 += 1
            if v is None or v > cap:
                bad.append(S)
        else:
            gap += 1
    return BandReport(n1, n2, gap, tuple(bad), len(table))
