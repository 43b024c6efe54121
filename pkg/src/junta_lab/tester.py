"""Tolerant quantum k-junta tester and its random-partition front end."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

from .cj import BACKENDS, UnitaryOracle
from .estimator import EstimateTable, EstimatorConfig, build_estimates, sample_pool
from .partition import QubitPartition, check_rho, random_partition
from .seeding import check_seed, make_rng

GAMMA = 1 / 8
BETA_CONVENTIONS = {"proof_eighth": 8.0, "algorithm_sixteenth": 16.0}

# stream keys under the run seed
_PARTITION_STREAM = 0
_POOL_STREAM = 1


@dataclass(frozen=True)
class TesterConfig:
    __test__ = False  # keep pytest from collecting it

    k: int
    epsilon: float
    rho: float
    seed: int = 0
    l_override: Optional[int] = None
    beta_convention: str = "proof_eighth"
    C: float = 1.0
    backend: str = "analytic"

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError("k must be an integer >= 1")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must be in (0,1)")
        check_rho(self.rho)
        check_seed(self.seed)
        if self.l_override is not None and self.l_override < self.k:
            raise ValueError("l-override must be >= k")
        if self.beta_convention not in BETA_CONVENTIONS:
            raise ValueError(f"beta-convention must be one of {sorted(BETA_CONVENTIONS)}")
        if not self.C >= 1.0:
            raise ValueError("C must be >= 1")
        if self.backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}")

    @property
    def l(self) -> int:
        return self.l_override if self.l_override is not None else 24 * self.k**2

    @property
    def beta(self) -> float:
        return self.epsilon**2 / BETA_CONVENTIONS[self.beta_convention]

    @property
    def gamma(self) -> float:
        return GAMMA

    @property
    def threshold(self) -> float:
        return 9 * self.rho * self.beta / 32

    def estimator_config(self) -> EstimatorConfig:
        return EstimatorConfig(self.rho, self.beta, self.gamma, self.k, self.l, self.C)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Verdict:
    decision: str
    witness: Optional[tuple[int, ...]]
    queries_used: int
    threshold: float
    table_summary: dict
    seed: int
    partition: Optional[tuple[int, ...]] = None

    @property
    def accepted(self) -> bool:
        return self.decision == "accept"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["witness"] = list(self.witness) if self.witness is not None else None
        d["partition"] = list(self.partition) if self.partition is not None else None
        return d

    @classmethod
    def from_dict(cls, d: dict) -> Verdict:
        d = dict(d)
        if d.get("witness") is not None:
            d["witness"] = tuple(d["witness"])
        if d.get("partition") is not None:
            d["partition"] = tuple(d["partition"])
        return cls(**d)


def decide(table: EstimateTable, threshold: float) -> tuple[str, Optional[tuple[int, ...]]]:
    """Accept on the first ``S`` (lexicographic) with a defined ``v_S <= threshold``."""
    for S, est in table.items():
        if est.v is not None and est.v <= threshold:
            return "accept", S
    return "reject", None


def query_count(cfg: TesterConfig) -> int:
    return cfg.estimator_config().m


def run_part_junta_tester(oracle: UnitaryOracle, partition: QubitPartition, cfg: TesterConfig, *, pool_rng=None) -> Verdict:
    if partition.l != cfg.l:
        raise ValueError(f"partition has {partition.l} parts, config derives l = {cfg.l}")
    est_cfg = cfg.estimator_config()
    rng = pool_rng if pool_rng is not None else make_rng(cfg.seed, _POOL_STREAM)
    before = oracle.queries
    pool = sample_pool(oracle, partition, est_cfg, rng, cfg.backend)
    table = build_estimates(pool, cfg.k, cfg.l)
    decision, witness = decide(table, cfg.threshold)
    return Verdict(
        decision=decision,
        witness=witness,
        queries_used=oracle.queries - before,
        threshold=cfg.threshold,
        table_summary=table.summary(),
        seed=cfg.seed,
        partition=partition.assignment,
    )


def run_tolerant_tester(oracle: UnitaryOracle, cfg: TesterConfig) -> Verdict:
    """Draw a random partition of the qubits into ``l`` parts, then run the part-junta tester.

    The partition comes from stream ``(seed, 0)`` and the sample pool from
    ``(seed, 1)``; the verdict records both the seed and the partition.
    """
    partition = random_partition(oracle.n, cfg.l, make_rng(cfg.seed, _PARTITION_STREAM))
    return run_part_junta_tester(oracle, partition, cfg)
