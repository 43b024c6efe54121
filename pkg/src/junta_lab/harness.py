"""Repeated tester runs, run records and parameter sweeps."""
from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache
from itertools import product
from typing import Iterable, Optional, Sequence

from . import __version__
from .cj import UnitaryOracle
from .instances import InstanceSpec
from .pauli import DenseUnitary
from .seeding import check_seed
from .tester import TesterConfig, Verdict, query_count, run_tolerant_tester

MAX_SWEEP_CELLS = 200
DEFAULT_QUERY_BUDGET = 10**9


class BudgetError(ValueError):
    pass


@dataclass(frozen=True)
class RunRecord:
    tester: TesterConfig
    instance: InstanceSpec
    verdict: Verdict
    wall_time: Optional[float] = None
    tool_version: str = __version__

    @property
    def seed(self) -> int:
        return self.tester.seed

    def to_json(self) -> str:
        doc = {
            "config": {"tester": self.tester.to_dict(), "instance": self.instance.to_dict()},
            "verdict": self.verdict.to_dict(),
            "wall_time": self.wall_time,
            "tool_version": self.tool_version,
            "seed": self.seed,
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> RunRecord:
        doc = json.loads(line)
        return cls(
            tester=TesterConfig(**doc["config"]["tester"]),
            instance=InstanceSpec.from_dict(doc["config"]["instance"]),
            verdict=Verdict.from_dict(doc["verdict"]),
            wall_time=doc.get("wall_time"),
            tool_version=doc.get("tool_version", __version__),
        )


def replay(record: RunRecord, unitary: DenseUnitary | None = None) -> Verdict:
    U = unitary if unitary is not None else record.instance.build()
    return run_tolerant_tester(UnitaryOracle(U), record.tester)


def _one_trial(U: DenseUnitary, instance: InstanceSpec, cfg: TesterConfig, timing: bool) -> RunRecord:
    start = time.perf_counter()
    verdict = run_tolerant_tester(UnitaryOracle(U), cfg)
    elapsed = time.perf_counter() - start if timing else None
    return RunRecord(cfg, instance, verdict, elapsed)


@lru_cache(maxsize=4)
def _build_cached(instance: InstanceSpec) -> DenseUnitary:
    return instance.build()


def _worker(args) -> str:
    instance_d, cfg_d, timing = args
    instance = InstanceSpec.from_dict(instance_d)
    rec = _one_trial(_build_cached(instance), instance, TesterConfig(**cfg_d), timing)
    return rec.to_json()


def run_trials(
    instance: InstanceSpec,
    cfg: TesterConfig,
    trials: int,
    *,
    unitary: DenseUnitary | None = None,
    jobs: int = 1,
    timing: bool = False,
) -> list[RunRecord]:
    """Run ``trials`` independent testers on one instance; trial ``i`` uses seed ``cfg.seed + i``."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    check_seed(cfg.seed + trials - 1)
    configs = [replace(cfg, seed=cfg.seed + i) for i in range(trials)]
    if jobs > 1 and trials > 1:
        args = [(instance.to_dict(), c.to_dict(), timing) for c in configs]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return [RunRecord.from_json(s) for s in pool.map(_worker, args)]
    U = unitary if unitary is not None else instance.build()
    return [_one_trial(U, instance, c, timing) for c in configs]


def wilson_interval(successes: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    p = successes / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == trials else min(1.0, centre + half)
    return lo, hi


def summarize(records: Sequence[RunRecord]) -> dict:
    trials = len(records)
    accepts = sum(r.verdict.accepted for r in records)
    lo, hi = wilson_interval(accepts, trials)
    return {
        "trials": trials,
        "accepts": accepts,
        "accept_rate": accepts / trials,
        "reject_rate": 1 - accepts / trials,
        "mean_queries": sum(r.verdict.queries_used for r in records) / trials,
        "ci95_low": lo,
        "ci95_high": hi,
    }


SUMMARY_FIELDS = ["trials", "accepts", "accept_rate", "reject_rate", "mean_queries", "ci95_low", "ci95_high"]


def instance_for_class(kind: str, n: int, k: int, seed: int, T: Iterable[int] | None = None,
                       target_distance: float = 0.0) -> InstanceSpec:
    if kind == "haar_random":
        return InstanceSpec("haar_random", n, seed=seed)
    T = tuple(T) if T is not None else tuple(range(1, k + 1))
    if kind == "exact_junta":
        return InstanceSpec("exact_junta", n, T=T, seed=seed)
    if kind == "perturbed_junta":
        return InstanceSpec("perturbed_junta", n, T=T, target_distance=target_distance, seed=seed)
    raise ValueError(f"unsupported sweep instance class {kind!r}")


SWEEP_FIELDS = ["epsilon", "rho", "instance", "trials", "accept_rate", "reject_rate", "queries"]


def sweep(
    epsilons: Sequence[float],
    rhos: Sequence[float],
    classes: Sequence[str],
    *,
    n: int,
    k: int,
    trials: int,
    seed: int = 0,
    T: Iterable[int] | None = None,
    target_distance: float = 0.0,
    l_override: int | None = None,
    beta_convention: str = "proof_eighth",
    C: float = 1.0,
    backend: str = "analytic",
    max_queries: int = DEFAULT_QUERY_BUDGET,
    jobs: int = 1,
    timing: bool = False,
) -> list[dict]:
    """One row per ``(epsilon, rho, class)`` cell with accept/reject rates and the per-run query count."""
    cells = list(product(epsilons, rhos, classes))
    if not cells:
        raise ValueError("sweep grid is empty")
    if len(cells) > MAX_SWEEP_CELLS:
        raise ValueError(f"sweep grid has {len(cells)} cells, limit is {MAX_SWEEP_CELLS}")
    configs = [
        TesterConfig(k=k, epsilon=e, rho=r, seed=seed, l_override=l_override,
                     beta_convention=beta_convention, C=C, backend=backend)
        for e, r, _ in cells
    ]
    estimate = sum(query_count(c) * trials for c in configs)
    if estimate > max_queries:
        raise BudgetError(f"sweep needs an estimated {estimate} queries, budget is {max_queries}")

    T = tuple(T) if T is not None else None
    built: dict[str, tuple[InstanceSpec, DenseUnitary]] = {}
    rows = []
    for (e, r, kind), cfg in zip(cells, configs):
        if kind not in built:
            spec = instance_for_class(kind, n, k, seed, T, target_distance)
            built[kind] = (spec, spec.build())
        spec, U = built[kind]
        start = time.perf_counter()
        records = run_trials(spec, cfg, trials, unitary=U, jobs=jobs)
        s = summarize(records)
        row = {
            "epsilon": e,
            "rho": r,
            "instance": kind,
            "trials": trials,
            "accept_rate": s["accept_rate"],
            "reject_rate": s["reject_rate"],
            "queries": query_count(cfg),
        }
        if timing:
            row["wall_time"] = time.perf_counter() - start
        rows.append(row)
    return rows
