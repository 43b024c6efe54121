"""Command-line front end.

Exit codes: 0 success, 1 internal error, 2 usage or validation error.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path

from .cj import UnitaryOracle, epr_projection_probability, CJState
from .errors import ResourceLimitError, ValidationError
from .estimator import EstimatorConfig, build_estimates, sample_pool
from .harness import (
    SUMMARY_FIELDS,
    SWEEP_FIELDS,
    BudgetError,
    run_trials,
    summarize,
    sweep,
)
from .instances import KINDS, InstanceSpec
from .io import read_unitary_json, write_unitary_json
from .metric import dist_to_k_juntas
from .partition import random_partition
from .pauli import decompose, influence_exact
from .seeding import default_seed, make_rng
from .tester import BETA_CONVENTIONS, TesterConfig

log = logging.getLogger("junta_lab")


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    return [int(t) for t in text.split(",")]


def _float_list(text: str) -> list[float]:
    text = text.strip()
    return [float(t) for t in text.split(",")] if text else []


def _str_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _fmt(x) -> str:
    if isinstance(x, float):
        return str(int(x)) if x.is_integer() else repr(x)
    return "" if x is None else str(x)


def _write_csv(rows: list[dict], fields: list[str], out) -> None:
    w = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({f: _fmt(row.get(f)) for f in fields})


def _open_out(path: str | None):
    if path is None or path == "-":
        return _NoClose(sys.stdout)
    return open(path, "w", newline="")


class _NoClose:
    def __init__(self, f):
        self.f = f

    def __enter__(self):
        return self.f

    def __exit__(self, *exc):
        self.f.flush()


def _seed(args) -> int:
    return args.seed if args.seed is not None else default_seed()


# ---- subcommands -------------------------------------------------------------


def cmd_spectrum(args) -> int:
    U = read_unitary_json(args.unitary)
    spec = decompose(U)
    rows = [
        {"pauli_string": x.label, "re": c.real, "im": c.imag, "mag2": abs(c) ** 2}
        for x, c in spec.items(min_mag=args.min_mag)
    ]
    with _open_out(args.out) as f:
        _write_csv(rows, ["pauli_string", "re", "im", "mag2"], f)
    return 0


def cmd_influence(args) -> int:
    U = read_unitary_json(args.unitary)
    S = _int_list(args.S)
    inf = influence_exact(decompose(U), S)
    p = epr_projection_probability(CJState.of(U), S)
    print(json.dumps({"S": sorted(S), "influence": inf, "epr_probability": p}, sort_keys=True))
    return 0


def cmd_gen(args) -> int:
    spec = InstanceSpec(args.kind, args.n, T=tuple(_int_list(args.T)), target_distance=args.target, seed=_seed(args))
    U = spec.build()
    write_unitary_json(U, args.out)
    label = {"instance": spec.to_dict()}
    if args.label_k is not None:
        label["dist_to_k_juntas"] = dist_to_k_juntas(U, args.label_k)[0]
    print(json.dumps(label, sort_keys=True))
    return 0


def cmd_estimate(args) -> int:
    U = read_unitary_json(args.unitary)
    seed = _seed(args)
    cfg = EstimatorConfig(args.rho, args.beta, args.gamma, args.k, args.l, args.C)
    partition = random_partition(U.n, args.l, make_rng(seed, 0))
    oracle = UnitaryOracle(U)
    pool = sample_pool(oracle, partition, cfg, make_rng(seed, 1), args.backend)
    table = build_estimates(pool, args.k, args.l)
    rows = [{"S": " ".join(map(str, S)), "v": e.v, "count": e.count} for S, e in table.items()]
    with _open_out(args.out) as f:
        f.write(f"# seed={seed} m={pool.m} queries={oracle.queries} partition={list(partition.assignment)}\n")
        _write_csv(rows, ["S", "v", "count"], f)
    return 0


def _instance_from_args(args) -> tuple[InstanceSpec, object]:
    if args.unitary:
        U = read_unitary_json(args.unitary)
        return InstanceSpec("labeled_file", U.n, seed=0, path=str(args.unitary)), U
    if not args.gen:
        raise UsageError("one of --unitary or --gen is required")
    if args.n is None:
        raise UsageError("--n is required with --gen")
    inst_seed = args.instance_seed if args.instance_seed is not None else _seed(args)
    spec = InstanceSpec(args.gen, args.n, T=tuple(_int_list(args.T)), target_distance=args.target, seed=inst_seed)
    return spec, spec.build()


def _tester_config(args, seed: int) -> TesterConfig:
    return TesterConfig(
        k=args.k, epsilon=args.epsilon, rho=args.rho, seed=seed, l_override=args.l_override,
        beta_convention=args.beta_convention, C=args.C, backend=args.backend,
    )


def cmd_test(args) -> int:
    seed = _seed(args)
    cfg = _tester_config(args, seed)
    instance, U = _instance_from_args(args)
    records = run_trials(instance, cfg, args.trials, unitary=U, jobs=args.jobs, timing=args.timing)
    summary = summarize(records)
    if args.label:
        summary["instance_dist_to_k_juntas"] = dist_to_k_juntas(U, args.k)[0]
    fields = SUMMARY_FIELDS + (["instance_dist_to_k_juntas"] if args.label else [])
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "records.jsonl", "w") as f:
            for r in records:
                f.write(r.to_json() + "\n")
        with open(out / "summary.csv", "w", newline="") as f:
            _write_csv([summary], fields, f)
    else:
        for r in records:
            print(r.to_json())
        _write_csv([summary], fields, sys.stderr)
    return 0


def cmd_sweep(args) -> int:
    rows = sweep(
        _float_list(args.epsilons), _float_list(args.rhos), _str_list(args.classes),
        n=args.n, k=args.k, trials=args.trials, seed=_seed(args),
        T=_int_list(args.T) if args.T else None, target_distance=args.target,
        l_override=args.l_override, beta_convention=args.beta_convention, C=args.C,
        backend=args.backend, max_queries=args.max_queries, jobs=args.jobs, timing=args.timing,
    )
    fields = SWEEP_FIELDS + (["wall_time"] if args.timing else [])
    with _open_out(args.out) as f:
        _write_csv(rows, fields, f)
    return 0


# ---- parser ------------------------------------------------------------------


def _add_tester_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l-override", type=int, default=None)
    p.add_argument("--beta-convention", choices=sorted(BETA_CONVENTIONS), default="proof_eighth")
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--backend", choices=["analytic", "statevector"], default="analytic")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--timing", action="store_true", help="record wall-clock times (outputs stop being byte-reproducible)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="junta-lab", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="write the Pauli spectrum of a unitary as CSV")
    p.add_argument("unitary")
    p.add_argument("--out", default=None)
    p.add_argument("--min-mag", type=float, default=1e-12)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("influence", help="exact influence of a qubit set")
    p.add_argument("unitary")
    p.add_argument("--S", required=True, help="comma-separated 1-based qubits")
    p.set_defaults(func=cmd_influence)

    p = sub.add_parser("gen", help="generate a benchmark unitary as JSON")
    p.add_argument("--kind", choices=[k for k in KINDS if k != "labeled_file"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--T", default="")
    p.add_argument("--target", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--label-k", type=int, default=None, help="also report dist_to_k_juntas for this k")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("estimate", help="run the rho-subset influence estimator once")
    p.add_argument("unitary")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--gamma", type=float, default=1 / 8)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--backend", choices=["analytic", "statevector"], default="analytic")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("test", help="run the tolerant junta tester")
    p.add_argument("--unitary", default=None)
    p.add_argument("--gen", choices=["exact_junta", "perturbed_junta", "haar_random"], default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--T", default="")
    p.add_argument("--target", type=float, default=0.0)
    p.add_argument("--instance-seed", type=int, default=None)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--label", action="store_true", help="add the exact dist_to_k_juntas to the summary")
    p.add_argument("--out", default=None, help="directory for records.jsonl and summary.csv")
    _add_tester_flags(p)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("sweep", help="grid of tester runs over epsilon x rho x instance class")
    p.add_argument("--epsilons", required=True)
    p.add_argument("--rhos", required=True)
    p.add_argument("--classes", default="exact_junta,haar_random")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--T", default="")
    p.add_argument("--target", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--max-queries", type=int, default=10**9)
    p.add_argument("--out", default=None)
    _add_tester_flags(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head); not an error
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except (UsageError, ValidationError, ResourceLimitError, BudgetError, ValueError, OSError) as e:
        print(f"junta-lab {args.command}: error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # noqa: BLE001
        log.exception("internal error")
        print(f"junta-lab {args.command}: internal error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
