"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are collected and repeated in the pytest terminal summary. Running
this file directly (``python tests/test_acceptance.py``) prints them as well.
"""
import math
import sys
from itertools import combinations

import numpy as np
import pytest

from junta_lab.cj import CJState, SamplerBackend, UnitaryOracle, epr_projection_probability, sample_influence_bits
from junta_lab.cli import main as cli_main
from junta_lab.estimator import EstimatorConfig, build_estimates, estimate_guarantee_check, sample_pool
from junta_lab.instances import gen_exact_junta, gen_haar, gen_perturbed_junta
from junta_lab.metric import dist_to_k_juntas, nearest_junta_distance
from junta_lab.oracles import OracleReport, oracle_influence, oracle_rho_subset_influence
from junta_lab.partition import QubitPartition, phi, random_partition, rho_subset_influence_exact
from junta_lab.pauli import DenseUnitary, decompose, influence_table, qubit_mask
from junta_lab.seeding import make_rng
from junta_lab.tester import TesterConfig, run_tolerant_tester

RESULTS: list[str] = []


def report(num: int, ok: bool, detail: str) -> None:
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)


def nonempty_subset(rng, n):
    while True:
        S = {i for i in range(1, n + 1) if rng.random() < 0.5}
        if S:
            return S


def hand_m(C, k, l, gamma, beta, rho):
    return math.ceil(C * k * (math.log(l) / math.log(2)) / (gamma**2 * beta * rho * (1 - rho) ** k))


def test_criterion_1_unbiased_bits():
    N = 100_000
    rng = make_rng(1001)
    worst = 0.0
    failures = []
    for case in range(20):
        n = 1 + case % 4
        U = DenseUnitary(gen_haar(n, 2000 + case).matrix)
        S = nonempty_subset(rng, n)
        p = oracle_influence(U, S)
        tol = 4 * math.sqrt(p * (1 - p) / N)
        means = {}
        for mode in ("analytic", "statevector"):
            oracle = UnitaryOracle(U)
            bits = sample_influence_bits(oracle, S, SamplerBackend(mode, 10 * case + (mode == "statevector")), N)
            assert oracle.queries == N
            means[mode] = bits.mean()
            r = OracleReport.check(f"c1-{case}-{mode}", p, means[mode], tol=tol)
            worst = max(worst, abs(means[mode] - p) / tol if tol else 0.0)
            if not r.pass_:
                failures.append(r.to_json())
        if abs(means["analytic"] - means["statevector"]) > 4 * math.sqrt(2 * p * (1 - p) / N):
            failures.append(f"backend gap case {case}")
    report(1, not failures, f"20 cases x 2 backends, N=1e5, worst |mean-p|/tol = {worst:.2f}")
    assert not failures, failures


def test_criterion_2_statevector_fidelity():
    rng = make_rng(1002)
    worst = 0.0
    for case in range(50):
        n = 1 + case % 4
        U = gen_haar(n, 3000 + case)
        S = nonempty_subset(rng, n) if case % 5 else set()
        gap = abs(epr_projection_probability(CJState.of(U), S) - (1 - oracle_influence(U, S)))
        worst = max(worst, gap)
    ok = worst <= 1e-9
    report(2, ok, f"50 cases, max |P_epr - (1 - Inf)| = {worst:.2e} (tol 1e-9)")
    assert ok


def test_criterion_3_sandwich():
    rng = make_rng(1003)
    violations = 0
    tightest = math.inf
    for case in range(100):
        n = 1 + case % 4
        l = 1 + int(rng.integers(1, 8))
        U = gen_haar(n, 4000 + case)
        spec = decompose(U)
        part = random_partition(n, l, make_rng(1003, case))
        S = nonempty_subset(rng, l)
        rho = float(rng.uniform(0.01, 0.99))
        inf = oracle_influence(U, phi(part, S))
        E = rho_subset_influence_exact(spec, part, S, rho)
        lo, hi = rho / 3 * inf, inf
        if not (lo - 1e-9 <= E <= hi + 1e-9):
            violations += 1
        if inf > 0:
            tightest = min(tightest, (E - lo) / inf)
    ok = violations == 0
    report(3, ok, f"100 cases (n<=4, l<=8), violations = {violations}, min (E - rho/3 Inf)/Inf = {tightest:.3f}")
    assert ok


def test_criterion_4_close_implies_small_influence():
    rng = make_rng(1004)
    violations = 0
    worst_ratio = 0.0
    for case in range(100):
        n = 2 + case % 3
        size = 1 + int(rng.integers(0, n - 1))
        T = {int(t) for t in rng.choice(np.arange(1, n + 1), size=size, replace=False)}
        target = float(rng.uniform(0.02, 0.5))
        U = gen_perturbed_junta(n, T, target, 5000 + case)
        eps = nearest_junta_distance(U, T).distance
        inf = oracle_influence(U, set(range(1, n + 1)) - T)
        if inf > 2 * eps**2 + 1e-9:
            violations += 1
        worst_ratio = max(worst_ratio, inf / (2 * eps**2))
    ok = violations == 0
    report(4, ok, f"100 perturbed juntas, violations = {violations}, max Inf(T^c)/(2 eps^2) = {worst_ratio:.4f}")
    assert ok


def test_criterion_5_small_influence_implies_close():
    rng = make_rng(1005)
    violations = 0
    slack = math.inf
    for case in range(100):
        n = 2 + case % 4
        k = 1 + case % 2
        kind = case % 3
        if kind == 0:
            U = gen_haar(n, 6000 + case)
        else:
            T = set(range(1, k + 1))
            U = gen_perturbed_junta(n, T, float(rng.uniform(0.05, 0.6)) if kind == 1 else 0.0, 6000 + case)
        table = influence_table(decompose(U))
        full = (1 << n) - 1
        min_inf = min(
            float(table[full ^ qubit_mask(T, n)]) for size in range(k + 1) for T in combinations(range(1, n + 1), size)
        )
        eps = math.sqrt(2 * max(min_inf, 0.0))
        d = dist_to_k_juntas(U, k)[0]
        if d > eps + 1e-9:
            violations += 1
        slack = min(slack, eps - d)
    ok = violations == 0
    report(5, ok, f"100 instances (n<=5, k<=2), eps = sqrt(2 min Inf), violations = {violations}, min eps - dist = {slack:.2e}")
    assert ok


def test_criterion_6_query_accounting():
    configs = [
        dict(k=1, epsilon=0.5, rho=0.5),
        dict(k=1, epsilon=0.6, rho=0.5, l_override=24),
        dict(k=1, epsilon=0.8, rho=0.3, l_override=6),
        dict(k=1, epsilon=0.7, rho=0.7, l_override=4, C=2.0),
        dict(k=2, epsilon=0.9, rho=0.5, l_override=8),
        dict(k=2, epsilon=0.9, rho=0.2, l_override=5, beta_convention="algorithm_sixteenth"),
        dict(k=1, epsilon=0.95, rho=0.9, l_override=3),
        dict(k=1, epsilon=0.4, rho=0.6, l_override=10, backend="statevector"),
        dict(k=3, epsilon=0.99, rho=0.5, l_override=6),
        dict(k=1, epsilon=0.75, rho=0.1, l_override=12, C=1.5),
    ]
    mismatches = []
    for i, kw in enumerate(configs):
        cfg = TesterConfig(seed=i, **kw)
        div = 16.0 if kw.get("beta_convention") == "algorithm_sixteenth" else 8.0
        expected = hand_m(kw.get("C", 1.0), cfg.k, cfg.l, 1 / 8, cfg.epsilon**2 / div, cfg.rho)
        oracle = UnitaryOracle(gen_haar(3, 7000 + i))
        verdict = run_tolerant_tester(oracle, cfg)
        if not (oracle.queries == verdict.queries_used == expected):
            mismatches.append((i, oracle.queries, expected))
    ok = not mismatches
    report(6, ok, f"10 configs, counter == closed-form m exactly, mismatches = {mismatches}")
    assert ok


def test_criterion_7_end_to_end():
    n, k, trials = 6, 1, 30
    cfg = TesterConfig(k=k, epsilon=0.6, rho=0.5, l_override=24)
    floor = 2 / 3 - 1.959963984540054 * math.sqrt((2 / 3) * (1 / 3) / trials)
    accepts = 0
    rejects = 0
    min_far = math.inf
    for i in range(trials):
        J = gen_exact_junta(n, {3}, 8000 + i)
        accepts += run_tolerant_tester(UnitaryOracle(J), TesterConfig(**{**cfg.to_dict(), "seed": i})).accepted
        H = gen_haar(n, 9000 + i)
        far = dist_to_k_juntas(H, k)[0]
        assert far > 0.6, f"Haar instance {i} not certified far ({far:.3f})"
        min_far = min(min_far, far)
        rejects += not run_tolerant_tester(UnitaryOracle(H), TesterConfig(**{**cfg.to_dict(), "seed": 100 + i})).accepted
    ok = accepts / trials >= floor and rejects / trials >= floor
    report(
        7, ok,
        f"accept rate on juntas {accepts}/{trials}, reject rate on Haar {rejects}/{trials} "
        f"(min certified dist {min_far:.3f}), floor {floor:.3f}",
    )
    assert ok


def test_criterion_8_band_report():
    part = QubitPartition(2, 4, (1, 2))
    U = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    cfg = EstimatorConfig(rho=0.5, beta=0.045, gamma=1 / 8, k=1, l=4, C=1.0)
    exact = {S: oracle_rho_subset_influence(U, part, S, 0.5) for S in combinations(range(1, 5), 3)}
    bad = total = case1 = case2 = small_bad = 0
    small_m = cfg.m // 100  # C/100 is below the C >= 1 floor, so shrink m directly
    for seed in range(20):
        table = build_estimates(sample_pool(UnitaryOracle(U), part, cfg, make_rng(8000, seed)), 1, 4)
        r = estimate_guarantee_check(table, exact, cfg)
        bad += len(r.violations)
        total += r.total
        case1 += r.n_case1
        case2 += r.n_case2
        small = build_estimates(sample_pool(UnitaryOracle(U), part, cfg, make_rng(8001, seed), m=small_m), 1, 4)
        small_bad += len(estimate_guarantee_check(small, exact, cfg).violations)
    frac = bad / total
    ok = frac <= 0.05
    report(
        8, ok,
        f"C = {cfg.C}, m = {cfg.m}, 20 pools, {case1} case-1 / {case2} case-2 entries, violation fraction = {frac:.3f}; "
        f"diagnostic m = {small_m}: {small_bad / total:.3f}",
    )
    assert ok


def test_criterion_9_determinism(tmp_path):
    test_args = ["test", "--gen", "perturbed_junta", "--n", "4", "--T", "2", "--target", "0.2",
                 "--k", "1", "--epsilon", "0.6", "--rho", "0.5", "--l-override", "8", "--trials", "6", "--seed", "5"]
    sweep_args = ["sweep", "--epsilons", "0.5,0.7", "--rhos", "0.3,0.5", "--classes", "exact_junta,haar_random",
                  "--n", "3", "--k", "1", "--l-override", "6", "--trials", "3", "--seed", "9"]
    outputs = []
    for run, jobs in enumerate(("1", "1", "2")):
        d = tmp_path / f"run{run}"
        assert cli_main(test_args + ["--jobs", jobs, "--out", str(d)]) == 0
        assert cli_main(sweep_args + ["--jobs", jobs, "--out", str(d / "sweep.csv")]) == 0
        outputs.append({p.name: p.read_bytes() for p in sorted(d.iterdir())})
    ok = outputs[0] == outputs[1] == outputs[2]
    report(9, ok, f"test + sweep rerun 3x (jobs 1, 1, 2): files {sorted(outputs[0])} byte-identical = {ok}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
