import json

import pytest

from junta_lab.harness import (
    RunRecord,
    instance_for_class,
    replay,
    run_trials,
    summarize,
    sweep,
    wilson_interval,
)
from junta_lab.instances import InstanceSpec
from junta_lab.tester import TesterConfig, query_count

CFG = TesterConfig(k=1, epsilon=0.6, rho=0.5, seed=5, l_override=6)


def test_record_roundtrip_and_replay():
    inst = InstanceSpec("perturbed_junta", 3, T=(1,), target_distance=0.2, seed=1)
    rec = run_trials(inst, CFG, 1)[0]
    again = RunRecord.from_json(rec.to_json())
    assert again == rec
    assert again.to_json() == rec.to_json()
    assert replay(again) == rec.verdict
    doc = json.loads(rec.to_json())
    assert set(doc) == {"config", "verdict", "wall_time", "tool_version", "seed"}


def test_trials_use_consecutive_seeds():
    recs = run_trials(InstanceSpec("haar_random", 2, seed=0), CFG, 3)
    assert [r.seed for r in recs] == [5, 6, 7]
    assert all(r.verdict.queries_used == query_count(CFG) for r in recs)


def test_timing_flag():
    inst = InstanceSpec("haar_random", 2, seed=0)
    assert run_trials(inst, CFG, 1)[0].wall_time is None
    assert run_trials(inst, CFG, 1, timing=True)[0].wall_time >= 0


def test_wilson_interval():
    lo, hi = wilson_interval(20, 30)
    assert lo < 20 / 30 < hi
    assert wilson_interval(0, 10)[0] == 0.0
    assert wilson_interval(10, 10)[1] == 1.0
    # textbook value for 8/10
    assert wilson_interval(8, 10) == pytest.approx((0.4902, 0.9433), abs=1e-4)


def test_summarize_fields():
    recs = run_trials(InstanceSpec("exact_junta", 3, T=(2,), seed=0), CFG, 4)
    s = summarize(recs)
    assert s["trials"] == 4
    assert s["accept_rate"] + s["reject_rate"] == 1
    assert s["mean_queries"] == query_count(CFG)


def test_instance_for_class():
    assert instance_for_class("exact_junta", 4, 2, 0).T == (1, 2)
    with pytest.raises(ValueError):
        instance_for_class("labeled_file", 4, 1, 0)


def test_sweep_limits():
    with pytest.raises(ValueError):
        sweep([], [0.5], ["haar_random"], n=2, k=1, trials=1)
    with pytest.raises(ValueError):
        sweep([0.5] * 201, [0.5], ["haar_random"], n=2, k=1, trials=1)
