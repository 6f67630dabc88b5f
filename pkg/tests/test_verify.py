import json

import pytest

from orthochar import verify
from orthochar.verify import (
    MATCH,
    MISMATCH,
    SKIPPED,
    TABLE_SO5,
    compute_new_pm_components,
    corrupted,
    run_suite,
    verify_table_7_2,
    verify_table_8_2,
)


@pytest.fixture(scope="module")
def so5_q2():
    return verify_table_7_2(2)


@pytest.fixture(scope="module")
def so5_q3():
    return verify_table_7_2(3)


@pytest.fixture(scope="module")
def so7_q2():
    return verify_table_8_2(2)


def _record(records, label):
    return next(r for r in records if r.label == label)


def test_table_7_2_matches(so5_q2, so5_q3):
    for reps, _ in (so5_q2, so5_q3):
        assert len(reps) == 6
        assert all(r.status == MATCH for r in reps), [r.claim for r in reps if r.status != MATCH]


def test_table_7_2_rows(so5_q2, so5_q3):
    r = _record(so5_q3[1], "[1^2,-,1]")
    assert r.components == {"1": {"[1,-,1]": 1}, "0": {"1_P3": 1}, "+": {}, "-": {"1": 1}}
    r = _record(so5_q2[1], "[-,1^2,1]")
    assert r.components["+"] == {"1": 1, "nu1": 1}
    r = _record(so5_q3[1], "[-,-,3]")
    assert r.components == {"1": {}, "0": {}, "+": {}, "-": {"nu1": 1}}
    assert "nu3" in _record(so5_q3[1], "[-,1^2,1]").components["+"]


def test_table_8_2(so7_q2):
    reps, records = so7_q2
    assert all(r.status == MATCH for r in reps), [r.claim for r in reps if r.status != MATCH]
    r = _record(records, "[2,1,1]")
    assert r.components["1"] == {"[2,-,1]": 1, "[1,1,1]": 1}
    assert r.components["0"] == {"1:[1,-,1]": 1}
    assert _record(records, "[21,-,1]").components["-"] == {"1": 1}
    gamma = _record(records, "[-,1^3,1]").components["0"]
    assert gamma["1:[-,1,1]"] == 1 and gamma["0:1_P3"] == 1 and gamma["0:mu"] == 1


def test_new_pm_components():
    records, reports = compute_new_pm_components(2)
    assert len(records) == 12
    assert all(r.status == MATCH for r in reports)
    r = _record(records, "[1^2,1,1]")
    assert r.theta_degrees == {"+": 4, "-": 4}
    r = _record(records, "[3,-,1]")
    assert r.components == {"+": {}, "-": {}}


def test_fault_injection_gives_mismatch():
    bad = corrupted(TABLE_SO5, "[1,1,1]", "+", ["nu1"])
    reps, _ = verify_table_7_2(2, bad)
    wrong = [r for r in reps if r.status == MISMATCH]
    assert [r.claim for r in wrong] == ["SO5 restriction table [1,1,1]"]
    assert wrong[0].expected != wrong[0].computed


def test_quick_suite_and_determinism():
    a = run_suite("quick")
    b = run_suite("quick")
    assert a.ok and a.exit_code() == 0
    assert json.dumps(a.to_json(), sort_keys=True) == json.dumps(b.to_json(), sort_keys=True)
    assert a.to_csv() == b.to_csv()
    assert all(r.status in (MATCH, SKIPPED) for r in a.reports)


def test_corrupted_suite_exits_1(monkeypatch):
    monkeypatch.setattr(verify, "TABLE_SO5", corrupted(TABLE_SO5, "[-,2,1]", "1", ["[1,-,1]"]))
    res = run_suite("quick")
    assert not res.ok and res.exit_code() == 1


def test_guard_turns_exceptions_into_mismatches():
    def boom():
        raise RuntimeError("pipeline failed")

    reps = verify._guard("claim", 5, 2, boom)
    assert reps[0].status == MISMATCH and "pipeline failed" in reps[0].reason


def test_oversize_tuple_is_skipped_with_reason():
    reps, _, _ = verify._tuple_job(5, 5)
    skipped = [r for r in reps if r.status == SKIPPED]
    assert len(skipped) == 1 and "enumeration bound" in skipped[0].reason
    assert all(r.status != MISMATCH for r in reps)


def test_worker_count(monkeypatch):
    monkeypatch.setenv(verify.WORKERS_ENV, "3")
    assert verify.worker_count() == 3
    monkeypatch.setenv(verify.WORKERS_ENV, "x")
    with pytest.raises(ValueError):
        verify.worker_count()


def test_new_json_is_flagged():
    res = run_suite("quick")
    assert res.new_json()["status"].startswith("NEW")
