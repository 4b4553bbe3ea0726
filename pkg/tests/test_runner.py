import json
from dataclasses import asdict

import pytest

from axialforge import engine, runner
from axialforge.runner import RunRecord, Store

SMALL = ["1/1+1+1/(2B)^3", "S3/1+3/3C 2B", "S3/1+3/3C 2A"]


@pytest.fixture(scope="module")
def small_store(tmp_path_factory):
    store = Store(tmp_path_factory.mktemp("store"))
    runner.run_many([runner.resolve(t) for t in SMALL], engine.Budget(), store)
    return store


def test_store_records_and_index(small_store):
    recs = small_store.records()
    assert [r.case for r in recs] == sorted(SMALL)
    assert {r.case: r.verdict for r in recs}["S3/1+3/3C 2A"] == "Collapsed"
    index = json.loads((small_store.root / "index.json").read_text())
    assert set(index) == set(SMALL)
    assert small_store.payload("S3/1+3/3C 2B")["algebra"]
    assert small_store.payload("S3/1+3/3C 2A") is None


def test_rerun_overwrites_in_place(small_store):
    before = len(list((small_store.root / "cases").iterdir()))
    runner.run_case(runner.resolve("S3/1+3/3C 2B"), engine.Budget(), small_store)
    assert len(list((small_store.root / "cases").iterdir())) == before


def test_empty_store_report(tmp_path):
    text = runner.build_report(Store(tmp_path / "nothing"), "md")
    assert "## table2" in text and "## diff" in text
    assert json.loads(runner.build_report(Store(tmp_path / "nothing"), "json")) == {
        "table2": [], "table3": [], "diff": []}


def test_report_is_deterministic(small_store):
    for fmt in ("md", "csv", "json"):
        assert runner.build_report(small_store, fmt) == runner.build_report(small_store, fmt)


def test_diff_flags_injected_record(tmp_path):
    store = Store(tmp_path)
    for case in runner.group_cases("D10"):
        rec = runner.run_case(case, engine.Budget())
        if rec.case == "D10/1+5/5A 2B":
            rec.dim = 99
        store.save(rec)
    diffs = runner.diff_expected(store.records())
    assert diffs == [{"group": "D10", "axes": "1+5", "what": "dims 2B 5A", "expected": "7", "got": "99"}]


def test_partial_axet_is_not_compared(tmp_path):
    store = Store(tmp_path)
    store.save(runner.run_case(runner.resolve("D10/1+5/5A 2B"), engine.Budget()))
    assert runner.diff_expected(store.records()) == []


def test_verify_store_catches_corruption(small_store, tmp_path):
    assert all(r["status"] != "fail" for r in runner.verify_store(small_store))
    store = Store(tmp_path)
    rec = runner.run_case(runner.resolve("S3/1+3/3C 2B"), engine.Budget(), store)
    path = store.case_dir(rec.case) / "algebra.json"
    data = json.loads(path.read_text())
    data["algebra"]["products"][1][0] = "5/7"
    path.write_text(json.dumps(data))
    (res,) = runner.verify_store(store)
    assert res["status"] == "fail"


def test_incomplete_saves_checkpoint_and_resumes(tmp_path):
    store = Store(tmp_path)
    case = runner.resolve("S3/1+3/3A 2A")
    rec = runner.run_case(case, engine.Budget(max_expansions=0), store)
    assert rec.verdict == "Incomplete" and rec.checkpoint
    assert store.load_checkpoint(case) is not None
    again = runner.run_case(case, engine.Budget(), store, resume=True)
    assert (again.verdict, again.dim) == ("Completed", 8)


def test_case_id_resolution():
    case = runner.resolve("2^2/2+2+2~2/4B")
    assert case.axet_shapes == 2
    assert runner.resolve("2^3/2+2+4/(4A)^2 (2A)^2 2B~2").id.shape == "(4A)^2 (2A)^2 2B~2"
    for bad in ("S3", "S3/1+3", "S3/1+3/9Z", "nosuch/1/2A"):
        with pytest.raises(runner.UsageError):
            runner.resolve(bad)


def test_tiers():
    fast = runner.tier_cases("fast")
    assert all(c.group_order <= 12 or c.id.group == "S4" for c in fast)
    assert {str(c.id) for c in runner.tier_cases("fast", ["S4"])} == {
        "S4/6/3A 2A", "S4/6/3A 2B", "S4/6/3C 2A", "S4/6/3C 2B"}
    with pytest.raises(runner.UsageError):
        runner.tier_cases("slow")


def test_record_roundtrip():
    rec = RunRecord(case="x/y/z", verdict="Completed", dim=3, signature=[3, 0, 0])
    assert RunRecord(**json.loads(json.dumps(asdict(rec)))) == rec
