"""Acceptance criteria 1-8, one printed pass/fail line each.

The fast tier is run once into a temporary store (several minutes on one
core).  Run standalone with ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import random
import sys
import tempfile
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from axialforge import engine, runner  # noqa: E402
from axialforge.algebra import Algebra  # noqa: E402
from axialforge.linalg import QMatrix, sym_signature  # noqa: E402
from axialforge.ns import LABELS, load_ns, verify_ns  # noqa: E402
from helpers import property_failures  # noqa: E402

# case -> (dim, m, form); every one must also be primitive
TABLE2_FAST = {
    "1/1+1+1/(2B)^3": (3, 1, "pos"),
    "1/1+1+1/2A (2B)^2": (4, 2, "pos"),
    "1/1+1+1/(2A)^2 2B": (6, 3, "pos"),
    "S3/1+3/3A 2A": (8, 2, "pos"),
    "S3/1+3/3A 2B": (5, 2, "pos"),
    "S3/1+3/3C 2B": (4, 1, "pos"),
    "S3/1+3/3C 2A": (0, None, None),
    "2^2/1+2+2/4A (2A)^2": (14, 3, "semi"),
    "2^2/1+2+2/4A 2A 2B": (10, 3, "pos"),
    "2^2/1+2+2/4A (2B)^2": (6, 2, "pos"),
    "2^2/1+2+2/4B (2A)^2": (5, 1, "pos"),
    "2^2/1+2+2/4B 2A 2B": (8, 2, "pos"),
    "2^2/1+2+2/4B (2B)^2": (6, 2, "pos"),
    "D10/1+5/5A 2B": (7, 2, "pos"),
    "D10/1+5/5A 2A": (0, None, None),
    "D12/2+6/6A": (10, 2, "pos"),
    "S4/6/3A 2A": (13, 2, "pos"),
    "S4/6/3A 2B": (13, 3, "pos"),
    "S4/6/3C 2A": (9, 2, "pos"),
    "S4/6/3C 2B": (6, 1, "pos"),
    "S3/1+3+3/6A 2A 2B": (13, 3, "pos"),
    "S3/1+3+3/6A (2B)^2": (9, 2, "pos"),
    "S3/1+3+3/6A (2A)^2": (8, 2, "pos"),
    "S3/3+3+3/6A": (13, 2, "pos"),
}

# every shape of the 18-shape 2+2+4 axet containing (4A)^2 (2A)^2, plus the S4 case
COLLAPSES = [
    "2^3/2+2+4/(4A)^2 (2A)^3",
    "2^3/2+2+4/(4A)^2 (2A)^2 2B",
    "2^3/2+2+4/(4A)^2 (2A)^2 2B~2",
    "S4/6+6+6/6A (2A)^6",
]

RADICAL_CASE = "2^3/2+4+4/4A 4B (2A)^2"

# rows whose dimension is "?" and which the fast tier runs
UNKNOWN_FAST = [
    "2^3/2+2+4/(4A)^2 2A (2B)^2~2",
    "2^3/2+2+4/(4B)^2 (2A)^2 2B~2",
    "2^3/4+4+4/(4A)^3 (2B)^3",
    "2^3/4+4+4/(4A)^2 4B (2A)^2 2B~2",
    "2^3/4+4+4/4A (4B)^2 (2A)^2 2B",
]
UNKNOWN_ROWS = 12

CHECKPOINT_CASES = ["S3/1+3/3A 2A", "S3/1+3+3/6A 2A 2B"]
CONGRUENCES = 50

RESULTS: dict[int, tuple[bool, str]] = {}


def line(n: int) -> str:
    ok, detail = RESULTS[n]
    return f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"


def report(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = (ok, detail)
    print(line(n), flush=True)


class Run:
    """The fast tier plus the extra collapse case, stored once per session."""

    def __init__(self, root: Path):
        self.store = runner.Store(root)
        cases = runner.tier_cases("fast") + [runner.resolve(COLLAPSES[-1])]
        t0 = time.perf_counter()
        self.records = {r.case: r for r in runner.run_many(cases, engine.Budget(), self.store)}
        self.wall = time.perf_counter() - t0
        self.cases = {str(c.id): c for c in cases}

    def completed(self):
        for text, rec in sorted(self.records.items()):
            if rec.verdict == "Completed":
                payload = self.store.payload(text)
                yield self.cases[text], rec, Algebra.from_json(payload["algebra"]), payload


@pytest.fixture(scope="module")
def run(tmp_path_factory):
    return Run(tmp_path_factory.mktemp("acceptance"))


def criterion_1() -> tuple[bool, str]:
    load_ns.cache_clear()
    t0 = time.perf_counter()
    bad = [lab for lab in LABELS if not all(c.passed for c in verify_ns(load_ns(lab)))]
    elapsed = time.perf_counter() - t0
    dim6a = load_ns("6A").dim
    ok = not bad and dim6a == 8 and elapsed < 1.0
    return ok, f"8 algebras, failing={bad}, dim(6A)={dim6a}, {elapsed:.2f}s"


def criterion_2() -> tuple[bool, str]:
    t0 = time.perf_counter()
    rows = runner.enumerate_listing()
    elapsed = time.perf_counter() - t0
    got = sorted((r["group"], r["axet"].split("~")[0], r["shapes"]) for r in rows)
    want = sorted((r["group"], r["axes"], r["shapes"]) for r in runner.expected_results()["table3"])
    missing = [w for w in want if w not in got]
    extra = [g for g in got if g not in want]
    ok = got == want and elapsed < 60
    return ok, f"{len(want)} rows, missing={missing}, unexpected={extra}, {elapsed:.1f}s"


def criterion_3(run: Run) -> tuple[bool, str]:
    bad = []
    for text, (dim, m, form) in TABLE2_FAST.items():
        rec = run.records[text]
        if dim == 0:
            got = (0, None, None) if rec.verdict == "Collapsed" else (rec.verdict,)
        else:
            got = (rec.dim, rec.m, rec.form) if rec.verdict == "Completed" and rec.primitive else (rec.verdict,)
        if got != (dim, m, form):
            bad.append(f"{text}: {got}")
    return not bad, f"{len(TABLE2_FAST)} rows, mismatches={bad}, fast tier {run.wall:.0f}s"


def criterion_4(run: Run) -> tuple[bool, str]:
    got = {t: run.records[t].verdict for t in COLLAPSES}
    return all(v == "Collapsed" for v in got.values()), str(got)


def criterion_5(run: Run) -> tuple[bool, str]:
    rec = run.records[RADICAL_CASE]
    rq = rec.radical_quotient or {}
    ok = (rec.verdict == "Completed" and rec.dim == 16 and rec.form == "semi"
          and rq.get("dim") == 13 and rq.get("form") == "pos" and rq.get("shape_verified") is True)
    return ok, f"dim={rec.dim} form={rec.form} quotient dim={rq.get('dim')} form={rq.get('form')} " \
               f"shape_verified={rq.get('shape_verified')}"


def criterion_6(run: Run) -> tuple[bool, str]:
    done = [r for r in run.records.values() if r.verdict == "Completed"]
    bad = [r.case for r in done if not r.primitive or r.form not in ("pos", "semi")]
    return not bad and bool(done), f"{len(done)} completed, violations={bad}"


def _congruence(n: int, rng: random.Random) -> QMatrix:
    # unit triangular factors: always invertible, entries stay small
    lower = [[1 if i == j else (rng.randint(-3, 3) if j < i else 0) for j in range(n)] for i in range(n)]
    upper = [[1 if i == j else (rng.randint(-3, 3) if j > i else 0) for j in range(n)] for i in range(n)]
    perm = list(range(n))
    rng.shuffle(perm)
    P = [[1 if perm[i] == j else 0 for j in range(n)] for i in range(n)]
    return QMatrix.from_rows(P) @ QMatrix.from_rows(lower) @ QMatrix.from_rows(upper)


def criterion_7(run: Run) -> tuple[bool, str]:
    bad = []
    n_cases = 0
    rng = random.Random(20240601)
    for case, rec, alg, payload in run.completed():
        n_cases += 1
        bad += [f"{rec.case}: {f}" for f in property_failures(alg, case.axet, rec.m)]
        F = QMatrix.from_json(payload["form"], alg.dim)
        sig = sym_signature(F)
        for _ in range(CONGRUENCES):
            P = _congruence(alg.dim, rng)
            if sym_signature(P @ F @ P.T) != sig:
                bad.append(f"{rec.case}: signature changed under congruence")
                break
    for text in CHECKPOINT_CASES:
        case = run.cases[text]
        key = engine.case_key(case.axet, case.shape)
        blobs = []
        full = engine.construct_mod(case.axet, case.shape,
                                    on_pass=lambda st: blobs.append(engine.checkpoint_save(st))
                                    if st.gmats is not None else None)
        mid = engine.checkpoint_load(blobs[len(blobs) // 2 - 1], key)
        resumed = engine.construct_mod(case.axet, case.shape, resume=mid)
        if engine.checkpoint_save(resumed.state) != engine.checkpoint_save(full.state):
            bad.append(f"{text}: resumed run differs")
    return not bad, f"{n_cases} completed algebras x {CONGRUENCES} congruences, " \
                    f"{len(CHECKPOINT_CASES)} checkpoint cases, failures={bad}"


def criterion_8(run: Run) -> tuple[bool, str]:
    exp = runner.expected_results()["table2"]
    unknown = [r for r in exp if r["dim"] == "?"]
    got = {t: run.records[t].verdict for t in UNKNOWN_FAST}
    deferred = sorted({r["group"] for r in unknown} - {t.split("/")[0] for t in UNKNOWN_FAST})
    ok = len(unknown) == UNKNOWN_ROWS and all(v == "Incomplete" for v in got.values())
    return ok, f"{len(unknown)} '?' rows; fast-tier ones {got}; left to the full tier: {deferred}; " \
               f"Q[t] rows and the minimal column out of scope"


def test_criterion_1_norton_sakuma_suite():
    ok, detail = criterion_1()
    report(1, ok, detail)
    assert ok, detail


def test_criterion_2_shape_counts():
    ok, detail = criterion_2()
    report(2, ok, detail)
    assert ok, detail


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8])
def test_criterion_fast_tier(run, n):
    ok, detail = globals()[f"criterion_{n}"](run)
    report(n, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    report(1, *criterion_1())
    report(2, *criterion_2())
    with tempfile.TemporaryDirectory() as tmp:
        r = Run(Path(tmp))
        for n in range(3, 9):
            report(n, *globals()[f"criterion_{n}"](r))
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
