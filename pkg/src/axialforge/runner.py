"""Case enumeration, batch execution, the result store and report tables."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from . import analysis, engine
from .algebra import Algebra, form_is_associative
from .config import Axet, Shape, enumerate_axets, enumerate_shapes, shape_label_multiset
from .linalg import QMatrix
from .permgrp import catalog_groups

STORE_ENV = "AXIALFORGE_STORE"
DEFAULT_STORE = "axialforge-store"


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class CaseId:
    group: str
    pattern: str
    shape: str

    def __str__(self) -> str:
        return f"{self.group}/{self.pattern}/{self.shape}"

    @property
    def digest(self) -> str:
        return hashlib.sha256(str(self).encode()).hexdigest()[:20]


@dataclass
class Case:
    id: CaseId
    group_order: int
    axet: Axet
    shape: Shape
    axet_shapes: int  # number of shapes of the parent axet


def _dedupe(names: list[str]) -> list[str]:
    """Append ``~k`` to the k-th repeat of a name (k >= 2)."""
    seen: dict[str, int] = {}
    out = []
    for n in names:
        seen[n] = seen.get(n, 0) + 1
        out.append(n if seen[n] == 1 else f"{n}~{seen[n]}")
    return out


@lru_cache(maxsize=None)
def _group_axets(group: str) -> tuple[tuple[str, Axet, tuple[Shape, ...]], ...]:
    groups = catalog_groups()
    if group not in groups:
        raise UsageError(f"unknown group {group!r}; known: {', '.join(groups)}")
    found = []
    for mg in groups[group]:
        for ax in enumerate_axets(mg):
            shapes = tuple(enumerate_shapes(ax))
            if shapes:  # an axet admitting no shape contributes no cases
                found.append((ax, shapes))
    pats = _dedupe([ax.pattern for ax, _ in found])
    return tuple((p, ax, shs) for p, (ax, shs) in zip(pats, found))


def group_names() -> list[str]:
    return list(catalog_groups())


def group_cases(group: str) -> list[Case]:
    out = []
    for pat, ax, shapes in _group_axets(group):
        names = _dedupe([s.name for s in shapes])
        for nm, sh in zip(names, shapes):
            out.append(Case(CaseId(group, pat, nm), len(ax.group), ax, sh, len(shapes)))
    return out


def enumerate_listing(group: str | None = None) -> list[dict]:
    """One row per (group, axet): the shape count and the shape names."""
    rows = []
    for g in ([group] if group else group_names()):
        for pat, ax, shapes in _group_axets(g):
            rows.append({"group": g, "axes": pat.split("~")[0], "axet": pat, "shapes": len(shapes),
                         "names": _dedupe([s.name for s in shapes])})
    return rows


def resolve(text: str) -> Case:
    parts = text.split("/", 2)
    if len(parts) != 3:
        raise UsageError(f"case id {text!r} is not of the form GROUP/AXES/SHAPE")
    for case in group_cases(parts[0]):
        if str(case.id) == text:
            return case
    raise UsageError(f"no case {text!r}")


def in_fast_tier(case: Case) -> bool:
    return case.group_order <= 12 or (case.id.group == "S4" and case.id.pattern == "6")


def tier_cases(tier: str, groups: list[str] | None = None) -> list[Case]:
    if tier not in ("fast", "full"):
        raise UsageError(f"unknown tier {tier!r}")
    out = []
    for g in groups or group_names():
        for case in group_cases(g):
            if tier == "full" or in_fast_tier(case):
                out.append(case)
    return out


# ---------------------------------------------------------------- running


@dataclass
class RunRecord:
    case: str
    verdict: str
    dim: int | None = None
    m: int | None = None
    form: str | None = None
    primitive: bool | None = None
    signature: list[int] | None = None
    shape_verified: bool | None = None
    radical_quotient: dict | None = None
    wall_time: float = 0.0
    budget: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)
    checkpoint: str | None = None
    reason: str = ""
    error: str = ""


def run_case(case: Case, budget: engine.Budget, store: "Store | None" = None,
             resume: bool = False) -> RunRecord:
    t0 = time.perf_counter()
    rec = RunRecord(case=str(case.id), verdict="Error", budget=asdict(budget))
    start = None
    if resume and store is not None:
        start = store.load_checkpoint(case)
    try:
        verdict = engine.construct(case.axet, case.shape, budget, resume=start)
    except Exception as exc:  # noqa: BLE001 - reported per case, the batch continues
        rec.error = f"{type(exc).__name__}: {exc}"
        rec.wall_time = time.perf_counter() - t0
        if store is not None:
            store.save(rec)
        return rec
    rec.stats = verdict.stats
    payload = None
    if isinstance(verdict, engine.Completed):
        res = analysis.analyse(verdict.algebra, case.axet, case.shape)
        rec.verdict = "Completed"
        rec.dim, rec.m, rec.form, rec.primitive = res.dim, res.m_closure, res.frobenius.kind, res.primitive
        rec.signature = list(res.frobenius.signature) if res.frobenius.signature else None
        rec.shape_verified = res.shape_verified
        if res.radical_quotient is not None:
            rec.radical_quotient = res.radical_quotient.summary()
        payload = {"algebra": verdict.algebra.to_json(),
                   "form": res.frobenius.matrix.to_json() if res.frobenius.matrix is not None else None}
    elif isinstance(verdict, engine.Collapsed):
        rec.verdict, rec.dim = "Collapsed", 0
        rec.reason = verdict.stats.get("reason", "")
    else:
        rec.verdict, rec.reason = "Incomplete", verdict.reason
    rec.wall_time = time.perf_counter() - t0
    if store is not None:
        if isinstance(verdict, engine.Incomplete):
            rec.checkpoint = store.save_checkpoint(case, verdict.state)
        store.save(rec, payload)
    return rec


def _run_one(args) -> RunRecord:
    text, budget, root, resume = args
    store = Store(root) if root else None
    return run_case(resolve(text), budget, store, resume)


def run_many(cases: list[Case], budget: engine.Budget, store: "Store | None" = None, jobs: int = 1,
             resume: bool = False, progress=None) -> list[RunRecord]:
    root = str(store.root) if store is not None else None
    work = [(str(c.id), budget, root, resume) for c in cases]
    out = []
    if jobs <= 1:
        for w in work:
            rec = _run_one(w)
            out.append(rec)
            if progress:
                progress(rec)
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for rec in pool.map(_run_one, work):
                out.append(rec)
                if progress:
                    progress(rec)
    if store is not None:
        store.rebuild_index()
    return out


# ---------------------------------------------------------------- store


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    with os.fdopen(fd, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


class Store:
    """One directory per case, named by the hash of its id, plus ``index.json``."""

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)

    def case_dir(self, case_id: str | CaseId) -> Path:
        cid = case_id if isinstance(case_id, CaseId) else None
        digest = cid.digest if cid else hashlib.sha256(str(case_id).encode()).hexdigest()[:20]
        return self.root / "cases" / digest

    def save(self, rec: RunRecord, payload: dict | None = None) -> None:
        d = self.case_dir(rec.case)
        _atomic_write(d / "record.json", json.dumps(asdict(rec), sort_keys=True, indent=1).encode())
        if payload is not None:
            _atomic_write(d / "algebra.json", json.dumps(payload, sort_keys=True).encode())
        elif (d / "algebra.json").exists():
            (d / "algebra.json").unlink()

    def save_checkpoint(self, case: Case, state: engine.PartialAlgebra) -> str:
        path = self.case_dir(case.id) / "checkpoint.json"
        _atomic_write(path, engine.checkpoint_save(state))
        return str(path.relative_to(self.root))

    def load_checkpoint(self, case: Case) -> engine.PartialAlgebra | None:
        path = self.case_dir(case.id) / "checkpoint.json"
        if not path.exists():
            return None
        return engine.checkpoint_load(path.read_bytes(), engine.case_key(case.axet, case.shape))

    def records(self) -> list[RunRecord]:
        base = self.root / "cases"
        if not base.exists():
            return []
        out = []
        for d in sorted(base.iterdir()):
            f = d / "record.json"
            if f.exists():
                out.append(RunRecord(**json.loads(f.read_text())))
        return sorted(out, key=lambda r: r.case)

    def payload(self, case_id: str) -> dict | None:
        f = self.case_dir(case_id) / "algebra.json"
        return json.loads(f.read_text()) if f.exists() else None

    def rebuild_index(self) -> None:
        index = {r.case: self.case_dir(r.case).name for r in self.records()}
        _atomic_write(self.root / "index.json", json.dumps(index, sort_keys=True, indent=1).encode())


def default_store(path: str | None) -> Store:
    return Store(path or os.environ.get(STORE_ENV) or DEFAULT_STORE)


# ---------------------------------------------------------------- verification


def verify_payload(payload: dict) -> list[str]:
    """Fusion law, idempotence, form associativity and primitivity of a stored algebra."""
    alg = Algebra.from_json(payload["algebra"])
    fails = engine.verify_lift(alg)
    if payload.get("form") is not None:
        F = QMatrix.from_json(payload["form"], alg.dim)
        if not form_is_associative(alg, F):
            fails.append("stored form does not associate")
    if not fails and not analysis.primitivity(alg):
        fails.append("not primitive")
    return fails


def verify_store(store: Store) -> list[dict]:
    out = []
    for rec in store.records():
        if rec.verdict != "Completed":
            out.append({"case": rec.case, "status": "skipped", "detail": rec.verdict})
            continue
        payload = store.payload(rec.case)
        if payload is None:
            out.append({"case": rec.case, "status": "fail", "detail": "algebra file missing"})
            continue
        try:
            fails = verify_payload(payload)
        except Exception as exc:  # noqa: BLE001 - a broken file is a verification failure
            fails = [f"unreadable algebra: {type(exc).__name__}: {exc}"]
        out.append({"case": rec.case, "status": "fail" if fails else "pass", "detail": "; ".join(fails)})
    return out


# ---------------------------------------------------------------- reports


@lru_cache(maxsize=None)
def expected_results() -> dict:
    text = resources.files("axialforge.data").joinpath("expected_results.json").read_text()
    return json.loads(text)


def _outcome(rec: RunRecord) -> str:
    if rec.verdict == "Completed":
        return str(rec.dim)
    if rec.verdict == "Collapsed":
        return "0"
    return "?"


def table2_rows(records: list[RunRecord]) -> list[dict]:
    rows = []
    for r in records:
        if r.verdict == "Collapsed":
            continue
        g, pat, shape = r.case.split("/", 2)
        rows.append({"group": g, "axes": pat, "shape": shape, "dim": _outcome(r),
                     "m": "" if r.m is None else str(r.m), "form": r.form or "",
                     "primitive": "" if r.primitive is None else ("yes" if r.primitive else "no"),
                     "minimal": "unset"})
    return rows


def table3_rows(records: list[RunRecord]) -> list[dict]:
    groups: dict[tuple[str, str], dict] = {}
    for r in records:
        g, pat, _ = r.case.split("/", 2)
        row = groups.setdefault((g, pat), {"group": g, "axes": pat, "shapes": 0, "collapsing": 0,
                                           "nontrivial": 0, "incomplete": 0})
        row["shapes"] += 1
        key = {"Collapsed": "collapsing", "Completed": "nontrivial"}.get(r.verdict, "incomplete")
        row[key] += 1
    return [groups[k] for k in sorted(groups)]


def _multiset_key(shape: str) -> tuple[str, ...]:
    return tuple(sorted(shape_label_multiset(shape.split("~")[0])))


def diff_expected(records: list[RunRecord]) -> list[dict]:
    """Compare run outcomes with the transcribed tables, per (group, axet, label multiset)."""
    exp = expected_results()
    by_axet: dict[tuple[str, str], list[RunRecord]] = {}
    for r in records:
        g, pat, _ = r.case.split("/", 2)
        by_axet.setdefault((g, pat), []).append(r)
    diffs = []
    t3 = {}
    for row in exp["table3"]:
        t3.setdefault((row["group"], row["axes"]), []).append(row)
    for (g, pat), recs in sorted(by_axet.items()):
        axes = pat.split("~")[0]
        n_shapes = len(group_cases_cached(g, pat))
        if len(recs) < n_shapes:
            continue  # partial run of this axet: nothing sound to compare
        rows3 = [r for r in t3.get((g, axes), []) if r["shapes"] == n_shapes]
        if not rows3:
            diffs.append({"group": g, "axes": pat, "what": "shape count", "expected": None, "got": n_shapes})
            continue
        ours = table3_rows(recs)[0]
        for col in ("collapsing", "nontrivial", "incomplete"):
            if ours[col] != rows3[0][col]:
                diffs.append({"group": g, "axes": pat, "what": col, "expected": rows3[0][col], "got": ours[col]})
        exp2 = [r for r in exp["table2"] if r["group"] == g and r["axes"] == axes
                and r.get("axet_shapes", n_shapes) == n_shapes]
        keys = sorted({_multiset_key(r.case.split("/", 2)[2]) for r in recs})
        for key in keys:
            mine = sorted(_outcome(r) for r in recs if _multiset_key(r.case.split("/", 2)[2]) == key)
            theirs = [r for r in exp2 if tuple(sorted(shape_label_multiset(r["shape"]))) == key]
            want = sorted([r["dim"] for r in theirs] + ["0"] * (len(mine) - len(theirs)))
            if mine != want:
                diffs.append({"group": g, "axes": pat, "what": "dims " + " ".join(key),
                              "expected": ",".join(want), "got": ",".join(mine)})
            for t in theirs:
                match = [r for r in recs if _multiset_key(r.case.split("/", 2)[2]) == key and _outcome(r) == t["dim"]]
                if match and t.get("m") and all(str(r.m) != t["m"] or r.form != t["form"] for r in match):
                    diffs.append({"group": g, "axes": pat, "what": "m/form " + " ".join(key),
                                  "expected": f"{t['m']}/{t['form']}",
                                  "got": ",".join(f"{r.m}/{r.form}" for r in match)})
    return diffs


def group_cases_cached(group: str, pattern: str) -> list[Case]:
    return [c for c in group_cases(group) if c.id.pattern == pattern]


def render(tables: dict[str, list[dict]], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(tables, sort_keys=True, indent=1) + "\n"
    out = io.StringIO()
    for name, rows in tables.items():
        if fmt == "md":
            out.write(f"## {name}\n\n")
        else:
            out.write(f"# {name}\n")
        if rows:
            cols = list(rows[0])
            if fmt == "md":
                out.write("| " + " | ".join(cols) + " |\n")
                out.write("|" + "---|" * len(cols) + "\n")
                for r in rows:
                    out.write("| " + " | ".join(str(r[c]) for c in cols) + " |\n")
            else:
                w = csv.DictWriter(out, fieldnames=cols, lineterminator="\n")
                w.writeheader()
                w.writerows(rows)
        out.write("\n")
    return out.getvalue()


def build_report(store: Store, fmt: str) -> str:
    recs = store.records()
    return render({"table2": table2_rows(recs), "table3": table3_rows(recs), "diff": diff_expected(recs)}, fmt)
