"""Command line entry point: ``axialforge enumerate|construct|report|verify``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import engine, runner

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="axialforge", description="Construct axial algebras of Monster type from shapes.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("enumerate", help="list axets and shapes with counts")
    e.add_argument("--group", help="restrict to one catalog group")
    e.add_argument("--format", choices=("md", "csv", "json"), default="md")
    e.add_argument("--detail", action="store_true", help="with --format json, include every shape's data")

    c = sub.add_parser("construct", help="run construction and analysis")
    which = c.add_mutually_exclusive_group(required=True)
    which.add_argument("--case", action="append", help="case id GROUP/AXES/SHAPE (repeatable)")
    which.add_argument("--tier", choices=("fast", "full"))
    c.add_argument("--group", action="append", help="with --tier, restrict to these groups")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--budget-expansions", type=int, default=engine.Budget.max_expansions)
    c.add_argument("--budget-dim", type=int, default=engine.Budget.max_dim)
    c.add_argument("--budget-symbols", type=int, default=engine.Budget.max_symbols)
    c.add_argument("--resume", action="store_true", help="continue Incomplete cases from their checkpoints")
    c.add_argument("--store")
    c.add_argument("--quiet", action="store_true")

    r = sub.add_parser("report", help="emit result tables and the diff against expected values")
    r.add_argument("--store")
    r.add_argument("--format", choices=("md", "csv", "json"), default="md")
    r.add_argument("--output", help="write to this file instead of stdout")

    v = sub.add_parser("verify", help="re-check every completed algebra in the store")
    v.add_argument("--store")
    return p


def _line(rec: runner.RunRecord) -> str:
    if rec.verdict == "Completed":
        what = f"dim={rec.dim} m={rec.m} form={rec.form} primitive={rec.primitive}"
    elif rec.verdict == "Error":
        what = rec.error
    else:
        what = rec.reason
    return f"{rec.verdict:<10} {rec.case}  {what}  ({rec.wall_time:.1f}s)"


def cmd_enumerate(args) -> int:
    rows = runner.enumerate_listing(args.group)
    if args.format == "json":
        if args.detail:
            shapes = {str(c.id): c.shape.to_json() for g in ([args.group] if args.group else runner.group_names())
                      for c in runner.group_cases(g)}
            for r in rows:
                r["shapes_data"] = [shapes[f"{r['group']}/{r['axet']}/{n}"] for n in r["names"]]
        print(json.dumps(rows, indent=1))
        return EXIT_OK
    flat = [{"group": r["group"], "axes": r["axet"], "shapes": r["shapes"], "names": "; ".join(r["names"])}
            for r in rows]
    sys.stdout.write(runner.render({"shapes": flat}, args.format))
    return EXIT_OK


def cmd_construct(args) -> int:
    if args.jobs < 1:
        raise runner.UsageError("--jobs must be positive")
    budget = engine.Budget(max_expansions=args.budget_expansions, max_dim=args.budget_dim,
                           max_symbols=args.budget_symbols)
    if args.case:
        cases = [runner.resolve(t) for t in args.case]
    else:
        cases = runner.tier_cases(args.tier, args.group)
    store = runner.default_store(args.store)
    progress = None if args.quiet else (lambda rec: print(_line(rec), flush=True))
    recs = runner.run_many(cases, budget, store, jobs=args.jobs, resume=args.resume, progress=progress)
    counts: dict[str, int] = {}
    for r in recs:
        counts[r.verdict] = counts.get(r.verdict, 0) + 1
    print(" ".join(f"{k}={v}" for k, v in sorted(counts.items())) + f"  store={store.root}")
    return EXIT_OK


def cmd_report(args) -> int:
    text = runner.build_report(runner.default_store(args.store), args.format)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = runner.verify_store(runner.default_store(args.store))
    bad = 0
    for r in results:
        if r["status"] == "skipped":
            print(f"skip  {r['case']}  ({r['detail']})")
        else:
            print(f"{r['status']:<5} {r['case']}" + (f"  {r['detail']}" if r["detail"] else ""))
            bad += r["status"] == "fail"
    checked = sum(r["status"] != "skipped" for r in results)
    print(f"{checked} checked, {bad} failed")
    return EXIT_FAIL if bad else EXIT_OK


COMMANDS = {"enumerate": cmd_enumerate, "construct": cmd_construct, "report": cmd_report, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except runner.UsageError as exc:
        print(f"axialforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
