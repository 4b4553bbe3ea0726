"""Regenerate the Norton-Sakuma data files in src/axialforge/data/ns/.

Products are written down from the standard literature formulas for
``a_0 a_d`` and ``a_0 x`` (x an extra basis vector) and spread over all axes
by the dihedral symmetry ``a_i -> a_{i+s}``, ``a_i -> a_{-i}``.  The
Frobenius form is solved for, not transcribed.  Every algebra is run through
the verifier before anything is written.
"""
from __future__ import annotations

import json
import sys
from fractions import Fraction as F
from pathlib import Path

from axialforge.algebra import Algebra, solve_frobenius
from axialforge.ns import NSAlgebra, verify_ns

OUT = Path(__file__).resolve().parents[1] / "src" / "axialforge" / "data" / "ns"

# label -> (period, extra axes, extra non-axes,
#           {d: formula for a_0 a_d}, {x: formula for a_0 x}, {(x, y): formula for x y})
# formula keys: int offsets relative to a_0, or names of extra vectors
SPECS = {
    "2A": (2, ["a_rho"], [],
           {1: {0: F(1, 8), 1: F(1, 8), "a_rho": F(-1, 8)}},
           {"a_rho": {0: F(1, 8), "a_rho": F(1, 8), 1: F(-1, 8)}},
           {("a_rho", "a_rho"): {"a_rho": 1}}),
    "2B": (2, [], [], {1: {}}, {}, {}),
    "3A": (3, [], ["u_rho"],
           {1: {0: F(2, 32), 1: F(2, 32), -1: F(1, 32), "u_rho": F(-135, 2048)}},
           {"u_rho": {0: F(2, 9), 1: F(-1, 9), -1: F(-1, 9), "u_rho": F(5, 32)}},
           {("u_rho", "u_rho"): {"u_rho": 1}}),
    "3C": (3, [], [],
           {1: {0: F(1, 64), 1: F(1, 64), -1: F(-1, 64)}},
           {}, {}),
    "4A": (4, [], ["v_rho"],
           {1: {0: F(3, 64), 1: F(3, 64), 2: F(1, 64), -1: F(1, 64), "v_rho": F(-3, 64)},
            2: {}},
           {"v_rho": {0: F(5, 16), 1: F(-2, 16), 2: F(-1, 16), -1: F(-2, 16), "v_rho": F(3, 16)}},
           {("v_rho", "v_rho"): {"v_rho": 1}}),
    "4B": (4, ["a_rho2"], [],
           {1: {0: F(1, 64), 1: F(1, 64), -1: F(-1, 64), 2: F(-1, 64), "a_rho2": F(1, 64)},
            2: {0: F(1, 8), 2: F(1, 8), "a_rho2": F(-1, 8)}},
           {"a_rho2": {0: F(1, 8), "a_rho2": F(1, 8), 2: F(-1, 8)}},
           {("a_rho2", "a_rho2"): {"a_rho2": 1}}),
    "5A": (5, [], ["w_rho"],
           {1: {0: F(3, 128), 1: F(3, 128), 2: F(-1, 128), -1: F(-1, 128), -2: F(-1, 128), "w_rho": 1},
            2: {0: F(3, 128), 2: F(3, 128), 1: F(-1, 128), -1: F(-1, 128), -2: F(-1, 128), "w_rho": -1}},
           {"w_rho": {1: F(7, 4096), -1: F(7, 4096), 2: F(-7, 4096), -2: F(-7, 4096), "w_rho": F(7, 32)}},
           {("w_rho", "w_rho"): {i: F(175, 2**19) for i in range(5)}}),
    "6A": (6, ["a_rho3"], ["u_rho2"],
           {1: {0: F(1, 64), 1: F(1, 64), -2: F(-1, 64), -1: F(-1, 64), 2: F(-1, 64), 3: F(-1, 64),
                "a_rho3": F(1, 64), "u_rho2": F(45, 2048)},
            2: {0: F(2, 32), 2: F(2, 32), -2: F(1, 32), "u_rho2": F(-135, 2048)},
            3: {0: F(1, 8), 3: F(1, 8), "a_rho3": F(-1, 8)}},
           {"a_rho3": {0: F(1, 8), "a_rho3": F(1, 8), 3: F(-1, 8)},
            "u_rho2": {0: F(2, 9), 2: F(-1, 9), -2: F(-1, 9), "u_rho2": F(5, 32)}},
           {("a_rho3", "a_rho3"): {"a_rho3": 1}, ("u_rho2", "u_rho2"): {"u_rho2": 1},
            ("a_rho3", "u_rho2"): {}}),
}


def build(label: str) -> NSAlgebra:
    n, extra_axes, extra, pair_f, mixed_f, extra_f = SPECS[label]
    names = [f"a{i}" for i in range(n)] + extra_axes + extra
    pos = {nm: i for i, nm in enumerate(names)}
    dim = len(names)

    def vec(formula: dict, shift: int) -> list[F]:
        v = [F(0)] * dim
        for k, c in formula.items():
            j = pos[k] if isinstance(k, str) else (k + shift) % n
            v[j] += F(c)
        return v

    prods: dict[tuple[int, int], list[F]] = {}
    for i in range(n):
        prods[(i, i)] = vec({0: 1}, i)
        for d, f in pair_f.items():
            j = (i + d) % n
            prods[(min(i, j), max(i, j))] = vec(f, i)
        for x, f in mixed_f.items():
            prods[(i, pos[x])] = vec(f, i)
    for (x, y), f in extra_f.items():
        a, b = sorted((pos[x], pos[y]))
        prods[(a, b)] = vec(f, 0)
    axes_idx = list(range(n)) + [pos[x] for x in extra_axes]
    axes = [[F(int(k == i)) for k in range(dim)] for i in axes_idx]
    alg = Algebra.from_products(dim, prods, axes, names)
    form, free = solve_frobenius(alg, axes)
    if form is None or free:
        raise SystemExit(f"{label}: no unique Frobenius form (free={free})")
    return NSAlgebra(label, dim, names, alg, axes_idx, (0, 1), int(label[0]), n, form)


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    ok = True
    for label in SPECS:
        ns = build(label)
        report = verify_ns(ns)
        bad = [c for c in report if not c.passed]
        print(label, ns.dim, "ok" if not bad else bad)
        if bad:
            ok = False
            continue
        (OUT / f"{label}.json").write_text(json.dumps(ns.to_json(), indent=1) + "\n")
    if not ok:
        sys.exit(1)


if __name__ == "__main__":
    main()
