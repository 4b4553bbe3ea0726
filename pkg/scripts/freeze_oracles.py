"""Compute reference values independently of the package's own algorithms and freeze them.

Group facts come from brute force over permutation tuples.  Signatures of
Gram matrices come from the characteristic polynomial: a real symmetric
matrix has only real eigenvalues, so Descartes' rule of signs counts the
positive and negative ones exactly.  Only the Gram matrices themselves are
produced by the package (construction plus form solve).

    python scripts/freeze_oracles.py  ->  tests/data/oracles.json
"""
from __future__ import annotations

import itertools
import json
from pathlib import Path

import sympy

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "oracles.json"


def compose(g, h):
    # right action: x^(gh) = (x^g)^h
    return tuple(h[g[i]] for i in range(len(g)))


def order(g):
    e = tuple(range(len(g)))
    k, x = 1, g
    while x != e:
        x, k = compose(x, g), k + 1
    return k


def closure(gens, n):
    e = tuple(range(n))
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def transposition(n, i, j):
    p = list(range(n))
    p[i], p[j] = j, i
    return tuple(p)


def group_oracles() -> dict:
    s4 = list(itertools.permutations(range(4)))
    t = transposition(4, 0, 1)
    cent = [g for g in s4 if compose(g, t) == compose(t, g)]
    low = closure([t], 4)
    up = closure([t, transposition(4, 2, 3)], 4)
    between = []
    for r in range(len(up) + 1):
        for sub in itertools.combinations(sorted(up), r):
            s = set(sub)
            if low <= s and all(compose(a, b) in s for a in s for b in s):
                between.append(len(s))
    # 2^3 as bit vectors under xor
    cube = list(range(8))
    subs = []
    for r in range(1, 9):
        for sub in itertools.combinations(cube, r):
            s = set(sub)
            if 0 in s and 1 in s and all(a ^ b in s for a in s for b in s):
                subs.append(len(s))
    s5_trans = [transposition(5, i, j) for i, j in itertools.combinations(range(5), 2)]
    s5_max = max(order(compose(a, b)) for a in s5_trans for b in s5_trans)
    return {
        "s4_transposition_centralizer_order": len(cent),
        "s4_interval_01_to_01_23": sorted(between),
        "c2cubed_subgroups_containing_a": sorted(subs),
        "s5_transposition_product_max_order": s5_max,
    }


def signature(rows) -> list[int]:
    M = sympy.Matrix([[sympy.Rational(x) for x in r] for r in rows])
    assert M == M.T
    lam = sympy.Symbol("lam")
    coeffs = sympy.Poly(M.charpoly(lam).as_expr(), lam).all_coeffs()[::-1]  # ascending powers
    zero = next(i for i, c in enumerate(coeffs) if c != 0)
    rest = coeffs[zero:]

    def changes(cs):
        signs = [c > 0 for c in cs if c != 0]
        return sum(a != b for a, b in zip(signs, signs[1:]))

    pos = changes(rest)
    neg = changes([c * (-1) ** i for i, c in enumerate(rest)])
    assert pos + neg + zero == M.rows
    return [pos, zero, neg]


GRAM_CASES = ["1/1+1+1/(2B)^3", "2^2/1+2+2/4A (2A)^2", "2^3/2+4+4/4A 4B (2A)^2"]


def gram_oracles() -> dict:
    from axialforge import analysis, engine, runner

    out = {}
    for text in GRAM_CASES:
        case = runner.resolve(text)
        verdict = engine.construct(case.axet, case.shape)
        form = analysis.frobenius_form(verdict.algebra, case.axet)
        rows = form.matrix.to_json()
        out[text] = {"dim": verdict.algebra.dim, "rank": sympy.Matrix(rows).rank(), "signature": signature(rows)}
    return out


def main() -> None:
    data = {"groups": group_oracles(), "gram": gram_oracles()}
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")
    print(json.dumps(data, indent=1, sort_keys=True))


if __name__ == "__main__":
    main()
