"""Shared fixtures-by-import: cached constructions and the frozen oracle file."""
from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from axialforge import engine, runner

DATA = Path(__file__).parent / "data"


@lru_cache(maxsize=None)
def oracles() -> dict:
    return json.loads((DATA / "oracles.json").read_text())


@lru_cache(maxsize=None)
def build(text: str):
    """``(case, verdict)`` for a case id, constructed once per session."""
    case = runner.resolve(text)
    return case, engine.construct(case.axet, case.shape)


def descartes_signature(rows) -> tuple[int, int, int]:
    """Signature of a real symmetric matrix from its characteristic polynomial.

    All eigenvalues are real, so sign changes count them exactly.
    """
    import sympy

    M = sympy.Matrix(rows)
    lam = sympy.Symbol("lam")
    cs = sympy.Poly(M.charpoly(lam).as_expr(), lam).all_coeffs()[::-1]
    zero = next(i for i, c in enumerate(cs) if c != 0)
    cs = cs[zero:]

    def changes(xs):
        s = [x > 0 for x in xs if x != 0]
        return sum(a != b for a, b in zip(s, s[1:]))

    return changes(cs), zero, changes([c * (-1) ** i for i, c in enumerate(cs)])


def element_matrices(alg, ax):
    """Matrix of every group element, composed from the generators (right action)."""
    from axialforge.analysis import group_matrices
    from axialforge.linalg import QMatrix

    g = ax.group
    gens = list(zip(g.gen_idx, group_matrices(alg, ax)))
    mats = {0: QMatrix.identity(alg.dim)}
    frontier = [0]
    while frontier:
        nxt = []
        for e in frontier:
            for gi, M in gens:
                h = g.mul[e][gi]
                if h not in mats:
                    mats[h] = mats[e] @ M
                    nxt.append(h)
        frontier = nxt
    return mats


def closure_layers(alg) -> list[int]:
    """Dimensions of V_1, V_2, ... (products of at most k axes) until the whole algebra."""
    from axialforge.linalg import Subspace

    n = alg.dim
    layers = {1: [list(a) for a in alg.axes]}
    span = Subspace(n, layers[1])
    dims = [span.dim]
    k = 1
    while span.dim < n:
        k += 1
        new = []
        for i in range(1, k // 2 + 1):
            for u in layers[i]:
                for v in layers[k - i]:
                    new.append(alg.mult(u, v))
        layers[k] = Subspace(n, new).vectors()
        span = span + Subspace(n, new)
        dims.append(span.dim)
        if k > 2 * n + 2:
            break
    return dims


def property_failures(alg, ax, m: int) -> list[str]:
    """Miyamoto automorphisms, G-equivariance and tau-compatibility, m-closure consistency."""
    from axialforge.linalg import QMatrix

    fails = []
    ident = QMatrix.identity(alg.dim)
    taus = []
    for i, a in enumerate(alg.axes):
        T = alg.miyamoto(a)
        taus.append(T)
        if not alg.is_automorphism(T):
            fails.append(f"tau of axis {i} is not an automorphism")
        if T @ T != ident:
            fails.append(f"tau of axis {i} has order > 2")
    mats = element_matrices(alg, ax)
    if len(mats) != len(ax.group):
        fails.append("generators do not reach every group element")
    for g, M in mats.items():
        if not alg.is_automorphism(M):
            fails.append(f"group element {g} does not act as an automorphism")
            break
        rows = [[sum((a[r] * M[r, c] for r in range(alg.dim) if a[r]), Fraction(0)) for c in range(alg.dim)]
                for a in alg.axes]
        if rows != [alg.axes[ax.action[g][x]] for x in range(ax.n)]:
            fails.append(f"group element {g} does not permute the axes as the axet says")
            break
    for x in range(ax.n):
        if mats[ax.tau[x]] != taus[x]:
            fails.append(f"tau({x}) in G disagrees with the Miyamoto map of axis {x}")
            break
    dims = closure_layers(alg)
    if len(dims) != m or dims[-1] != alg.dim or (m > 1 and dims[m - 2] == alg.dim):
        fails.append(f"m-closure {m} inconsistent with layer dimensions {dims}")
    return fails
