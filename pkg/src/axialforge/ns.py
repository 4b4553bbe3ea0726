"""The eight Norton-Sakuma algebras as verified structure-constant data.

Basis convention: the dihedral axes ``a_0 .. a_{n-1}`` first (``n`` is the
numeral of the label), then any extra axes (``a_rho`` in 2A, ``a_rho2`` in
4B, ``a_rho3`` in 6A), then the remaining extra vectors.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .algebra import Algebra, form_is_associative, unit
from .linalg import QMatrix, Subspace

LABELS = ("2A", "2B", "3A", "3C", "4A", "4B", "5A", "6A")
EXPECTED_DIM = {"2A": 3, "2B": 2, "3A": 4, "3C": 3, "4A": 5, "4B": 5, "5A": 6, "6A": 8}


class NSDataError(RuntimeError):
    pass


@dataclass
class NSAlgebra:
    label: str
    dim: int
    basis_names: list[str]
    algebra: Algebra
    axes: list[int]
    generators: tuple[int, int]
    rho_order: int
    period: int
    frobenius: QMatrix

    def axis_vector(self, i: int) -> list[Fraction]:
        return unit(self.dim, self.axes[i])

    def to_json(self) -> dict:
        data = self.algebra.to_json()
        return {
            "label": self.label,
            "dim": self.dim,
            "basis": self.basis_names,
            "products": data["products"],
            "axes": self.axes,
            "period": self.period,
            "frobenius": self.frobenius.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "NSAlgebra":
        n = data["dim"]
        axes = data["axes"]
        alg = Algebra.from_json({
            "dim": n,
            "basis": data["basis"],
            "products": data["products"],
            "axes": [[int(k == i) for k in range(n)] for i in axes],
        })
        return cls(data["label"], n, data["basis"], alg, axes, (0, 1), int(data["label"][0]),
                   data["period"], QMatrix.from_json(data["frobenius"], n))


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


def mk_miyamoto(a: NSAlgebra, axis: int) -> QMatrix:
    """Miyamoto involution of the ``axis``-th axis."""
    return a.algebra.miyamoto(a.axis_vector(axis))


def _group_closure(gens: list[QMatrix], limit: int = 64) -> list[QMatrix]:
    n = gens[0].rows
    elems = [QMatrix.identity(n)]
    frontier = list(elems)
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                h = e @ g
                if h not in elems:
                    elems.append(h)
                    nxt.append(h)
                    if len(elems) > limit:
                        raise NSDataError("Miyamoto group is unexpectedly large")
        frontier = nxt
    return elems


def miyamoto_group_order(a: NSAlgebra) -> int:
    return len(_group_closure([mk_miyamoto(a, 0), mk_miyamoto(a, 1)]))


def verify_ns(a: NSAlgebra) -> list[Check]:
    """Run every invariant check; failures are reported, not raised."""
    alg = a.algebra
    out = [Check("dimension", a.dim == EXPECTED_DIM.get(a.label), f"dim {a.dim}")]
    out.append(Check("commutative", alg.is_symmetric()))
    for i in range(len(a.axes)):
        v = a.axis_vector(i)
        fails = alg.fusion_failures(v)
        out.append(Check(f"axis {a.basis_names[a.axes[i]]} fusion law", not fails, "; ".join(fails)))
    F = a.frobenius
    out.append(Check("form symmetric", F.is_symmetric()))
    out.append(Check("form associative", form_is_associative(alg, F)))
    out.append(Check("form nonzero on axes", all(F[(i, i)] != 0 for i in a.axes)))
    # Miyamoto maps act as the dihedral reflections on a_0 .. a_{n-1}
    try:
        n = a.period
        for k in (0, 1):
            t = mk_miyamoto(a, k)
            ok = a.algebra.is_automorphism(t) and (t @ t) == QMatrix.identity(a.dim)
            out.append(Check(f"tau(a{k}) is an involutive automorphism", ok))
            if a.label in ("2A", "2B"):
                refl_ok = t == QMatrix.identity(a.dim)
            else:
                refl_ok = all(t.row(i) == unit(a.dim, (2 * k - i) % n) for i in range(n))
            out.append(Check(f"tau(a{k}) reflects the axis sequence", refl_ok))
        order = miyamoto_group_order(a)
        # rho = tau(a0) tau(a1) shifts a_i to a_{i+2}
        n_rho = n if n % 2 else n // 2
        want = 1 if a.label in ("2A", "2B") else 2 * n_rho
        out.append(Check("Miyamoto group order", order == want, f"order {order}"))
    except (ValueError, NSDataError) as exc:
        out.append(Check("Miyamoto maps", False, str(exc)))
    return out


@lru_cache(maxsize=None)
def load_ns(label: str) -> NSAlgebra:
    if label not in LABELS:
        raise KeyError(f"unknown Norton-Sakuma label {label!r}")
    text = resources.files("axialforge.data").joinpath("ns", f"{label}.json").read_text()
    ns = NSAlgebra.from_json(json.loads(text))
    bad = [c for c in verify_ns(ns) if not c.passed]
    if bad:
        raise NSDataError(f"{label} data fails verification: {[c.name for c in bad]}")
    return ns


def identify(alg: Algebra, p: list[Fraction], q: list[Fraction]) -> str:
    """Label of the subalgebra generated by the axes ``p`` and ``q``.

    The fingerprint is the subalgebra dimension together with the number of
    axes in the dihedral orbit of ``{p, q}``; 4A and 4B are told apart by
    whether ``a_0 a_2`` vanishes.
    """
    space = alg.closure([p, q])
    sub = alg.restrict(space)
    coords = [[x for x in _coords(space, v)] for v in (p, q)]
    tp, tq = sub.miyamoto(coords[0]), sub.miyamoto(coords[1])
    orbit = [tuple(coords[0]), tuple(coords[1])]
    frontier = list(orbit)
    while frontier:
        nxt = []
        for v in frontier:
            for t in (tp, tq):
                w = tuple(_apply(v, t))
                if w not in orbit:
                    orbit.append(w)
                    nxt.append(w)
        frontier = nxt
    key = (len(orbit), space.dim)
    table = {(2, 2): "2B", (2, 3): "2A", (3, 3): "3C", (3, 4): "3A", (5, 6): "5A", (6, 8): "6A"}
    if key in table:
        return table[key]
    if key == (4, 5):
        a0 = list(coords[0])
        a2 = _apply(a0, tq)  # a_0^{tau(a_1)} = a_2
        return "4A" if all(x == 0 for x in sub.mult(a0, a2)) else "4B"
    raise NSDataError(f"subalgebra with fingerprint {key} matches no Norton-Sakuma label")


def _coords(space, v) -> list[Fraction]:
    return [v[p] for p in space.pivots]


def _apply(v, t: QMatrix) -> list[Fraction]:
    n = t.rows
    return [sum(v[i] * t[(i, j)] for i in range(n) if v[i]) for j in range(n)]


def pair_suborbits(a: NSAlgebra) -> dict[tuple[int, int], str]:
    """Label generated by every unordered pair of distinct axes (basis indices)."""
    out = {}
    for x, i in enumerate(a.axes):
        for j in a.axes[x + 1:]:
            out[(i, j)] = identify(a.algebra, unit(a.dim, i), unit(a.dim, j))
    return out


@lru_cache(maxsize=None)
def monomial_basis(label: str) -> tuple[list, QMatrix]:
    """Products of ``a_0, a_1`` spanning the algebra, and the change of basis.

    Returns ``(trees, coeffs)`` where ``trees[k]`` is a nested tuple of 0/1
    leaves and row ``i`` of ``coeffs`` expresses basis vector ``i`` in terms
    of the tree products.
    """
    a = load_ns(label)
    alg = a.algebra
    trees: list = [0, 1]
    vecs = [a.axis_vector(0), a.axis_vector(1)]
    new = list(range(2))
    while len(vecs) < a.dim and new:
        fresh = []
        for i in range(len(trees)):
            for j in new:
                if j < i and j in new and i in new:
                    continue
                v = alg.mult(vecs[i], vecs[j])
                if Subspace(a.dim, vecs + [v]).dim > len(vecs):
                    trees.append((trees[i], trees[j]))
                    vecs.append(v)
                    fresh.append(len(vecs) - 1)
        new = fresh
    if len(vecs) < a.dim:
        raise NSDataError(f"{label} is not generated by a_0 and a_1")
    inv = QMatrix(QMatrix.from_rows(vecs).flint.inv())
    return trees, inv


def _eval_tree(alg: Algebra, tree, leaves: dict) -> list[Fraction]:
    if not isinstance(tree, tuple):
        return leaves[tree]
    return alg.mult(_eval_tree(alg, tree[0], leaves), _eval_tree(alg, tree[1], leaves))


@lru_cache(maxsize=None)
def embedding(sub: str, amb: str, x: int, y: int) -> tuple[tuple[Fraction, ...], ...]:
    """Images of the basis of ``sub`` in ``amb`` under ``a_0 -> e_x, a_1 -> e_y``.

    Raises NSDataError when the map is not an algebra homomorphism.
    """
    s, a = load_ns(sub), load_ns(amb)
    trees, coeffs = monomial_basis(sub)
    leaves = {0: unit(a.dim, x), 1: unit(a.dim, y)}
    images = [_eval_tree(a.algebra, t, leaves) for t in trees]
    out = []
    for i in range(s.dim):
        row = coeffs.row(i)
        out.append(tuple(sum(c * v[k] for c, v in zip(row, images) if c) for k in range(a.dim)))
    # homomorphism check on basis pairs
    for i in range(s.dim):
        for j in range(i, s.dim):
            prod = s.algebra.mult(unit(s.dim, i), unit(s.dim, j))
            lhs = [sum(c * out[k][t] for k, c in enumerate(prod) if c) for t in range(a.dim)]
            if lhs != a.algebra.mult(list(out[i]), list(out[j])):
                raise NSDataError(f"{sub} -> {amb} on ({x}, {y}) is not a homomorphism")
    return tuple(out)
