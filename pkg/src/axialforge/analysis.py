"""Invariants of completed algebras: forms, closure length, primitivity, shape."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Algebra, form_is_associative, solve_frobenius
from .config import Axet, Shape
from .linalg import QMatrix, Subspace, kernel, sym_signature
from .ns import NSDataError, identify, load_ns

FORM_KINDS = ("none", "indef", "semi", "pos")


@dataclass
class FormResult:
    matrix: QMatrix | None
    signature: tuple[int, int, int] | None
    kind: str
    # dimension of the solution space left after normalization and invariance;
    # nonzero means the reported matrix is one arbitrary member of a family
    free_dim: int = 0

    @property
    def flagged(self) -> bool:
        return self.free_dim > 0


@dataclass
class ShapeReport:
    pairs: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(p["ok"] for p in self.pairs)


@dataclass
class AlgebraResult:
    algebra: Algebra
    dim: int
    m_closure: int
    frobenius: FormResult
    primitive: bool
    shape_verified: bool
    shape_report: ShapeReport | None = None
    radical_quotient: "AlgebraResult | None" = None

    def summary(self) -> dict:
        out = {"dim": self.dim, "m": self.m_closure, "form": self.frobenius.kind, "primitive": self.primitive,
               "shape_verified": self.shape_verified}
        if self.frobenius.signature is not None:
            out["signature"] = list(self.frobenius.signature)
        if self.frobenius.flagged:
            out["form_free_dim"] = self.frobenius.free_dim
        if self.radical_quotient is not None:
            out["radical_quotient"] = self.radical_quotient.summary()
        return out


def form_kind(sig: tuple[int, int, int]) -> str:
    pos, zero, neg = sig
    if neg:
        return "indef"
    return "semi" if zero else "pos"


def _orbit_reps(alg: Algebra, ax: Axet | None) -> list[int]:
    if ax is None or ax.n != len(alg.axes):
        return list(range(len(alg.axes)))
    return [o[0] for o in ax.orbits]


def frobenius_form(alg: Algebra, ax: Axet | None = None) -> FormResult:
    """Associating symmetric form with ``(p, p) = 1`` on one axis per orbit.

    When normalization leaves freedom, invariance under the Miyamoto
    involutions is imposed; any freedom left after that is reported.
    """
    norm = [alg.axes[i] for i in _orbit_reps(alg, ax)]
    F, free = solve_frobenius(alg, norm)
    if F is not None and free:
        taus = [alg.miyamoto(a) for a in alg.axes]
        F2, free2 = solve_frobenius(alg, norm, taus)
        if F2 is not None:
            F, free = F2, free2
    if F is None:
        return FormResult(None, None, "none")
    if not form_is_associative(alg, F):
        raise AssertionError("solved form does not associate")
    for a in alg.axes:
        if _pair(F, a, a) == 0:
            return FormResult(F, sym_signature(F), "none", free)
    sig = sym_signature(F)
    return FormResult(F, sig, form_kind(sig), free)


def _pair(F: QMatrix, u, v) -> Fraction:
    n = F.rows
    return sum((u[i] * F[i, j] * v[j] for i in range(n) if u[i] for j in range(n) if v[j]), Fraction(0))


def m_closure(alg: Algebra) -> int:
    """Least ``m`` such that products of at most ``m`` axes span the algebra."""
    n = alg.dim
    if n == 0:
        return 1
    span = Subspace(n, alg.axes)
    layers: dict[int, list[list[Fraction]]] = {1: span.vectors()}
    m = 1
    while span.dim < n:
        m += 1
        new = []
        for i in range(1, m // 2 + 1):
            for u in layers.get(i, []):
                R = alg.ad(u)
                for v in layers.get(m - i, []):
                    w = [sum((v[r] * R[r, c] for r in range(n) if v[r]), Fraction(0)) for c in range(n)]
                    if not span.contains(w):
                        span = span + Subspace(n, [w])
                        new.append(w)
        layers[m] = new
        if not new and all(not layers.get(j) for j in range(m // 2 + 1, m)):
            raise ValueError("axes do not generate the algebra")
    return m


def primitivity(alg: Algebra) -> bool:
    n = alg.dim
    ident = QMatrix.identity(n)
    for a in alg.axes:
        if kernel((alg.ad(a) - ident).T).dim != 1:
            return False
    return True


def _orbit_size(sub: Algebra, p, q) -> int:
    tp, tq = sub.miyamoto(p), sub.miyamoto(q)
    seen = [tuple(p), tuple(q)]
    frontier = list(seen)
    while frontier:
        nxt = []
        for v in frontier:
            for t in (tp, tq):
                w = tuple(sum((v[i] * t[i, j] for i in range(len(v)) if v[i]), Fraction(0)) for j in range(len(v)))
                if w not in seen:
                    seen.append(w)
                    nxt.append(w)
        frontier = nxt
    return len(seen)


def verify_shape(alg: Algebra, shape: Shape) -> ShapeReport:
    """Check each pair-orbit representative generates its assigned label or a quotient of it."""
    rep = ShapeReport()
    for po, label in zip(shape.pair_orbits, shape.assignment):
        p, q = po.rep
        a, b = alg.axes[p], alg.axes[q]
        entry = {"pair": [p, q], "label": label}
        try:
            found = identify(alg, a, b)
        except NSDataError:
            found = None
        entry["found"] = found
        if found == label:
            entry["ok"] = True
        else:
            # accept proper quotients of the assigned algebra
            space = alg.closure([a, b])
            sub = alg.restrict(space)
            ca, cb = [a[i] for i in space.pivots], [b[i] for i in space.pivots]
            ns = load_ns(label)
            fusion_ok = not sub.fusion_failures(ca) and not sub.fusion_failures(cb)
            size = _orbit_size(sub, ca, cb) if fusion_ok else 0
            entry["ok"] = bool(fusion_ok and space.dim <= ns.dim and size and ns.period % size == 0)
        rep.pairs.append(entry)
    return rep


def radical(form: FormResult) -> Subspace:
    if form.matrix is None:
        raise ValueError("no form")
    return kernel(form.matrix)


def analyse(alg: Algebra, ax: Axet | None = None, shape: Shape | None = None, quotient: bool = True) -> AlgebraResult:
    form = frobenius_form(alg, ax)
    rep = verify_shape(alg, shape) if shape is not None else None
    res = AlgebraResult(
        algebra=alg, dim=alg.dim, m_closure=m_closure(alg), frobenius=form, primitive=primitivity(alg),
        shape_verified=rep.ok if rep is not None else False, shape_report=rep)
    if quotient and form.matrix is not None and form.signature is not None and form.signature[1]:
        res.radical_quotient = radical_quotient(res, ax, shape)
    return res


def radical_quotient(res: AlgebraResult, ax: Axet | None = None, shape: Shape | None = None) -> AlgebraResult:
    """Quotient by the radical of the form, analysed afresh."""
    rad = radical(res.frobenius)
    if rad.dim == 0:
        raise ValueError("the form has zero radical")
    alg = res.algebra
    if not alg.is_ideal(rad):
        raise AssertionError("radical of an associating form is not an ideal")
    quo, _ = alg.quotient(rad)
    return analyse(quo, ax, shape, quotient=False)


def _eval_tree(alg: Algebra, tree, leaves) -> list[Fraction]:
    if not isinstance(tree, tuple):
        return list(leaves[tree])
    return alg.mult(_eval_tree(alg, tree[0], leaves), _eval_tree(alg, tree[1], leaves))


def parse_tree(name: str):
    """Inverse of the engine's basis naming: ``x3`` or ``(left*right)``."""
    def walk(i: int):
        if name[i] == "x":
            j = i + 1
            while j < len(name) and name[j].isdigit():
                j += 1
            return int(name[i + 1:j]), j
        if name[i] != "(":
            raise ValueError(f"bad basis name {name!r}")
        left, i = walk(i + 1)
        if name[i] != "*":
            raise ValueError(f"bad basis name {name!r}")
        right, i = walk(i + 1)
        if name[i] != ")":
            raise ValueError(f"bad basis name {name!r}")
        return (left, right), i + 1

    tree, end = walk(0)
    if end != len(name):
        raise ValueError(f"bad basis name {name!r}")
    return tree


def group_matrices(alg: Algebra, ax: Axet, trees: list | None = None) -> list[QMatrix]:
    """Action of the generators of G on an algebra whose basis is the axis products ``trees``.

    ``trees`` default to those encoded in the basis names of a constructed algebra.
    """
    if trees is None:
        trees = [parse_tree(n) for n in alg.basis_names]
    out = []
    for g in ax.group.gen_idx:
        leaves = {x: alg.axes[ax.action[g][x]] for x in range(ax.n)}
        out.append(QMatrix.from_rows([_eval_tree(alg, t, leaves) for t in trees], alg.dim))
    return out

