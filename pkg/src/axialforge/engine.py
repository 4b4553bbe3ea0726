"""Construction of universal axial algebras of Monster type.

The partial algebra lives over GF(p).  ``W`` is always the coordinate prefix
of length ``wdim`` of the ambient space ``V``; products are known on ``W x W``.
Each pass derives relations from the fusion law and the grading for every
axis, closes them to an ideal and takes the quotient.  When nothing new turns
up and the multiplication is not total, the space is expanded: ``W`` becomes
``V`` and every product not already known becomes a new formal symbol.

Relations are computed for every axis rather than for orbit representatives,
so the relation space is stable under the group without ever writing down the
group action on the fresh symbols.  The action is rebuilt from products after
each quotient.

A completed algebra is lifted to Q by rational reconstruction on a basis of
axis products, then re-verified with exact arithmetic.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import ffmat as F
from . import modp
from .algebra import Algebra
from .config import Axet, Shape
from .modp import PRIME, PRIMES
from .ns import embedding, load_ns

CHECKPOINT_VERSION = 1
LAMBDAS = ("1", "0", "q", "10")
# (lambda, mu) -> eigenspace containing products, None meaning the product is 0
FUSION_TARGETS = [
    ("1", "0", None), ("1", "q", "q"), ("1", "10", "1"),
    ("0", "q", "q"), ("0", "10", "0"),
    ("q", "q", "10"), ("q", "10", "q"),
    ("10", "10", "10"),
]

Mat = np.ndarray
_CHUNK_ROWS = 2048


@dataclass
class Budget:
    max_expansions: int = 6
    max_dim: int = 600
    max_symbols: int = 6000


class ShapeInconsistency(ValueError):
    pass


def _pad(m: Mat, ncols: int) -> Mat:
    if m.shape[1] == ncols:
        return m
    return np.hstack([m, F.zeros(m.shape[0], ncols - m.shape[1])])


# ---------------------------------------------------------------- products


class DenseProducts:
    """Products on ``W x W``: ``table[i, j]`` is ``e_i e_j``."""

    def __init__(self, table: Mat, p: int):
        self.k, _, self.n = table.shape
        self.table, self.p = table, p

    def right_mult(self, u: Mat) -> Mat:
        """Matrix whose row ``j`` is ``u e_j``."""
        k, n = self.k, self.n
        if k == 0:
            return F.zeros(0, n)
        flat = F.mm(u[None, :k], self.table.reshape(k, k * n), self.p)
        return flat.reshape(k, n)

    def unit_mult(self, j: int) -> Mat:
        return self.table[j]

    def mult_pair(self, u: Mat, v: Mat) -> Mat:
        return F.mm(v[None, :], self.right_mult(u), self.p)[0]


class ExpandedProducts:
    """Products right after an expansion, with the new symbols left implicit.

    ``W`` is the old ``V`` (``k = old.n``); products of two old ``W`` vectors
    come from ``old``, every other product of basis vectors is a symbol.
    """

    def __init__(self, old: DenseProducts):
        self.old = old
        self.p = old.p
        k0, n0 = old.k, old.n
        self.k = n0
        sym = np.full((n0, n0), -1, dtype=np.int64)
        off = n0
        for b in range(k0, n0):
            sym[:b + 1, b] = np.arange(off, off + b + 1)
            sym[b, :b + 1] = sym[:b + 1, b]
            off += b + 1
        self.symtab = sym
        self.n = off

    def sym(self, i: int, j: int) -> int:
        return int(self.symtab[i, j])

    def symbol_pairs(self) -> list[tuple[int, int]]:
        k0, n0 = self.old.k, self.old.n
        return [(a, b) for b in range(k0, n0) for a in range(b + 1)]

    def right_mult(self, u: Mat) -> Mat:
        k0, n0, n = self.old.k, self.old.n, self.n
        m = F.zeros(n0, n)
        if u[:k0].any():
            m[:k0, :n0] = self.old.right_mult(u[:k0])
        for i in np.flatnonzero(u):
            col = self.symtab[i]
            rows = np.flatnonzero(col >= 0)
            m[rows, col[rows]] = u[i]
        return m

    def unit_mult(self, j: int) -> Mat:
        u = F.zeros(1, self.k)[0]
        u[j] = 1
        return self.right_mult(u)

    def mult_pair(self, u: Mat, v: Mat) -> Mat:
        return F.mm(v[None, :], self.right_mult(u), self.p)[0]


# ---------------------------------------------------------------- state


@dataclass
class PartialAlgebra:
    """Working state of a construction (all arithmetic modulo ``p``)."""
    p: int
    dim: int
    wdim: int
    products: DenseProducts | ExpandedProducts
    gens: list[int]  # group element indices
    wact: list[Mat]  # action of gens on W
    gmats: list[Mat] | None  # action of gens on V; None right after expansion
    axes: Mat
    espaces: list[dict[str, Mat]]
    pending: list[tuple[Mat, Mat, Mat]]
    names: list[str]
    provenance: dict[str, list[str]] = field(default_factory=dict)
    expansions: int = 0
    passes: int = 0
    key: str = ""

    @property
    def total(self) -> bool:
        return self.wdim == self.dim and not self.pending

    def edim(self) -> int:
        return sum(e[lam].shape[0] for e in self.espaces for lam in LAMBDAS)


@dataclass
class Completed:
    algebra: Algebra
    trees: list
    stats: dict
    state: PartialAlgebra | None = None


@dataclass
class Collapsed:
    stats: dict


@dataclass
class Incomplete:
    state: PartialAlgebra
    stats: dict
    reason: str


ConstructionVerdict = Completed | Collapsed | Incomplete


def case_key(ax: Axet, shape: Shape) -> str:
    data = {"gens": [list(g) for g in ax.group.gens], "action": [list(ax.action[g]) for g in ax.group.gen_idx],
            "tau": ax.tau, "labels": [shape.label_of(p, q) for p in range(ax.n) for q in range(p + 1, ax.n)]}
    return hashlib.sha256(json.dumps(data, sort_keys=True).encode()).hexdigest()[:16]


def _words(ax: Axet) -> list[list[int]]:
    g = ax.group
    words: list[list[int] | None] = [None] * len(g)
    words[0] = []
    frontier = [0]
    while frontier:
        nxt = []
        for e in frontier:
            for gi, gen in enumerate(g.gen_idx):
                h = g.mul[e][gen]
                if words[h] is None:
                    words[h] = words[e] + [gi]
                    nxt.append(h)
        frontier = nxt
    return words  # type: ignore[return-value]


def _inv(x: int, p: int) -> int:
    return pow(x, -1, p)


# ---------------------------------------------------------------- seed


def seed(ax: Axet, shape: Shape, p: int = PRIME) -> PartialAlgebra:
    """Glue one Norton-Sakuma copy per pair of axes.

    The free space has a coordinate per axis and per extra basis vector of
    each copy.  A sub-pair of a copy generates a smaller copy that is
    identified with the corresponding image inside the bigger one.
    """
    n = ax.n
    names = [f"x{i}" for i in range(n)]
    copies: dict[tuple[int, int], tuple[str, list[int]]] = {}
    for a in range(n):
        for b in range(a + 1, n):
            label = shape.label_of(a, b)
            ns = load_ns(label)
            seq = ax.axis_sequence(a, b, ns.period)
            cmap = list(seq)
            for e in range(ns.period, ns.dim):
                cmap.append(len(names))
                names.append(f"{label}[{a},{b}].{ns.basis_names[e]}")
            copies[(a, b)] = (label, cmap)
    N = len(names)

    def image(ab: tuple[int, int], vec) -> list[Fraction]:
        out = [Fraction(0)] * N
        for i, c in enumerate(vec):
            if c:
                out[copies[ab][1][i]] += c
        return out

    rels: list[list[Fraction]] = []
    for (a, b), (label, cmap) in copies.items():
        per = load_ns(label).period
        for i in range(per):
            for j in range(i + 1, per):
                if (i, j) == (0, 1):
                    continue
                pa, pb = cmap[i], cmap[j]
                x, y = (i, j) if pa < pb else (j, i)
                sub = shape.label_of(pa, pb)
                try:
                    emb = embedding(sub, label, x, y)
                except Exception as exc:
                    raise ShapeInconsistency(f"{sub} does not sit in {label} on ({i}, {j})") from exc
                key = (min(pa, pb), max(pa, pb))
                for bsub, vec in enumerate(emb):
                    r = image((a, b), vec)
                    r[copies[key][1][bsub]] -= 1
                    if any(r):
                        rels.append(r)

    # group action on the free coordinates
    gens = list(ax.group.gen_idx)
    gfree = []
    for g in gens:
        act = ax.action[g]
        rows = [[Fraction(0)] * N for _ in range(N)]
        for i in range(n):
            rows[i][act[i]] = Fraction(1)
        for (a, b), (label, cmap) in copies.items():
            ns = load_ns(label)
            a2, b2 = act[a], act[b]
            for e in range(ns.period, ns.dim):
                if a2 < b2:
                    rows[cmap[e]][copies[(a2, b2)][1][e]] = Fraction(1)
                else:
                    rows[cmap[e]] = image((b2, a2), embedding(label, label, 1, 0)[e])
        gfree.append(rows)

    def fmod(vec) -> list[int]:
        return [modp.to_mod(c, p) for c in vec]

    table = np.zeros((n, n, N), dtype=F.DTYPE)
    for a in range(n):
        for b in range(n):
            if a == b:
                table[a, b, a] = 1
            else:
                lo, hi = min(a, b), max(a, b)
                label = copies[(lo, hi)][0]
                ns = load_ns(label)
                v = image((lo, hi), ns.algebra.mult(ns.axis_vector(0), ns.axis_vector(1)))
                table[a, b] = fmod(v)
    pending = []
    for (a, b), (label, cmap) in copies.items():
        ns = load_ns(label)
        for i in range(ns.dim):
            for j in range(i, ns.dim):
                if i < ns.period and j < ns.period:
                    continue
                u = F.zeros(1, N)[0]
                u[cmap[i]] = 1
                v = F.zeros(1, N)[0]
                v[cmap[j]] = 1
                w = F.asmat([fmod(image((a, b), ns.algebra.mult(_unit(ns.dim, i), _unit(ns.dim, j))))])[0]
                pending.append((u, v, w))
    axes = F.identity(N)[:n].copy()
    gmats = [F.asmat([fmod(r) for r in rows], N, p) for rows in gfree]
    st = PartialAlgebra(
        p=p, dim=N, wdim=n, products=DenseProducts(table, p), gens=gens,
        wact=[m[:n, :n].copy() for m in gmats], gmats=gmats,
        axes=axes, espaces=[_empty_spaces(axes, x) for x in range(n)], pending=pending,
        names=names, key=case_key(ax, shape))
    R = F.asmat([fmod(r) for r in rels], N, p)
    for m in gmats:
        if R.shape[0] and F.rank(np.vstack([R, F.mm(R, m, p)]), p) != F.rank(R, p):
            raise ShapeInconsistency("gluing relations are not stable under the group")
    return reduce(st, R)


def _unit(n: int, i: int) -> list[Fraction]:
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return v


def _empty_spaces(axes: Mat, x: int) -> dict[str, Mat]:
    a = axes[x:x + 1].copy()
    N = axes.shape[1]
    return {"1": a, "0": F.zeros(0, N), "q": F.zeros(0, N), "10": a.copy()}


# ---------------------------------------------------------------- relations


def _tau_on_w(st: PartialAlgebra, ax: Axet, x: int, words, cache: dict) -> Mat:
    t = ax.tau[x]
    if t not in cache:
        m = F.identity(st.wdim)
        for gi in words[t]:
            m = F.mm(m, st.wact[gi], st.p)
        cache[t] = m
    return cache[t]


def _w_part(E: Mat, k: int, p: int) -> Mat:
    """Basis (in W coordinates) of ``E`` intersected with ``W``."""
    n = E.shape[1]
    if E.shape[0] == 0:
        return F.zeros(0, k)
    if n == k:
        return E
    c = F.left_kernel(E[:, k:], p)
    if c.shape[0] == 0:
        return F.zeros(0, k)
    return F.rowspace(F.mm(c, E[:, :k], p), p)


def _span(mats: list[Mat], N: int, p: int) -> Mat:
    return F.rowspace(F.vstack(mats, N), p)


def axis_relations(st: PartialAlgebra, ax: Axet, x: int, words, tau_cache: dict) -> list[Mat]:
    """Relations forced by the fusion law at axis ``x``; grows its eigenspaces."""
    p, N, k = st.p, st.dim, st.wdim
    quarter, e32 = _inv(4, p), _inv(32, p)
    rels = []
    a = st.axes[x]
    if a[k:].any():
        raise AssertionError("axis outside W")
    Ra = st.products.right_mult(a[:k])
    T = _tau_on_w(st, ax, x, words, tau_cache)
    Tm = F.sub(T, F.identity(k), p)

    # grading: the -1 space of tau is the 1/32-space
    um = F.rowspace(Tm, p)
    if um.shape[0]:
        rels.append(F.sub(F.mm(um, Ra, p), F.scale(_pad(um, N), e32, p), p))

    # eigenprojections of vectors u in W^+ with a u in W
    kmat = np.hstack([Ra[:, k:], Tm]) if N > k else Tm
    bp = F.left_kernel(kmat, p)
    E = st.espaces[x]
    if bp.shape[0]:
        x1 = F.mm(bp, Ra, p)
        x2 = F.mm(x1[:, :k], Ra, p)
        e1 = F.scale(F.sub(x2, F.scale(x1, quarter, p), p), 4 * _inv(3, p) % p, p)
        eq = F.scale(F.sub(x1, x2, p), 16 * _inv(3, p) % p, p)
        e0 = F.sub(F.sub(_pad(bp, N), e1, p), eq, p)
        E["1"] = _span([E["1"], e1], N, p)
        E["0"] = _span([E["0"], e0], N, p)
        E["q"] = _span([E["q"], eq], N, p)
    E["10"] = _span([E["10"], E["1"], E["0"]], N, p)

    U = {lam: _w_part(E[lam], k, p) for lam in LAMBDAS}
    # eigenvectors lie in the +1 space of tau
    for lam in ("1", "0", "q"):
        if U[lam].shape[0]:
            rels.append(_pad(F.mm(U[lam], Tm, p), N))
    # a splits E_{1,0} into its two parts
    if U["10"].shape[0]:
        ax10 = F.mm(U["10"], Ra, p)
        E["1"] = _span([E["1"], ax10], N, p)
        E["0"] = _span([E["0"], F.sub(_pad(U["10"], N), ax10, p)], N, p)

    # fusion rules
    adds: dict[str, list[Mat]] = {lam: [] for lam in LAMBDAS}
    for lam in LAMBDAS:
        rules = [(mu, tgt) for (l2, mu, tgt) in FUSION_TARGETS if l2 == lam and U[mu].shape[0]]
        if not rules:
            continue
        for u in U[lam]:
            Ru = st.products.right_mult(u)
            for mu, tgt in rules:
                prod = F.mm(U[mu], Ru, p)
                if tgt is None:
                    rels.append(prod)
                else:
                    adds[tgt].append(prod)
    for lam in LAMBDAS:
        if adds[lam]:
            E[lam] = _span([E[lam]] + adds[lam], N, p)
    E["10"] = _span([E["10"], E["1"], E["0"]], N, p)

    # resurrection: combinations of eigenvectors that land in W
    B = F.vstack([E["1"], E["0"], E["q"]], N)
    if B.shape[0]:
        C = F.left_kernel(B[:, k:], p) if N > k else F.identity(B.shape[0])
        if C.shape[0]:
            wv = F.mm(C, B, p)
            lamB = F.vstack([E["1"], F.zeros(E["0"].shape[0], N), F.scale(E["q"], quarter, p)], N)
            rels.append(F.sub(F.mm(wv[:, :k], Ra, p), F.mm(C, lamB, p), p))
        # the eigenspaces must be independent
        K = F.left_kernel(B, p)
        if K.shape[0]:
            n1, n0 = E["1"].shape[0], E["0"].shape[0]
            for (s, t), blk in (((0, n1), E["1"]), ((n1, n1 + n0), E["0"]), ((n1 + n0, B.shape[0]), E["q"])):
                if t > s:
                    rels.append(F.mm(K[:, s:t], blk, p))
    if E["10"].shape[0] and E["q"].shape[0]:
        K2 = F.left_kernel(np.vstack([E["10"], E["q"]]), p)
        if K2.shape[0]:
            rels.append(F.mm(K2[:, :E["10"].shape[0]], E["10"], p))
    return rels


def find_relations(st: PartialAlgebra, ax: Axet) -> tuple[Mat, bool]:
    """All relations of one pass, and whether any eigenspace grew."""
    p, N, k = st.p, st.dim, st.wdim
    rels = []
    keep = []
    for u, v, w in st.pending:
        if u[k:].any() or v[k:].any():
            keep.append((u, v, w))
            continue
        r = F.sub(st.products.mult_pair(u[:k], v[:k])[None, :], w[None, :], p)
        if r.any():
            rels.append(r)
    st.pending = keep
    before = st.edim()
    words = _words(ax)
    cache: dict = {}
    for x in range(ax.n):
        rels.extend(axis_relations(st, ax, x, words, cache))
    grew = st.edim() > before
    return _span(rels, N, p), grew


# ---------------------------------------------------------------- quotient


def _ideal_closure(st: PartialAlgebra, R: Mat) -> Mat:
    p, N, k = st.p, st.dim, st.wdim
    seen = -1
    while True:
        if R.shape[0] == 0:
            return R
        rw = _w_part(R, k, p)
        if rw.shape[0] == seen or rw.shape[0] == 0:
            return R
        seen = rw.shape[0]
        # fold the products in by chunks so the stacked matrix stays small
        chunk: list[Mat] = []
        rows = 0
        for j in range(k):
            blk = F.mm(rw, st.products.unit_mult(j), p)
            chunk.append(blk)
            rows += blk.shape[0]
            if rows >= max(R.shape[0], _CHUNK_ROWS) or j == k - 1:
                R = _span([R] + chunk, N, p)
                chunk, rows = [], 0


def _quotient_map(R: Mat, N: int, k: int, protected: set[int], p: int) -> tuple[list[int], Mat]:
    """Kept coordinates and the matrix sending old coordinates to new ones."""
    order = [c for c in range(N - 1, k - 1, -1) if c not in protected]
    order += [c for c in range(k - 1, -1, -1) if c not in protected]
    order += sorted(protected)
    order_a = np.array(order, dtype=np.int64)
    if R.shape[0]:
        red, piv = F.rref(R[:, order_a], p)
    else:
        red, piv = F.zeros(0, N), []
    pivot_old = order_a[piv] if piv else np.zeros(0, dtype=np.int64)
    is_piv = np.zeros(N, dtype=bool)
    is_piv[pivot_old] = True
    kept = [c for c in range(N) if not is_piv[c]]
    pos = np.empty(N, dtype=np.int64)
    pos[order_a] = np.arange(N)
    Q = F.zeros(N, len(kept))
    Q[kept, np.arange(len(kept))] = 1
    if piv:
        Q[pivot_old, :] = F.neg(red[:, pos[kept]], p)
    return kept, Q


def reduce(st: PartialAlgebra, rels: Mat) -> PartialAlgebra:
    """Quotient by the ideal generated by ``rels``; rebuilds products and action."""
    p, N, k = st.p, st.dim, st.wdim
    R = _ideal_closure(st, rels)
    if R.shape[0] == 0 and st.gmats is not None:
        return st
    protected = set()
    for r in st.axes:
        nz = np.flatnonzero(r)
        if len(nz) == 1:
            protected.add(int(nz[0]))
    kept, Q = _quotient_map(R, N, k, protected, p)
    kept_w = [c for c in kept if c < k]
    N2, k2 = len(kept), len(kept_w)

    prods = st.products
    if isinstance(prods, DenseProducts):
        sub = prods.table[np.ix_(kept_w, kept_w)].reshape(k2 * k2, N)
        table = F.mm(sub, Q, p).reshape(k2, k2, N2)
    else:
        table = np.zeros((k2, k2, N2), dtype=F.DTYPE)
        for t, i in enumerate(kept_w):
            table[t] = F.mm(prods.unit_mult(i)[kept_w], Q, p)
    if st.gmats is not None:
        gm = [F.mm(m[kept], Q, p) for m in st.gmats]
    else:
        gm = []
        pair_of = {prods.sym(a, b): (a, b) for a, b in prods.symbol_pairs()}
        for m in st.wact:
            out = F.zeros(N2, N)
            byfirst: dict[int, list[tuple[int, int]]] = {}
            for t, c in enumerate(kept):
                if c < prods.k:
                    out[t, :prods.k] = m[c]
                else:
                    a, b = pair_of[c]
                    byfirst.setdefault(a, []).append((b, t))
            for a, lst in byfirst.items():
                Rm = prods.right_mult(m[a])
                bs = [b for b, _ in lst]
                out[[t for _, t in lst]] = F.mm(m[bs], Rm, p)
            gm.append(F.mm(out, Q, p))
    wact = [g[:k2, :k2].copy() for g in gm]
    names = [st.names[c] for c in kept]
    espaces = [{lam: F.rowspace(F.mm(e[lam], Q, p), p) for lam in LAMBDAS} for e in st.espaces]
    pending = []
    if st.pending:
        stacked = F.mm(np.vstack([np.vstack(t) for t in st.pending]), Q, p).reshape(len(st.pending), 3, N2)
        seen = set()
        for uu, vv, ww in stacked:
            key = (uu.tobytes(), vv.tobytes(), ww.tobytes())
            if key not in seen and (key[1], key[0], key[2]) not in seen:
                seen.add(key)
                pending.append((uu, vv, ww))
    return PartialAlgebra(
        p=p, dim=N2, wdim=k2, products=DenseProducts(table, p), gens=st.gens, wact=wact,
        gmats=gm, axes=F.mm(st.axes, Q, p), espaces=espaces, pending=pending, names=names,
        provenance=st.provenance, expansions=st.expansions, passes=st.passes, key=st.key)


# ---------------------------------------------------------------- expansion


def expand(st: PartialAlgebra) -> PartialAlgebra:
    """Make every product of ``V`` defined by adjoining formal symbols."""
    if st.gmats is None:
        raise ValueError("expand needs a reduced state")
    p, N = st.p, st.dim
    if st.wdim == N:
        return st
    ep = ExpandedProducts(st.products)
    n2 = ep.n
    names = list(st.names)
    prov = dict(st.provenance)
    tag = st.expansions + 1
    for t, (a, b) in enumerate(ep.symbol_pairs()):
        nm = f"s{tag}.{t}"
        names.append(nm)
        prov[nm] = [st.names[a], st.names[b]]
    return PartialAlgebra(
        p=p, dim=n2, wdim=N, products=ep, gens=st.gens, wact=st.gmats, gmats=None,
        axes=_pad(st.axes, n2),
        espaces=[{lam: _pad(e[lam], n2) for lam in LAMBDAS} for e in st.espaces],
        pending=[tuple(_pad(t[None, :], n2)[0] for t in trip) for trip in st.pending],
        names=names, provenance=prov, expansions=tag, passes=st.passes, key=st.key)


def symbol_count(st: PartialAlgebra) -> int:
    N, k = st.dim, st.wdim
    return N * (N + 1) // 2 - k * (k + 1) // 2


def is_collapsed(st: PartialAlgebra) -> bool:
    return st.dim == 0 or not st.axes.any(axis=1).all()


# ---------------------------------------------------------------- driver


def construct_mod(ax: Axet, shape: Shape, budget: Budget | None = None, p: int = PRIME,
                  resume: PartialAlgebra | None = None,
                  on_pass: Callable[[PartialAlgebra], None] | None = None) -> ConstructionVerdict:
    budget = budget or Budget()
    try:
        st = resume if resume is not None else seed(ax, shape, p)
    except ShapeInconsistency as exc:
        return Collapsed({"reason": f"inconsistent gluing: {exc}"})
    history = []
    while True:
        if is_collapsed(st):
            return Collapsed(_stats(st, history))
        rels, grew = find_relations(st, ax)
        st.passes += 1
        expanded = st.gmats is None
        if rels.shape[0] or expanded:
            st = reduce(st, rels)
        history.append(st.dim)
        if on_pass is not None:
            on_pass(st)
        if is_collapsed(st):
            return Collapsed(_stats(st, history))
        if st.wdim > budget.max_dim:
            return Incomplete(st, _stats(st, history), f"dimension {st.wdim} exceeds {budget.max_dim}")
        if rels.shape[0] or grew:
            continue
        if st.total:
            return Completed(None, [], _stats(st, history), st)  # type: ignore[arg-type]
        if st.expansions >= budget.max_expansions:
            return Incomplete(st, _stats(st, history), f"{budget.max_expansions} expansions used")
        if symbol_count(st) + st.dim > budget.max_symbols:
            return Incomplete(st, _stats(st, history), f"expansion to {symbol_count(st) + st.dim} dimensions refused")
        st = expand(st)


def _stats(st: PartialAlgebra, history: list[int]) -> dict:
    return {"dim": st.dim, "expansions": st.expansions, "passes": st.passes, "dims": list(history)}


# ---------------------------------------------------------------- lifting to Q


def monomial_basis_mod(st: PartialAlgebra) -> tuple[list, Mat]:
    """Axis products spanning ``V``, shortest first."""
    p, N = st.p, st.dim
    trees: list = []
    vecs: list[Mat] = []
    by_len: dict[int, list[int]] = {1: []}
    echelon = F.zeros(0, N)

    def grows(v: Mat) -> bool:
        nonlocal echelon
        trial = F.rowspace(np.vstack([echelon, v[None, :]]), p)
        if trial.shape[0] > echelon.shape[0]:
            echelon = trial
            return True
        return False

    for x, r in enumerate(st.axes):
        if grows(r):
            trees.append(x)
            vecs.append(r)
            by_len[1].append(len(trees) - 1)
    length = 1
    while echelon.shape[0] < N:
        length += 1
        by_len[length] = []
        for l1 in range(1, length // 2 + 1):
            l2 = length - l1
            for i in by_len.get(l1, []):
                Ri = st.products.right_mult(vecs[i])
                for j in by_len.get(l2, []):
                    if l1 == l2 and j < i:
                        continue
                    v = F.mm(vecs[j][None, :], Ri, p)[0]
                    if grows(v):
                        trees.append((trees[i], trees[j]))
                        vecs.append(v)
                        by_len[length].append(len(trees) - 1)
        if not by_len[length] and all(not by_len.get(l) for l in range(length // 2 + 1, length)):
            raise AssertionError("axes do not generate the algebra")
    return trees, np.vstack(vecs)


def structure_constants_mod(st: PartialAlgebra, B: Mat) -> tuple[list[list[list[int]]], list[list[int]]]:
    """Products of the basis ``B`` in ``B`` coordinates, and axes in ``B`` coordinates."""
    p, N = st.p, st.dim
    Binv = F.inverse(B, p)
    table = []
    for i in range(N):
        table.append(F.mm(F.mm(B, st.products.right_mult(B[i]), p), Binv, p).tolist())
    return table, F.mm(st.axes, Binv, p).tolist()


def _reconstruct(residues: list[list[int]], primes: list[int]) -> list[Fraction]:
    return modp.lift_vector(residues, primes)


def lift(states: list[PartialAlgebra], trees: list) -> Algebra:
    """Rational algebra from one or more mod-p runs sharing the same monomial basis."""
    primes = [s.p for s in states]
    data = []
    for s in states:
        t, B = monomial_basis_mod(s)
        if t != trees:
            raise modp.LiftError("monomial bases differ between primes")
        data.append(structure_constants_mod(s, B))
    N = states[0].dim
    prods = {}
    for i in range(N):
        for j in range(i, N):
            prods[(i, j)] = _reconstruct([d[0][i][j] for d in data], primes)
    axes = [_reconstruct([d[1][x] for d in data], primes) for x in range(len(data[0][1]))]
    names = [tree_name(t) for t in trees]
    return Algebra.from_products(N, prods, axes, names)


def tree_name(t) -> str:
    if isinstance(t, tuple):
        return f"({tree_name(t[0])}*{tree_name(t[1])})"
    return f"x{t}"


def verify_lift(alg: Algebra) -> list[str]:
    fails = []
    for i, a in enumerate(alg.axes):
        if alg.mult(a, a) != a:
            fails.append(f"axis {i} is not idempotent")
        f = alg.fusion_failures(a)
        if f:
            fails.append(f"axis {i}: " + "; ".join(f))
    return fails


def construct(ax: Axet, shape: Shape, budget: Budget | None = None,
              on_pass: Callable[[PartialAlgebra], None] | None = None,
              resume: PartialAlgebra | None = None) -> ConstructionVerdict:
    """Build the universal algebra; Completed results carry an exact algebra over Q."""
    verdict = construct_mod(ax, shape, budget, PRIMES[0], resume=resume, on_pass=on_pass)
    if not isinstance(verdict, Completed):
        return verdict
    states = [verdict.state]
    trees, _ = monomial_basis_mod(verdict.state)
    for extra in PRIMES[1:] + [None]:
        try:
            alg = lift(states, trees)
            fails = verify_lift(alg)
            if not fails:
                verdict.algebra = alg
                verdict.trees = trees
                return verdict
        except modp.LiftError:
            pass
        if extra is None:
            raise ArithmeticError("could not lift the algebra to Q")
        other = construct_mod(ax, shape, budget, extra)
        if not isinstance(other, Completed) or other.state.dim != verdict.state.dim:
            raise ArithmeticError("runs modulo different primes disagree")
        states.append(other.state)


# ---------------------------------------------------------------- checkpoints


def checkpoint_save(st: PartialAlgebra) -> bytes:
    if st.gmats is None:
        raise ValueError("only reduced states can be saved")
    if st.dim == 0:
        raise ValueError("empty state")
    t = st.products.table
    i, j, c = np.nonzero(t)
    upper = i <= j
    prods = np.stack([i[upper], j[upper], c[upper], t[i[upper], j[upper], c[upper]].astype(np.int64)], axis=1)
    data = {
        "version": CHECKPOINT_VERSION,
        "modulus": st.p,
        "dim": st.dim,
        "wdim": st.wdim,
        "basis": st.names,
        "provenance": st.provenance,
        "products": prods.tolist(),
        "gens": st.gens,
        "gaction": [m.tolist() for m in st.gmats],
        "axes": st.axes.tolist(),
        "espaces": [{lam: e[lam].tolist() for lam in LAMBDAS} for e in st.espaces],
        "pending": [[x.tolist() for x in trip] for trip in st.pending],
        "expansions": st.expansions,
        "passes": st.passes,
        "key": st.key,
    }
    return json.dumps(data, sort_keys=True, separators=(",", ":")).encode()


class CheckpointError(ValueError):
    pass


def checkpoint_load(blob: bytes, key: str | None = None) -> PartialAlgebra:
    try:
        data = json.loads(blob)
    except (ValueError, UnicodeDecodeError) as exc:
        raise CheckpointError("corrupt checkpoint") from exc
    if not isinstance(data, dict) or not data:
        raise CheckpointError("empty checkpoint")
    if data.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError(f"unsupported checkpoint version {data.get('version')!r}")
    if key is not None and data["key"] != key:
        raise CheckpointError("checkpoint belongs to a different case")
    try:
        p, N, k = data["modulus"], data["dim"], data["wdim"]
        table = np.zeros((k, k, N), dtype=F.DTYPE)
        for i, j, c, v in data["products"]:
            table[i, j, c] = v
            table[j, i, c] = v
        gm = [F.asmat(m, N, p) for m in data["gaction"]]
        return PartialAlgebra(
            p=p, dim=N, wdim=k, products=DenseProducts(table, p), gens=data["gens"],
            wact=[m[:k, :k].copy() for m in gm], gmats=gm,
            axes=F.asmat(data["axes"], N, p),
            espaces=[{lam: F.asmat(e[lam], N, p) for lam in LAMBDAS} for e in data["espaces"]],
            pending=[tuple(F.asmat([x], N, p)[0] for x in trip) for trip in data["pending"]],
            names=data["basis"], provenance=data["provenance"], expansions=data["expansions"],
            passes=data["passes"], key=data["key"])
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise CheckpointError("malformed checkpoint") from exc
