"""Small permutation groups stored as explicit element lists.

Every group in the catalog has order at most 150, so all operations here
(orbits, centralizers, subgroup intervals, automorphisms) are done by
exhaustive enumeration over a multiplication table.  Permutations act on
the right: ``x^g = g[x]`` and ``(g*h)[x] = h[g[x]]``.
"""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from typing import Iterable, Sequence

Perm = tuple  # images of 0..n-1


def perm_mul(g: Perm, h: Perm) -> Perm:
    """Apply ``g`` first, then ``h``."""
    return tuple(h[i] for i in g)


def perm_inv(g: Perm) -> Perm:
    inv = [0] * len(g)
    for i, j in enumerate(g):
        inv[j] = i
    return tuple(inv)


def perm_order(g: Perm) -> int:
    seen = [False] * len(g)
    order = 1
    for i in range(len(g)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = g[j]
            length += 1
        order = order * length // _gcd(order, length)
    return order


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def parse_cycles(text: str, degree: int) -> Perm:
    """Parse cycle notation like ``"(0 1)(2 3)"``; ``"()"`` is the identity."""
    images = list(range(degree))
    for cyc in re.findall(r"\(([^()]*)\)", text):
        pts = [int(t) for t in cyc.replace(",", " ").split()]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            if a >= degree or b >= degree:
                raise ValueError(f"point out of range in {text!r}")
            images[a] = b
    if sorted(images) != list(range(degree)):
        raise ValueError(f"not a permutation: {text!r}")
    return tuple(images)


def format_cycles(g: Perm) -> str:
    seen = set()
    out = []
    for i in range(len(g)):
        if i in seen or g[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = g[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = g[j]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


class Group:
    """A finite permutation group with all elements enumerated.

    Elements are referred to by their index into ``elements``; index 0 is
    always the identity.
    """

    def __init__(self, gens: Sequence[Perm], degree: int | None = None):
        if degree is None:
            degree = len(gens[0]) if gens else 1
        self.degree = degree
        ident = tuple(range(degree))
        self.gens = [tuple(g) for g in gens]
        elements = [ident]
        index = {ident: 0}
        frontier = [ident]
        while frontier:
            nxt = []
            for e in frontier:
                for g in self.gens:
                    h = perm_mul(e, g)
                    if h not in index:
                        index[h] = len(elements)
                        elements.append(h)
                        nxt.append(h)
            frontier = nxt
        self.elements: list[Perm] = elements
        self.index: dict[Perm, int] = index
        self.mul = [[index[perm_mul(a, b)] for b in elements] for a in elements]
        self.inv = [index[perm_inv(a)] for a in elements]
        self.gen_idx = [index[g] for g in self.gens]
        self._class_keys: dict = {}

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def idx(self, g: Perm | int) -> int:
        if isinstance(g, int):
            return g
        try:
            return self.index[tuple(g)]
        except KeyError:
            raise ValueError(f"{format_cycles(tuple(g))} is not in the group") from None

    @cached_property
    def element_orders(self) -> list[int]:
        return [perm_order(g) for g in self.elements]

    def conj(self, t: int, g: int) -> int:
        """``t^g = g^-1 t g``."""
        return self.mul[self.mul[self.inv[g]][t]][g]

    def conj_class(self, t: int) -> frozenset[int]:
        return frozenset(self.conj(t, g) for g in range(len(self)))

    def centralizer(self, t: int) -> frozenset[int]:
        return frozenset(g for g in range(len(self)) if self.mul[g][t] == self.mul[t][g])

    def generate(self, gens: Iterable[int]) -> frozenset[int]:
        """Subgroup generated by the given element indices."""
        gens = [g for g in set(gens) if g != 0]
        elems = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for e in frontier:
                for g in gens:
                    h = self.mul[e][g]
                    if h not in elems:
                        elems.add(h)
                        nxt.append(h)
            frontier = nxt
        return frozenset(elems)

    def is_subgroup(self, s: Iterable[int]) -> bool:
        s = set(s)
        if 0 not in s:
            return False
        return all(self.mul[a][b] in s for a in s for b in s)

    def conj_subgroup(self, h: frozenset[int], g: int) -> frozenset[int]:
        return frozenset(self.conj(x, g) for x in h)

    def normalizer(self, h: frozenset[int]) -> frozenset[int]:
        return frozenset(g for g in range(len(self)) if self.conj_subgroup(h, g) == h)

    def orbit(self, point: int) -> frozenset[int]:
        if not 0 <= point < self.degree:
            raise ValueError(f"point {point} not in domain")
        return frozenset(g[point] for g in self.elements)

    def stabilizer(self, point: int) -> frozenset[int]:
        if not 0 <= point < self.degree:
            raise ValueError(f"point {point} not in domain")
        return frozenset(i for i, g in enumerate(self.elements) if g[point] == point)

    def subgroup_interval(self, lower: frozenset[int], upper: frozenset[int]) -> list[frozenset[int]]:
        """All subgroups ``H`` with ``lower <= H <= upper``."""
        lower, upper = frozenset(lower), frozenset(upper)
        if not lower <= upper:
            raise ValueError("lower is not contained in upper")
        found = {lower}
        frontier = [lower]
        # grow one generator at a time; every subgroup in the interval is reached
        while frontier:
            nxt = []
            for h in frontier:
                for x in upper - h:
                    k = self.generate(set(h) | {x})
                    if k not in found:
                        found.add(k)
                        nxt.append(k)
            frontier = nxt
        return sorted(found, key=lambda s: (len(s), sorted(s)))

    def right_cosets(self, h: frozenset[int]) -> list[frozenset[int]]:
        cosets = []
        seen = set()
        for g in range(len(self)):
            if g in seen:
                continue
            c = frozenset(self.mul[x][g] for x in h)
            seen |= c
            cosets.append(c)
        return cosets

    def coset_action(self, h: frozenset[int]) -> list[tuple[int, ...]]:
        """Action of every element on the right cosets of ``h``.

        Point 0 is the coset ``h`` itself.  Returns one image tuple per
        group element (indexed like ``elements``).
        """
        cosets = self.right_cosets(h)
        where = {}
        for i, c in enumerate(cosets):
            for x in c:
                where[x] = i
        reps = [min(c) for c in cosets]
        return [tuple(where[self.mul[r][g]] for r in reps) for g in range(len(self))]

    def automorphisms(self) -> list[list[int]]:
        """All automorphisms, each as a list mapping element index -> index."""
        gens = self._small_generating_set()
        orders = self.element_orders
        cands = [[h for h in range(len(self)) if orders[h] == orders[g]] for g in gens]
        autos = []
        for images in itertools.product(*cands):
            phi = self._extend_hom(gens, images)
            if phi is not None and len(set(phi)) == len(self):
                autos.append(phi)
        return autos

    @cached_property
    def automorphism_list(self) -> list[list[int]]:
        return self.automorphisms()

    @cached_property
    def outer_automorphism_reps(self) -> list[list[int]]:
        """One automorphism per coset of the inner automorphism group."""
        inner = []
        seen_inner = set()
        for h in range(len(self)):
            c = tuple(self.conj(x, h) for x in range(len(self)))
            if c not in seen_inner:
                seen_inner.add(c)
                inner.append(c)
        covered: set[tuple[int, ...]] = set()
        reps = []
        for phi in self.automorphism_list:
            if tuple(phi) in covered:
                continue
            reps.append(phi)
            for c in inner:
                covered.add(tuple(phi[c[x]] for x in range(len(self))))
        return reps

    def _small_generating_set(self) -> list[int]:
        best = None
        elems = range(1, len(self))
        for r in range(1, 4):
            for combo in itertools.combinations(elems, r):
                if len(self.generate(combo)) == len(self):
                    return list(combo)
            if r == 2 and len(self) > 400:
                break
        best = [g for g in self.gen_idx if g != 0]
        return best

    def _extend_hom(self, gens: Sequence[int], images: Sequence[int]) -> list[int] | None:
        phi = [-1] * len(self)
        phi[0] = 0
        frontier = [0]
        while frontier:
            nxt = []
            for e in frontier:
                for g, h in zip(gens, images):
                    x = self.mul[e][g]
                    y = self.mul[phi[e]][h]
                    if phi[x] == -1:
                        phi[x] = y
                        nxt.append(x)
                    elif phi[x] != y:
                        return None
            frontier = nxt
        if -1 in phi:
            return None
        # check the homomorphism property on generators for all elements
        for e in range(len(self)):
            for g, h in zip(gens, images):
                if phi[self.mul[e][g]] != self.mul[phi[e]][h]:
                    return None
        return phi


@dataclass
class MarkedGroup:
    """A group with three marked involution-or-identity generators.

    ``D`` is the union of the conjugacy classes of the marked generators,
    without the identity.
    """

    name: str
    group: Group
    marks: tuple[int, int, int]
    axes_patterns: list[str] = field(default_factory=list)

    @property
    def degree(self) -> int:
        return self.group.degree

    @property
    def gens(self) -> tuple[Perm, Perm, Perm]:
        return tuple(self.group.elements[m] for m in self.marks)

    @property
    def elements(self) -> list[Perm]:
        return self.group.elements

    @cached_property
    def D(self) -> frozenset[int]:
        out = set()
        for m in self.marks:
            if m != 0:
                out |= self.group.conj_class(m)
        return frozenset(out)

    def validate(self) -> None:
        g = self.group
        for m in self.marks:
            if g.mul[m][m] != 0:
                raise ValueError(f"{self.name}: marked generator is not an involution")
        if len(g.generate(self.marks)) != len(g):
            raise ValueError(f"{self.name}: marked generators do not generate the group")


def is_six_transposition(mg: MarkedGroup) -> bool:
    g = mg.group
    orders = g.element_orders
    D = mg.D
    return all(orders[g.mul[d][e]] <= 6 for d in D for e in D)


def _load_catalog_data() -> list[dict]:
    text = resources.files("axialforge.data").joinpath("catalog.json").read_text()
    return json.loads(text)


def catalog() -> list[MarkedGroup]:
    """The pinned catalog: one marked group per generator triple.

    The permutation representations and triples are a reconstruction: they
    were found by search (scripts/build_catalog.py) and checked against the
    published shape counts, not copied from a source listing.
    """
    out = []
    groups: dict[str, Group] = {}
    for entry in _load_catalog_data():
        deg = entry["degree"]
        name = entry["name"]
        if name not in groups:
            ggens = [parse_cycles(c, deg) for c in entry["group_gens"]]
            groups[name] = Group(ggens, deg)
        grp = groups[name]
        marks = tuple(grp.idx(parse_cycles(c, deg)) for c in entry["gens"])
        mg = MarkedGroup(name, grp, marks, list(entry.get("axes_patterns", [])))
        mg.validate()
        out.append(mg)
    return out


def catalog_groups() -> dict[str, list[MarkedGroup]]:
    out: dict[str, list[MarkedGroup]] = {}
    for mg in catalog():
        out.setdefault(mg.name, []).append(mg)
    return out
