"""Axis configurations (axets), pair orbits and shapes.

An axet is a G-set ``X`` with an equivariant map ``tau: X -> G``.  Each
orbit is described by the pair ``(t, H)``: the tau value and stabilizer of a
base point, with ``<t> <= H <= C_G(t)`` and ``H = G`` exactly when ``t = 1``.
Two orbits are isomorphic as tau-sets iff their pairs are G-conjugate.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .permgrp import Group, MarkedGroup, format_cycles

log = logging.getLogger(__name__)

LABELS_BY_PERIOD = {
    2: ("2A", "2B"),
    3: ("3A", "3C"),
    4: ("4A", "4B"),
    5: ("5A",),
    6: ("6A",),
}

# (label) -> list of (step, forced label): the pair (a_0, a_step) of the
# dihedral axis sequence generates a subalgebra of the forced type
CONTAINMENTS = {
    "3A": [(2, "3A")],
    "3C": [(2, "3C")],
    "4A": [(2, "2B")],
    "4B": [(2, "2A")],
    "5A": [(2, "5A")],
    "6A": [(2, "3A"), (3, "2A")],
}


def label_period(label: str) -> int:
    return int(label[0])


@dataclass(frozen=True)
class OrbitType:
    t: int
    H: frozenset


def orbit_type_key(g: Group, ot: OrbitType) -> tuple:
    """Canonical key of the G-conjugacy class of ``(t, H)``."""
    cache = g._class_keys
    hit = cache.get((ot.t, ot.H))
    if hit is not None:
        return hit
    best = None
    for x in range(len(g)):
        k = (g.conj(ot.t, x), tuple(sorted(g.conj_subgroup(ot.H, x))))
        if best is None or k < best:
            best = k
    cache[(ot.t, ot.H)] = best
    return best


@dataclass
class Axet:
    group: Group
    orbit_types: list[OrbitType]
    action: list[tuple[int, ...]]  # action[g][p] = p^g
    tau: list[int]
    orbit_of: list[int]
    orbits: list[list[int]]
    generators_axes: tuple[int, int, int] = (0, 0, 0)
    marked: MarkedGroup | None = None

    @property
    def n(self) -> int:
        return len(self.tau)

    @property
    def orbit_decomposition(self) -> list[int]:
        return [len(o) for o in self.orbits]

    @property
    def pattern(self) -> str:
        return "+".join(str(s) for s in sorted(self.orbit_decomposition))

    def stabilizer(self, p: int) -> frozenset[int]:
        return frozenset(g for g in range(len(self.group)) if self.action[g][p] == p)

    def check(self) -> None:
        """Re-verify the axet invariants from scratch."""
        g = self.group
        for p in range(self.n):
            for x in range(len(g)):
                if self.tau[self.action[x][p]] != g.conj(self.tau[p], x):
                    raise AssertionError("tau is not equivariant")
            stab = self.stabilizer(p)
            t = self.tau[p]
            if t not in stab or not stab <= g.centralizer(t):
                raise AssertionError("stabilizer bounds violated")
            if (t == 0) != (len(stab) == len(g)):
                raise AssertionError("tau is trivial exactly on fixed axes")
        if len(g.generate(self.tau)) != len(g):
            raise AssertionError("tau image does not generate G")
        covered = set()
        for a in self.generators_axes:
            covered |= {self.action[x][a] for x in range(len(g))}
        if covered != set(range(self.n)):
            raise AssertionError("X is not the union of the generator orbits")

    def axis_sequence(self, p: int, q: int, length: int) -> list[int]:
        """``a_0 = p, a_1 = q, a_{2k} = p^{rho^k}, a_{2k+1} = q^{rho^k}``."""
        g = self.group
        rho = g.mul[self.tau[p]][self.tau[q]]
        seq = []
        cur = 0
        for k in range((length + 1) // 2):
            seq.append(self.action[cur][p])
            seq.append(self.action[cur][q])
            cur = g.mul[cur][rho]
        return seq[:length]

    def pair_period(self, p: int, q: int) -> int | None:
        """Period of the dihedral axis sequence of ``{p, q}``.

        Returns None when the sequence is not injective on its period,
        in which case no dihedral algebra fits the pair.
        """
        seq = self.axis_sequence(p, q, 14)
        for n in range(2, 7):
            if seq[n] == seq[0] and seq[n + 1] == seq[1]:
                if len(set(seq[:n])) == n:
                    return n
                return None
        return None

    @cached_property
    def pair_orbit_data(self) -> tuple[list[tuple[int, int]], dict[tuple[int, int], int]]:
        reps = []
        which: dict[tuple[int, int], int] = {}
        for p in range(self.n):
            for q in range(p + 1, self.n):
                if (p, q) in which:
                    continue
                idx = len(reps)
                reps.append((p, q))
                for x in range(len(self.group)):
                    a, b = self.action[x][p], self.action[x][q]
                    which[(min(a, b), max(a, b))] = idx
        return reps, which

    def pair_orbit_of(self, p: int, q: int) -> int:
        return self.pair_orbit_data[1][(min(p, q), max(p, q))]


@dataclass
class PairOrbit:
    rep: tuple[int, int]
    size: int
    rho_order: int
    period: int | None


def pair_orbits(ax: Axet) -> list[PairOrbit]:
    reps, which = ax.pair_orbit_data
    sizes = [0] * len(reps)
    for idx in which.values():
        sizes[idx] += 1
    out = []
    orders = ax.group.element_orders
    for i, (p, q) in enumerate(reps):
        rho = ax.group.mul[ax.tau[p]][ax.tau[q]]
        if orders[rho] > 6:
            raise RuntimeError(f"rho-order {orders[rho]} exceeds 6")
        out.append(PairOrbit((p, q), sizes[i], orders[rho], ax.pair_period(p, q)))
    return out


def build_axet(g: Group, orbit_types: Sequence[OrbitType], gen_points=None, marked=None) -> Axet:
    action: list[list[int]] = [[] for _ in range(len(g))]
    tau: list[int] = []
    orbit_of: list[int] = []
    orbits = []
    for oi, ot in enumerate(orbit_types):
        cosets = g.right_cosets(ot.H)
        reps = [min(c) for c in cosets]
        acts = g.coset_action(ot.H)
        off = len(tau)
        for x in range(len(g)):
            action[x].extend(off + i for i in acts[x])
        orbits.append(list(range(off, off + len(cosets))))
        tau.extend(g.conj(ot.t, r) for r in reps)
        orbit_of.extend([oi] * len(cosets))
    ax = Axet(g, list(orbit_types), [tuple(a) for a in action], tau, orbit_of, orbits,
              marked=marked)
    if gen_points is not None:
        ax.generators_axes = tuple(gen_points)
    return ax


# ---------------------------------------------------------------- stabilizers

def candidate_stabilizers(g: Group, t: int) -> list[frozenset[int]]:
    """Subgroups ``H`` with ``<t> <= H <= C_G(t)``; ``[G]`` when ``t = 1``."""
    if t == 0:
        return [frozenset(range(len(g)))]
    subs = g.subgroup_interval(g.generate([t]), g.centralizer(t))
    return [h for h in subs if len(h) != len(g)]


def lemma_filters_ok(ax: Axet) -> bool:
    """Stabilizer constraints that any genuine axis set must satisfy."""
    g = ax.group
    orders = g.element_orders
    stabs = [ax.stabilizer(p) for p in range(ax.n)]
    same_tau: dict[int, list[int]] = {}
    for p, t in enumerate(ax.tau):
        same_tau.setdefault(t, []).append(p)
    strong = [len(stabs[p]) == len(g.centralizer(ax.tau[p])) for p in range(ax.n)]
    for d in range(ax.n):
        td = ax.tau[d]
        for e in range(ax.n):
            if e == d:
                continue
            te = ax.tau[e]
            prod = g.mul[td][te]
            o = orders[prod]
            if o == 5 and len(same_tau[td]) > 1:
                return False
            if o == 2 and strong[e] and te not in stabs[d]:
                return False
            if o == 4 and g.mul[prod][prod] not in stabs[d]:
                return False
    return True


def is_faithful(ax: Axet) -> bool:
    ident = tuple(range(ax.n))
    return sum(1 for a in ax.action if a == ident) == 1


def is_two_generated(ax: Axet) -> bool:
    """True if some pair of axes has a dihedral closure covering all of X."""
    g = ax.group
    if ax.n <= 2:
        return True
    for p in range(ax.n):
        for q in range(p + 1, ax.n):
            sub = g.generate([ax.tau[p], ax.tau[q]])
            reach = {ax.action[x][p] for x in sub} | {ax.action[x][q] for x in sub}
            if len(reach) == ax.n:
                return True
    return False


# ---------------------------------------------------------------- symmetries

def axet_automorphism_generators(ax: Axet, autos: list[list[int]] | None = None) -> list[list[int]]:
    """Point permutations generating the automorphism group of the axet.

    ``autos`` must contain a representative of every outer automorphism
    class.  An automorphism is a pair ``(phi, pi)`` with ``phi`` in Aut(G) and
    ``pi(x^g) = pi(x)^phi(g)``, ``tau(pi(x)) = phi(tau(x))``.  Only ``pi``
    is returned.
    """
    g = ax.group
    if autos is None:
        autos = g.outer_automorphism_reps
    keys = [orbit_type_key(g, ot) for ot in ax.orbit_types]
    gens = []

    def base_points(orbit: int, t: int, H: frozenset) -> list[int]:
        out = []
        for p in ax.orbits[orbit]:
            if ax.tau[p] == t and ax.stabilizer(p) == H:
                out.append(p)
        return out

    def extend(images: dict[int, int], phi: list[int]) -> list[int]:
        pi = [-1] * ax.n
        for oi, orb in enumerate(ax.orbits):
            p0 = orb[0]
            q0 = images[oi]
            for x in range(len(g)):
                pi[ax.action[x][p0]] = ax.action[phi[x]][q0]
        return pi

    for phi in autos:
        mapped = [OrbitType(phi[ot.t], frozenset(phi[h] for h in ot.H)) for ot in ax.orbit_types]
        mkeys = [orbit_type_key(g, m) for m in mapped]
        targets = []
        used = set()
        ok = True
        for oi, mk in enumerate(mkeys):
            cand = [j for j in range(len(ax.orbits)) if keys[j] == mk and j not in used]
            if not cand:
                ok = False
                break
            used.add(cand[0])
            bp = base_points(cand[0], mapped[oi].t, mapped[oi].H)
            targets.append(bp[0])
        if ok:
            gens.append(extend(dict(enumerate(targets)), phi))
    gens.extend(list(ax.action[h]) for h in g.gen_idx)
    ident = list(range(len(g)))
    # swaps of isomorphic orbits and shifts of base points within an orbit
    for i, j in itertools.combinations(range(len(ax.orbits)), 2):
        if keys[i] == keys[j]:
            ot = ax.orbit_types[i]
            images = {k: ax.orbits[k][0] for k in range(len(ax.orbits))}
            images[i] = base_points(j, ot.t, ot.H)[0]
            images[j] = base_points(i, ax.orbit_types[j].t, ax.orbit_types[j].H)[0]
            gens.append(extend(images, ident))
    for i, ot in enumerate(ax.orbit_types):
        for bp in base_points(i, ot.t, ot.H)[1:]:
            images = {k: ax.orbits[k][0] for k in range(len(ax.orbits))}
            images[i] = bp
            gens.append(extend(images, ident))
    for pi in gens:
        assert sorted(pi) == list(range(ax.n))
    return gens


def axet_key(g: Group, types: Sequence[OrbitType], autos: list[list[int]] | None = None) -> tuple:
    """Canonical key of the axet up to automorphisms of G."""
    if autos is None:
        autos = g.outer_automorphism_reps
    best = None
    for phi in autos:
        mapped = sorted(
            orbit_type_key(g, OrbitType(phi[ot.t], frozenset(phi[h] for h in ot.H)))
            for ot in types
        )
        k = tuple(mapped)
        if best is None or k < best:
            best = k
    return best


# ---------------------------------------------------------------- enumeration

def _fusion_partitions(k: int) -> list[list[list[int]]]:
    if k == 0:
        return [[]]
    out = []
    for rest in _fusion_partitions(k - 1):
        for i in range(len(rest)):
            out.append([blk + [k - 1] if j == i else blk for j, blk in enumerate(rest)])
        out.append(rest + [[k - 1]])
    return out


@dataclass
class Enumeration:
    axets: list[Axet]
    keys: list[tuple]


def enumerate_axets(mg: MarkedGroup, autos: list[list[int]] | None = None) -> list[Axet]:
    """All admissible axets whose generator axes have tau values ``mg.marks``."""
    g = mg.group
    if autos is None:
        autos = g.outer_automorphism_reps
    found: dict[tuple, Axet] = {}
    marks = mg.marks
    choices = [candidate_stabilizers(g, t) for t in marks]
    for stabs in itertools.product(*choices):
        pairs = [OrbitType(t, h) for t, h in zip(marks, stabs)]
        pkeys = [orbit_type_key(g, p) for p in pairs]
        for part in _fusion_partitions(3):
            if any(len({pkeys[i] for i in blk}) > 1 for blk in part):
                continue
            types = [pairs[blk[0]] for blk in part]
            gen_points = [None, None, None]
            ax = build_axet(g, types, marked=mg)
            for bi, blk in enumerate(part):
                for i in blk:
                    gen_points[i] = _find_point(ax, bi, pairs[i])
            ax.generators_axes = tuple(gen_points)
            if not admissible(ax):
                continue
            key = axet_key(g, types, autos)
            if key not in found:
                found[key] = ax
    return list(found.values())


def _find_point(ax: Axet, orbit: int, ot: OrbitType) -> int:
    for p in ax.orbits[orbit]:
        if ax.tau[p] == ot.t and ax.stabilizer(p) == ot.H:
            return p
    raise AssertionError("orbit does not contain the requested point")


def admissible(ax: Axet) -> bool:
    if not is_faithful(ax):
        return False
    if not lemma_filters_ok(ax):
        return False
    if is_two_generated(ax):
        return False
    if not _six_transposition(ax):
        return False
    return True


def _six_transposition(ax: Axet) -> bool:
    g = ax.group
    D = set()
    for t in set(ax.tau):
        if t != 0:
            D |= g.conj_class(t)
    orders = g.element_orders
    return all(orders[g.mul[d][e]] <= 6 for d in D for e in D)


# ---------------------------------------------------------------- shapes

@dataclass
class Shape:
    axet: Axet
    pair_orbits: list[PairOrbit]
    assignment: list[str]
    edges: list[tuple[int, int]] = field(default_factory=list)

    @cached_property
    def components(self) -> list[list[int]]:
        parent = list(range(len(self.pair_orbits)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for a, b in self.edges:
            parent[find(a)] = find(b)
        comps: dict[int, list[int]] = {}
        for i in range(len(self.pair_orbits)):
            comps.setdefault(find(i), []).append(i)
        return sorted(comps.values())

    def component_labels(self) -> list[str]:
        out = []
        for comp in self.components:
            top = max(comp, key=lambda i: (self.pair_orbits[i].period or 0, -i))
            out.append(self.assignment[top])
        return out

    @property
    def name(self) -> str:
        labels = sorted(self.component_labels(), key=lambda s: (-int(s[0]), s))
        return shape_string(labels)

    def label_of(self, p: int, q: int) -> str:
        return self.assignment[self.axet.pair_orbit_of(p, q)]

    def to_json(self) -> dict:
        ax = self.axet
        g = ax.group
        return {
            "group": ax.marked.name if ax.marked is not None else None,
            "axes_pattern": ax.pattern,
            "tau_map": [format_cycles(g.elements[t]) for t in ax.tau],
            "pair_orbits": [{"reps": list(po.rep), "rho_order": po.rho_order, "label": lab}
                            for po, lab in zip(self.pair_orbits, self.assignment)],
        }


def shape_string(labels: Iterable[str]) -> str:
    """Compress consecutive repeats: ``["2A", "2A", "2B"] -> "(2A)^2 2B"``."""
    labels = list(labels)
    out = []
    i = 0
    while i < len(labels):
        j = i
        while j < len(labels) and labels[j] == labels[i]:
            j += 1
        out.append(labels[i] if j - i == 1 else f"({labels[i]})^{j - i}")
        i = j
    return " ".join(out)


def shape_label_multiset(text: str) -> list[str]:
    """Inverse of ``shape_string`` up to order; accepts ``^`` or juxtaposed powers."""
    out = []
    for tok in text.replace("²", "^2").replace("³", "^3").split():
        if tok.startswith("("):
            lab, _, power = tok[1:].partition(")")
            out.extend([lab] * int(power.lstrip("^") or 1))
        else:
            out.append(tok)
    return sorted(out)


def shape_constraints(ax: Axet) -> tuple[list[PairOrbit], dict[tuple[int, str], list[tuple[int, str]]], list[tuple[int, int]]]:
    """Pair orbits, forced implications and the shape-graph edges."""
    pos = pair_orbits(ax)
    implies: dict[tuple[int, str], list[tuple[int, str]]] = {}
    edges = set()
    for i, po in enumerate(pos):
        if po.period is None:
            continue
        seq = ax.axis_sequence(*po.rep, 2 * po.period)
        for lab in LABELS_BY_PERIOD.get(po.period, ()):
            for step, sub in CONTAINMENTS.get(lab, []):
                for s in range(po.period):
                    j = ax.pair_orbit_of(seq[s], seq[s + step])
                    implies.setdefault((i, lab), []).append((j, sub))
                    edges.add((min(i, j), max(i, j)))
    return pos, implies, sorted(edges)


def enumerate_shapes(ax: Axet, autos: list[list[int]] | None = None, dedupe: bool = True) -> list[Shape]:
    pos, implies, edges = shape_constraints(ax)
    allowed = [LABELS_BY_PERIOD.get(po.period, ()) if po.period else () for po in pos]
    if any(not a for a in allowed):
        return []
    order = sorted(range(len(pos)), key=lambda i: (-(pos[i].period or 0), i))
    results: list[list[str]] = []

    def assign(cur: dict[int, str], i: int, lab: str) -> bool:
        stack = [(i, lab)]
        while stack:
            j, l = stack.pop()
            if j in cur:
                if cur[j] != l:
                    return False
                continue
            if l not in allowed[j]:
                return False
            cur[j] = l
            stack.extend(implies.get((j, l), []))
        return True

    def rec(cur: dict[int, str], k: int):
        while k < len(order) and order[k] in cur:
            k += 1
        if k == len(order):
            results.append([cur[i] for i in range(len(pos))])
            return
        i = order[k]
        for lab in allowed[i]:
            nxt = dict(cur)
            if assign(nxt, i, lab):
                rec(nxt, k + 1)

    rec({}, 0)
    shapes = [Shape(ax, pos, a, edges) for a in results]
    if not dedupe or len(shapes) <= 1:
        return shapes
    if autos is None:
        autos = ax.group.outer_automorphism_reps
    perms = _pair_orbit_perms(ax, axet_automorphism_generators(ax, autos))
    seen = set()
    out = []
    for s in shapes:
        key = tuple(s.assignment)
        if key in seen:
            continue
        out.append(s)
        # mark the whole orbit of this assignment under the symmetry group
        frontier = [key]
        seen.add(key)
        while frontier:
            nxt = []
            for a in frontier:
                for perm in perms:
                    b = [None] * len(a)
                    for i, lab in enumerate(a):
                        b[perm[i]] = lab
                    b = tuple(b)
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
    return out


def _pair_orbit_perms(ax: Axet, point_perms: list[list[int]]) -> list[list[int]]:
    reps, _ = ax.pair_orbit_data
    out = []
    for pi in point_perms:
        out.append([ax.pair_orbit_of(pi[p], pi[q]) for p, q in reps])
    return out
