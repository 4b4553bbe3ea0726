import copy
import time
from fractions import Fraction

import pytest

from axialforge.algebra import EIGENVALUES, form_is_associative
from axialforge.linalg import QMatrix
from axialforge.ns import (LABELS, NSAlgebra, identify, load_ns, miyamoto_group_order, mk_miyamoto,
                           pair_suborbits, verify_ns)

# standard dimensions of the eight algebras (6A is 8)
DIMS = {"2A": 3, "2B": 2, "3A": 4, "3C": 3, "4A": 5, "4B": 5, "5A": 6, "6A": 8}


@pytest.mark.parametrize("label", LABELS)
def test_shipped_data_verifies(label):
    a = load_ns(label)
    assert a.dim == DIMS[label]
    assert all(c.passed for c in verify_ns(a))


@pytest.mark.parametrize("label", LABELS)
def test_axes_idempotent_with_monster_eigenvalues(label):
    a = load_ns(label)
    alg = a.algebra
    for i in range(len(a.axes)):
        v = a.axis_vector(i)
        assert alg.mult(v, v) == v
        es = alg.eigenspaces(v)
        assert set(es) <= set(EIGENVALUES)
        assert sum(s.dim for s in es.values()) == a.dim
        assert es[Fraction(1)].dim == 1
    assert form_is_associative(alg, a.frobenius)


def test_suite_under_one_second():
    load_ns.cache_clear()
    t0 = time.perf_counter()
    for label in LABELS:
        load_ns(label)
    assert time.perf_counter() - t0 < 1.0


def test_2b_axes_annihilate():
    a = load_ns("2B")
    assert a.algebra.mult(a.axis_vector(0), a.axis_vector(1)) == [0, 0]


def _corrupt(label, entry, coord, delta):
    data = copy.deepcopy(load_ns(label).to_json())
    data["products"][entry][coord] = str(Fraction(data["products"][entry][coord]) + delta)
    return NSAlgebra.from_json(data)


def test_corrupted_2b_fails_fusion():
    # a0*a1 = (a0 + a1)/2 is outside the fusion law for eigenvalues 1, 0
    data = copy.deepcopy(load_ns("2B").to_json())
    data["products"][1] = ["1/2", "1/2"]
    bad = NSAlgebra.from_json(data)
    assert any("fusion" in c.name and not c.passed for c in verify_ns(bad))


@pytest.mark.parametrize("label", LABELS)
def test_single_entry_mutations_detected(label):
    n = load_ns(label).dim
    upper = n * (n + 1) // 2
    for entry in range(0, upper, max(1, upper // 6)):
        for coord in (0, n - 1):
            bad = _corrupt(label, entry, coord, Fraction(1, 7))
            assert not all(c.passed for c in verify_ns(bad)), (label, entry, coord)


def test_5a_miyamoto_group_dihedral_of_order_10():
    assert miyamoto_group_order(load_ns("5A")) == 10


@pytest.mark.parametrize("label", ["2A", "2B"])
def test_trivial_miyamoto(label):
    a = load_ns(label)
    for i in range(len(a.axes)):
        assert mk_miyamoto(a, i) == QMatrix.identity(a.dim)


def test_3a_tau_a0_swaps_a1_a2():
    a = load_ns("3A")
    t = mk_miyamoto(a, 0)
    assert a.algebra.is_automorphism(t)
    assert t @ t == QMatrix.identity(4)
    assert t.row(1) == a.axis_vector(2) and t.row(2) == a.axis_vector(1)


@pytest.mark.parametrize("label", LABELS)
def test_miyamoto_involutive(label):
    a = load_ns(label)
    for i in range(len(a.axes)):
        t = mk_miyamoto(a, i)
        assert t @ t == QMatrix.identity(a.dim)


def test_pair_suborbits():
    assert set(pair_suborbits(load_ns("2B")).values()) == {"2B"}
    assert set(pair_suborbits(load_ns("6A")).values()) == {"6A", "3A", "2A"}
    p4a = pair_suborbits(load_ns("4A"))
    assert p4a[(0, 2)] == p4a[(1, 3)] == "2B"
    p4b = pair_suborbits(load_ns("4B"))
    assert p4b[(0, 2)] == p4b[(1, 3)] == "2A"


@pytest.mark.parametrize("label", LABELS)
def test_pair_suborbits_equivariant(label):
    a = load_ns(label)
    labels = pair_suborbits(a)
    for i in range(len(a.axes)):
        t = mk_miyamoto(a, i)
        image = {}
        for x in a.axes:
            row = t.row(x)
            image[x] = next(y for y in a.axes if row == a.axis_vector(a.axes.index(y)))
        for (x, y), lab in labels.items():
            u, v = sorted((image[x], image[y]))
            assert labels[(u, v)] == lab


@pytest.mark.parametrize("label", LABELS)
def test_identify_generators(label):
    a = load_ns(label)
    assert identify(a.algebra, a.axis_vector(0), a.axis_vector(1)) == label


def test_unknown_label():
    with pytest.raises(KeyError):
        load_ns("7A")
