from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from axialforge import ffmat as F
from axialforge.modp import PRIMES, LiftError, crt_pair, lift_vector, rational_reconstruct, to_mod

PRIME_CHOICES = [PRIMES[0], PRIMES[1]]


def py_mm(A, B, p):
    return [[sum(a * b for a, b in zip(row, col)) % p for col in zip(*B)] for row in A]


def py_rank(A, p):
    A = [list(r) for r in A]
    rank = 0
    for c in range(len(A[0]) if A else 0):
        piv = next((i for i in range(rank, len(A)) if A[i][c] % p), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][c], -1, p)
        A[rank] = [x * inv % p for x in A[rank]]
        for i in range(len(A)):
            if i != rank and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[rank])]
        rank += 1
    return rank


def residues(p):
    # mix tiny entries (to force dependencies) with full-width ones
    return st.one_of(st.integers(0, 3), st.integers(0, p - 1))


def mats(p, rows=6, cols=6):
    return st.integers(1, rows).flatmap(lambda r: st.integers(1, cols).flatmap(
        lambda c: st.lists(st.lists(residues(p), min_size=c, max_size=c), min_size=r, max_size=r)))


@pytest.mark.parametrize("p", PRIME_CHOICES)
@given(data=st.data())
def test_matmul_matches_python(p, data):
    A = data.draw(mats(p))
    k = len(A[0])
    B = data.draw(st.lists(st.lists(residues(p), min_size=3, max_size=3), min_size=k, max_size=k))
    got = F.mm(F.asmat(A, p=p), F.asmat(B, p=p), p)
    assert got.tolist() == py_mm(A, B, p)


@pytest.mark.parametrize("p", PRIME_CHOICES)
@given(data=st.data())
def test_rref_rank_and_nullspace(p, data):
    A = data.draw(mats(p))
    M = F.asmat(A, p=p)
    red, piv = F.rref(M, p)
    assert len(piv) == py_rank(A, p)
    for i, c in enumerate(piv):
        assert red[i, c] == 1
        assert all(red[j, c] == 0 for j in range(red.shape[0]) if j != i)
    N = F.nullspace(M, p)
    assert N.shape[0] + len(piv) == M.shape[1]
    assert F.is_zero(F.mm(M, np.ascontiguousarray(N.T), p))


@pytest.mark.parametrize("p", PRIME_CHOICES)
@given(data=st.data())
def test_left_kernel(p, data):
    A = data.draw(mats(p))
    M = F.asmat(A, p=p)
    K = F.left_kernel(M, p)
    assert K.shape[0] == M.shape[0] - py_rank(A, p)
    if K.shape[0]:
        assert F.is_zero(F.mm(K, M, p))


@pytest.mark.parametrize("p", PRIME_CHOICES)
@given(data=st.data())
def test_inverse(p, data):
    n = data.draw(st.integers(1, 5))
    A = data.draw(st.lists(st.lists(residues(p), min_size=n, max_size=n), min_size=n, max_size=n))
    M = F.asmat(A, p=p)
    if py_rank(A, p) < n:
        with pytest.raises(ZeroDivisionError):
            F.inverse(M, p)
        return
    assert (F.mm(M, F.inverse(M, p), p) == F.identity(n)).all()


@pytest.mark.parametrize("p", PRIME_CHOICES)
def test_add_neg_scale(p):
    A = F.asmat([[p - 1, 0, 5]], p=p)
    assert F.add(A, A, p).tolist() == [[p - 2, 0, 10]]
    assert F.neg(A, p).tolist() == [[1, 0, p - 5]]
    assert F.scale(A, -1, p).tolist() == F.neg(A, p).tolist()
    assert F.sub(A, A, p).tolist() == [[0, 0, 0]]


def test_non_mersenne_modulus_bounds():
    with pytest.raises(ValueError):
        F._make_kernels((1 << 31) + 11)


@given(st.fractions(max_denominator=10**6).filter(lambda x: abs(x.numerator) < 10**6))
def test_rational_reconstruction_roundtrip(x):
    assert rational_reconstruct(to_mod(x), PRIMES[0]) == x


def test_crt_combines_two_moduli():
    a, m = crt_pair(3, 7, 4, 11)
    assert m == 77 and a % 7 == 3 and a % 11 == 4


def test_lift_needs_more_primes():
    big = Fraction(2**70 + 1, 3**41)
    per = [[to_mod(big, p)] for p in PRIMES]
    # one modulus is too small: reconstruction either fails or finds a wrong small fraction
    try:
        assert lift_vector(per[:1], PRIMES[:1]) != [big]
    except LiftError:
        pass
    assert lift_vector(per, PRIMES) == [big]


def test_to_mod_rejects_bad_denominator():
    with pytest.raises(ZeroDivisionError):
        to_mod(Fraction(1, PRIMES[1]), PRIMES[1])
