"""Dense matrices over GF(p), p = 2^61 - 1, as numpy uint64 arrays.

Slicing and stacking are plain numpy; multiplication and elimination are
numba kernels.  Products of two residues are reduced with the Mersenne
identity ``2^61 = 1 (mod p)`` so no 128-bit arithmetic is needed.
"""
from __future__ import annotations

import numpy as np
from numba import njit

P = (1 << 61) - 1
_P = np.uint64(P)
_M31 = np.uint64((1 << 31) - 1)
_M30 = np.uint64((1 << 30) - 1)
_S31 = np.uint64(31)
_S30 = np.uint64(30)
_S61 = np.uint64(61)
_ONE = np.uint64(1)
_ZERO = np.uint64(0)
_TWO = np.uint64(2)

DTYPE = np.uint64


def _make_kernels(p: int):
    """Compile kernels with the modulus baked in as a constant."""
    pu = np.uint64(p)
    mersenne = p == P

    if mersenne:
        @njit(inline="always")
        def red(s):
            s = (s & _P) + (s >> _S61)
            if s >= _P:
                s -= _P
            return s

        @njit(inline="always")
        def mul(a, b):
            ah = a >> _S31
            al = a & _M31
            bh = b >> _S31
            bl = b & _M31
            mid = ah * bl + al * bh
            s = _TWO * (ah * bh) + (mid >> _S30) + ((mid & _M30) << _S31)
            s = (s & _P) + (s >> _S61)
            s = s + al * bl
            s = (s & _P) + (s >> _S61)
            if s >= _P:
                s -= _P
            return s
    else:
        if p >= 1 << 31:
            raise ValueError("non-Mersenne moduli must be below 2^31")

        @njit(inline="always")
        def red(s):
            return s % pu

        @njit(inline="always")
        def mul(a, b):
            return (a * b) % pu

    @njit
    def inv(a):
        r = _ONE
        e = p - 2
        while e:
            if e & 1:
                r = mul(r, a)
            a = mul(a, a)
            e >>= 1
        return r

    @njit
    def matmul(A, B):
        n, k = A.shape
        m = B.shape[1]
        C = np.zeros((n, m), dtype=np.uint64)
        for i in range(n):
            for t in range(k):
                a = A[i, t]
                if a == _ZERO:
                    continue
                for j in range(m):
                    b = B[t, j]
                    if b != _ZERO:
                        C[i, j] = red(C[i, j] + mul(a, b))
        return C

    @njit
    def scal(A, c):
        out = np.empty_like(A)
        n, m = A.shape
        for i in range(n):
            for j in range(m):
                out[i, j] = mul(A[i, j], c)
        return out

    @njit
    def rref(A):
        n, m = A.shape
        piv = np.empty(min(n, m), dtype=np.int64)
        nz = np.empty(m, dtype=np.int64)
        r = 0
        for c in range(m):
            if r == n:
                break
            sel = -1
            for i in range(r, n):
                if A[i, c] != _ZERO:
                    sel = i
                    break
            if sel < 0:
                continue
            if sel != r:
                for j in range(c, m):
                    tmp = A[r, j]
                    A[r, j] = A[sel, j]
                    A[sel, j] = tmp
            iv = inv(A[r, c])
            cnt = 0
            for j in range(c, m):
                if A[r, j] != _ZERO:
                    if iv != _ONE:
                        A[r, j] = mul(A[r, j], iv)
                    nz[cnt] = j
                    cnt += 1
            for i in range(n):
                if i == r:
                    continue
                f = A[i, c]
                if f == _ZERO:
                    continue
                nf = pu - f
                for t in range(cnt):
                    j = nz[t]
                    A[i, j] = red(A[i, j] + mul(nf, A[r, j]))
            piv[r] = c
            r += 1
        return r, piv[:r]

    return matmul, scal, rref


_KERNELS: dict[int, tuple] = {}


def _k(p: int):
    if p not in _KERNELS:
        _KERNELS[p] = _make_kernels(p)
    return _KERNELS[p]


# ---------------------------------------------------------------- public API


def asmat(rows, ncols: int = 0, p: int = P) -> np.ndarray:
    if isinstance(rows, np.ndarray):
        return rows.astype(DTYPE, copy=False)
    rows = list(rows)
    if not rows:
        return np.zeros((0, ncols), dtype=DTYPE)
    return np.array([[int(x) % p for x in r] for r in rows], dtype=DTYPE).reshape(len(rows), -1)


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=DTYPE)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=DTYPE)


def mm(A: np.ndarray, B: np.ndarray, p: int = P) -> np.ndarray:
    if A.shape[0] == 0 or B.shape[1] == 0 or A.shape[1] == 0:
        return zeros(A.shape[0], B.shape[1])
    return _k(p)[0](np.ascontiguousarray(A), np.ascontiguousarray(B))


def add(A: np.ndarray, B: np.ndarray, p: int = P) -> np.ndarray:
    s = A + B
    return np.where(s >= np.uint64(p), s - np.uint64(p), s)


def neg(A: np.ndarray, p: int = P) -> np.ndarray:
    return np.where(A == 0, A, np.uint64(p) - A)


def sub(A: np.ndarray, B: np.ndarray, p: int = P) -> np.ndarray:
    return add(A, neg(B, p), p)


def scale(A: np.ndarray, c: int, p: int = P) -> np.ndarray:
    c %= p
    if c == 1:
        return A
    if A.size == 0:
        return A.copy()
    return _k(p)[1](np.ascontiguousarray(A), np.uint64(c))


def rref(A: np.ndarray, p: int = P) -> tuple[np.ndarray, list[int]]:
    """Nonzero rows of the reduced echelon form and their pivot columns."""
    if A.shape[0] == 0 or A.shape[1] == 0:
        return zeros(0, A.shape[1]), []
    B = np.array(A, dtype=DTYPE, copy=True, order="C")
    r, piv = _k(p)[2](B)
    return B[:r], [int(x) for x in piv]


def rowspace(A: np.ndarray, p: int = P) -> np.ndarray:
    return rref(A, p)[0]


def rank(A: np.ndarray, p: int = P) -> int:
    return rref(A, p)[0].shape[0]


def vstack(mats, ncols: int) -> np.ndarray:
    mats = [m for m in mats if m.shape[0]]
    if not mats:
        return zeros(0, ncols)
    return np.vstack(mats)


def nullspace(A: np.ndarray, p: int = P) -> np.ndarray:
    """Rows ``x`` with ``A x^T = 0``."""
    n = A.shape[1]
    red, piv = rref(A, p)
    pset = set(piv)
    free = [j for j in range(n) if j not in pset]
    out = zeros(len(free), n)
    if not free:
        return out
    out[np.arange(len(free)), free] = 1
    if piv:
        out[:, piv] = neg(red[:, free], p).T
    return out


def left_kernel(A: np.ndarray, p: int = P) -> np.ndarray:
    """Rows ``c`` with ``c A = 0``, in reduced echelon form."""
    r = A.shape[0]
    if r == 0:
        return zeros(0, 0)
    if A.shape[1] == 0:
        return identity(r)
    return rowspace(nullspace(np.ascontiguousarray(A.T), p), p)


def inverse(A: np.ndarray, p: int = P) -> np.ndarray:
    n = A.shape[0]
    red, piv = rref(np.hstack([A, identity(n)]), p)
    if piv[:n] != list(range(n)) or len(piv) < n or (len(piv) > n and piv[n] < n):
        raise ZeroDivisionError("singular matrix")
    return np.ascontiguousarray(red[:n, n:])


def is_zero(A: np.ndarray) -> bool:
    return not A.any()


def to_int_rows(A: np.ndarray) -> list[list[int]]:
    return A.tolist()
