"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction`.  Matrices wrap ``flint.fmpq_mat`` so
that echelonization runs in C while every entry stays exact.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import flint

Rational = Fraction


def parse_rational(text: str | int | Fraction) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(text.strip())


def format_rational(x) -> str:
    x = to_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, (int, flint.fmpz)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def to_fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    x = to_fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


class QMatrix:
    """Immutable dense matrix of exact rationals."""

    __slots__ = ("_m",)

    def __init__(self, m: flint.fmpq_mat):
        self._m = m

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "QMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        flat = [to_fmpq(x) for r in rows for x in r]
        return cls(flint.fmpq_mat(len(rows), cols, flat))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls(flint.fmpq_mat(rows, cols))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        m = flint.fmpq_mat(n, n)
        for i in range(n):
            m[i, i] = 1
        return cls(m)

    @property
    def rows(self) -> int:
        return self._m.nrows()

    @property
    def cols(self) -> int:
        return self._m.ncols()

    @property
    def flint(self) -> flint.fmpq_mat:
        return self._m

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        return to_fraction(self._m[ij])

    def row(self, i: int) -> list[Fraction]:
        return [to_fraction(self._m[i, j]) for j in range(self.cols)]

    def tolist(self) -> list[list[Fraction]]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "QMatrix":
        return QMatrix(self._m.transpose())

    @property
    def T(self) -> "QMatrix":
        return self.transpose()

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix(self._m * other._m)

    def __add__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix(self._m + other._m)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix(self._m - other._m)

    def scale(self, c) -> "QMatrix":
        return QMatrix(self._m * to_fmpq(c))

    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self._m == other._m

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(str(x) for x in self._m.entries())))

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and self._m == self._m.transpose()

    def is_zero(self) -> bool:
        return all(x == 0 for x in self._m.entries())

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in r] for r in self.tolist()]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[str]], cols: int | None = None) -> "QMatrix":
        return cls.from_rows([[parse_rational(x) for x in r] for r in data], cols)

    def __repr__(self) -> str:
        return f"QMatrix({self.rows}x{self.cols})"


def rref(m: QMatrix) -> tuple[int, QMatrix, list[int]]:
    """Reduced row echelon form: ``(rank, reduced, pivot_cols)``."""
    if m.rows == 0 or m.cols == 0:
        return 0, m, []
    red, rank = m.flint.rref()
    pivots = []
    j = 0
    for i in range(rank):
        while red[i, j] == 0:
            j += 1
        pivots.append(j)
    return rank, QMatrix(red), pivots


class Subspace:
    """A subspace of Q^n stored by its canonical echelon basis."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] | QMatrix = ()):
        self.ambient_dim = ambient_dim
        if isinstance(vectors, QMatrix):
            mat = vectors
        else:
            vectors = [list(v) for v in vectors]
            mat = QMatrix.from_rows(vectors, ambient_dim) if vectors else QMatrix.zeros(0, ambient_dim)
        rank, red, piv = rref(mat)
        self.basis = QMatrix.from_rows(red.tolist()[:rank], ambient_dim) if rank else QMatrix.zeros(0, ambient_dim)
        self.pivots = piv

    @property
    def dim(self) -> int:
        return self.basis.rows

    def vectors(self) -> list[list[Fraction]]:
        return self.basis.tolist()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash(self.basis)

    def contains(self, v: Sequence) -> bool:
        return Subspace(self.ambient_dim, self.vectors() + [list(v)]).dim == self.dim

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient_dim, self.vectors() + other.vectors())

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.dim == 0 or other.dim == 0:
            return Subspace(self.ambient_dim)
        # solve x*B1 = y*B2
        stacked = QMatrix.from_rows(self.vectors() + [[-x for x in v] for v in other.vectors()])
        ker = kernel(stacked.T)
        out = []
        for coeffs in ker.vectors():
            c = coeffs[: self.dim]
            out.append([sum(ci * bi for ci, bi in zip(c, col)) for col in zip(*self.vectors())])
        return Subspace(self.ambient_dim, out)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def kernel(m: QMatrix) -> Subspace:
    """Right null space ``{x : m x = 0}``."""
    n = m.cols
    rank, red, piv = rref(m)
    free = [j for j in range(n) if j not in set(piv)]
    vecs = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -red[i, f]
        vecs.append(v)
    return Subspace(n, vecs)


def solve_linear_system(coeffs: QMatrix, rhs: Sequence) -> tuple[list[Fraction] | None, Subspace]:
    """All solutions of ``coeffs x = rhs`` as ``(particular, homogeneous)``."""
    rhs = [to_fraction(x) for x in rhs]
    if len(rhs) != coeffs.rows:
        raise ValueError("right-hand side has the wrong length")
    n = coeffs.cols
    homog = kernel(coeffs)
    if coeffs.rows == 0:
        return [Fraction(0)] * n, homog
    aug = QMatrix.from_rows([r + [b] for r, b in zip(coeffs.tolist(), rhs)], n + 1)
    rank, red, piv = rref(aug)
    if piv and piv[-1] == n:
        return None, homog
    x = [Fraction(0)] * n
    for i, p in enumerate(piv):
        x[p] = red[i, n]
    return x, homog


def sym_signature(m: QMatrix) -> tuple[int, int, int]:
    """``(n_pos, n_zero, n_neg)`` of a symmetric matrix, by exact pivoting."""
    if not m.is_symmetric():
        raise ValueError("matrix is not symmetric")
    a = m.tolist()
    n = len(a)
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is not None:
            d = a[piv][piv]
            if d > 0:
                pos += 1
            else:
                neg += 1
            active.remove(piv)
            for i in active:
                if a[i][piv] == 0:
                    continue
                f = a[i][piv] / d
                for j in active:
                    a[i][j] -= f * a[piv][j]
            continue
        pair = next(((i, j) for i in active for j in active if i < j and a[i][j] != 0), None)
        if pair is None:
            break
        # all remaining diagonal entries vanish: split off the block [[0, b], [b, 0]]
        i0, j0 = pair
        b = a[i0][j0]
        pos += 1
        neg += 1
        active.remove(i0)
        active.remove(j0)
        for i in active:
            xi, yi = a[i][i0], a[i][j0]
            if xi == 0 and yi == 0:
                continue
            for j in active:
                xj, yj = a[j][i0], a[j][j0]
                a[i][j] -= (xi * yj + yi * xj) / b
    return pos, n - pos - neg, neg
