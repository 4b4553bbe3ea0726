"""Commutative algebras given by exact structure constants.

Vectors are row vectors.  ``L[i]`` is the matrix whose row ``j`` is the
product ``e_i e_j``; right multiplication by ``u`` is then
``R_u = sum_i u_i L[i]`` and ``v u = v R_u``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import flint

from .linalg import QMatrix, Subspace, format_rational, kernel, parse_rational, to_fmpq, to_fraction

ONE, ZERO, QUARTER, EIGHTH32 = Fraction(1), Fraction(0), Fraction(1, 4), Fraction(1, 32)
EIGENVALUES = (ONE, ZERO, QUARTER, EIGHTH32)


def _fuse(a: Fraction, b: Fraction) -> frozenset[Fraction]:
    if a > b:
        a, b = b, a
    table = {
        (ZERO, ZERO): {ZERO},
        (ZERO, ONE): set(),
        (ZERO, QUARTER): {QUARTER},
        (ZERO, EIGHTH32): {EIGHTH32},
        (ONE, ONE): {ONE},
        (QUARTER, ONE): {QUARTER},
        (EIGHTH32, ONE): {EIGHTH32},
        (QUARTER, QUARTER): {ONE, ZERO},
        (EIGHTH32, QUARTER): {EIGHTH32},
        (EIGHTH32, EIGHTH32): {ONE, ZERO, QUARTER},
    }
    return frozenset(table[(a, b)])


FUSION = {(a, b): _fuse(a, b) for a in EIGENVALUES for b in EIGENVALUES}


def fmpq_row(v: Sequence) -> flint.fmpq_mat:
    return flint.fmpq_mat(1, len(v), [to_fmpq(x) for x in v])


def row_list(m: flint.fmpq_mat, i: int = 0) -> list[Fraction]:
    return [to_fraction(m[i, j]) for j in range(m.ncols())]


def _nonzero(m: flint.fmpq_mat) -> bool:
    return any(e != 0 for e in m.entries())


def unit(n: int, i: int) -> list[Fraction]:
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return v


class Algebra:
    """A finite-dimensional commutative algebra over Q with marked axes."""

    def __init__(self, L: Sequence[flint.fmpq_mat], axes: Sequence[Sequence] | None = None,
                 basis_names: Sequence[str] | None = None):
        self.dim = len(L)
        self.L = list(L)
        self.axes = [list(map(to_fraction, a)) for a in (axes or [])]
        self.basis_names = list(basis_names) if basis_names else [f"e{i}" for i in range(self.dim)]

    # -------------------------------------------------------------- building

    @classmethod
    def from_products(cls, dim: int, products: dict[tuple[int, int], Sequence], axes=None,
                      basis_names=None) -> "Algebra":
        """``products[(i, j)]`` for ``i <= j``; missing entries are zero."""
        L = [flint.fmpq_mat(dim, dim) for _ in range(dim)]
        for (i, j), vec in products.items():
            for k, c in enumerate(vec):
                if c:
                    c = to_fmpq(c)
                    L[i][j, k] = c
                    L[j][i, k] = c
        return cls(L, axes, basis_names)

    def products_upper(self) -> list[list[Fraction]]:
        """Products ``e_i e_j`` for ``i <= j`` in row-major order."""
        out = []
        for i in range(self.dim):
            for j in range(i, self.dim):
                out.append(row_list(self.L[i], j))
        return out

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "basis": self.basis_names,
            "products": [[format_rational(x) for x in v] for v in self.products_upper()],
            "axes": [[format_rational(x) for x in a] for a in self.axes],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Algebra":
        n = data["dim"]
        prods = {}
        it = iter(data["products"])
        for i in range(n):
            for j in range(i, n):
                prods[(i, j)] = [parse_rational(x) for x in next(it)]
        axes = [[parse_rational(x) for x in a] for a in data["axes"]]
        return cls.from_products(n, prods, axes, data.get("basis"))

    # -------------------------------------------------------------- arithmetic

    def right_mult(self, u: Sequence) -> flint.fmpq_mat:
        """Matrix ``R_u`` with ``v R_u = v u``."""
        m = flint.fmpq_mat(self.dim, self.dim)
        for i, c in enumerate(u):
            if c:
                m += self.L[i] * to_fmpq(c)
        return m

    def ad(self, u: Sequence) -> QMatrix:
        return QMatrix(self.right_mult(u))

    def mult(self, u: Sequence, v: Sequence) -> list[Fraction]:
        return row_list(fmpq_row(v) * self.right_mult(u))

    def is_symmetric(self) -> bool:
        return all(self.L[i][j, k] == self.L[j][i, k]
                   for i in range(self.dim) for j in range(self.dim) for k in range(self.dim))

    # -------------------------------------------------------------- axes

    def eigenspaces(self, a: Sequence) -> dict[Fraction, Subspace]:
        """Left eigenspaces of ``R_a`` for the four Monster eigenvalues."""
        R = self.right_mult(a)
        out = {}
        ident = flint.fmpq_mat(self.dim, self.dim)
        for i in range(self.dim):
            ident[i, i] = 1
        for lam in EIGENVALUES:
            M = (R - ident * to_fmpq(lam)).transpose()
            out[lam] = kernel(QMatrix(M))
        return out

    def is_semisimple_axis(self, a: Sequence) -> bool:
        return sum(s.dim for s in self.eigenspaces(a).values()) == self.dim

    def fusion_failures(self, a: Sequence) -> list[str]:
        """Violations of the Monster fusion law for the axis ``a``."""
        fails = []
        if self.mult(a, a) != list(map(to_fraction, a)):
            fails.append("axis is not idempotent")
        es = self.eigenspaces(a)
        if sum(s.dim for s in es.values()) != self.dim:
            fails.append("adjoint is not diagonalizable over {1, 0, 1/4, 1/32}")
            return fails
        R = self.right_mult(a)
        n = self.dim
        ident = flint.fmpq_mat(n, n)
        for i in range(n):
            ident[i, i] = 1
        lams = [l for l in EIGENVALUES if es[l].dim]
        for x, lam in enumerate(lams):
            for mu in lams[x:]:
                allowed = FUSION[(lam, mu)]
                # w lies in the allowed eigenspaces iff prod (R - nu) kills it
                P = ident
                for nu in allowed:
                    P = P * (R - ident * to_fmpq(nu))
                V = es[mu].basis.flint
                for u in es[lam].vectors():
                    prods = V * self.right_mult(u)
                    if _nonzero(prods * P):
                        fails.append(f"fusion {lam}*{mu} not in {sorted(allowed)}")
                        break
        return fails

    def miyamoto(self, a: Sequence) -> QMatrix:
        """The map negating the 1/32-eigenspace of ``a`` (row-vector action)."""
        es = self.eigenspaces(a)
        if sum(s.dim for s in es.values()) != self.dim:
            raise ValueError("adjoint of the axis is not diagonalizable over the Monster eigenvalues")
        R = self.right_mult(a)
        n = self.dim
        ident = flint.fmpq_mat(n, n)
        for i in range(n):
            ident[i, i] = 1
        P = ident
        for nu in EIGENVALUES:
            if nu != EIGHTH32:
                P = P * (R - ident * to_fmpq(nu)) * to_fmpq(1 / (EIGHTH32 - nu))
        return QMatrix(ident - P * 2)

    def is_automorphism(self, M: QMatrix) -> bool:
        """``(e_i M)(e_j M) = (e_i e_j) M`` for all basis pairs."""
        m = M.flint
        n = self.dim
        images = [m.table()[i] for i in range(n)]
        for i in range(n):
            Ri = self.right_mult(images[i])
            lhs = m * Ri  # row j: (e_j M)(e_i M)
            rhs = self.L[i] * m  # row j: (e_i e_j) M
            if lhs != rhs:
                return False
        return True

    def is_equivariant(self, M: QMatrix) -> bool:
        return self.is_automorphism(M)

    # -------------------------------------------------------------- subalgebras

    def closure(self, vectors: Iterable[Sequence]) -> Subspace:
        """The subalgebra generated by ``vectors``."""
        space = Subspace(self.dim, [list(v) for v in vectors])
        while True:
            basis = space.vectors()
            prods = list(basis)
            for i, u in enumerate(basis):
                R = self.right_mult(u)
                block = space.basis.flint * R
                for r in range(block.nrows()):
                    prods.append(row_list(block, r))
            nxt = Subspace(self.dim, prods)
            if nxt.dim == space.dim:
                return space
            space = nxt

    def restrict(self, space: Subspace) -> "Algebra":
        """The subalgebra ``space`` as an algebra in its echelon basis."""
        B = space.basis
        k = space.dim
        piv = space.pivots
        L = []
        for i in range(k):
            R = self.right_mult(B.row(i))
            prods = B.flint * R  # row j: b_j b_i
            sub = flint.fmpq_mat(k, k)
            for j in range(k):
                # echelon coordinates are read off the pivot columns
                for t, p in enumerate(piv):
                    sub[j, t] = prods[j, p]
            L.append(sub)
        axes = []
        for a in self.axes:
            if space.contains(a):
                axes.append([a[p] for p in piv])
        return Algebra(L, axes)

    def quotient(self, ideal: Subspace) -> tuple["Algebra", QMatrix]:
        """Quotient by an ideal; returns the algebra and the projection matrix."""
        n = self.dim
        piv = set(ideal.pivots)
        keep = [j for j in range(n) if j not in piv]
        k = len(keep)
        # reduce e_j modulo the ideal and read coordinates on the kept columns
        proj = flint.fmpq_mat(n, k)
        B = ideal.basis
        for j in range(n):
            v = unit(n, j)
            for r, p in enumerate(ideal.pivots):
                c = v[p]
                if c:
                    v = [x - c * y for x, y in zip(v, B.row(r))]
            for t, col in enumerate(keep):
                proj[j, t] = to_fmpq(v[col])
        L = []
        for t, col in enumerate(keep):
            prods = self.L[col] * proj  # row j: image of e_col e_j
            sub = flint.fmpq_mat(k, k)
            for s, row in enumerate(keep):
                for u in range(k):
                    sub[s, u] = prods[row, u]
            L.append(sub)
        P = QMatrix(proj)
        axes = [row_list(fmpq_row(a) * proj) for a in self.axes]
        return Algebra(L, axes), P

    def is_ideal(self, space: Subspace) -> bool:
        for u in space.vectors():
            prods = self.right_mult(u)
            for r in range(self.dim):
                if not space.contains(row_list(prods, r)):
                    return False
        return True


def _sym_index(n: int) -> dict[tuple[int, int], int]:
    idx = {}
    for i in range(n):
        for j in range(i, n):
            idx[(i, j)] = len(idx)
    return idx


def form_is_associative(alg: Algebra, F: QMatrix) -> bool:
    """``(uv, w) = (u, vw)`` for all basis triples, i.e. every ``L_i F`` symmetric."""
    f = F.flint
    for i in range(alg.dim):
        m = alg.L[i] * f
        if m != m.transpose():
            return False
    return True


def solve_frobenius(alg: Algebra, normalize: Sequence[Sequence] = (),
                    invariance: Sequence[QMatrix] = ()) -> tuple[QMatrix | None, int]:
    """Associating symmetric forms with ``(p, p) = 1`` for each ``p`` in ``normalize``.

    ``invariance`` lists linear maps ``M`` with ``(uM, vM) = (u, v)`` imposed.
    Returns the canonical particular solution (free parameters set to zero)
    and the dimension of the remaining solution space.
    """
    from .linalg import solve_linear_system

    n = alg.dim
    idx = _sym_index(n)
    nv = len(idx)

    def var(a: int, b: int) -> int:
        return idx[(a, b) if a <= b else (b, a)]

    rows: list[dict[int, Fraction]] = []
    rhs: list[Fraction] = []
    for i in range(n):
        Li = alg.L[i]
        ent = [[to_fraction(Li[j, c]) for c in range(n)] for j in range(n)]
        nz = [[c for c in range(n) if ent[j][c]] for j in range(n)]
        for j in range(n):
            for k in range(j + 1, n):
                # (L_i F)[j,k] - (L_i F)[k,j]
                row: dict[int, Fraction] = {}
                for c in nz[j]:
                    v = var(c, k)
                    row[v] = row.get(v, 0) + ent[j][c]
                for c in nz[k]:
                    v = var(c, j)
                    row[v] = row.get(v, 0) - ent[k][c]
                row = {v: x for v, x in row.items() if x}
                if row:
                    rows.append(row)
                    rhs.append(Fraction(0))
    for M in invariance:
        m = M.tolist()
        for a in range(n):
            for b in range(a, n):
                row = {}
                for c in range(n):
                    if not m[a][c]:
                        continue
                    for d in range(n):
                        if m[b][d]:
                            v = var(c, d)
                            row[v] = row.get(v, 0) + m[a][c] * m[b][d]
                v = var(a, b)
                row[v] = row.get(v, 0) - 1
                row = {v: x for v, x in row.items() if x}
                if row:
                    rows.append(row)
                    rhs.append(Fraction(0))
    for p in normalize:
        row = {}
        for a in range(n):
            if not p[a]:
                continue
            for b in range(n):
                if p[b]:
                    v = var(a, b)
                    row[v] = row.get(v, 0) + p[a] * p[b]
        rows.append(row)
        rhs.append(Fraction(1))
    dense = [[r.get(v, 0) for v in range(nv)] for r in rows]
    if not dense:
        return None, nv
    x, homog = solve_linear_system(QMatrix.from_rows(dense, nv), rhs)
    if x is None:
        return None, homog.dim
    F = [[Fraction(0)] * n for _ in range(n)]
    for (a, b), v in idx.items():
        F[a][b] = F[b][a] = x[v]
    return QMatrix.from_rows(F, n), homog.dim
