"""Exact integer linear algebra: Smith and Hermite normal forms, sublattices.

Everything here works on Python ints, so entries never overflow.  A
:class:`Sublattice` keeps its basis in row-style Hermite normal form, which
makes lattice equality a plain comparison of basis tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import AmbientMismatch

__all__ = [
    "IntegerMatrix",
    "Sublattice",
    "SmithDecomposition",
    "smith_normal_form",
    "hermite_rows",
    "kernel_basis",
    "image_basis",
    "saturate",
    "intersect",
    "lattice_sum",
    "cokernel_exponent",
    "membership",
    "rational_rank",
    "rank_mod_p",
]

Vector = tuple[int, ...]


class IntegerMatrix:
    """Immutable dense matrix of Python integers."""

    __slots__ = ("_rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(data[0])
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged rows")
        self._rows = data
        self.nrows = len(data)
        self.ncols = ncols
        self._hash = None

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> IntegerMatrix:
        return cls(((0,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> IntegerMatrix:
        return cls((tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> IntegerMatrix:
        return cls((tuple(c[i] for c in columns) for i in range(nrows)), len(columns))

    @classmethod
    def block_diagonal(cls, blocks: Sequence[IntegerMatrix]) -> IntegerMatrix:
        n = sum(b.ncols for b in blocks)
        rows = []
        offset = 0
        for b in blocks:
            for r in b._rows:
                rows.append((0,) * offset + r + (0,) * (n - offset - b.ncols))
            offset += b.ncols
        return cls(rows, n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def entries(self) -> tuple[int, ...]:
        """Row-major entries."""
        return tuple(x for r in self._rows for x in r)

    def rows(self) -> tuple[Vector, ...]:
        return self._rows

    def row(self, i: int) -> Vector:
        return self._rows[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> tuple[Vector, ...]:
        return tuple(zip(*self._rows)) if self.nrows else ((),) * self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._rows[i][j]

    @property
    def T(self) -> IntegerMatrix:
        return IntegerMatrix(self.columns(), self.nrows)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def __eq__(self, other):
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shape, self._rows))
        return self._hash

    def __repr__(self):
        return f"IntegerMatrix({self.tolist()!r}, ncols={self.ncols})"

    def _same_shape(self, other: IntegerMatrix):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: IntegerMatrix) -> IntegerMatrix:
        self._same_shape(other)
        return IntegerMatrix(
            (tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)),
            self.ncols,
        )

    def __sub__(self, other: IntegerMatrix) -> IntegerMatrix:
        self._same_shape(other)
        return IntegerMatrix(
            (tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)),
            self.ncols,
        )

    def __neg__(self) -> IntegerMatrix:
        return IntegerMatrix((tuple(-a for a in r) for r in self._rows), self.ncols)

    def __rmul__(self, k: int) -> IntegerMatrix:
        return IntegerMatrix((tuple(k * a for a in r) for r in self._rows), self.ncols)

    def __matmul__(self, other):
        if isinstance(other, IntegerMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            # row-combination product; action matrices are sparse
            nz = [[(j, b) for j, b in enumerate(r) if b] for r in other._rows]
            out = []
            for r in self._rows:
                acc = [0] * other.ncols
                for k, a in enumerate(r):
                    if a:
                        for j, b in nz[k]:
                            acc[j] += a * b
                out.append(acc)
            return IntegerMatrix(out, other.ncols)
        v = tuple(other)
        if len(v) != self.ncols:
            raise ValueError(f"cannot multiply {self.shape} by vector of length {len(v)}")
        return tuple(_dot(r, v) for r in self._rows)

    def __pow__(self, k: int) -> IntegerMatrix:
        if self.nrows != self.ncols or k < 0:
            raise ValueError("only nonnegative powers of square matrices")
        result = IntegerMatrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._rows)

    def hstack(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return IntegerMatrix(
            (r + s for r, s in zip(self._rows, other._rows)), self.ncols + other.ncols
        )

    def vstack(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return IntegerMatrix(self._rows + other._rows, self.ncols)

    def determinant(self) -> int:
        """Exact determinant by fraction-free Bareiss elimination."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v) if a and b)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``D`` in Smith form.

    ``U_inv`` is carried along because saturation needs it.
    """

    U: IntegerMatrix
    D: IntegerMatrix
    V: IntegerMatrix
    U_inv: IntegerMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.shape)))

    @property
    def elementary_divisors(self) -> tuple[int, ...]:
        """Nonzero diagonal entries."""
        return tuple(d for d in self.diagonal if d)

    @property
    def rank(self) -> int:
        return len(self.elementary_divisors)


def smith_normal_form(A: IntegerMatrix) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivoting always picks the smallest nonzero absolute value in the active
    block, ties broken by lowest row and then lowest column, so the output is
    a deterministic function of ``A``.
    """
    m, n = A.shape
    a = A.tolist()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            U[i], U[j] = U[j], U[i]
            for r in Ui:
                r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        if i != j:
            for r in a:
                r[i], r[j] = r[j], r[i]
            for r in V:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        if c:
            a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
            U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]
            for r in Ui:
                if r[dst]:
                    r[src] -= c * r[dst]

    def add_col(dst, src, c):
        # col_dst += c * col_src
        if c:
            for r in a:
                if r[src]:
                    r[dst] += c * r[src]
            for r in V:
                if r[src]:
                    r[dst] += c * r[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = a[t][t]
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            # remainders smaller than |p| may be left over
            cand = None
            for i in range(t + 1, m):
                x = a[i][t]
                if x and (cand is None or abs(x) < cand[0]):
                    cand = (abs(x), i, t)
            for j in range(t + 1, n):
                x = a[t][j]
                if x and (cand is None or abs(x) < cand[0]):
                    cand = (abs(x), t, j)
            if cand is not None:
                swap_rows(t, cand[1])
                swap_cols(t, cand[2])
                continue
            bad = None
            for i in range(t + 1, m):
                row = a[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
            for r in Ui:
                r[t] = -r[t]
        t += 1
    return SmithDecomposition(
        U=IntegerMatrix(U, m),
        D=IntegerMatrix(a, n),
        V=IntegerMatrix(V, n),
        U_inv=IntegerMatrix(Ui, m),
    )


# ---------------------------------------------------------------------------
# Hermite normal form


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hermite_rows(rows: Iterable[Sequence[int]], ncols: int) -> tuple[Vector, ...]:
    """Row-style Hermite normal form of the row span, zero rows dropped.

    Pivots are positive and strictly move right; entries above a pivot lie
    in ``[0, pivot)``.  Two generating sets span the same lattice iff their
    outputs are equal.
    """
    work = [list(r) for r in rows if any(r)]
    for r in work:
        if len(r) != ncols:
            raise ValueError("vector length does not match ambient rank")
    out: list[list[int]] = []
    col = 0
    while work and col < ncols:
        nz = [r for r in work if r[col]]
        if not nz:
            col += 1
            continue
        rest = [r for r in work if not r[col]]
        nz.sort(key=lambda r: abs(r[col]))
        piv = nz[0]
        for r in nz[1:]:
            a, b = piv[col], r[col]
            g, x, y = _xgcd(a, b)
            ag, bg = a // g, b // g
            piv, r2 = (
                [x * u + y * v for u, v in zip(piv, r)],
                [ag * v - bg * u for u, v in zip(piv, r)],
            )
            if any(r2):
                rest.append(r2)
        if piv[col] < 0:
            piv = [-u for u in piv]
        p = piv[col]
        for prev in out:
            q = prev[col] // p
            if q:
                for k in range(col, ncols):
                    prev[k] -= q * piv[k]
        out.append(piv)
        work = rest
        col += 1
    return tuple(tuple(r) for r in out)


# ---------------------------------------------------------------------------
# Sublattices


@dataclass(frozen=True, eq=False)
class Sublattice:
    """A sublattice of ``Z^ambient_rank`` given by a Hermite-reduced basis.

    Create with :meth:`from_generators`; the stored ``vectors`` are always
    canonical, so ``==`` is lattice equality.  ``saturated`` records that the
    lattice is known to be primitive.
    """

    ambient_rank: int
    vectors: tuple[Vector, ...]
    saturated: bool = False
    _pivots: tuple[int, ...] = field(default=(), repr=False)

    @classmethod
    def from_generators(
        cls, ambient_rank: int, generators: Iterable[Sequence[int]], saturated: bool = False
    ) -> Sublattice:
        vecs = hermite_rows(generators, ambient_rank)
        pivots = tuple(next(i for i, x in enumerate(v) if x) for v in vecs)
        return cls(ambient_rank, vecs, saturated, pivots)

    @classmethod
    def zero(cls, ambient_rank: int) -> Sublattice:
        return cls(ambient_rank, (), True, ())

    @classmethod
    def full(cls, ambient_rank: int) -> Sublattice:
        return cls.from_generators(
            ambient_rank,
            (tuple(int(i == j) for j in range(ambient_rank)) for i in range(ambient_rank)),
            saturated=True,
        )

    @property
    def rank(self) -> int:
        return len(self.vectors)

    @cached_property
    def basis(self) -> IntegerMatrix:
        """Basis vectors as the columns of an ``ambient_rank x rank`` matrix."""
        return IntegerMatrix.from_columns(self.vectors, self.ambient_rank)

    def coordinates(self, v: Sequence[int]) -> tuple[int, ...] | None:
        """Integer coordinates of ``v`` in the basis, or None if ``v`` is not in the lattice."""
        if len(v) != self.ambient_rank:
            raise AmbientMismatch(f"vector of length {len(v)} in ambient rank {self.ambient_rank}")
        w = list(v)
        coords = []
        for b, p in zip(self.vectors, self._pivots):
            q, r = divmod(w[p], b[p])
            if r:
                return None
            coords.append(q)
            if q:
                for k in range(p, self.ambient_rank):
                    w[k] -= q * b[k]
        if any(w):
            return None
        return tuple(coords)

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def __eq__(self, other):
        if not isinstance(other, Sublattice):
            return NotImplemented
        return self.ambient_rank == other.ambient_rank and self.vectors == other.vectors

    def __hash__(self):
        return hash((self.ambient_rank, self.vectors))

    def __add__(self, other: Sublattice) -> Sublattice:
        return lattice_sum(self, other)

    def __and__(self, other: Sublattice) -> Sublattice:
        return intersect(self, other)

    def __repr__(self):
        flag = ", saturated" if self.saturated else ""
        return f"Sublattice(rank {self.rank} in Z^{self.ambient_rank}{flag}, {list(self.vectors)})"


def kernel_basis(A: IntegerMatrix) -> Sublattice:
    """The full integer kernel ``{v : A v = 0}`` (always saturated)."""
    snf = smith_normal_form(A)
    r = snf.rank
    cols = snf.V.columns()[r:]
    return Sublattice.from_generators(A.ncols, cols, saturated=True)


def image_basis(A: IntegerMatrix) -> Sublattice:
    """Column span of ``A`` inside ``Z^rows``; not saturated in general."""
    return Sublattice.from_generators(A.nrows, A.columns())


def saturate(L: Sublattice) -> Sublattice:
    """Primitive closure: all ambient vectors with a nonzero multiple in ``L``."""
    if L.saturated:
        return L
    if L.rank == 0:
        return Sublattice.zero(L.ambient_rank)
    snf = smith_normal_form(L.basis)
    # B = U^-1 D V^-1, so the first rank columns of U^-1 span the rational hull primitively
    cols = snf.U_inv.columns()[: L.rank]
    return Sublattice.from_generators(L.ambient_rank, cols, saturated=True)


def _check_ambient(L1: Sublattice, L2: Sublattice):
    if L1.ambient_rank != L2.ambient_rank:
        raise AmbientMismatch(f"ambient ranks {L1.ambient_rank} and {L2.ambient_rank} differ")


def intersect(L1: Sublattice, L2: Sublattice) -> Sublattice:
    _check_ambient(L1, L2)
    if L1.rank == 0 or L2.rank == 0:
        return Sublattice.zero(L1.ambient_rank)
    M = L1.basis.hstack(-L2.basis)
    K = kernel_basis(M)
    B1 = L1.basis
    gens = [B1 @ v[: L1.rank] for v in K.vectors]
    return Sublattice.from_generators(
        L1.ambient_rank, gens, saturated=L1.saturated and L2.saturated
    )


def lattice_sum(L1: Sublattice, L2: Sublattice) -> Sublattice:
    _check_ambient(L1, L2)
    return Sublattice.from_generators(L1.ambient_rank, L1.vectors + L2.vectors)


def cokernel_exponent(L: Sublattice) -> int | None:
    """Exponent of ``Z^ambient / L``; None when the quotient is infinite."""
    if L.rank < L.ambient_rank:
        return None
    if L.rank == 0:
        return 1
    # Hermite basis is square triangular here; its SNF gives the invariants
    divisors = smith_normal_form(L.basis).elementary_divisors
    return divisors[-1]


def membership(v: Sequence[int], L: Sublattice) -> bool:
    return L.coordinates(v) is not None


def rational_rank(A: IntegerMatrix) -> int:
    return len(hermite_rows(A.rows(), A.ncols))


def is_saturated(L: Sublattice) -> bool:
    """Decide primitivity directly, ignoring the cached flag."""
    if L.rank == 0:
        return True
    return all(d == 1 for d in smith_normal_form(L.basis).elementary_divisors)


# ---------------------------------------------------------------------------
# Modular rank


def rank_mod_p(rows: Sequence[Sequence[int]] | np.ndarray, p: int) -> int:
    """Rank over ``F_p`` by Gaussian elimination in int64 (needs ``p < 2**31``)."""
    if p >= 2**31:
        raise ValueError("prime too large for int64 elimination")
    M = np.array(rows, dtype=object) if not isinstance(rows, np.ndarray) else rows
    if M.size == 0:
        return 0
    M = np.mod(M, p).astype(np.int64)
    nrows, ncols = M.shape
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        nz = np.nonzero(M[rank:, c])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            M[[rank, piv]] = M[[piv, rank]]
        inv = pow(int(M[rank, c]), -1, p)
        M[rank] = (M[rank] * inv) % p
        below = M[rank + 1 :, c].copy()
        mask = below != 0
        if mask.any():
            idx = np.nonzero(mask)[0] + rank + 1
            M[idx] = (M[idx] - np.outer(below[mask], M[rank])) % p
        rank += 1
    return rank
