"""First homology of an abelian cover of ``P^1`` as a lattice with ``G``-action.

The punctured sphere ``P^1 - {p_1..p_r}`` is modelled by the presentation
complex of ``<x_1, ..., x_r | x_1 x_2 ... x_r>``: one vertex, one loop per
branch point, one relator disc.  The cover with monodromy ``x_i -> g_i`` is
the Schreier lift of that complex (vertices = ``G``, the lift of ``x_i`` at
``h`` runs from ``h`` to ``h + g_i``).  Filling each lifted puncture loop,
i.e. each ``x_i``-cycle through a coset of ``<g_i>``, with a disc gives a
closed surface, and ``G`` acts on every cell set by translation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .cover import BranchData, genus, validate
from .errors import GroupMismatch, InvalidBranchData, InvariantViolation, TorsionDetected
from .group import Character, FiniteAbelianGroup, GroupElement, all_characters
from .lattice import IntegerMatrix, kernel_basis, rank_mod_p, smith_normal_form

__all__ = [
    "Face",
    "CoverComplex",
    "EquivariantLattice",
    "build_cover_complex",
    "h1_with_action",
    "homology_of",
    "isotypic_dimension",
    "isotypic_dimension_mod_p",
    "isotypic_primes",
]


class Face(NamedTuple):
    kind: str  # "relator" or "puncture"
    branch_index: int | None
    base: GroupElement  # start vertex, or smallest element of the coset


@dataclass(frozen=True, eq=False)
class CoverComplex:
    branch: BranchData
    vertices: tuple[GroupElement, ...]
    edges: tuple[tuple[int, GroupElement], ...]
    faces: tuple[Face, ...]
    d1: IntegerMatrix
    d2: IntegerMatrix

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.branch.group

    @property
    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)

    def cell_permutations(self, g: GroupElement) -> tuple[list[int], list[int], list[int]]:
        """Index maps ``cell -> g + cell`` on vertices, edges and faces."""
        G = self.group
        n = G.order
        vperm = [G.index_of(v + g) for v in self.vertices]
        eperm = [i * n + G.index_of(h + g) for i, h in self.edges]
        face_index = {f: k for k, f in enumerate(self.faces)}
        fperm = []
        for f in self.faces:
            if f.kind == "relator":
                fperm.append(face_index[Face("relator", None, f.base + g)])
            else:
                gi = self.branch.monodromy[f.branch_index]
                fperm.append(face_index[Face("puncture", f.branch_index, _coset_min(f.base + g, gi))])
        return vperm, eperm, fperm

    def chain_maps(self, g: GroupElement) -> tuple[IntegerMatrix, IntegerMatrix, IntegerMatrix]:
        return tuple(_permutation_matrix(p) for p in self.cell_permutations(g))


def _permutation_matrix(perm: Sequence[int]) -> IntegerMatrix:
    n = len(perm)
    rows = [[0] * n for _ in range(n)]
    for src, dst in enumerate(perm):
        rows[dst][src] = 1
    return IntegerMatrix(rows, n)


def _coset_min(h: GroupElement, g: GroupElement) -> GroupElement:
    best = h
    x = h + g
    while x != h:
        if x.coords < best.coords:
            best = x
        x = x + g
    return best


def build_cover_complex(b: BranchData) -> CoverComplex:
    violations = validate(b)
    if violations:
        raise InvalidBranchData(violations)
    G = b.group
    n = G.order
    verts = G.elements()
    edges = tuple((i, h) for i in range(b.r) for h in verts)
    E = len(edges)

    d1 = [[0] * E for _ in range(n)]
    for k, (i, h) in enumerate(edges):
        d1[G.index_of(h + b.monodromy[i])][k] += 1
        d1[G.index_of(h)][k] -= 1

    faces: list[Face] = [Face("relator", None, h) for h in verts]
    for i, gi in enumerate(b.monodromy):
        seen = set()
        for h in verts:
            rep = _coset_min(h, gi)
            if rep not in seen:
                seen.add(rep)
                faces.append(Face("puncture", i, rep))

    cols = []
    for f in faces:
        col = [0] * E
        if f.kind == "relator":
            h = f.base
            for i, gi in enumerate(b.monodromy):
                col[i * n + G.index_of(h)] += 1
                h = h + gi
        else:
            gi = b.monodromy[f.branch_index]
            h = f.base
            while True:
                col[f.branch_index * n + G.index_of(h)] += 1
                h = h + gi
                if h == f.base:
                    break
        cols.append(col)

    return CoverComplex(
        branch=b,
        vertices=verts,
        edges=edges,
        faces=tuple(faces),
        d1=IntegerMatrix(d1, E),
        d2=IntegerMatrix.from_columns(cols, E),
    )


@dataclass(frozen=True, eq=False)
class EquivariantLattice:
    """A free lattice ``Z^rank`` with commuting automorphisms.

    ``action[j]`` is the matrix of the ``j``-th standard generator of
    ``group`` (order ``group.invariant_factors[j]``).  ``cycles`` holds, when
    the lattice came from a cover complex, edge-chain representatives of the
    basis as columns.
    """

    group: FiniteAbelianGroup
    rank: int
    action: tuple[IntegerMatrix, ...]
    cycles: IntegerMatrix | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def matrix(self, g: GroupElement) -> IntegerMatrix:
        if g.group != self.group:
            raise GroupMismatch(f"{g} is not an element of {self.group}")
        if g not in self._cache:
            M = IntegerMatrix.identity(self.rank)
            for c, A in zip(g.coords, self.action):
                if c:
                    M = M @ (A**c)
            self._cache[g] = M
        return self._cache[g]

    def action_map(self) -> dict[GroupElement, IntegerMatrix]:
        return dict(zip(self.group.generators(), self.action))

    def check_invariants(self):
        I = IntegerMatrix.identity(self.rank)
        for A, d in zip(self.action, self.group.invariant_factors):
            if A.shape != (self.rank, self.rank):
                raise InvariantViolation("action matrix has the wrong shape")
            if A**d != I:
                raise InvariantViolation(f"generator of order {d} does not act with order dividing {d}")
        for i, A in enumerate(self.action):
            for B in self.action[i + 1 :]:
                if A @ B != B @ A:
                    raise InvariantViolation("action matrices do not commute")


def h1_with_action(c: CoverComplex) -> EquivariantLattice:
    """``H_1 = ker d1 / im d2`` with the translation action of ``G``."""
    Z = kernel_basis(c.d1)
    k = Z.rank
    coords = []
    for col in c.d2.columns():
        x = Z.coordinates(col)
        if x is None:
            raise InvariantViolation("boundary of a face is not a cycle")
        coords.append(x)
    C = IntegerMatrix.from_columns(coords, k) if coords else IntegerMatrix.zeros(k, 0)
    snf = smith_normal_form(C)
    if any(d != 1 for d in snf.elementary_divisors):
        raise TorsionDetected(f"elementary divisors {snf.elementary_divisors} in H_1")
    s = snf.rank
    h = k - s
    U_tail = snf.U.rows()[s:]
    reps = Z.basis @ IntegerMatrix(
        (r[s:] for r in snf.U_inv.rows()), h
    ) if k else IntegerMatrix.zeros(len(c.edges), 0)

    def project(z: Sequence[int]) -> tuple[int, ...]:
        x = Z.coordinates(z)
        if x is None:
            raise InvariantViolation("translated cycle left the cycle space")
        return tuple(sum(a * b for a, b in zip(row, x)) for row in U_tail)

    rep_cols = reps.columns()
    action = []
    for gen in c.group.generators():
        _, eperm, _ = c.cell_permutations(gen)
        images = []
        for z in rep_cols:
            tz = [0] * len(z)
            for src, dst in enumerate(eperm):
                tz[dst] = z[src]
            images.append(project(tz))
        action.append(IntegerMatrix.from_columns(images, h) if h else IntegerMatrix.zeros(0, 0))

    L = EquivariantLattice(c.group, h, tuple(action), reps)
    L.check_invariants()
    return L


def homology_of(b: BranchData) -> EquivariantLattice:
    """Build the cover complex of ``b`` and return its ``H_1`` with action."""
    L = h1_with_action(build_cover_complex(b))
    if L.rank != 2 * genus(b):
        raise InvariantViolation(f"H_1 rank {L.rank} disagrees with Riemann-Hurwitz genus {genus(b)}")
    return L


# ---------------------------------------------------------------------------
# Isotypic dimensions over prime fields


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def isotypic_primes(exponent: int, rank: int, count: int = 2) -> list[int]:
    """The ``count`` smallest primes ``p = 1 (mod exponent)`` with ``p > 2*rank + 1``."""
    out = []
    p = (2 * rank + 1) // exponent * exponent + 1
    while len(out) < count:
        if p > 2 * rank + 1 and _is_prime(p):
            out.append(p)
        p += exponent
    return out


def _primitive_root_of_unity(e: int, p: int) -> int:
    """An element of exact multiplicative order ``e`` in ``F_p``."""
    prime_factors = [q for q in range(2, e + 1) if e % q == 0 and _is_prime(q)]
    for a in range(2, p):
        z = pow(a, (p - 1) // e, p)
        if all(pow(z, e // q, p) != 1 for q in prime_factors):
            return z
    if e == 1:
        return 1
    raise ValueError(f"no element of order {e} mod {p}")


def isotypic_dimension_mod_p(L: EquivariantLattice, chi: Character, p: int) -> int:
    """Dimension of the ``chi``-eigenspace of ``L / pL`` (requires ``p = 1 mod exponent``)."""
    if chi.group != L.group:
        raise GroupMismatch(f"{chi} is not a character of {L.group}")
    e = L.group.exponent
    if (p - 1) % e:
        raise ValueError(f"{p} is not 1 mod {e}")
    if L.rank == 0:
        return 0
    zeta = _primitive_root_of_unity(e, p)
    blocks = []
    for A, a, d in zip(L.action, chi.exponents, L.group.invariant_factors):
        lam = pow(zeta, a * (e // d), p)
        blocks.append(np.array(A.tolist(), dtype=object) - lam * np.eye(L.rank, dtype=np.int64).astype(object))
    if not blocks:
        return L.rank
    return L.rank - rank_mod_p(np.vstack(blocks), p)


def isotypic_dimension(L: EquivariantLattice, chi: Character) -> int:
    """Complex dimension of the ``chi``-eigenspace of ``L (x) C``.

    Computed over two primes ``p = 1 (mod exponent)``; for such ``p`` the
    isotypic idempotents are ``p``-integral, so each prime gives the exact
    answer and disagreement means a bug.
    """
    if chi.group != L.group:
        raise GroupMismatch(f"{chi} is not a character of {L.group}")
    dims = {isotypic_dimension_mod_p(L, chi, p) for p in isotypic_primes(L.group.exponent, L.rank)}
    if len(dims) != 1:
        raise InvariantViolation(f"isotypic dimension of {chi} differs between primes: {dims}")
    return dims.pop()


def isotypic_dimensions(L: EquivariantLattice) -> dict[Character, int]:
    return {chi: isotypic_dimension(L, chi) for chi in all_characters(L.group)}
