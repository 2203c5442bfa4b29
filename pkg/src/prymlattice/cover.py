"""Branch data of abelian covers ``C -> P^1`` and the quantities read off it.

A cover is determined, up to isomorphism, by its Galois group ``G`` and the
local monodromy ``g_1, ..., g_r`` at the branch points.  Branch point
positions are not modelled.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidBranchData, InvariantViolation
from .group import (
    Character,
    FiniteAbelianGroup,
    GroupElement,
    all_characters,
    character_exponent,
    element_order,
    generated_subgroup,
)

__all__ = [
    "BranchData",
    "Violation",
    "EigenspaceTable",
    "branch_data",
    "validate",
    "genus",
    "chevalley_weil_dims",
]


@dataclass(frozen=True)
class BranchData:
    group: FiniteAbelianGroup
    monodromy: tuple[GroupElement, ...]
    label: str | None = None

    @property
    def r(self) -> int:
        return len(self.monodromy)

    def ramification_indices(self) -> tuple[int, ...]:
        return tuple(element_order(g) for g in self.monodromy)

    def function_field_shape(self) -> str:
        """Kummer-type description of the function field, for reports only."""
        if not self.group.invariant_factors:
            return "k(z)"
        gens = ", ".join(
            f"y_{i + 1}^(1/{d})" for i, d in enumerate(self.group.invariant_factors)
        )
        return f"k(z)({gens})"


@dataclass(frozen=True)
class Violation:
    kind: str
    index: int | None
    message: str

    def __str__(self):
        where = f" at index {self.index}" if self.index is not None else ""
        return f"{self.kind}{where}: {self.message}"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "index": self.index, "message": self.message}


def branch_data(
    invariant_factors: Sequence[int],
    monodromy: Iterable[Sequence[int]],
    label: str | None = None,
) -> BranchData:
    """Convenience constructor from plain integer lists.

    >>> b = branch_data([3], [[1], [1], [1]])
    >>> genus(b)
    1
    """
    G = FiniteAbelianGroup(tuple(invariant_factors))
    return BranchData(G, tuple(G.element(c) for c in monodromy), label)


def validate(b: BranchData) -> list[Violation]:
    out = []
    total = b.group.identity()
    for i, g in enumerate(b.monodromy):
        if g.group != b.group:
            out.append(Violation("GroupMismatch", i, f"element {g} lies in {g.group}, not {b.group}"))
            continue
        if g.is_identity():
            out.append(Violation("TrivialMonodromy", i, "branch point with trivial monodromy"))
        total = total + g
    if not total.is_identity():
        out.append(Violation("SumNotZero", None, f"monodromy sums to {total}, not 0"))
    gens = [g for g in b.monodromy if g.group == b.group]
    if len(generated_subgroup(b.group, gens)) != b.group.order:
        out.append(Violation("NotGenerating", None, f"monodromy does not generate {b.group}"))
    return out


def _require_valid(b: BranchData):
    violations = validate(b)
    if violations:
        raise InvalidBranchData(violations)


def genus(b: BranchData) -> int:
    """Riemann-Hurwitz genus of the cover."""
    _require_valid(b)
    n = b.group.order
    twice = 2 - 2 * n + sum(n - n // m for m in b.ramification_indices())
    return twice // 2


@dataclass(frozen=True)
class EigenspaceTable:
    """Dimension ``d_chi`` of each character eigenspace of the holomorphic differentials."""

    dims: tuple[tuple[Character, int], ...]

    def __getitem__(self, chi: Character) -> int:
        for c, d in self.dims:
            if c == chi:
                return d
        raise KeyError(chi)

    def items(self):
        return iter(self.dims)

    @property
    def total(self) -> int:
        return sum(d for c, d in self.dims if not c.is_trivial())


def chevalley_weil_dims(b: BranchData) -> EigenspaceTable:
    """``d_chi = -1 + sum_i frac(nu_chi(g_i))`` for nontrivial ``chi``; 0 at the trivial one."""
    _require_valid(b)
    rows = []
    for chi in all_characters(b.group):
        if chi.is_trivial():
            rows.append((chi, 0))
            continue
        s = sum((character_exponent(chi, g) for g in b.monodromy), Fraction(0))
        if s.denominator != 1:
            raise InvariantViolation(f"non-integral eigenspace dimension at {chi}")
        rows.append((chi, int(s) - 1))
    return EigenspaceTable(tuple(rows))
