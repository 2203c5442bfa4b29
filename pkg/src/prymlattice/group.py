"""Finite abelian groups in invariant-factor form, and their characters.

A group is stored as its invariant factors ``d_1 | d_2 | ... | d_k``.
Elements and characters are tuples of residues modulo the ``d_i``; a
character value ``chi(g)`` is kept as the exact rational ``nu`` with
``chi(g) = exp(2*pi*i*nu)``.

>>> G = make_group([2, 3])
>>> G.invariant_factors
(6,)
>>> character_exponent(Character(G, (1,)), G.element([2]))
Fraction(1, 3)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm, prod
from typing import Iterable, Iterator, Sequence

from .errors import EmptyOrNonPositiveModulus, GroupMismatch

__all__ = [
    "FiniteAbelianGroup",
    "GroupElement",
    "Character",
    "make_group",
    "add",
    "element_order",
    "all_characters",
    "character_exponent",
    "generated_subgroup",
]


@dataclass(frozen=True)
class FiniteAbelianGroup:
    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        factors = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", factors)
        if any(d < 2 for d in factors):
            raise ValueError(f"invariant factors must be >= 2, got {factors}")
        for a, b in zip(factors, factors[1:]):
            if b % a:
                raise ValueError(f"invariant factors {factors} violate the divisibility chain")

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def ngens(self) -> int:
        return len(self.invariant_factors)

    def element(self, coords: Iterable[int]) -> GroupElement:
        coords = tuple(coords)
        if len(coords) != self.ngens:
            raise GroupMismatch(
                f"element {coords} has {len(coords)} coordinates, group {self} needs {self.ngens}"
            )
        return GroupElement(self, tuple(c % d for c, d in zip(coords, self.invariant_factors)))

    def identity(self) -> GroupElement:
        return GroupElement(self, (0,) * self.ngens)

    def generators(self) -> list[GroupElement]:
        """The standard generators ``e_i`` of order ``d_i``."""
        return [
            GroupElement(self, tuple(int(i == j) for j in range(self.ngens)))
            for i in range(self.ngens)
        ]

    @cached_property
    def _elements(self) -> tuple[GroupElement, ...]:
        return tuple(
            GroupElement(self, coords)
            for coords in itertools.product(*(range(d) for d in self.invariant_factors))
        )

    def elements(self) -> tuple[GroupElement, ...]:
        """All elements, lexicographic in their coordinates (identity first)."""
        return self._elements

    def index_of(self, g: GroupElement) -> int:
        """Position of ``g`` in :meth:`elements`."""
        idx = 0
        for c, d in zip(g.coords, self.invariant_factors):
            idx = idx * d + c
        return idx

    def __str__(self):
        if not self.invariant_factors:
            return "trivial"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


@dataclass(frozen=True)
class GroupElement:
    group: FiniteAbelianGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        d = self.group.invariant_factors
        if len(self.coords) != len(d) or any(not 0 <= c < m for c, m in zip(self.coords, d)):
            raise ValueError(f"coordinates {self.coords} are not reduced for {self.group}")

    def _check(self, other: GroupElement):
        if self.group != other.group:
            raise GroupMismatch(f"{self.group} vs {other.group}")

    def __add__(self, other: GroupElement) -> GroupElement:
        self._check(other)
        return self.group.element(a + b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> GroupElement:
        return self.group.element(-a for a in self.coords)

    def __sub__(self, other: GroupElement) -> GroupElement:
        return self + (-other)

    def __mul__(self, k: int) -> GroupElement:
        return self.group.element(k * a for a in self.coords)

    __rmul__ = __mul__

    def is_identity(self) -> bool:
        return not any(self.coords)

    @property
    def order(self) -> int:
        return element_order(self)

    def __str__(self):
        return "(" + ",".join(map(str, self.coords)) + ")"


@dataclass(frozen=True)
class Character:
    group: FiniteAbelianGroup
    exponents: tuple[int, ...]

    def __post_init__(self):
        d = self.group.invariant_factors
        if len(self.exponents) != len(d) or any(
            not 0 <= a < m for a, m in zip(self.exponents, d)
        ):
            raise ValueError(f"exponents {self.exponents} are not reduced for {self.group}")

    def is_trivial(self) -> bool:
        return not any(self.exponents)

    def conjugate(self) -> Character:
        return Character(
            self.group, tuple(-a % d for a, d in zip(self.exponents, self.group.invariant_factors))
        )

    def __call__(self, g: GroupElement) -> Fraction:
        return character_exponent(self, g)

    def __str__(self):
        return "chi(" + ",".join(map(str, self.exponents)) + ")"


def make_group(moduli: Sequence[int]) -> FiniteAbelianGroup:
    """Canonical invariant-factor form of ``Z/m_1 x ... x Z/m_k``."""
    moduli = [int(m) for m in moduli]
    if any(m <= 0 for m in moduli):
        raise EmptyOrNonPositiveModulus(f"moduli must be positive, got {moduli}")
    m = sorted(moduli)
    # pairwise (gcd, lcm) replacement leaves a divisibility chain
    for i in range(len(m)):
        for j in range(i + 1, len(m)):
            g = gcd(m[i], m[j])
            m[i], m[j] = g, m[i] * m[j] // g
    return FiniteAbelianGroup(tuple(d for d in m if d != 1))


def add(g: GroupElement, h: GroupElement) -> GroupElement:
    return g + h


def element_order(g: GroupElement) -> int:
    return lcm(1, *(d // gcd(c, d) for c, d in zip(g.coords, g.group.invariant_factors)))


def all_characters(G: FiniteAbelianGroup) -> list[Character]:
    """Every character of ``G``, lexicographic in exponents; trivial first."""
    return [
        Character(G, exps)
        for exps in itertools.product(*(range(d) for d in G.invariant_factors))
    ]


def character_exponent(chi: Character, g: GroupElement) -> Fraction:
    if chi.group != g.group:
        raise GroupMismatch(f"character of {chi.group} evaluated on element of {g.group}")
    nu = sum(
        (Fraction(a * c, d) for a, c, d in zip(chi.exponents, g.coords, g.group.invariant_factors)),
        Fraction(0),
    )
    return nu % 1


def generated_subgroup(G: FiniteAbelianGroup, gens: Iterable[GroupElement]) -> set[GroupElement]:
    """Closure of ``gens`` under addition, by breadth-first search."""
    gens = [g for g in gens if not g.is_identity()]
    seen = {G.identity()}
    frontier = [G.identity()]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x + g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def iter_multiples(g: GroupElement) -> Iterator[GroupElement]:
    """``0, g, 2g, ...`` up to (not including) the return to 0."""
    x = g.group.identity()
    while True:
        yield x
        x = x + g
        if x.is_identity():
            return
