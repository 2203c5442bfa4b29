"""Exact lattice computations for Prym varieties of abelian covers of P^1.

The Jacobian of a ``G``-cover ``C -> P^1`` is studied through ``H_1(C, Z)``
with its ``G``-action: norm endomorphism, fixed and Prym lattices, their
decomposition, diagonal self-products and the resulting Mordell-Weil rank
bound for the twisted Jacobian.
"""

__version__ = "0.1.0"

from .cover import BranchData, EigenspaceTable, branch_data, chevalley_weil_dims, genus, validate
from .group import (
    Character,
    FiniteAbelianGroup,
    GroupElement,
    add,
    all_characters,
    character_exponent,
    element_order,
    make_group,
)
from .homology import (
    CoverComplex,
    EquivariantLattice,
    build_cover_complex,
    h1_with_action,
    homology_of,
    isotypic_dimension,
)
from .lattice import (
    IntegerMatrix,
    SmithDecomposition,
    Sublattice,
    cokernel_exponent,
    image_basis,
    intersect,
    kernel_basis,
    lattice_sum,
    membership,
    saturate,
    smith_normal_form,
)
from .prym import (
    DecompositionReport,
    NormOperator,
    PrymLattice,
    RankBoundReport,
    commutant_rank,
    diagonal_product,
    fixed_sublattice,
    group_ring_rank,
    norm_operator,
    prym_lattice,
    rank_bound,
    verify_decomposition,
    verify_product,
)
