"""Eigenspace posets of finite unitary reflection groups.

Exact cyclotomic arithmetic, eigenspace poset constructions, integer
homology via Smith normal form, equivariant homology characters, and
verification batteries for the structural identities relating them.
"""

from .cyclo import CycNum, RootOfUnity, parse_cyc, parse_rootspec, zeta
from .exactla import Mat, Subspace, eigenspace, kernel, rank
from .refl import (
    DegreeData,
    ReflCoset,
    ReflGroup,
    build_from_generators,
    build_gmpn,
    degree_data,
    molien_degrees,
    parse_group_spec,
    symmetric_group,
)
from .gposet import (
    GPoset,
    bottom_extension,
    drop_minimals,
    drop_top,
    eigenspace_poset,
    is_gposet,
    isomorphic_gposets,
    make_poset,
    open_upset,
    pointed_eigenspace_poset,
    poset_length,
    poset_product,
    proper_part,
    subposet,
    suspension,
    wedge_of_suspensions,
    wedge_over_minimals,
    with_bottom,
)
from .homology import (
    ChainComplex,
    HomologyResult,
    chain_euler,
    connecting_map,
    homology,
    induced_map,
    order_complex,
    snf_diagonal,
    verify_mayer_vietoris,
)
from .equivariant import (
    ClassFunction,
    EigenspaceOrbitData,
    build_posets,
    induced_character,
    lefschetz_character,
    maximal_eigenspace_orbits,
    top_homology_character,
    verify_decomposition,
    verify_identity_suspension,
    verify_sphere_count,
)
from .jobs import JobSpec, battery, e8_formula, run

__version__ = "0.1.0"
