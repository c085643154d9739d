"""Finite invariants of local-global principles over arithmetic curves.

Reduction graphs of closed-fiber models, their free fundamental groups,
finite covers as permutation monodromy, obstruction sets as conjugacy
classes of homomorphisms, and the finite double-coset model of the
Mayer-Vietoris coboundary.
"""

from .errors import GroupError, ModelError, ShagraphError, StateCapError
from .model import ClosedFiberModel, blowup, parse_model, refine, serialize_model, validate
from .graph import ReductionGraph, classical_graph, cycle_rank, from_model, is_tree, spanning_gauge, to_dot
from .groups import (
    FiniteGroup,
    Subgroup,
    build_group,
    centralizer,
    conjugacy_classes,
    quotient,
    subgroup,
)
from .covers import (
    MonodromyTuple,
    RawCoverData,
    are_isomorphic,
    connected_components,
    dominates,
    enumerate_covers,
    fiber_product,
    from_hom,
    is_connected,
    is_galois,
    normalize,
)
from .sha import compute_sha, is_lgp_trivial, quotient_sequence_check, sha_count_burnside, witt_kernel
from .mv import FactorizationSystem, coboundary_orbits, factorizes, same_fiber, trans_factor_check

__version__ = "0.1.0"
