"""Exact Tate cohomology of modules over dihedral groups of order 2q, q odd.

The package computes Tate cohomology of finitely generated D-modules over the
integers, checks the algebraic identities relating the cohomology of D, of its
rotation subgroup G and of its reflections, and verifies class number
relations for dihedral extensions of number fields from unit group data.
"""

from .arithmetic import (
    DataError,
    FieldData,
    VerificationReport,
    check_bounds,
    load_field_data,
    local_cohomology_orders,
    verify_all,
    verify_bartel_equivalence,
    verify_main_theorem,
    verify_unit_index,
)
from .cohomology import FiniteAbGroup, TateGroup, herbrand_quotient, tate, tate_cyclic, tate_dihedral
from .dmodule import FULL, SIGMA, SIGMA_PRIME, DModule, SubgroupSpec, random_dmodule, rotations
from .identities import FuzzConfig, fuzz, run_all_checks
from .intlinalg import FinGenAb, IntMatrix, smith_normal_form

__version__ = "0.1.0"
