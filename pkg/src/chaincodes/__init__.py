"""Group codes over finite chain rings.

Relative projective left ideals of RG, R a finite chain ring with residue
field F_p, correspond to nested chains of projective group codes over F_p.
This package builds codes from chains and back, computes duals and minimum
distances, and runs the exhaustive self-dual Z/4 search over dihedral groups.
"""

from .algebra import FAlgebraElement, alg_mul, bilinear_form, is_idempotent, star
from .errors import (BudgetExceeded, ChainCodesError, IncompatibleOperands,
                     InternalConsistencyError, InvalidChain, InvalidGenerator, InvalidParameter,
                     LiftingFailure, NotInLayer, ParseError, PreconditionViolation, Unsupported,
                     UnsupportedRing, VerificationFailure)
from .fieldcodes import (GroupCodeF, code_from_idempotent, dual_code_f, ideal_from_generators,
                         min_euclidean_distance_f, min_hamming_distance_f, projectivity_witness)
from .groups import (FiniteGroup, make_abelian, make_cyclic, make_dihedral, make_quaternion,
                     parse_group, small_groups, validate_group)
from .literals import format_element, parse_f_element, parse_r_element
from .polys import factor_xn_minus_1
from .ring import ChainRingSpec, RScalar, alpha_j, alpha_j_up, parse_ring, valuation
from .ringcodes import (CodeChain, RAlgebraElement, RCode, Verdict, build_code_from_chain,
                        chain_extract, chain_from_codes, chain_from_idempotents,
                        decide_relative_projective, dual_code_r, euclidean_weights,
                        ideal_from_generators_r, lift_idempotent, min_hamming_r)
from .search import (SearchReport, enumerate_chains, enumerate_idempotents_cyclic,
                     enumerate_idempotents_exhaustive, search_selfdual_dihedral_z4)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
