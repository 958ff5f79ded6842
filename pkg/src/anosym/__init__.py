"""anosym: a numerical laboratory for symplectic Anosov representations.

Construct the classical example families into Sp(2n,R) and Sp(2n,C),
certify the Anosov gap conditions empirically, sample limit maps, classify
complex Lagrangians into group-orbit strata, and answer membership queries
for the associated domains of discontinuity.
"""

from .errors import (AlphabetError, AnosymError, BudgetError, ConstructionError,
                     ContractError, ConvergenceError, DimensionError, FieldError,
                     IllConditionedError, InconclusiveError, NonProximalError,
                     NotAGraphError)
from .numerics import Tolerance, DEFAULT_TOL, jacobi_svd, hermitian_eigen, rank_with_tol
from .symplectic import (GroupElement, IsotropicSubspace, SymplecticSpace,
                         group_element, identity_element, is_symplectic,
                         isotropic_subspace, is_transverse, symplectic_orthogonal,
                         symplectic_reduction, conjugate_subspace, intersection_dim)
from .cartan import CartanVector, cartan_projection, simple_root_values, word_value
from .words import (BoundaryPointApprox, GroupPresentation, free_group,
                    surface_group, reduce, enumerate_sphere, enumerate_ball,
                    sample_boundary_pairs, parse_word, format_word)
from .reps import (Representation, build_hitchin_base, complexify_rep,
                   fuchsian_generators, fuchsian_representation, product_rep,
                   realify, sym_power_rep, trivial_rep, make_representation)
from .anosov import (LimitSample, divergence_report, dynamics_preservation_check,
                     limit_sample, proximal_fixed_points, qi_embedding_check,
                     sphere_scan, transversality_audit)
from .lagrangians import (StratumLabel, bounded_domain_embed, classify_lagrangian,
                          graph_lagrangian, graph_to_element, hermitian_form_on,
                          product_orbit_type, random_lagrangian, stratum_closure)
from .dod import (contains_line, d_xi_membership, disjointness_audit, in_bad_set,
                  nontransverse_to, properness_witness, r0_inclusion_audit,
                  stratum_bad_test)

__version__ = "0.1.0"
