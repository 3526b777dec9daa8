"""Exact computational kernel for cluster algebras.

Quiver and seed mutation, mutation-class and exchange-graph enumeration,
c-/g-vectors and F-polynomials, quantum tori and dilogarithm identities,
and mutation of quivers with potential; everything in exact arithmetic.
"""

from .quiver import (Arrow, CanonicalForm, ExchangeMatrix, IceMatrix,
                     MutationRangeError, QuiverError, QuiverPresentation,
                     canonical_form, cartan_companion, cluster_type,
                     dynkin_label, find_symmetrizer, langlands_dual,
                     matrix_to_quiver, mutation_class, opposite,
                     quiver_to_matrix)
from .seed import (ClusterVariableSet, ExchangeGraph, NonLaurentError, Seed,
                   SeedError, TropicalSemifield, UniversalSemifield,
                   cluster_variables, denominator_vector, exchange_graph,
                   mutate_y_seed, seed_at)
from .tropical import (DualityReport, ElementaryPair, SignIncoherenceError,
                       TropicalError, braid_check, c_and_g, c_matrix,
                       check_langlands_duality, check_tropical_duality,
                       elementary_pair, f_polynomials, g_matrix,
                       g_matrix_from_grading, principal_extension,
                       separation_evaluate)
from .quantum import (CompatiblePair, IncompatibleInputError, PoleAtOneError,
                      QuantumError, QuantumSeed, SeriesContext, TorusElement,
                      TruncatedSeries, adjoint_check, combinatorial_dt,
                      dilog_product, pentagon_check, qdilog, qexp,
                      quantum_mutate_seed, specialize_q1, verify_identity)
from .qp import (DegenerateQuadraticPartError, JacobianDimension,
                 LoopPresentError, PathElement, Potential, QPError, QPQuiver,
                 QuiverWithPotential, TwoCycleAtVertexError,
                 VertexOnTwoCycleError, cyclic_derivative, jacobian_dimension,
                 mutate_qp, premutation, reduce_qp)
from .ratfunc import Frac, Poly, PolyRing, RatFuncError, parse_rational, poly_gcd, xy_ring

__version__ = "0.1.0"
