"""Graded-symplectic Poisson reduction toolkit."""

from .exactpoly import Polynomial, Rational, parse_polynomial, poly_diff, poly_mul, poly_subst
from .gradedalg import (
    GradedFunction,
    PoissonBivector,
    derived_bracket,
    graded_mul,
    hamiltonian_vector_field,
    jacobi_defect,
    lie_derivative_bivector,
    parse_graded,
    schouten_bracket,
)
from .subman import DistributionSpec, SubmanifoldSpec, bracket_matrix_rank_probe, graph_form
from .reduction import (
    ReductionReport,
    Verdict,
    check_coisotropic,
    check_marsden_ratiu,
    check_stages_A1,
    check_stages_A2,
    reduce_bivector,
    reduce_bivector_onC,
)
from .dgla import (
    ActionData,
    CrossedModuleSpec,
    DGLASpec,
    audit_action,
    audit_crossed_module,
    audit_dgla,
    compute_D_and_invariance,
    crossed_module_to_dgla,
    dgla_to_crossed_module,
    mw_reduce,
    semidirect_bracket,
)

__version__ = "0.1.0"
