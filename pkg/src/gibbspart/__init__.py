"""Exchangeable Gibbs partitions, generalized Stirling triangles and the
boundary of their block-count chains."""

__version__ = "0.1.0"

from .numerics import (LogScalar, NumericalFailure, QuadratureError, QuadratureSpec,  # noqa: F401
                       mittag_leffler_density, stable_density)
from .stirling import (TriangleSpec, bell_polynomial, build_triangle, extended_dimension,  # noqa: F401
                       extended_dimension_closed, pascal_spec, qpascal_spec, stirling_number,
                       stirling_spec, w_weights)
from .gibbs import (GibbsLaw, TwoParam, VArray, check_addition_rule, classify_gibbs,  # noqa: F401
                    classify_ratio_weights, eppf_gibbs, eppf_two_param, phi_varray,
                    phi_weights, psi_v_first_column, psi_weights)
from .boundary import (GradedGraph, PascalGraph, conditional_law, path_limit,  # noqa: F401
                       pathology_graph, vn1_closed)
from .sampling import (exact_mean_Kn, lln_experiment, sample_coupon, sample_crp,  # noqa: F401
                       sample_dirichlet_paintbox)
from .moments import (hausdorff_forward, nonnegativity_verdict, reconstruct_varray,  # noqa: F401
                      recover_mixture)
