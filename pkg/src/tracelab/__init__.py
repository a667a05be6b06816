"""tracelab: numerical verification of convexity and concavity for operator
trace functionals built from operator monotone (decreasing) functions and
strictly positive maps."""

from .kernels import BACKEND_NAME
from .matcore import HermitianMatrix, PDMatrix, SpectralDecomposition, random_pd
from .posmap import PositiveMap, identity_map, random_map
from .report import TrialReport
from .scalarfun import (LegendreResult, ScalarFunction, TransformedFunction,
                        breve, check, check_func_eq1, legendre_numeric,
                        loewner_monotonicity_oracle, parse_tag, tilde)
from .tracefun import (FunctionalSpec, PgdOptions, VariationalResult,
                       core_functional, inverse_form, minimize_objective_Z,
                       trace_h_variational_oracle, trace_h_variational_pgd,
                       validate_spec, variational_objective_Z)
from .verify import (TrialConfig, jensen_trace_suite, joint_concavity_suite,
                     joint_convexity_suite, operator_convexity_suite,
                     remark_operator_concave_check, sharpness_search,
                     trace_monotonicity_suite)

__version__ = "0.1.0"
