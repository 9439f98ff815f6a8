"""Numerical laboratory for Atiyah's linear-independence conjecture on N points in R^3
and the Atiyah-Sutcliffe determinant inequality."""

__version__ = "0.1.0"

from .binary_forms import BinaryForm, LinearForm, multiply, product_of_linear_forms
from .closed_forms import (
    case_a_det,
    case_a_inequality,
    case_b_det,
    case_b_inequality_probe,
    elementary_symmetric,
    specialized_identity,
)
from .core import AtiyahEvaluation, build_matrix, evaluate, log_determinant, rhs_log_bound
from .errors import CoincidentPoints, DegenerateLift, DegenerateStart, NonAscendingInput
from .generators import (
    GeneratorKind,
    GeneratorSpec,
    case_a_config,
    case_b_config,
    collinear_vertical,
    random_config,
)
from .geometry import (
    CANONICAL,
    Configuration,
    OrientationPolicy,
    PairData,
    Point,
    Spinor,
    hopf,
    pair_data,
    reverse_lift,
    standard_lift,
)
from .harness import (
    crosscheck_special_cases,
    fuzz,
    invariance_suite,
    minimize_ratio,
    multistart_minimize,
)
