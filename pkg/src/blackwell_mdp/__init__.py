"""Exact Blackwell optimality for rational Markov decision processes."""

from .average import average_reward
from .blackwell import (
    BlackwellAnalysis,
    EtaBound,
    blackwell_optimal_policy,
    eta_bound,
    exact_blackwell_analysis,
    gamma_bar,
    gamma_pair,
)
from .errors import (
    BlackwellError,
    DenominatorMismatch,
    GammaOutOfRange,
    InstanceError,
    InvalidPolicy,
    NegativeProbability,
    NonConvergence,
    NonIntegralCoefficient,
    NonMonotoneBreakpoints,
    NonOddN,
    NonStochasticRow,
    ParseError,
    PolicySpaceTooLarge,
    ResourceGuard,
    VertexSpaceTooLarge,
    ZeroPolynomial,
)
from .exact_linear import (
    denominator_poly,
    difference_poly,
    evaluate_policy,
    numerator_poly,
    scaled_integer_poly,
    value_at,
    value_function,
)
from .generators import (
    IntervalSpec,
    example_one,
    interval_instance,
    random_instance,
)
from .model import (
    MdpInstance,
    enumerate_policies,
    load_instance,
    make_instance,
    validate_instance,
)
from .robust import (
    RobustSolveResult,
    UncertaintySet,
    inner_min_ell_1,
    inner_min_ell_inf,
    load_uncertainty,
    robust_blackwell_analysis,
    robust_eta_bound,
    robust_value_iteration,
)
from .roots import IsolatedRoot, isolate_roots, rump_eta
from .solvers import (
    SolveResult,
    exact_policy_iteration,
    float_value_iteration,
    optimal_policy_set,
)

__version__ = "0.1.0"
