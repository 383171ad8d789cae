"""p-adic Gibbs measures of the three-state hard-core model on Cayley trees."""

from .gibbs import (
    BoundaryLaw,
    ModelParams,
    NotInEp,
    Transition,
    boundedness_norms,
    check_consistency,
    detect_transition,
    measures,
    partition_function,
    require_ep,
    verify_compatibility,
    verify_partition_recursion,
)
from .padic import (
    Ball,
    Kind,
    PadicNumber,
    PrecisionError,
    exp_p,
    from_rational,
    hensel_lift,
    log_p,
    sqrt,
)
from .solvers import (
    PeriodicSolution,
    Verdict,
    classify,
    classify_ti,
    solve_periodic,
    solve_ti_diagonal,
    solve_ti_offdiagonal,
)
from .tree import Configuration, build_tree, iter_admissible_states

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "BoundaryLaw",
    "Configuration",
    "Kind",
    "ModelParams",
    "NotInEp",
    "PadicNumber",
    "PeriodicSolution",
    "PrecisionError",
    "Transition",
    "Verdict",
    "boundedness_norms",
    "build_tree",
    "check_consistency",
    "classify",
    "classify_ti",
    "detect_transition",
    "exp_p",
    "from_rational",
    "hensel_lift",
    "iter_admissible_states",
    "log_p",
    "measures",
    "partition_function",
    "require_ep",
    "solve_periodic",
    "solve_ti_diagonal",
    "solve_ti_offdiagonal",
    "sqrt",
    "verify_compatibility",
    "verify_partition_recursion",
]
