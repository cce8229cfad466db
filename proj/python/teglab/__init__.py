"""Translation-evolution-grid solvers for diffusion and Schrodinger equations."""

from ._core import (
    EvaluationError,
    ExpressionSyntaxError,
    GuardError,
    InvalidArgument,
    TeglabError,
    coeff,
    converge,
    demoivre_weight,
    digit_csi,
    digits,
    evaluate,
    path,
    solve,
    stirling_ratio,
    validate,
)

__all__ = [
    "EvaluationError",
    "ExpressionSyntaxError",
    "GuardError",
    "InvalidArgument",
    "TeglabError",
    "coeff",
    "converge",
    "demoivre_weight",
    "digit_csi",
    "digits",
    "evaluate",
    "path",
    "solve",
    "stirling_ratio",
    "validate",
]
