"""Traveling-wave solutions of reaction-diffusion equations from one trained
scaled solver, reusable across coefficients and spatial dimensions."""

__version__ = "0.1.0"

from .equations import (  # noqa: F401
    PhysicalCoeffs,
    PhysicalPoint,
    ReactionSpec,
    ScaledPoint,
    exact_solution,
    exact_speed,
    make_reaction,
    reaction_eval,
    scale_forward,
    scale_inverse,
    traveling_profile,
)
from .pipeline import (  # noqa: F401
    ErrorReport,
    FieldGrid,
    SolverHandle,
    error_report,
    evaluate_grid,
    exact_field,
    max_error_over_time,
    predict,
)
from .training import TrainConfig, TrainReport, train  # noqa: F401
from .wavenet import SolutionJet, WaveNetParams, forward_jet, loss_grad, residual, wave_coordinate  # noqa: F401
