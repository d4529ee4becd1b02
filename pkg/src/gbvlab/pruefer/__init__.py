from ..models import ModelTag
from .coefficients import (
    JacobiCoeffs,
    VerblunskyCoeffs,
    alpha_eta,
    free_jacobi,
    free_verblunsky,
)
from .direct import (
    DIRECT_GUARD,
    direct_polynomial_prufer,
    jacobi_polynomials,
    szego_polynomials,
)
from .step import (
    PruferState,
    Trajectory,
    modulus_ratio,
    phase_ratio,
    prufer_trajectory,
    trajectory_grid,
    unified_prufer_step,
    unified_ratio,
)

__all__ = (
    "DIRECT_GUARD",
    "JacobiCoeffs",
    "ModelTag",
    "PruferState",
    "Trajectory",
    "VerblunskyCoeffs",
    "alpha_eta",
    "direct_polynomial_prufer",
    "free_jacobi",
    "free_verblunsky",
    "jacobi_polynomials",
    "modulus_ratio",
    "phase_ratio",
    "prufer_trajectory",
    "szego_polynomials",
    "trajectory_grid",
    "unified_prufer_step",
    "unified_ratio",
)
