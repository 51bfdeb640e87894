"""Mean-field amplitudes: energy functional, closed forms and the multistart solver."""
from .functional import (
    classical_energy,
    gradient,
    hessian_blocks,
    plane_wave_amplitude,
    real_hessian,
    residual,
    usp_amplitude,
)
from .solver import (
    MeanFieldSolution,
    PhaseLabel,
    SolverOptions,
    classify,
    degenerate_orbit,
    seed_starts,
    solve,
    solve_many,
)

__all__ = [
    "MeanFieldSolution", "PhaseLabel", "SolverOptions", "classical_energy", "classify",
    "degenerate_orbit", "gradient", "hessian_blocks", "plane_wave_amplitude", "real_hessian",
    "residual", "seed_starts", "solve", "solve_many", "usp_amplitude",
]
