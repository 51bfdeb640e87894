"""Ground-state phases of a Jaynes-Cummings trimer with complex photon hopping."""
from .model import Amplitudes, SiteAux, SystemParams, delta_of, make_params
from .normal import critical_coupling, np_dispersion, np_ground_energy
from .meanfield import MeanFieldSolution, PhaseLabel, SolverOptions, solve

__version__ = "0.1.0"

__all__ = [
    "Amplitudes", "MeanFieldSolution", "PhaseLabel", "SiteAux", "SolverOptions", "SystemParams",
    "critical_coupling", "delta_of", "make_params", "np_dispersion", "np_ground_energy", "solve",
]
