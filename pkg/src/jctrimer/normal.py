"""Normal-phase (zero displacement) spectrum and critical coupling."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .model import OMEGA_C, SystemParams

QUASIMOMENTA = (0.0, 2.0 * math.pi / 3.0, -2.0 * math.pi / 3.0)
_Q_TOL = 1e-12
_TIE_TOL = 1e-12


def _check_q(q: float) -> float:
    for allowed in QUASIMOMENTA:
        if abs(q - allowed) <= _Q_TOL:
            return allowed
    raise ValidationError("q", f"quasimomentum must be one of 0, +-2pi/3, got {q}")


def q_theta(theta: float) -> float:
    """Soft-mode quasimomentum: argmin over q of cos(theta - q).

    Ties (interval boundaries) go to the smaller |q|; the remaining tie at
    theta = 0 between +-2pi/3 goes to -2pi/3.
    """
    order = sorted(QUASIMOMENTA, key=lambda q: (abs(q), q))
    best = order[0]
    best_cos = math.cos(theta - best)
    for q in order[1:]:
        c = math.cos(theta - q)
        if c < best_cos - _TIE_TOL:
            best, best_cos = q, c
    return best


def np_dispersion(params: SystemParams, q: float) -> float:
    """eps_q = omega_c (1 - g1^2) + 2 J cos(theta - q)."""
    q = _check_q(q)
    return OMEGA_C * (1.0 - params.g1**2) + 2.0 * params.j * math.cos(params.theta - q)


def critical_coupling(params: SystemParams) -> float:
    """g1c = sqrt(1 + (2J / omega_c) cos(theta - q_theta))."""
    radicand = 1.0 + 2.0 * params.j / OMEGA_C * math.cos(params.theta - q_theta(params.theta))
    if radicand <= 0.0:
        raise ValidationError("j", f"critical coupling undefined, radicand {radicand} <= 0")
    return math.sqrt(radicand)


def np_ground_energy(params: SystemParams) -> float:
    """E_g^NP = -3 (omega0 + omega_c g1^2) / 2."""
    return -1.5 * (params.omega0 + OMEGA_C * params.g1**2)


@dataclass(frozen=True)
class NpSpectrum:
    eps_q: dict = field(default_factory=dict)
    ground_energy: float = 0.0
    stable: bool = True

    @property
    def eps_min(self) -> float:
        return min(self.eps_q.values())


def np_spectrum(params: SystemParams, zero_tol: float = 1e-7) -> NpSpectrum:
    eps = {q: np_dispersion(params, q) for q in QUASIMOMENTA}
    stable = bool(min(eps.values()) >= -zero_tol)
    return NpSpectrum(eps_q=eps, ground_energy=np_ground_energy(params), stable=stable)


def np_dispersion_array(params: SystemParams) -> np.ndarray:
    return np.array([np_dispersion(params, q) for q in QUASIMOMENTA])
