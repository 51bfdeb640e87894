"""Order parameters, photon current and chirality in the coherent-state mean field."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .model import Amplitudes, SystemParams, as_array, gauge_fix


def _levi_civita(i, j, k):
    return (i - j) * (j - k) * (k - i) / 2


@dataclass(frozen=True, eq=False)
class Observables:
    """Scaled observables: alpha_n / sqrt(eta), <I> / eta and <C> / eta^2."""

    order_params: np.ndarray
    current: float
    chirality: float


def order_parameters(alpha, params: SystemParams) -> np.ndarray:
    """alpha_n / sqrt(eta) in the gauge where alpha_3 is real and nonnegative."""
    return gauge_fix(alpha) / math.sqrt(params.eta)


def raw_current(alpha):
    """<I> = -2 Im(a1^* a2 + a2^* a3 + a3^* a1) for a product coherent state (unscaled)."""
    a = as_array(alpha)
    return -2.0 * np.imag(np.sum(np.conj(a) * np.roll(a, -1, axis=-1), axis=-1))


def current(alpha, params: SystemParams) -> float:
    return float(raw_current(alpha) / params.eta) + 0.0  # no negative zero


def chirality_complex(alpha) -> complex:
    """Unscaled -2i sum_{ijk} eps_ijk alpha_i alpha_j^* (|alpha_k|^2 - 1/2), before the real cast."""
    a = as_array(alpha)
    n = np.abs(a) ** 2 - 0.5
    total = 0j
    for i, j, k in itertools.permutations(range(3)):
        total += _levi_civita(i, j, k) * a[i] * np.conj(a[j]) * n[k]
    return -2j * total


def chirality(alpha, params: SystemParams) -> float:
    value = chirality_complex(alpha)
    scale = max(1.0, float(np.sum(np.abs(as_array(alpha)) ** 2)) ** 2)
    if abs(value.imag) > 1e-12 * scale:
        raise ArithmeticError(f"chirality has imaginary residue {value.imag:.3e}")
    return float(value.real / params.eta**2)


def chiral_transform(alpha) -> Amplitudes:
    """Site relabeling 123 <-> 321."""
    a = as_array(alpha)
    return Amplitudes(a[::-1])


def time_reversal(alpha, params: SystemParams):
    """Complex conjugation of the amplitudes together with theta -> -theta."""
    return Amplitudes(np.conj(as_array(alpha))), params.replace(theta=-params.theta)


def evaluate(alpha, params: SystemParams) -> Observables:
    return Observables(
        order_params=order_parameters(alpha, params),
        current=current(alpha, params),
        chirality=chirality(alpha, params),
    )
