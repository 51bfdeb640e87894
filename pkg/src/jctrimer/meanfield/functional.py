"""Semiclassical energy of the displaced trimer and its stationary closed forms.

The energy ``E_cl(alpha) = sum_n [|alpha_n|^2 + 2 J Re(e^{i theta} alpha_n^* alpha_{n+1})
- Delta_n / 2]`` has Wirtinger gradient ``dE/dalpha_n^* = D_n``, so its
stationary points are exactly the solutions of ``D_n = 0``. Functions here accept a
single amplitude triple (shape ``(3,)``) or a batch (shape ``(..., 3)``).
"""
from __future__ import annotations

import math

import numpy as np

from ..errors import BelowCritical
from ..model import OMEGA_C, Amplitudes, SystemParams, as_array
from ..normal import QUASIMOMENTA, critical_coupling

SITES = np.arange(1, 4)


def classical_energy(alpha, params: SystemParams):
    """E_cl in units of omega_c."""
    a = as_array(alpha)
    abs2 = np.abs(a) ** 2
    delta = np.sqrt(4.0 * params.g**2 * abs2 + params.omega0**2)
    bond = np.conj(a) * np.roll(a, -1, axis=-1)
    hopping = 2.0 * np.real(params.hop * bond)
    return np.sum(OMEGA_C * abs2 + hopping - 0.5 * delta, axis=-1)


def gradient(alpha, params: SystemParams):
    """D_n = (omega_c - g^2/Delta_n) alpha_n + J (e^{i theta} alpha_{n+1} + e^{-i theta} alpha_{n-1})."""
    a = as_array(alpha)
    delta = np.sqrt(4.0 * params.g**2 * np.abs(a) ** 2 + params.omega0**2)
    hop = params.hop
    return ((OMEGA_C - params.g**2 / delta) * a
            + hop * np.roll(a, -1, axis=-1) + np.conj(hop) * np.roll(a, 1, axis=-1))


def residual(alpha, params: SystemParams):
    return np.max(np.abs(gradient(alpha, params)), axis=-1)


def hessian_blocks(alpha, params: SystemParams):
    """Second-order coefficients of E_cl around ``alpha``.

    Returns ``(h, nu)`` with ``E(alpha + d) - E(alpha) - linear =
    d^H h d + Re(sum_n nu_n^* d_n^2)``. ``h`` carries the on-site curvature on its
    diagonal and the hopping off-diagonal; ``nu`` is the squeezing amplitude.
    Regular at ``alpha = 0``.
    """
    a = as_array(alpha)
    g2 = params.g**2
    abs2 = np.abs(a) ** 2
    delta = np.sqrt(4.0 * g2 * abs2 + params.omega0**2)
    onsite = OMEGA_C - g2 / delta + 2.0 * g2**2 * abs2 / delta**3
    nu = 2.0 * g2**2 * a**2 / delta**3
    shape = a.shape[:-1] + (3, 3)
    h = np.zeros(shape, dtype=complex)
    idx = np.arange(3)
    h[..., idx, idx] = onsite
    h[..., idx, (idx + 1) % 3] += params.hop
    h[..., (idx + 1) % 3, idx] += np.conj(params.hop)
    return h, nu


def real_hessian(alpha, params: SystemParams):
    """Hessian of E_cl in the real coordinates (A_1, A_2, A_3, B_1, B_2, B_3)."""
    h, nu = hessian_blocks(alpha, params)
    s = np.zeros_like(h)
    idx = np.arange(3)
    s[..., idx, idx] = np.conj(nu)
    top = np.concatenate([h.real + s.real, -h.imag - s.imag], axis=-1)
    bottom = np.concatenate([h.imag - s.imag, h.real - s.real], axis=-1)
    return 2.0 * np.concatenate([top, bottom], axis=-2)


def usp_amplitude(params: SystemParams, sign: int = 1) -> Amplitudes:
    """Uniform real stationary amplitude.

    alpha_n = +-(1/2g) sqrt(g^4 / (omega_c + 2J cos theta)^2 - omega0^2).
    Raises :class:`BelowCritical` when the radicand is not positive.
    """
    denom = OMEGA_C + 2.0 * params.j * math.cos(params.theta)
    g = params.g
    if g == 0 or denom <= 0:
        raise BelowCritical(f"no uniform solution for g={g}, omega_c + 2J cos(theta)={denom}")
    radicand = g**4 / denom**2 - params.omega0**2
    if radicand < 0:
        raise BelowCritical(f"uniform radicand {radicand:.6g} < 0 (g1={params.g1})")
    value = math.copysign(math.sqrt(radicand) / (2.0 * g), sign)
    return Amplitudes((value, value, value))


def plane_wave_amplitude(params: SystemParams, q: float, sign: int = 1) -> Amplitudes:
    """Stationary plane wave alpha_n = A exp(-i q n) with |A| from the q-resolved balance.

    For q = 0 this coincides with :func:`usp_amplitude`.
    """
    denom = OMEGA_C + 2.0 * params.j * math.cos(params.theta - q)
    g = params.g
    if g == 0 or denom <= 0:
        raise BelowCritical(f"no plane-wave solution at q={q}")
    radicand = g**4 / denom**2 - params.omega0**2
    if radicand < 0:
        raise BelowCritical(f"plane-wave radicand {radicand:.6g} < 0 at q={q}")
    amp = math.copysign(math.sqrt(radicand) / (2.0 * g), sign)
    return Amplitudes(amp * np.exp(-1j * q * SITES))


def plane_wave_seeds(params: SystemParams):
    """All existing plane-wave stationary points, both signs."""
    out = []
    for q in QUASIMOMENTA:
        for sign in (1, -1):
            try:
                out.append(plane_wave_amplitude(params, q, sign))
            except BelowCritical:
                pass
    return out


def is_above_critical(params: SystemParams) -> bool:
    return params.g1 > critical_coupling(params)
