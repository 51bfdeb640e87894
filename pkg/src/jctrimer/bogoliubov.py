"""Quadratic fluctuation Hamiltonian around a mean-field point and its
Hopfield-Bogoliubov spectrum.

Basis ordering of the 6x6 matrix is (b1^dag, b2^dag, b3^dag, b1, b2, b3).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSite
from .meanfield.functional import usp_amplitude
from .model import OMEGA_C, SystemParams, as_array
from .normal import QUASIMOMENTA, np_dispersion, np_ground_energy

ZERO_TOL = 1e-7
SIGMA = np.diag([1.0, 1.0, 1.0, -1.0, -1.0, -1.0])


@dataclass(frozen=True, eq=False)
class QuadraticBosonForm:
    """Coefficients of the displaced-frame quadratic Hamiltonian.

    ``mu`` are the real on-site energies, ``nu`` the complex squeezing amplitudes,
    ``hop`` the complex hopping J e^{i theta}. ``c3 = c2 - sum(mu) / 2``.
    """

    mu: np.ndarray
    nu: np.ndarray
    hop: complex
    c2: float
    c3: float

    def matrix(self) -> np.ndarray:
        h = np.diag(self.mu.astype(complex))
        for n in range(3):
            h[n, (n + 1) % 3] += self.hop
            h[(n + 1) % 3, n] += np.conj(self.hop)
        m = np.zeros((6, 6), dtype=complex)
        m[:3, :3] = h
        m[3:, 3:] = h.conj()
        m[:3, 3:] = np.diag(self.nu)
        m[3:, :3] = np.diag(np.conj(self.nu))
        return m


@dataclass(frozen=True, eq=False)
class BogoliubovSpectrum:
    """Quasiparticle energies (ascending), stability flag and ground-state energy.

    ``stable`` is False for mean-field saddles; ``ground_energy`` is then only
    indicative. ``max_imag`` is the largest imaginary part found when the
    form is not positive semidefinite (0 otherwise).
    """

    eps: np.ndarray
    stable: bool
    ground_energy: float
    max_imag: float = 0.0

    @property
    def eps_min(self) -> float:
        return float(self.eps[0])

    def eps_min_nonzero(self, zero_tol: float = ZERO_TOL) -> float:
        nonzero = self.eps[np.abs(self.eps) > zero_tol]
        return float(nonzero[0]) if nonzero.size else 0.0


def _check_sites(a, params):
    # Delta_n^2 - omega0^2 = 4 g^2 |alpha_n|^2 underflows relative to omega0^2 below this
    floor = np.finfo(float).eps * params.eta
    small = np.abs(a) ** 2 < floor
    if np.any(small) or params.g == 0:
        raise DegenerateSite(
            f"sites {list(np.flatnonzero(small) + 1)} have |alpha|^2 < {floor:.3g}; use the normal-phase branch"
        )


def build_form(alpha, params: SystemParams) -> QuadraticBosonForm:
    a = as_array(alpha)
    _check_sites(a, params)
    g2 = params.g**2
    w0 = params.omega0
    abs2 = np.abs(a) ** 2
    delta = np.sqrt(4.0 * g2 * abs2 + w0**2)
    gap2 = 4.0 * g2 * abs2  # Delta^2 - omega0^2, exact
    mu = OMEGA_C - 2.0 * g2**2 * abs2 * (delta**2 + w0**2) / (delta**3 * gap2)
    nu = 2.0 * g2**2 * a**2 / delta**3
    c1 = float(np.sum(OMEGA_C * abs2 + 2.0 * np.real(params.hop * np.conj(a) * np.roll(a, -1))))
    c2 = c1 - float(np.sum(delta / 2.0 - 2.0 * g2**2 * abs2 * w0 / (delta**2 * gap2)))
    c3 = c2 - 0.5 * float(np.sum(mu))
    return QuadraticBosonForm(mu=mu, nu=nu, hop=params.hop, c2=c2, c3=c3)


def symplectic_eigenvalues(form: QuadraticBosonForm, zero_tol: float = ZERO_TOL):
    """Six eigenvalues of Sigma M, ascending by real part.

    For positive semidefinite M they are computed from the Hermitian matrix
    M^{1/2} Sigma M^{1/2}, which shares the spectrum of Sigma M and keeps zero
    modes accurate; otherwise from Sigma M directly.
    """
    m = form.matrix()
    w, v = np.linalg.eigh(m)
    if w[0] >= -zero_tol:
        root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
        k = root @ SIGMA @ root
        return np.linalg.eigvalsh(0.5 * (k + k.conj().T)).astype(complex), True
    ev = np.linalg.eigvals(SIGMA @ m)
    return ev[np.lexsort((ev.imag, ev.real))], False


def diagonalize(form: QuadraticBosonForm, zero_tol: float = ZERO_TOL) -> BogoliubovSpectrum:
    ev, psd = symplectic_eigenvalues(form, zero_tol)
    eps = np.sort(ev.real[3:])
    max_imag = 0.0 if psd else float(np.max(np.abs(ev.imag)))
    stable = psd
    eps = np.where(np.abs(eps) < zero_tol, 0.0, eps)
    ground = form.c3 + 0.5 * float(np.sum(eps))
    return BogoliubovSpectrum(eps=eps, stable=stable, ground_energy=ground, max_imag=max_imag)


@dataclass(frozen=True, eq=False)
class UspSpectrum:
    """Momentum-resolved spectrum on the uniform closed-form solution.

    Arrays are ordered like ``QUASIMOMENTA`` (0, +2pi/3, -2pi/3).
    """

    q: np.ndarray
    omega_q: np.ndarray
    nu0: float
    mu0: float
    delta0: float
    a0: float
    eps_q: np.ndarray
    c2: float
    ground_energy: float


def usp_spectrum(params: SystemParams, zero_tol: float = ZERO_TOL) -> UspSpectrum:
    a = usp_amplitude(params)  # raises BelowCritical
    form = build_form(a, params)
    mu0 = float(form.mu[0])
    nu0 = float(form.nu[0].real)
    q = np.array(QUASIMOMENTA)
    omega = mu0 + 2.0 * params.j * np.cos(params.theta - q)
    omega_minus = mu0 + 2.0 * params.j * np.cos(params.theta + q)
    total = omega + omega_minus
    # (w_q + w_-q)^2 - 4 nu0^2 written as a product to keep the Goldstone zero accurate
    radicand = (total - 2.0 * nu0) * (total + 2.0 * nu0)
    eps = 0.5 * (omega - omega_minus) + 0.5 * np.sqrt(np.clip(radicand, 0.0, None))
    eps = np.where(np.abs(eps) < zero_tol, 0.0, eps)
    delta0 = math.sqrt(4.0 * params.g**2 * abs(a[0]) ** 2 + params.omega0**2)
    ground = 0.5 * float(np.sum(eps - omega)) + form.c2
    return UspSpectrum(q=q, omega_q=omega, nu0=nu0, mu0=mu0, delta0=delta0,
                       a0=float(a[0].real), eps_q=eps, c2=form.c2, ground_energy=ground)


def np_branch_spectrum(params: SystemParams, zero_tol: float = ZERO_TOL) -> BogoliubovSpectrum:
    """Normal-phase dispersion packaged as a spectrum (nu = 0)."""
    eps = np.sort([np_dispersion(params, q) for q in QUASIMOMENTA])
    stable = bool(eps[0] >= -zero_tol)
    eps = np.where(np.abs(eps) < zero_tol, 0.0, eps)
    return BogoliubovSpectrum(eps=eps, stable=stable, ground_energy=np_ground_energy(params))


def spectrum_at(alpha, params: SystemParams, zero_tol: float = ZERO_TOL,
                np_tol: float = 0.0) -> BogoliubovSpectrum:
    """Spectrum of the displaced form, or the normal branch when all ``|alpha_n| <= np_tol``."""
    a = as_array(alpha)
    if np.all(np.abs(a) <= np_tol):
        return np_branch_spectrum(params, zero_tol)
    return diagonalize(build_form(a, params), zero_tol)


__all__ = [
    "BogoliubovSpectrum", "QuadraticBosonForm", "UspSpectrum", "build_form",
    "diagonalize", "np_branch_spectrum", "spectrum_at", "symplectic_eigenvalues", "usp_spectrum",
]
