"""Physical parameters and cavity amplitudes of the Jaynes-Cummings trimer.

All frequencies are measured in units of the cavity frequency, so
``omega_c == 1`` throughout the package.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

OMEGA_C = 1.0
N_SITES = 3


def wrap_angle(theta: float) -> float:
    """Map ``theta`` into (-pi, pi]. Values already in range are returned untouched."""
    if -math.pi < theta <= math.pi:
        return float(theta)
    w = math.fmod(theta + math.pi, 2.0 * math.pi)
    if w <= 0.0:
        w += 2.0 * math.pi
    return w - math.pi


@dataclass(frozen=True)
class SystemParams:
    """Trimer parameters in units of omega_c.

    Attributes
    ----------
    omega0 : float
        Atomic transition frequency.
    g1 : float
        Dimensionless coupling g / sqrt(omega0 * omega_c).
    j : float
        Hopping rate.
    theta : float
        Hopping phase in radians, stored wrapped into (-pi, pi].
    """

    omega0: float
    g1: float
    j: float
    theta: float

    def __post_init__(self):
        for name in ("omega0", "g1", "j", "theta"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise ValidationError(name, f"not a real number: {value!r}") from None
            if not math.isfinite(value):
                raise ValidationError(name, f"must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.omega0 <= 0:
            raise ValidationError("omega0", f"must be > 0, got {self.omega0}")
        if self.g1 < 0:
            raise ValidationError("g1", f"must be >= 0, got {self.g1}")
        if self.j < 0:
            raise ValidationError("j", f"must be >= 0, got {self.j}")
        object.__setattr__(self, "theta", wrap_angle(self.theta))

    @property
    def g(self) -> float:
        """Bare light-matter coupling g = g1 * sqrt(omega0 * omega_c)."""
        return self.g1 * math.sqrt(self.omega0 * OMEGA_C)

    @property
    def eta(self) -> float:
        """Frequency ratio omega0 / omega_c."""
        return self.omega0 / OMEGA_C

    @property
    def hop(self) -> complex:
        """Complex hopping amplitude J exp(i theta)."""
        return self.j * complex(math.cos(self.theta), math.sin(self.theta))

    def replace(self, **changes) -> SystemParams:
        fields = dict(omega0=self.omega0, g1=self.g1, j=self.j, theta=self.theta)
        fields.update(changes)
        return SystemParams(**fields)


def make_params(omega0, g1, j, theta) -> SystemParams:
    return SystemParams(omega0=omega0, g1=g1, j=j, theta=theta)


@dataclass(frozen=True)
class Amplitudes:
    """Cavity displacements alpha_n = A_n + i B_n for the three sites.

    Site indices are cyclic: the right neighbour of site 3 is site 1.
    """

    alpha: tuple

    def __post_init__(self):
        arr = np.asarray(self.alpha, dtype=complex).reshape(-1)
        if arr.shape != (N_SITES,):
            raise ValidationError("alpha", f"expected {N_SITES} values, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("alpha", "amplitudes must be finite")
        object.__setattr__(self, "alpha", tuple(complex(a) for a in arr))

    @classmethod
    def zeros(cls) -> Amplitudes:
        return cls((0j, 0j, 0j))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.alpha, dtype=complex)

    @property
    def real(self) -> np.ndarray:
        return self.array.real

    @property
    def imag(self) -> np.ndarray:
        return self.array.imag

    def __getitem__(self, n):
        return self.alpha[n % N_SITES]

    def __len__(self):
        return N_SITES

    def __iter__(self):
        return iter(self.alpha)


def as_array(alpha) -> np.ndarray:
    """Complex ndarray view of an :class:`Amplitudes` or any array-like of amplitudes."""
    if isinstance(alpha, Amplitudes):
        return alpha.array
    return np.asarray(alpha, dtype=complex)


@dataclass(frozen=True)
class SiteAux:
    """Per-site normalization factor Delta_n (units of omega_c)."""

    delta: float


def delta_values(alpha, params: SystemParams) -> np.ndarray:
    """Vectorized Delta_n = sqrt(4 g^2 |alpha_n|^2 + omega0^2)."""
    a = as_array(alpha)
    return np.sqrt(4.0 * params.g**2 * np.abs(a) ** 2 + params.omega0**2)


def delta_of(alpha_n, params: SystemParams) -> SiteAux:
    alpha_n = complex(alpha_n)
    if not (math.isfinite(alpha_n.real) and math.isfinite(alpha_n.imag)):
        raise ValidationError("alpha_n", "must be finite")
    return SiteAux(float(delta_values(alpha_n, params)))


def gauge_fix(alpha, tol: float = 0.0) -> np.ndarray:
    """Rotate the global phase so that alpha_3 is real and nonnegative.

    If ``|alpha_3| <= tol`` the largest-modulus site is used as the reference.
    """
    a = as_array(alpha).copy()
    idx = a.shape[-1] - 1 if abs(a[-1]) > tol else int(np.argmax(np.abs(a)))
    ref = a[idx]
    if ref == 0:
        return a
    a *= ref.conjugate() / abs(ref)
    a[idx] = abs(ref)
    return a
