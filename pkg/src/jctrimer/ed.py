"""Independent checks: truncated-Fock exact diagonalization, brute-force search
of the semiclassical energy, and finite-difference gradients.

Exact diagonalization cannot reach the superradiant regime (photon numbers of
order omega0), so it is used for symmetries at any coupling and for the normal
phase effective theory at weak coupling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
import scipy.sparse as sp
from scipy.optimize import minimize

from .bogoliubov import np_branch_spectrum, spectrum_at
from .errors import DegenerateSite, DimensionCap, ValidationError
from .meanfield.functional import classical_energy, gradient, residual
from .meanfield.solver import MeanFieldSolution, classify
from .model import Amplitudes, SystemParams, as_array, gauge_fix
from .normal import QUASIMOMENTA, np_dispersion


@dataclass(frozen=True)
class FockConfig:
    """Photon cutoff per cavity and optional total-excitation sector."""

    n_max: int = 2
    sector: int | None = None
    cap: int = 20000

    def __post_init__(self):
        if self.n_max < 1:
            raise ValidationError("n_max", f"must be >= 1, got {self.n_max}")
        if self.sector is not None and self.sector < 0:
            raise ValidationError("sector", f"must be >= 0, got {self.sector}")
        if self.dimension > self.cap:
            raise DimensionCap(f"dimension {self.dimension} exceeds cap {self.cap}")

    @property
    def site_dim(self) -> int:
        return 2 * (self.n_max + 1)

    @property
    def dimension(self) -> int:
        return self.site_dim**3


@dataclass(frozen=True, eq=False)
class EdResult:
    eigenvalues: np.ndarray
    ground_energy: float
    ground_sector: int
    ground_expectations: dict = field(default_factory=dict)
    commutator_norm: float = 0.0


def _site_operators(n_max):
    """Single-site (photon x atom) operators; atom basis is (excited, ground)."""
    d = n_max + 1
    a = sp.diags(np.sqrt(np.arange(1, d, dtype=float)), 1, shape=(d, d), format="csr")
    num = sp.diags(np.arange(d, dtype=float), 0, format="csr")
    eye_p = sp.identity(d, format="csr")
    eye_a = sp.identity(2, format="csr")
    sz = sp.csr_matrix(np.diag([1.0, -1.0]))
    sp_plus = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
    sm = sp_plus.T.tocsr()
    return {
        "a": sp.kron(a, eye_a, format="csr"),
        "n": sp.kron(num, eye_a, format="csr"),
        "sz": sp.kron(eye_p, sz, format="csr"),
        "sp": sp.kron(eye_p, sp_plus, format="csr"),
        "sm": sp.kron(eye_p, sm, format="csr"),
        "pe": sp.kron(eye_p, sp_plus @ sm, format="csr"),
    }


def _embed(op, site, site_dim):
    eye = sp.identity(site_dim, format="csr")
    factors = [eye, eye, eye]
    factors[site] = op
    return reduce(lambda x, y: sp.kron(x, y, format="csr"), factors)


def _full_operators(cfg: FockConfig):
    local = _site_operators(cfg.n_max)
    d = cfg.site_dim
    ops = {}
    for name, op in local.items():
        ops[name] = [_embed(op, s, d) for s in range(3)]
    return ops


def number_operator(cfg: FockConfig):
    """Diagonal of N_tot = sum_n (a_n^dag a_n + sigma_n^+ sigma_n^-) on the product basis."""
    ops = _full_operators(cfg)
    total = sum(ops["n"][s] + ops["pe"][s] for s in range(3))
    return np.real(total.diagonal())


def full_hamiltonian(params: SystemParams, cfg: FockConfig):
    """Sparse H on the full truncated product space."""
    ops = _full_operators(cfg)
    g = params.g
    h = sp.csr_matrix((cfg.dimension, cfg.dimension), dtype=complex)
    for s in range(3):
        a, ad = ops["a"][s], ops["a"][s].getH()
        h = h + 0.5 * params.omega0 * ops["sz"][s] + ops["n"][s]
        h = h + g * (ad @ ops["sm"][s] + ops["sp"][s] @ a)
        nxt = ops["a"][(s + 1) % 3]
        hop = params.hop * (ad @ nxt)
        h = h + hop + hop.getH()
    return h.tocsr()


def sector_indices(cfg: FockConfig, sector: int) -> np.ndarray:
    return np.flatnonzero(np.rint(number_operator(cfg)) == sector)


def build_hamiltonian(params: SystemParams, cfg: FockConfig):
    """Hamiltonian on the truncated space, or its dense N_tot block when ``cfg.sector`` is set."""
    h = full_hamiltonian(params, cfg)
    if cfg.sector is None:
        return h
    idx = sector_indices(cfg, cfg.sector)
    return h[idx][:, idx].toarray()


def commutator_norm(params: SystemParams, cfg: FockConfig) -> float:
    h = full_hamiltonian(params, cfg)
    n = sp.diags(number_operator(cfg))
    comm = h @ n - n @ h
    return float(np.max(np.abs(comm.data))) if comm.nnz else 0.0


def off_block_norm(params: SystemParams, cfg: FockConfig) -> float:
    """Largest element of H connecting different N_tot sectors."""
    h = full_hamiltonian(params, cfg).tocoo()
    n = np.rint(number_operator(cfg))
    mask = n[h.row] != n[h.col]
    return float(np.max(np.abs(h.data[mask]))) if mask.any() else 0.0


def current_operator(cfg: FockConfig):
    ops = _full_operators(cfg)
    a = ops["a"]
    forward = sum(a[s].getH() @ a[(s + 1) % 3] for s in range(3))
    return 1j * (forward - forward.getH())


def ed_ground(params: SystemParams, cfg: FockConfig) -> EdResult:
    """Ground state by sector-wise dense diagonalization (an N_tot eigenstate)."""
    h = full_hamiltonian(params, cfg)
    n_diag = np.rint(number_operator(cfg)).astype(int)
    sectors = [cfg.sector] if cfg.sector is not None else sorted(set(n_diag))
    all_eigs = []
    best = None
    for s in sectors:
        idx = np.flatnonzero(n_diag == s)
        if idx.size == 0:
            continue
        block = h[idx][:, idx].toarray()
        w, v = np.linalg.eigh(block)
        all_eigs.append(w)
        if best is None or w[0] < best[0] - 1e-12:
            best = (w[0], s, idx, v[:, 0])
    e0, sector, idx, vec = best
    psi = np.zeros(cfg.dimension, dtype=complex)
    psi[idx] = vec
    ops = _full_operators(cfg)
    expect = {
        "a": np.array([np.vdot(psi, ops["a"][s] @ psi) for s in range(3)]),
        "n_tot": float(np.real(np.vdot(psi, n_diag * psi))),
        "current": float(np.real(np.vdot(psi, current_operator(cfg) @ psi))),
    }
    return EdResult(
        eigenvalues=np.sort(np.concatenate(all_eigs)),
        ground_energy=float(e0),
        ground_sector=int(sector),
        ground_expectations=expect,
        commutator_norm=commutator_norm(params, cfg),
    )


def photon_branch(params: SystemParams, n_max: int = 1, overlap: float = 0.9) -> np.ndarray:
    """Single-excitation energies of photon-like eigenstates, measured from the vacuum.

    States are called photon-like when their weight on the one-photon,
    all-atoms-down basis states exceeds ``overlap``.
    """
    cfg = FockConfig(n_max=n_max)
    h = full_hamiltonian(params, cfg)
    ops = _full_operators(cfg)
    n_diag = np.rint(number_operator(cfg)).astype(int)
    vac = np.flatnonzero(n_diag == 0)
    e_vac = float(np.real(h[vac][:, vac].toarray()[0, 0]))
    idx = np.flatnonzero(n_diag == 1)
    photons = np.real(sum(ops["n"][s] for s in range(3)).diagonal())[idx]
    w, v = np.linalg.eigh(h[idx][:, idx].toarray())
    weight = np.sum(np.abs(v[photons > 0.5]) ** 2, axis=0)
    return np.sort(w[weight > overlap] - e_vac)


def photon_branch_error(params: SystemParams, n_max: int = 1) -> float:
    """Largest relative mismatch between ED photon-like energies and the normal-phase eps_q."""
    ed = photon_branch(params, n_max)
    eff = np.sort([np_dispersion(params, q) for q in QUASIMOMENTA])
    if ed.size != eff.size:
        raise RuntimeError(f"found {ed.size} photon-like states, expected {eff.size}")
    return float(np.max(np.abs(ed - eff) / np.abs(eff)))


# ---------------------------------------------------------------------------
# brute-force mean field and finite differences


def _sample_ball(rng, n, dim, radius):
    d = rng.standard_normal((n, dim))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    return d * radius * rng.random((n, 1)) ** (1.0 / dim)


def brute_force_minimize(params: SystemParams, n_samples: int = 100_000, n_local: int = 100,
                         seed: int = 0) -> MeanFieldSolution:
    """Dense random search of the semiclassical energy followed by L-BFGS-B descents.

    Samples fill the 6-dimensional ball of radius 2 g1 sqrt(eta); the best
    ``n_local`` samples seed local minimizations and the lowest end point wins.
    """
    rng = np.random.default_rng(seed)
    radius = 2.0 * params.g1 * math.sqrt(params.eta)
    x = _sample_ball(rng, n_samples, 6, radius)
    energies = classical_energy(x[:, :3] + 1j * x[:, 3:], params)
    order = np.argsort(energies, kind="stable")[:n_local]

    def fun(v):
        a = v[:3] + 1j * v[3:]
        d = gradient(a, params)
        return float(classical_energy(a, params)), 2.0 * np.concatenate([d.real, d.imag])

    best = None
    for i in order:
        r = minimize(fun, x[i], jac=True, method="L-BFGS-B",
                     options={"maxiter": 20000, "gtol": 1e-12, "ftol": 1e-16})
        if best is None or r.fun < best.fun:
            best = r
    a = best.x[:3] + 1j * best.x[3:]
    root_eta = math.sqrt(params.eta)
    if np.max(np.abs(a)) < 1e-4 * root_eta:
        a = np.zeros(3, dtype=complex)
    try:
        spec = spectrum_at(a, params, np_tol=0.0)
    except DegenerateSite:
        spec = np_branch_spectrum(params)
    fixed = gauge_fix(a)
    return MeanFieldSolution(
        amplitudes=Amplitudes(fixed),
        classical_energy=float(classical_energy(a, params)),
        ground_energy=spec.ground_energy,
        spectrum=spec,
        residual=float(residual(a, params)),
        phase=classify(a, params),
        n_restarts_used=n_local,
        seed=seed,
    )


def finite_diff_gradient(alpha, params: SystemParams, step: float) -> np.ndarray:
    """Central-difference Wirtinger derivative 1/2 (dE/dA_n + i dE/dB_n)."""
    if not step > 0:
        raise ValidationError("step", "must be > 0")
    a = as_array(alpha)
    out = np.zeros(3, dtype=complex)
    for n in range(3):
        e = np.zeros(3, dtype=complex)
        e[n] = step
        d_re = (classical_energy(a + e, params) - classical_energy(a - e, params)) / (2 * step)
        d_im = (classical_energy(a + 1j * e, params) - classical_energy(a - 1j * e, params)) / (2 * step)
        out[n] = 0.5 * (d_re + 1j * d_im)
    return out
