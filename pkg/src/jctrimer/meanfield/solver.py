"""Multistart search for the mean-field ground state.

Every start is relaxed by gradient descent with Barzilai-Borwein steps and a
nonmonotone Armijo safeguard, then polished by Newton iterations on the six real
coordinates. The surviving stationary points are deduplicated modulo the global
U(1) phase, their Bogoliubov spectra computed, saddles discarded, and the lowest
full ground energy wins.

The descent runs on a batch of rows that may belong to different parameter
points, so a whole sweep row is relaxed at once. Row trajectories never interact,
which keeps each cell's result independent of how cells are batched.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from ..bogoliubov import ZERO_TOL, BogoliubovSpectrum, spectrum_at
from ..errors import BelowCritical, DegenerateSite, NoConvergence
from ..model import Amplitudes, SystemParams, as_array, gauge_fix
from ..observables import raw_current
from . import functional as fn


class PhaseLabel(str, Enum):
    NP = "NP"
    USP = "USP"
    FSP = "FSP"
    CFSP = "CFSP"

    def __str__(self):
        return self.value


# preference order among energy-degenerate candidates
_SYMMETRY_RANK = {PhaseLabel.NP: 0, PhaseLabel.USP: 1, PhaseLabel.FSP: 2, PhaseLabel.CFSP: 3}


@dataclass(frozen=True)
class SolverOptions:
    """Search settings. ``tol_residual`` and ``energy_tie`` are in units of omega0."""

    n_random: int = 16
    max_iter: int = 2000
    tol_residual: float = 1e-10
    seed: int = 0
    newton_iter: int = 40
    zero_tol: float = ZERO_TOL
    tol_np: float = 1e-4
    tol_unif: float = 1e-6
    tol_cur: float = 1e-8
    energy_tie: float = 1e-9

    def __post_init__(self):
        if self.n_random < 0:
            raise ValueError("n_random must be >= 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not self.tol_residual > 0:
            raise ValueError("tol_residual must be > 0")


@dataclass(frozen=True, eq=False)
class MeanFieldSolution:
    amplitudes: Amplitudes
    classical_energy: float
    ground_energy: float
    spectrum: BogoliubovSpectrum
    residual: float
    phase: PhaseLabel
    n_restarts_used: int = 0
    seed: int = 0
    candidates: tuple = field(default=(), repr=False)

    @property
    def stable(self) -> bool:
        return self.spectrum.stable


def classify(alpha, params: SystemParams, tol_np: float = 1e-4, tol_unif: float = 1e-6,
             tol_cur: float = 1e-8) -> PhaseLabel:
    a = as_array(alpha)
    root_eta = math.sqrt(params.eta)
    if np.max(np.abs(a)) < tol_np * root_eta:
        return PhaseLabel.NP
    fixed = gauge_fix(a)
    spread = max(abs(fixed[i] - fixed[k]) for i in range(3) for k in range(i + 1, 3))
    if spread < tol_unif * root_eta:
        return PhaseLabel.USP
    if abs(raw_current(a)) < tol_cur * params.eta:
        return PhaseLabel.FSP
    return PhaseLabel.CFSP


# ---------------------------------------------------------------------------
# batched local relaxation


class _Rows(NamedTuple):
    """Per-row parameters broadcastable against (K, 3) amplitude arrays."""

    g: np.ndarray
    omega0: np.ndarray
    hop: np.ndarray


def _rows_for(params_per_row: Sequence[SystemParams]) -> _Rows:
    g = np.array([p.g for p in params_per_row])[:, None]
    w0 = np.array([p.omega0 for p in params_per_row])[:, None]
    hop = np.array([p.hop for p in params_per_row])[:, None]
    return _Rows(g, w0, hop)


def _take(rows: _Rows, mask) -> _Rows:
    return _Rows(rows.g[mask], rows.omega0[mask], rows.hop[mask])


def _descend(x, rows: _Rows, max_iter: int, switch_tol: np.ndarray, memory: int = 8):
    """Nonmonotone Barzilai-Borwein gradient descent on all rows."""
    x = x.copy()
    k = x.shape[0]
    energy = fn.classical_energy(x, rows)
    grad = fn.gradient(x, rows)
    history = np.repeat(energy[:, None], memory, axis=1)
    step = np.full(k, 0.5)
    active = np.max(np.abs(grad), axis=1) > switch_tol
    for it in range(max_iter):
        if not active.any():
            break
        idx = np.flatnonzero(active)
        sub = _take(rows, idx)
        t = step[idx][:, None]
        trial = x[idx] - t * grad[idx]
        e_trial = fn.classical_energy(trial, sub)
        decrease = 2.0 * step[idx] * np.sum(np.abs(grad[idx]) ** 2, axis=1)
        ok = e_trial <= history[idx].max(axis=1) - 1e-4 * decrease
        ok &= np.isfinite(e_trial)
        good = idx[ok]
        bad = idx[~ok]
        step[bad] *= 0.5
        if good.size:
            g_new = fn.gradient(trial[ok], _take(rows, good))
            s = trial[ok] - x[good]
            y = g_new - grad[good]
            sy = np.sum(np.real(np.conj(s) * y), axis=1)
            ss = np.sum(np.abs(s) ** 2, axis=1)
            bb = np.where(sy > 0, ss / np.where(sy > 0, sy, 1.0), 2.0 * step[good])
            step[good] = np.clip(bb, 1e-6, 1e3)
            x[good] = trial[ok]
            grad[good] = g_new
            energy[good] = e_trial[ok]
            history[good] = np.roll(history[good], 1, axis=1)
            history[good, 0] = e_trial[ok]
            active[good] = np.max(np.abs(g_new), axis=1) > switch_tol[good]
        active[bad] &= step[bad] > 1e-12
    return x


def _newton(x, rows: _Rows, n_iter: int, done_tol: np.ndarray, max_step: np.ndarray):
    """Damped Newton polish on the real coordinates; converges to minima and saddles alike."""
    x = x.copy()
    grad = fn.gradient(x, rows)
    res = np.max(np.abs(grad), axis=1)
    damping = np.ones(x.shape[0])
    for it in range(n_iter):
        active = (res > done_tol) & (damping > 1e-6)
        if not active.any():
            break
        idx = np.flatnonzero(active)
        sub = _take(rows, idx)
        hess = fn.real_hessian(x[idx], sub)
        gvec = 2.0 * np.concatenate([grad[idx].real, grad[idx].imag], axis=1)
        delta = -np.einsum("kij,kj->ki", np.linalg.pinv(hess, rcond=1e-10, hermitian=True), gvec)
        norm = np.linalg.norm(delta, axis=1)
        scale = np.minimum(1.0, max_step[idx] / np.maximum(norm, 1e-300)) * damping[idx]
        delta *= scale[:, None]
        trial = x[idx] + delta[:, :3] + 1j * delta[:, 3:]
        g_trial = fn.gradient(trial, sub)
        r_trial = np.max(np.abs(g_trial), axis=1)
        ok = np.isfinite(r_trial) & (r_trial < res[idx])
        good, bad = idx[ok], idx[~ok]
        x[good] = trial[ok]
        grad[good] = g_trial[ok]
        res[good] = r_trial[ok]
        damping[good] = np.minimum(1.0, 2.0 * damping[good])
        damping[bad] *= 0.5
    return x, res


def relax(starts, params_per_row: Sequence[SystemParams], opts: SolverOptions):
    """Relax a batch of starts; returns (final amplitudes, residuals)."""
    x = np.asarray(starts, dtype=complex).reshape(-1, 3)
    rows = _rows_for(params_per_row)
    w0 = rows.omega0[:, 0]
    root_eta = np.sqrt(w0)
    x = _descend(x, rows, opts.max_iter, switch_tol=1e-6 * root_eta)
    x, res = _newton(x, rows, opts.newton_iter, done_tol=1e-3 * opts.tol_residual * w0,
                     max_step=0.5 * root_eta)
    return x, res


# ---------------------------------------------------------------------------
# seeds and reduction


def seed_starts(params: SystemParams, opts: SolverOptions, initial=None) -> np.ndarray:
    """Start set: warm starts, zero, uniform closed form, plane waves, up-up-down, random."""
    seeds = []
    if initial is not None:
        for a in initial:
            seeds.append(as_array(a))
    seeds.append(np.zeros(3, dtype=complex))
    for sign in (1, -1):
        try:
            seeds.append(fn.usp_amplitude(params, sign).array)
        except BelowCritical:
            pass
    waves = fn.plane_wave_seeds(params)
    seeds.extend(w.array for w in waves)
    if waves:
        amp = max(abs(w[0]) for w in waves)
        base = np.array([amp, amp, -amp], dtype=complex)
        for shift in range(3):
            for sign in (1, -1):
                seeds.append(sign * np.roll(base, shift))
    if opts.n_random:
        rng = np.random.default_rng(opts.seed)
        radius = 2.0 * params.g1 * math.sqrt(params.eta)
        r = radius * np.sqrt(rng.random((opts.n_random, 3)))
        phi = 2.0 * np.pi * rng.random((opts.n_random, 3))
        seeds.extend(r * np.exp(1j * phi))
    return np.array(seeds, dtype=complex)


@dataclass(frozen=True, eq=False)
class Candidate:
    amplitudes: np.ndarray
    classical_energy: float
    spectrum: BogoliubovSpectrum
    residual: float
    phase: PhaseLabel

    @property
    def ground_energy(self) -> float:
        return self.spectrum.ground_energy

    def order_key(self):
        return (_SYMMETRY_RANK[self.phase],) + tuple(
            v for z in self.amplitudes for v in (z.real, z.imag))


def _evaluate(a, res, params: SystemParams, opts: SolverOptions):
    np_tol = opts.tol_np * math.sqrt(params.eta)
    if np.max(np.abs(a)) < np_tol:
        a = np.zeros(3, dtype=complex)
        res = float(fn.residual(a, params))
    try:
        spec = spectrum_at(a, params, opts.zero_tol, np_tol=0.0)
    except DegenerateSite:
        return None
    phase = classify(a, params, opts.tol_np, opts.tol_unif, opts.tol_cur)
    return Candidate(gauge_fix(a), float(fn.classical_energy(a, params)), spec, float(res), phase)


def reduce_candidates(points, residuals, params: SystemParams, opts: SolverOptions):
    """Deduplicate converged points, attach spectra and pick the stable ground state."""
    tol = opts.tol_residual * params.omega0
    same = 1e-6 * math.sqrt(params.eta)
    uniques = []
    for a, res in zip(points, residuals):
        if not (res < tol and np.all(np.isfinite(a))):
            continue
        fixed = gauge_fix(a)
        if np.max(np.abs(a)) < opts.tol_np * math.sqrt(params.eta):
            fixed = np.zeros(3, dtype=complex)
        if any(np.max(np.abs(fixed - u[0])) < same for u in uniques):
            continue
        uniques.append((fixed, res))
    candidates = [c for c in (_evaluate(a, r, params, opts) for a, r in uniques) if c is not None]
    stable = [c for c in candidates if c.spectrum.stable]
    if not stable:
        if candidates:
            raise NoConvergence(
                f"{len(candidates)} stationary points found, all Bogoliubov-unstable (saddles)")
        raise NoConvergence("no start converged below the residual tolerance")
    e_min = min(c.ground_energy for c in stable)
    tied = [c for c in stable if c.ground_energy <= e_min + opts.energy_tie * params.omega0]
    best = min(tied, key=Candidate.order_key)
    return best, tuple(candidates)


def _to_solution(best: Candidate, candidates, n_starts, params, opts) -> MeanFieldSolution:
    return MeanFieldSolution(
        amplitudes=Amplitudes(best.amplitudes),
        classical_energy=best.classical_energy,
        ground_energy=best.ground_energy,
        spectrum=best.spectrum,
        residual=best.residual,
        phase=best.phase,
        n_restarts_used=n_starts,
        seed=opts.seed,
        candidates=candidates,
    )


def solve_many(params_list: Sequence[SystemParams], opts: SolverOptions | None = None,
               initial=None):
    """Solve several parameter points in one batched relaxation.

    Returns a list holding a :class:`MeanFieldSolution` or the
    :class:`NoConvergence` instance for each point.
    """
    opts = opts or SolverOptions()
    seed_sets = []
    for i, p in enumerate(params_list):
        warm = None if initial is None else initial[i]
        seed_sets.append(seed_starts(p, opts, warm))
    if not seed_sets:
        return []
    starts = np.concatenate(seed_sets)
    owners = np.repeat(np.arange(len(params_list)), [len(s) for s in seed_sets])
    x, res = relax(starts, [params_list[i] for i in owners], opts)
    out = []
    for i, p in enumerate(params_list):
        mask = owners == i
        try:
            best, cands = reduce_candidates(x[mask], res[mask], p, opts)
            out.append(_to_solution(best, cands, int(mask.sum()), p, opts))
        except NoConvergence as exc:
            out.append(exc)
    return out


def solve(params: SystemParams, opts: SolverOptions | None = None, initial=None) -> MeanFieldSolution:
    """Mean-field ground state at ``params``; raises :class:`NoConvergence` on failure."""
    result = solve_many([params], opts, None if initial is None else [initial])[0]
    if isinstance(result, Exception):
        raise result
    return result


# ---------------------------------------------------------------------------
# symmetry orbit


def _conjugation_is_symmetry(params: SystemParams) -> bool:
    return abs(math.sin(params.theta)) < 1e-12


def degenerate_orbit(sol: MeanFieldSolution, params: SystemParams, tol: float = 1e-6,
                     include_conjugate: bool | None = None):
    """Distinct images of ``sol`` under cyclic translations and global sign flip.

    Images are deduplicated modulo the global U(1) phase (so the sign flip never
    adds a member on its own). Complex conjugation maps theta to -theta and is
    only included when that is the same angle (theta = 0 or pi), unless
    ``include_conjugate`` says otherwise.
    """
    if include_conjugate is None:
        include_conjugate = _conjugation_is_symmetry(params)
    base = sol.amplitudes.array
    images = []
    conj_options = (False, True) if include_conjugate else (False,)
    for conj in conj_options:
        a = np.conj(base) if conj else base
        for shift in range(3):
            for sign in (1, -1):
                images.append(sign * np.roll(a, shift))
    same = tol * math.sqrt(params.eta)
    members = []
    for img in images:
        fixed = gauge_fix(img)
        if any(np.max(np.abs(fixed - m)) < same for m in members):
            continue
        members.append(fixed)
    out = []
    for m in members:
        out.append(replace(
            sol,
            amplitudes=Amplitudes(m),
            classical_energy=float(fn.classical_energy(m, params)),
            residual=float(fn.residual(m, params)),
            phase=classify(m, params),
            candidates=(),
        ))
    return out
