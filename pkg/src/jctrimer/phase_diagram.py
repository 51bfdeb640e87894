"""Parameter sweeps over (g1, theta), boundary location and figure tables."""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import NoCrossing, SweepError, ValidationError
from .meanfield.solver import MeanFieldSolution, PhaseLabel, SolverOptions, solve, solve_many
from .model import SystemParams, wrap_angle
from .observables import chirality, current

FAIL_LABEL = "FAIL"
MAX_FAIL_FRACTION = 0.01


def default_theta_axis(n: int = 200) -> np.ndarray:
    """n equally spaced angles in (-pi, pi], containing 0 and pi when n is even."""
    k = np.arange(1, n + 1)
    return np.pi * (-1.0 + 2.0 * k / n)


def worker_count(requested: int | None = None) -> int:
    if requested is None:
        requested = int(os.environ.get("JCTRIMER_THREADS", "1") or 1)
    if requested <= 0:
        requested = os.cpu_count() or 1
    return requested


@dataclass(frozen=True, eq=False)
class SweepGrid:
    """Per-cell results on a theta-major grid, arrays shaped (n_theta, n_g1[, 3])."""

    g1_axis: np.ndarray
    theta_axis: np.ndarray
    phase: np.ndarray
    ground_energy: np.ndarray
    classical_energy: np.ndarray
    eps: np.ndarray
    current: np.ndarray
    chirality: np.ndarray
    alpha: np.ndarray
    residual: np.ndarray
    failed: np.ndarray
    eta: float = 1.0

    @property
    def eps_min(self) -> np.ndarray:
        return self.eps[..., 0]

    def eps_min_nonzero(self, zero_tol: float = 1e-7) -> np.ndarray:
        masked = np.where(np.abs(self.eps) > zero_tol, self.eps, np.inf)
        out = masked.min(axis=-1)
        return np.where(np.isinf(out), 0.0, out)

    @property
    def order_params(self) -> np.ndarray:
        return self.alpha / math.sqrt(self.eta)

    def phases_present(self) -> set:
        return {p for p in np.unique(self.phase) if p != FAIL_LABEL}

    def np_boundary(self) -> np.ndarray:
        """Smallest g1 per theta whose cell is not NP (nan if the column is all NP)."""
        out = np.full(self.theta_axis.size, np.nan)
        for i in range(self.theta_axis.size):
            sp = np.flatnonzero(self.phase[i] != PhaseLabel.NP.value)
            if sp.size:
                out[i] = self.g1_axis[sp[0]]
        return out

    @property
    def failure_fraction(self) -> float:
        return float(np.mean(self.failed))


def _check_axis(name, axis):
    axis = np.asarray(axis, dtype=float).reshape(-1)
    if axis.size == 0:
        raise ValidationError(name, "axis must be nonempty")
    if axis.size > 1 and np.any(np.diff(axis) <= 0):
        raise ValidationError(name, "axis must be strictly ascending")
    return axis


def _solve_row(args):
    base, g1_axis, theta, opts, warm = args
    params = [base.replace(g1=g, theta=theta) for g in g1_axis]
    if not warm:
        return solve_many(params, opts)
    out, prev = [], None
    for p in params:
        try:
            sol = solve(p, opts, initial=None if prev is None else [prev.amplitudes])
            prev = sol
        except Exception as exc:  # NoConvergence is recorded per cell
            sol = exc
        out.append(sol)
    return out


def sweep(base: SystemParams, g1_axis, theta_axis, opts: SolverOptions | None = None,
          workers: int | None = None, warm_start: bool = False) -> SweepGrid:
    """Classify every (theta, g1) cell. Cells are independent unless ``warm_start``."""
    opts = opts or SolverOptions()
    g1_axis = _check_axis("g1_axis", g1_axis)
    theta_axis = _check_axis("theta_axis", [wrap_angle(t) for t in np.atleast_1d(theta_axis)])
    jobs = [(base, g1_axis, float(t), opts, warm_start) for t in theta_axis]
    workers = worker_count(workers)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_solve_row, jobs))
    else:
        rows = [_solve_row(job) for job in jobs]

    nt, ng = theta_axis.size, g1_axis.size
    phase = np.full((nt, ng), FAIL_LABEL, dtype=object)
    e_g = np.full((nt, ng), np.nan)
    e_cl = np.full((nt, ng), np.nan)
    eps = np.full((nt, ng, 3), np.nan)
    cur = np.full((nt, ng), np.nan)
    chi = np.full((nt, ng), np.nan)
    alpha = np.full((nt, ng, 3), np.nan, dtype=complex)
    res = np.full((nt, ng), np.nan)
    failed = np.zeros((nt, ng), dtype=bool)
    for i, row in enumerate(rows):
        for k, sol in enumerate(row):
            if not isinstance(sol, MeanFieldSolution):
                failed[i, k] = True
                continue
            p = base.replace(g1=g1_axis[k], theta=theta_axis[i])
            phase[i, k] = sol.phase.value
            e_g[i, k] = sol.ground_energy
            e_cl[i, k] = sol.classical_energy
            eps[i, k] = sol.spectrum.eps
            cur[i, k] = current(sol.amplitudes, p)
            chi[i, k] = chirality(sol.amplitudes, p)
            alpha[i, k] = sol.amplitudes.array
            res[i, k] = sol.residual
    grid = SweepGrid(g1_axis, theta_axis, phase, e_g, e_cl, eps, cur, chi, alpha, res, failed,
                     eta=base.eta)
    if grid.failure_fraction > MAX_FAIL_FRACTION:
        raise SweepError(f"{failed.sum()} of {failed.size} cells failed to converge")
    return grid


def boundary_scan(base: SystemParams, *, window, g1: float | None = None,
                  theta: float | None = None, tol: float = 1e-4,
                  opts: SolverOptions | None = None) -> float:
    """Bisect on the phase label along theta (``g1`` fixed) or along g1 (``theta`` fixed)."""
    if (g1 is None) == (theta is None):
        raise ValidationError("boundary_scan", "fix exactly one of g1 or theta")
    lo, hi = map(float, window)
    if not lo < hi:
        raise ValidationError("window", "must satisfy lo < hi")
    opts = opts or SolverOptions()

    def label(x):
        p = base.replace(theta=x, g1=g1) if g1 is not None else base.replace(g1=x, theta=theta)
        return solve(p, opts).phase

    left, right = label(lo), label(hi)
    if left == right:
        raise NoCrossing(f"{left.value} on both ends of [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if label(mid) == left:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


FIGURE_THETAS = (0.0, 0.5 * math.pi, math.pi)


def figure_data(kind: str, base: SystemParams, g1_axis=None, theta_axis=None,
                opts: SolverOptions | None = None, workers: int | None = None) -> dict:
    """Columns behind the quasiparticle (fig2), order-parameter (fig3) and current (fig4) plots."""
    kind = str(kind).lower().removeprefix("fig")
    if kind in ("2", "3"):
        g1_axis = np.linspace(0.8, 1.3, 400) if g1_axis is None else g1_axis
        theta_axis = FIGURE_THETAS if theta_axis is None else theta_axis
    elif kind == "4":
        g1_axis = [base.g1] if g1_axis is None else g1_axis
        theta_axis = default_theta_axis(400) if theta_axis is None else theta_axis
    else:
        raise ValidationError("kind", f"unknown figure {kind!r}; expected 2, 3 or 4")
    grid = sweep(base, g1_axis, theta_axis, opts, workers)
    th, gg = np.meshgrid(grid.theta_axis, grid.g1_axis, indexing="ij")
    table = {"theta": th.ravel(), "g1": gg.ravel(), "phase": grid.phase.ravel()}
    if kind == "2":
        table["eps_min"] = grid.eps_min.ravel()
        table["eps_min_nonzero"] = grid.eps_min_nonzero().ravel()
        for m in range(3):
            table[f"eps_{m + 1}"] = grid.eps[..., m].ravel()
    elif kind == "3":
        # each cell contributes its solution (branch +1) and the degenerate partner -alpha
        table = {k: np.concatenate([v, v]) for k, v in table.items()}
        n_cells = grid.phase.size
        table["branch"] = np.repeat([1, -1], n_cells)
        op = grid.order_params.reshape(n_cells, 3)
        op = np.concatenate([op, -op])
        for n in range(3):
            table[f"alpha{n + 1}_scaled_re"] = op[:, n].real
            table[f"alpha{n + 1}_scaled_im"] = op[:, n].imag
    else:
        table["current_scaled"] = grid.current.ravel()
        table["chirality_scaled"] = grid.chirality.ravel()
    return table
