"""Oracle checks run by ``jctrimer validate``: ED symmetries, the NP effective
theory, finite-difference gradients and brute-force agreement of the solver."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bogoliubov import usp_spectrum
from .ed import (
    FockConfig,
    brute_force_minimize,
    build_hamiltonian,
    commutator_norm,
    finite_diff_gradient,
    photon_branch_error,
)
from .meanfield.functional import gradient, is_above_critical, usp_amplitude
from .meanfield.solver import SolverOptions, solve
from .model import SystemParams


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value < self.tolerance)


def run_checks(params: SystemParams, opts: SolverOptions | None = None, n_max: int = 2,
               sector: int = 1, brute_samples: int = 20_000) -> list[Check]:
    opts = opts or SolverOptions()
    checks = [Check("commutator_norm", commutator_norm(params, FockConfig(n_max=n_max)), 1e-10)]

    block = build_hamiltonian(params, FockConfig(n_max=n_max, sector=sector))
    checks.append(Check(f"sector_{sector}_hermiticity", float(np.max(np.abs(block - block.conj().T),
                                                                   initial=0.0)), 1e-12))

    weak = params.replace(omega0=1e3, g1=0.5)
    checks.append(Check("photon_branch_eta1e3", photon_branch_error(weak, n_max), 1e-2))
    checks.append(Check("photon_branch_eta1e4",
                        photon_branch_error(weak.replace(omega0=1e4), n_max), 1e-3))

    rng = np.random.default_rng(opts.seed)
    scale = 2.0 * max(params.g1, 0.5) * math.sqrt(params.eta)
    worst = 0.0
    for _ in range(10):
        a = scale * (rng.standard_normal(3) + 1j * rng.standard_normal(3))
        exact = gradient(a, params)
        fd = finite_diff_gradient(a, params, 1e-5 * math.sqrt(params.eta))
        worst = max(worst, float(np.linalg.norm(fd - exact) / np.linalg.norm(exact)))
    checks.append(Check("gradient_vs_finite_difference", worst, 1e-6))

    sol = solve(params, opts)
    brute = brute_force_minimize(params, n_samples=brute_samples, n_local=20, seed=opts.seed)
    checks.append(Check("solve_vs_brute_force_energy",
                        abs(sol.classical_energy - brute.classical_energy) / params.omega0, 1e-9))

    usp_params = params.replace(theta=math.pi)
    if is_above_critical(usp_params):
        closed = abs(usp_amplitude(usp_params)[0])
        found = np.abs(solve(usp_params, opts).amplitudes.array)
        checks.append(Check("usp_closed_form_modulus", float(np.max(np.abs(found - closed))), 1e-10))
        spec = usp_spectrum(usp_params)
        checks.append(Check("usp_goldstone_identity", abs(spec.omega_q[0] - spec.nu0), 1e-10))
    return checks
