import math

import numpy as np
import pytest

from jctrimer.ed import (
    FockConfig,
    brute_force_minimize,
    build_hamiltonian,
    commutator_norm,
    ed_ground,
    finite_diff_gradient,
    number_operator,
    off_block_norm,
    photon_branch,
    photon_branch_error,
)
from jctrimer.errors import DimensionCap, ValidationError
from jctrimer.meanfield import gradient, solve
from jctrimer.model import SystemParams

from conftest import random_alpha


def test_fock_config_limits():
    assert FockConfig(n_max=2).dimension == 216
    with pytest.raises(DimensionCap):
        FockConfig(n_max=30)
    with pytest.raises(ValidationError):
        FockConfig(n_max=0)


@pytest.mark.parametrize("theta", [0.0, 0.9, math.pi])
def test_hamiltonian_conserves_excitations(base, theta):
    p = base.replace(theta=theta)
    cfg = FockConfig(n_max=2)
    assert commutator_norm(p, cfg) < 1e-10
    assert off_block_norm(p, cfg) == 0.0


def test_hamiltonian_hermitian(base):
    h = build_hamiltonian(base.replace(theta=0.7), FockConfig(n_max=2))
    assert abs(h - h.getH()).max() < 1e-12


def test_sector_block_dimension(base):
    cfg = FockConfig(n_max=2, sector=1)
    block = build_hamiltonian(base, cfg)
    # one excitation: 3 photon states + 3 atom states
    assert block.shape == (6, 6)
    assert np.all(np.rint(number_operator(FockConfig(n_max=2))) >= 0)


def test_photon_branch_matches_effective_theory():
    p = SystemParams(1000, 0.5, 0.05, 0.4)
    assert photon_branch(p).size == 3
    err3 = photon_branch_error(p)
    err4 = photon_branch_error(p.replace(omega0=1e4))
    assert err3 < 1e-2
    assert err4 < 1e-3
    assert err4 < err3 / 5


def test_ed_ground_sector_and_current(base):
    p = SystemParams(1000, 0.5, 0.05, 0.5 * math.pi)
    res = ed_ground(p, FockConfig(n_max=1))
    assert res.ground_sector == 0
    assert res.ground_expectations["n_tot"] == pytest.approx(0.0)
    assert res.commutator_norm == 0.0
    assert res.ground_energy == pytest.approx(-1.5 * 1000)


def test_finite_difference_order(base, rng):
    a = random_alpha(rng, base)
    exact = gradient(a, base)
    errs = [np.linalg.norm(finite_diff_gradient(a, base, h) - exact) for h in (2.0, 1.0, 0.5)]
    ratios = np.array(errs[:-1]) / np.array(errs[1:])
    np.testing.assert_allclose(ratios, 4.0, rtol=0.15)


def test_finite_difference_rejects_bad_step(base):
    with pytest.raises(ValidationError):
        finite_diff_gradient([1, 2, 3], base, 0.0)


def test_brute_force_agrees_with_solver(base):
    p = base.replace(theta=0.5 * math.pi)
    brute = brute_force_minimize(p, n_samples=20_000, n_local=20)
    assert brute.classical_energy == pytest.approx(solve(p).classical_energy, abs=1e-9 * p.omega0)


def test_brute_force_normal_phase(base):
    brute = brute_force_minimize(base.replace(g1=0.5), n_samples=5000, n_local=5)
    assert brute.phase.value == "NP"
