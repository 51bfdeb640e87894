import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jctrimer.errors import BelowCritical, NoConvergence
from jctrimer.ed import finite_diff_gradient
from jctrimer.meanfield import (
    PhaseLabel,
    SolverOptions,
    classical_energy,
    classify,
    degenerate_orbit,
    gradient,
    plane_wave_amplitude,
    real_hessian,
    solve,
    solve_many,
    usp_amplitude,
)
from jctrimer.model import SystemParams
from jctrimer.normal import q_theta

from conftest import random_alpha


def test_gradient_matches_finite_differences(base, rng):
    for theta in (0.0, 0.7, -2.5):
        p = base.replace(theta=theta)
        a = random_alpha(rng, p)
        fd = finite_diff_gradient(a, p, 1e-5 * math.sqrt(p.eta))
        exact = gradient(a, p)
        assert np.linalg.norm(fd - exact) / np.linalg.norm(exact) < 1e-8


def test_batched_energy_matches_single(base, rng):
    a = random_alpha(rng, base, n=5)
    batched = classical_energy(a, base)
    single = [classical_energy(row, base) for row in a]
    np.testing.assert_allclose(batched, single, rtol=1e-14)


def test_real_hessian_matches_gradient_differences(base, rng):
    p = base.replace(theta=1.1)
    a = random_alpha(rng, p)
    h = real_hessian(a, p)
    step = 1e-4
    cols = []
    for k in range(6):
        e = np.zeros(3, dtype=complex)
        e[k % 3] = step if k < 3 else 1j * step
        gp, gm = gradient(a + e, p), gradient(a - e, p)
        diff = 2 * (gp - gm) / (2 * step)
        cols.append(np.concatenate([diff.real, diff.imag]))
    np.testing.assert_allclose(h, np.array(cols).T, rtol=1e-6, atol=1e-8)
    np.testing.assert_allclose(h, h.T, atol=1e-12)


def test_usp_closed_form_is_stationary(base):
    p = base.replace(theta=math.pi)
    a = usp_amplitude(p)
    assert abs(a[0]) == pytest.approx(math.sqrt(1600**2 - 1000**2) / (2 * p.g), rel=1e-14)
    assert np.max(np.abs(gradient(a.array, p))) < 1e-10 * p.omega0
    assert classical_energy(a.array, p) == pytest.approx(-1668.75, abs=1e-2)


def test_usp_below_critical_raises(base):
    with pytest.raises(BelowCritical):
        usp_amplitude(base.replace(g1=0.9, theta=math.pi))


def test_plane_wave_is_stationary(base):
    for theta in (0.0, 0.5 * math.pi, 2.5):
        p = base.replace(theta=theta)
        a = plane_wave_amplitude(p, q_theta(theta)).array
        assert np.max(np.abs(gradient(a, p))) < 1e-9 * p.omega0


@pytest.mark.parametrize("theta, g1, phase", [
    (math.pi, 1.2, PhaseLabel.USP),
    (0.0, 0.5, PhaseLabel.NP),
    (0.5 * math.pi, 1.2, PhaseLabel.CFSP),
    (-0.5 * math.pi, 1.2, PhaseLabel.CFSP),
    (0.0, 1.2, PhaseLabel.CFSP),
])
def test_solve_examples(base, theta, g1, phase):
    sol = solve(base.replace(theta=theta, g1=g1))
    assert sol.phase is phase
    assert sol.stable
    assert sol.residual < 1e-10 * base.omega0


def test_solve_cfsp_values(base):
    sol = solve(base.replace(theta=0.5 * math.pi))
    assert sol.ground_energy == pytest.approx(-1657.500556, abs=1e-5)


def test_solve_usp_matches_closed_form(base):
    p = base.replace(theta=math.pi)
    sol = solve(p)
    np.testing.assert_allclose(np.abs(sol.amplitudes.array), abs(usp_amplitude(p)[0]), atol=1e-10)


def test_theta_zero_ground_state_is_chiral_plane_wave(base):
    # the real up-up-down configuration is a saddle, the uniform-modulus 120 degree state wins
    sol = solve(base)
    mod = np.abs(sol.amplitudes.array)
    np.testing.assert_allclose(mod, mod[0], rtol=1e-9)
    assert sol.ground_energy == pytest.approx(-1630.956904, abs=1e-5)


def test_seed_independence(base):
    p = base.replace(theta=0.3)
    e = [solve(p, SolverOptions(seed=s)).ground_energy for s in (7, 8)]
    assert e[0] == pytest.approx(e[1], abs=1e-9 * base.omega0)


def test_solve_many_matches_solve(base):
    ps = [base.replace(theta=t) for t in (0.1, 2.0, math.pi)]
    many = solve_many(ps)
    for p, sol in zip(ps, many):
        assert sol.ground_energy == pytest.approx(solve(p).ground_energy, abs=1e-9)


def test_no_convergence_when_budget_is_tiny(base):
    opts = SolverOptions(max_iter=1, newton_iter=0, n_random=0, tol_residual=1e-30)
    with pytest.raises(NoConvergence):
        solve(base.replace(theta=0.4), opts)


def test_classify():
    p = SystemParams(1000, 1.2, 0.05, 0.0)
    assert classify([0, 0, 0], p) is PhaseLabel.NP
    assert classify([5, 5, 5], p) is PhaseLabel.USP
    assert classify([5, 5, -5], p) is PhaseLabel.FSP
    w = np.exp(2j * np.pi / 3)
    assert classify([5, 5 * w, 5 * w**2], p) is PhaseLabel.CFSP


def test_orbit_energies_equal(base):
    p = base.replace(theta=0.5 * math.pi)
    sol = solve(p)
    orbit = degenerate_orbit(sol, p)
    energies = np.array([o.classical_energy for o in orbit])
    np.testing.assert_allclose(energies, sol.classical_energy, rtol=1e-10)
    assert len(orbit) == 1  # plane wave translations are pure phase rotations


def test_usp_orbit_is_single_configuration(base):
    p = base.replace(theta=math.pi)
    assert len(degenerate_orbit(solve(p), p)) == 1


@settings(max_examples=40, deadline=None)
@given(
    theta=st.floats(-math.pi, math.pi),
    phi=st.floats(0, 2 * math.pi),
    re=st.lists(st.floats(-40, 40), min_size=3, max_size=3),
    im=st.lists(st.floats(-40, 40), min_size=3, max_size=3),
)
def test_energy_u1_and_translation_invariant(theta, phi, re, im):
    p = SystemParams(1000, 1.2, 0.05, theta)
    a = np.array(re) + 1j * np.array(im)
    e = classical_energy(a, p)
    assert classical_energy(np.exp(1j * phi) * a, p) == pytest.approx(e, rel=1e-12, abs=1e-9)
    assert classical_energy(np.roll(a, 1), p) == pytest.approx(e, rel=1e-12, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(theta=st.floats(-math.pi, math.pi),
       re=st.lists(st.floats(-40, 40), min_size=3, max_size=3),
       im=st.lists(st.floats(-40, 40), min_size=3, max_size=3))
def test_time_reversal_symmetry_of_energy(theta, re, im):
    a = np.array(re) + 1j * np.array(im)
    p = SystemParams(1000, 1.2, 0.05, theta)
    e = classical_energy(a, p)
    assert classical_energy(np.conj(a), p.replace(theta=-theta)) == pytest.approx(e, rel=1e-12, abs=1e-9)
