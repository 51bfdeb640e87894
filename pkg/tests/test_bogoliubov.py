import math

import numpy as np
import pytest

from jctrimer.bogoliubov import (
    SIGMA,
    build_form,
    diagonalize,
    np_branch_spectrum,
    spectrum_at,
    symplectic_eigenvalues,
    usp_spectrum,
)
from jctrimer.errors import BelowCritical, DegenerateSite
from jctrimer.meanfield import gradient, real_hessian, solve, usp_amplitude
from jctrimer.normal import np_dispersion, np_ground_energy

from conftest import random_alpha


def test_matrix_hermitian_with_paraunitary_block_structure(base, rng):
    form = build_form(random_alpha(rng, base), base.replace(theta=0.8))
    m = form.matrix()
    np.testing.assert_allclose(m, m.conj().T, atol=1e-14)
    swap = np.block([[np.zeros((3, 3)), np.eye(3)], [np.eye(3), np.zeros((3, 3))]])
    np.testing.assert_allclose(swap @ m @ swap, m.conj(), atol=1e-14)


def test_eigenvalues_come_in_pairs(base, rng):
    form = build_form(random_alpha(rng, base), base.replace(theta=-1.3))
    ev = np.linalg.eigvals(SIGMA @ form.matrix())
    np.testing.assert_allclose(np.sort_complex(ev), np.sort_complex(-ev), atol=1e-9)


def test_matrix_equals_half_real_hessian(base, rng):
    # the fluctuation matrix is the Hessian of the classical energy in complex form
    p = base.replace(theta=0.4)
    a = random_alpha(rng, p)
    m = build_form(a, p).matrix()
    t = np.block([[np.eye(3), 1j * np.eye(3)], [np.eye(3), -1j * np.eye(3)]])
    np.testing.assert_allclose(t.conj().T @ m @ t, real_hessian(a, p), atol=1e-9)


def test_usp_closed_form_agrees_with_numeric(base):
    p = base.replace(theta=math.pi)
    closed = usp_spectrum(p)
    numeric = diagonalize(build_form(usp_amplitude(p), p))
    np.testing.assert_allclose(np.sort(closed.eps_q), numeric.eps, atol=1e-10)
    assert closed.ground_energy == pytest.approx(numeric.ground_energy, abs=1e-10)
    assert closed.delta0 == pytest.approx(1600.0, rel=1e-12)
    assert closed.mu0 == pytest.approx(0.37422, abs=1e-5)
    assert closed.nu0 == pytest.approx(0.27422, abs=1e-5)


def test_goldstone_identity(base):
    for g1 in (1.0, 1.2, 1.3):
        spec = usp_spectrum(base.replace(theta=math.pi, g1=g1))
        assert spec.omega_q[0] == pytest.approx(spec.nu0, abs=1e-10)
        assert spec.eps_q[0] == 0.0


def test_usp_spectrum_below_critical(base):
    with pytest.raises(BelowCritical):
        usp_spectrum(base.replace(theta=math.pi, g1=0.9))


def test_degenerate_site_rejected(base):
    with pytest.raises(DegenerateSite):
        build_form([0, 1, 1], base)


def test_saddle_is_flagged_unstable(base):
    # real up-up-down stationary point at theta = 0 is a saddle of the classical energy
    from scipy.optimize import fsolve

    p = base
    x = fsolve(lambda v: gradient(v.astype(complex), p).real, np.array([15.0, 15.0, -15.0]))
    saddle = x.astype(complex)
    assert np.max(np.abs(gradient(saddle, p))) < 1e-8
    assert len(set(np.round(np.abs(x), 6))) == 2  # two equal moduli, one different
    ev, psd = symplectic_eigenvalues(build_form(saddle, p))
    assert not psd
    assert not diagonalize(build_form(saddle, p)).stable
    assert np.max(np.abs(ev.imag)) > 1e-3


def test_np_branch(base):
    p = base.replace(g1=0.5, theta=0.2)
    spec = np_branch_spectrum(p)
    assert spec.stable
    assert spec.ground_energy == np_ground_energy(p)
    assert spec.eps_min == pytest.approx(min(np_dispersion(p, q) for q in (0, 2 * math.pi / 3, -2 * math.pi / 3)))
    assert spectrum_at([0, 0, 0], p, np_tol=1e-6).ground_energy == spec.ground_energy


def test_solution_spectrum_has_goldstone_zero(base):
    for theta in (0.5 * math.pi, math.pi, -2.0):
        sol = solve(base.replace(theta=theta))
        assert sol.spectrum.eps_min == 0.0
        assert sol.spectrum.eps[1] > 1e-3
