import math

import numpy as np
import pytest

from jctrimer.errors import ValidationError
from jctrimer.normal import (
    QUASIMOMENTA,
    critical_coupling,
    np_dispersion,
    np_ground_energy,
    np_spectrum,
    q_theta,
)

TWO_PI_3 = 2 * math.pi / 3


@pytest.mark.parametrize("theta, expected", [
    (0.0, math.sqrt(0.95)), (0.5 * math.pi, None), (math.pi, math.sqrt(0.9)),
])
def test_critical_coupling_values(base, theta, expected):
    p = base.replace(theta=theta)
    g1c = critical_coupling(p)
    if expected is None:
        # the softest normal mode sets g1c
        expected = math.sqrt(1 + 0.1 * min(math.cos(0.5 * math.pi - q) for q in QUASIMOMENTA))
    assert g1c == pytest.approx(expected, abs=1e-12)


def test_paper_critical_values(base):
    got = [critical_coupling(base.replace(theta=t)) for t in (0.0, 0.5 * math.pi, math.pi)]
    np.testing.assert_allclose(got, [0.975, 0.956, 0.949], atol=1e-3)


def test_q_theta_branches():
    assert q_theta(math.pi) == 0.0
    assert q_theta(0.5 * math.pi) == pytest.approx(-TWO_PI_3)
    assert q_theta(-0.5 * math.pi) == pytest.approx(TWO_PI_3)
    # tie at theta = 0 between +-2pi/3 is broken deterministically
    assert abs(q_theta(0.0)) == pytest.approx(TWO_PI_3)


def test_dispersion_closes_at_critical(base):
    for theta in (0.0, 0.3, 0.5 * math.pi, math.pi):
        p = base.replace(theta=theta)
        p = p.replace(g1=critical_coupling(p))
        assert np_dispersion(p, q_theta(theta)) == pytest.approx(0.0, abs=1e-9)


def test_dispersion_rejects_bad_q(base):
    with pytest.raises(ValidationError):
        np_dispersion(base, 1.0)


def test_np_ground_energy(base):
    assert np_ground_energy(base.replace(g1=0.5)) == pytest.approx(-1.5 * (1000 + 0.25))


def test_np_spectrum_stability(base):
    assert np_spectrum(base.replace(g1=0.5)).stable
    assert not np_spectrum(base.replace(g1=1.2)).stable


def test_critical_coupling_invalid():
    from jctrimer.model import SystemParams
    with pytest.raises(ValidationError):
        critical_coupling(SystemParams(1000, 1.0, 0.6, math.pi))
