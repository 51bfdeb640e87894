import math

import numpy as np
import pytest

from jctrimer.errors import ValidationError
from jctrimer.model import Amplitudes, SystemParams, delta_of, gauge_fix, make_params, wrap_angle


@pytest.mark.parametrize("theta, expected", [
    (0.0, 0.0), (math.pi, math.pi), (-math.pi, math.pi), (3 * math.pi, math.pi),
    (1.5 * math.pi, -0.5 * math.pi), (-2.5 * math.pi, -0.5 * math.pi),
])
def test_wrap_angle(theta, expected):
    assert wrap_angle(theta) == pytest.approx(expected, abs=1e-12)


def test_in_range_values_untouched():
    assert wrap_angle(3.14159) == 3.14159
    assert wrap_angle(-1.0) == -1.0


def test_derived_quantities():
    p = make_params(1000, 1.2, 0.05, 0.5 * math.pi)
    assert p.g == pytest.approx(1.2 * math.sqrt(1000))
    assert p.eta == 1000
    assert p.hop == pytest.approx(0.05j)


@pytest.mark.parametrize("field, value", [
    ("omega0", 0.0), ("omega0", -1.0), ("g1", -0.1), ("j", -0.01), ("theta", math.nan),
    ("g1", math.inf), ("j", "abc"),
])
def test_invalid_params_name_field(field, value):
    kwargs = dict(omega0=1000.0, g1=1.2, j=0.05, theta=0.0)
    kwargs[field] = value
    with pytest.raises(ValidationError) as info:
        SystemParams(**kwargs)
    assert info.value.field == field


def test_replace_keeps_validation(base):
    assert base.replace(theta=4.0).theta == pytest.approx(4.0 - 2 * math.pi)
    with pytest.raises(ValidationError):
        base.replace(g1=-1)


def test_amplitudes_cyclic_and_validation():
    a = Amplitudes([1, 2j, 3])
    assert a[3] == a[0] and a[-1] == 3
    assert len(a) == 3
    np.testing.assert_allclose(a.imag, [0, 2, 0])
    with pytest.raises(ValidationError):
        Amplitudes([1, 2])
    with pytest.raises(ValidationError):
        Amplitudes([1, 2, np.nan])


def test_delta_of(base):
    assert delta_of(0, base).delta == pytest.approx(base.omega0)
    alpha = 3 + 4j
    assert delta_of(alpha, base).delta == pytest.approx(math.sqrt(4 * base.g**2 * 25 + 1e6))
    with pytest.raises(ValidationError):
        delta_of(complex(np.inf, 0), base)


def test_gauge_fix():
    a = np.array([1j, 2.0, -3j])
    fixed = gauge_fix(a)
    assert fixed[2] == pytest.approx(3.0) and fixed[2].imag == 0
    np.testing.assert_allclose(np.abs(fixed), np.abs(a))
    fixed0 = gauge_fix([2j, 0, 0])
    assert fixed0[0] == pytest.approx(2.0)
