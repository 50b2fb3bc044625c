import math

import mpmath
import pytest

from symnorm.combinatorics import integral_calc, integral_cc1
from symnorm.errors import DomainError

# high-precision mpmath quadrature with the range split around the peak
CC1_FROZEN = {
    4.0: 8.9980624124664612483,
    8.0: 732.96099172644152904,
    16.0: 190780235.08921081826,
    32.0: 3.8347543372347044278e22,
}
CALC_FROZEN = {
    (1.0, 1.0, math.e, 1.0): 0.097334821391281338404,
    (4.0, 1.0, math.e, 1.0): 3.4648266550803682645,
    (4.0, 1.0, math.e, 2.0): 0.082469853658911848391,
}


def mp_calc(a, b, d, r):
    with mpmath.workdps(30):
        return float(mpmath.quad(lambda t: (b / t) ** (t * r) * t**a, [d, d + 5, 4 * d + 4 * a, mpmath.inf]))


@pytest.mark.parametrize("a", sorted(CC1_FROZEN))
def test_power_tail_integral_against_frozen_quadrature(a):
    res = integral_cc1(a, 1.0)
    assert res.value == pytest.approx(CC1_FROZEN[a], rel=1e-8)
    assert res.abs_error <= 1e-8 * res.value
    assert res.holds


def test_power_tail_integral_boundary_and_monotone():
    values = [integral_cc1(a, 1.0).value for a in (4.0, 8.0, 16.0, 32.0)]
    assert values == sorted(values)
    assert integral_cc1(4.0, 1.0).holds


def test_power_tail_integral_b_above_one():
    res = integral_cc1(36.0, 3.0)
    with mpmath.workdps(30):
        ref = float(mpmath.quad(lambda t: t**36 * (3 / t) ** t, [3, 15, 40, 200, mpmath.inf]))
    assert res.value == pytest.approx(ref, rel=1e-8)
    assert res.holds


def test_power_tail_integral_preconditions():
    with pytest.raises(DomainError):
        integral_cc1(3.9, 1.0)
    with pytest.raises(DomainError):
        integral_cc1(10.0, 0.5)


@pytest.mark.parametrize("args", sorted(CALC_FROZEN))
def test_calc_against_frozen_quadrature(args):
    res = integral_calc(*args)
    assert res.value == pytest.approx(CALC_FROZEN[args], rel=1e-8)
    assert res.holds


def test_calc_branches():
    assert integral_calc(1.0, 1.0, math.e, 1.0).branch == "small_a"
    assert integral_calc(4.0, 1.0, math.e, 1.0).branch == "large_a"


def test_calc_r_two_smaller():
    assert integral_calc(4.0, 1.0, math.e, 2.0).value < integral_calc(4.0, 1.0, math.e, 1.0).value


@pytest.mark.parametrize("args", [(0.5, 1.0, 2 * math.e, 0.5), (16.0, 2.0, 2 * math.e, 1.0), (32.0, 1.0, 4 * math.e, 2.0)])
def test_calc_live_oracle(args):
    res = integral_calc(*args)
    assert res.value == pytest.approx(mp_calc(*args), rel=1e-8)
    assert res.holds


def test_calc_preconditions():
    for args in [(1.0, 0.5, math.e, 1.0), (0.0, 1.0, math.e, 1.0), (1.0, 1.0, 2.0, 1.0), (1.0, 1.0, math.e, 0.0)]:
        with pytest.raises(DomainError):
            integral_calc(*args)
