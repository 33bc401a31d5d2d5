import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlwave.errors import ConfigurationError
from nlwave.nashmoser import nash_moser_params, optimize_pmin, p_min


def test_pmin_exact_at_six():
    prm = nash_moser_params(6)
    assert prm.P_min == 57.0
    assert (prm.m, prm.d1, prm.d1_prime, prm.delta, prm.q) == (3, 1, 0, 3.0, 3.0)


def test_pmin_pole_and_value():
    assert p_min(3 + 1e-9) > 1e9
    assert nash_moser_params(7.35).P_min == pytest.approx(55.35, abs=0.01)
    for bad in (3.0, 2.0, -1.0):
        with pytest.raises(ConfigurationError):
            nash_moser_params(bad)


def test_optimum():
    D, P = optimize_pmin()
    assert abs(D - 7.35) <= 0.01 and abs(P - 55.34) <= 0.01
    assert P <= p_min(D - 0.5) and P <= p_min(D + 0.5)
    assert p_min(3.001) > P and p_min(100.0) > P


@given(st.floats(3.0001, 1e4))
def test_params_invariants(D):
    prm = nash_moser_params(D)
    assert prm.q + 3 == pytest.approx(D)
    assert prm.P_min > prm.delta
    square = (math.sqrt(3) + math.sqrt(2 * D)) ** 2
    assert prm.P_min == pytest.approx(3 + D / (D - 3) * square, rel=1e-12)
