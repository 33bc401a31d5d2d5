import math

import numpy as np
import pytest

from nlwave.dynamics import State
from nlwave.errors import ConfigurationError
from nlwave.experiments import (
    convergence_study,
    default_problem,
    gaussian_state,
    lattice_crosscheck,
    linearized_growth_fit,
    longtime_sweep,
    resonant_pump,
    scaling_equivalence_check,
)
from nlwave.kernels import builtin_kernel
from nlwave.spectral import Field, make_grid

DIRAC = builtin_kernel("dirac")


def test_sweep_order_and_linear_cap():
    g = make_grid(20.0, 256)
    res = longtime_sweep(gaussian_state(g), DIRAC, 1, 2.0, [0.1, 0.2], T_cap=1.0, nonlinear=False, workers=2)
    assert [r.epsilon for r in res] == [0.2, 0.1]
    for r in res:
        assert r.cap_hit and r.T_esc == pytest.approx(1.0 / r.epsilon) and r.product == pytest.approx(1.0)


def test_sweep_threshold_monotone():
    g = make_grid(20.0, 256)
    st0 = gaussian_state(g)
    a = longtime_sweep(st0, DIRAC, 1, 2.0, [0.2], M=10.0)[0]
    b = longtime_sweep(st0, DIRAC, 1, 2.0, [0.2], M=20.0)[0]
    assert not a.cap_hit and a.T_esc > 0 and b.T_esc >= a.T_esc


def test_sweep_accepts_generator_and_rejects_bad_eps():
    g = make_grid(20.0, 128)
    res = longtime_sweep(lambda e: gaussian_state(g, 0.0), DIRAC, 1, 2.0, [0.3], T_cap=0.3)
    assert res[0].cap_hit
    with pytest.raises(ConfigurationError):
        longtime_sweep(gaussian_state(g), DIRAC, 1, 2.0, [0.1, -0.1])


def test_scaling_identity_examples():
    g = make_grid(20.0, 256)
    st0 = gaussian_state(g)
    assert scaling_equivalence_check(st0.u, st0.v, DIRAC, 1, 1.0, 1.0, 0.02) <= 1e-14
    devs = [scaling_equivalence_check(st0.u, st0.v, DIRAC, p, 0.1, 2.0, 0.02) for p in (1, 2)]
    assert max(devs) <= 1e-13


def test_lattice_crosscheck_examples():
    g = make_grid(8.0, 128)
    z = Field.zeros(g)
    assert lattice_crosscheck(z, z, 1, 0.1, 1.0).final == 0.0
    st0 = gaussian_state(g)
    assert lattice_crosscheck(st0.u, st0.v, 1, 0.1, 2.0, nonlinear=False).final <= 1e-8
    with pytest.raises(ConfigurationError):
        lattice_crosscheck(Field.zeros(make_grid(20.0, 512)), Field.zeros(make_grid(20.0, 512)), 1, 0.1, 1.0)


def test_lattice_crosscheck_strang_second_order():
    g = make_grid(8.0, 128)
    st0 = gaussian_state(g)
    res = lattice_crosscheck(st0.u, st0.v, 1, 0.3, 2.0, dt=0.04, refinements=2, method="strang")
    r1, r2 = res.deviations[0] / res.deviations[1], res.deviations[1] / res.deviations[2]
    assert r1 > 3.5 and r2 > 3.5


def test_growth_fit_examples():
    g = make_grid(math.pi, 32)
    flat = linearized_growth_fit(Field.zeros(g), DIRAC, 2.0, 1, [0.1], tau_end=1.0)
    assert abs(flat[0].kappa) < 1e-10
    k1 = linearized_growth_fit(resonant_pump(g, DIRAC, 1.0), DIRAC, 2.0, 1, [0.1], tau_end=3.0)[0].kappa
    k2 = linearized_growth_fit(resonant_pump(g, DIRAC, 2.0), DIRAC, 2.0, 1, [0.1], tau_end=3.0)[0].kappa
    assert k2 >= k1 > 0


def test_frozen_sine_weight_growth_is_gronwall_bounded():
    g = make_grid(math.pi, 32)
    w = Field.from_function(g, np.sin)
    fit = linearized_growth_fit(w, DIRAC, 2.0, 1, [0.05], tau_end=2.0)[0]
    # E_s(t) <= exp(C eps^p t) E_s(0) with a fitted C of moderate size
    C = np.max(np.log(fit.energies / fit.energies[0]) / np.maximum(fit.times * 0.05, 1e-300))
    assert np.isfinite(C) and C < 10


def test_convergence_examples():
    lin = convergence_study(default_problem(N=256, nonlinear=False, t_end=1.0), [0.04, 0.02, 0.01, 0.005])
    assert max(lin.differences) <= 1e-12
    with pytest.raises(ConfigurationError, match="halving"):
        convergence_study(default_problem(N=256), [0.04, 0.02, 0.015, 0.005])
    with pytest.raises(ConfigurationError, match="4"):
        convergence_study(default_problem(N=256), [0.04, 0.02, 0.01])
