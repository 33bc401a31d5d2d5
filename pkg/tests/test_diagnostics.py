import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import bandlimited, seeds
from nlwave.diagnostics import (
    LOWER,
    UPPER,
    data_functional_I,
    energy_Es,
    epsilon0_estimate,
    hamiltonian,
    hyperbolicity_check,
    linearization_weight,
)
from nlwave.dynamics import EvolutionParams, State, linear_propagate
from nlwave.errors import ContractError, HyperbolicityLost
from nlwave.kernels import builtin_kernel
from nlwave.spectral import Field, make_grid, sobolev_norm


def test_energy_with_zero_weight(grid_pi, rng):
    st0 = State(bandlimited(grid_pi, rng), bandlimited(grid_pi, rng))
    rep = energy_Es(st0, Field.zeros(grid_pi), 0.3, 1, 2.0)
    expect = math.sqrt(0.5 * (sobolev_norm(st0.u, 2) ** 2 + sobolev_norm(st0.v, 2) ** 2))
    assert rep.Es == pytest.approx(expect, rel=1e-14) and rep.equivalence_ok
    assert energy_Es(State.zeros(grid_pi), Field.zeros(grid_pi), 0.1, 1, 2.0).Es == 0.0


def test_energy_rejects_lost_hyperbolicity(grid_pi):
    u = Field.constant(grid_pi, 1.0)
    with pytest.raises(HyperbolicityLost):
        energy_Es(State(u, Field.zeros(grid_pi)), Field.constant(grid_pi, -3.0), 1.0, 1, 2.0)


def test_hyperbolicity_check_examples(grid_pi):
    assert hyperbolicity_check(Field.zeros(grid_pi), 0.1, 1) == (1.0, True)
    m, ok = hyperbolicity_check(Field.constant(grid_pi, -2.0), 1.0, 1)
    assert m == -1.0 and not ok


def test_linearization_weight(grid_pi):
    u = Field.from_function(grid_pi, np.sin)
    w = linearization_weight(u, 2)
    assert np.max(np.abs(w.samples - 3 * np.sin(grid_pi.x) ** 2)) < 1e-13


def test_epsilon0_examples(grid_pi):
    assert epsilon0_estimate(Field.zeros(grid_pi), 2.0) == math.inf
    w = Field.from_function(grid_pi, np.sin)
    e1 = epsilon0_estimate(w, 2.0, p=1, C_hat=0.9)
    e2 = epsilon0_estimate(w * 2.0, 2.0, p=1, C_hat=0.9)
    assert e2 == pytest.approx(e1 / 2, rel=1e-14)
    e1p2 = epsilon0_estimate(w, 2.0, p=2, C_hat=0.9)
    assert epsilon0_estimate(w * 2.0, 2.0, p=2, C_hat=0.9) ** 2 == pytest.approx(e1p2**2 / 2, rel=1e-14)


def test_epsilon0_sandwich_for_sine_weight(grid_pi):
    w = Field.from_function(grid_pi, np.sin)
    eps = epsilon0_estimate(w, 2.0, p=1) / 2
    rng = np.random.default_rng(11)
    for _ in range(100):
        st0 = State(bandlimited(grid_pi, rng, 12), bandlimited(grid_pi, rng, 12))
        rep = energy_Es(st0, w, eps, 1, 2.0)
        assert rep.equivalence_ok
        assert LOWER * rep.Xs_norm <= rep.Es <= UPPER * rep.Xs_norm


def test_hamiltonian_examples(grid_pi, rng):
    assert hamiltonian(State.zeros(grid_pi), 0.1, 1) == 0.0
    s = State(Field.from_function(grid_pi, np.sin), Field.zeros(grid_pi))
    assert hamiltonian(s, 0.1, 1, nonlinear=False) == pytest.approx(math.pi / 2, abs=1e-14)
    # the cubic term integrates sin^3 to zero over a period
    assert hamiltonian(s, 0.1, 1) == pytest.approx(math.pi / 2, abs=1e-14)
    r = State(bandlimited(grid_pi, rng), bandlimited(grid_pi, rng))
    P = EvolutionParams(builtin_kernel("exponential"), 0.1, 1, nonlinear=False)
    h0 = hamiltonian(r, 0.1, 1, nonlinear=False)
    assert abs(hamiltonian(linear_propagate(r, 7.3, P), 0.1, 1, nonlinear=False) - h0) < 1e-12 * h0


def test_hamiltonian_quadrature_is_exact(grid_pi):
    # int u^3 for u = 1 + cos x: 2 pi (1 + 3/2) = 5 pi
    s = State(Field.from_function(grid_pi, lambda x: 1 + np.cos(x)), Field.zeros(grid_pi))
    quad = hamiltonian(s, 1.0, 1) - hamiltonian(s, 1.0, 1, nonlinear=False)
    assert quad == pytest.approx(5 * math.pi / 3, rel=1e-14)


def _pair(grid, c):
    return (Field.constant(grid, c), Field.zeros(grid))


def test_data_functional_examples(grid_pi):
    g = _pair(grid_pi, 1.0)
    gn = math.hypot(sobolev_norm(g[0], 2), 0)
    dt = 0.01
    zero = [0.0] * 101
    assert data_functional_I(g, zero, 2.0, 1.0, dt) == pytest.approx(gn)
    const = [3.0] * 101
    assert data_functional_I(g, const, 2.0, 0.7, dt) == pytest.approx(gn + 2.1)
    decay = [math.exp(-i * dt) for i in range(301)]
    assert data_functional_I(g, decay, 2.0, 3.0, dt) == pytest.approx(gn + 3.0)
    with pytest.raises(ContractError):
        data_functional_I(g, const, 2.0, 2.0, dt)


def test_data_functional_accepts_pairs(grid_pi):
    c = math.sqrt(1 / (2 * math.pi))  # ||c||_{H^s} = 1 for a constant
    series = [_pair(grid_pi, c)] * 11
    assert data_functional_I(_pair(grid_pi, 0.0), series, 2.0, 1.0, 0.1) == pytest.approx(1.0, rel=1e-12)


norm_series = st.lists(st.floats(0, 10), min_size=2, max_size=30)


@given(norm_series, st.floats(0, 1), st.floats(0, 1))
def test_data_functional_monotone_in_t(series, a, b):
    dt = 0.1
    span = (len(series) - 1) * dt
    g = _pair(make_grid(1.0, 8), 0.0)
    t1, t2 = sorted((a * span, b * span))
    assert data_functional_I(g, series, 1.0, t1, dt) <= data_functional_I(g, series, 1.0, t2, dt) + 1e-12


@given(st.data())
def test_data_functional_subadditive(data):
    n = data.draw(st.integers(2, 30))
    f1 = data.draw(st.lists(st.floats(0, 10), min_size=n, max_size=n))
    f2 = data.draw(st.lists(st.floats(0, 10), min_size=n, max_size=n))
    dt = 0.1
    t = data.draw(st.floats(0, (n - 1) * dt))
    g = _pair(make_grid(1.0, 8), 0.0)
    both = [a + b for a, b in zip(f1, f2)]  # triangle inequality bound on ||f1 + f2||
    lhs = data_functional_I(g, both, 1.0, t, dt)
    assert lhs <= data_functional_I(g, f1, 1.0, t, dt) + data_functional_I(g, f2, 1.0, t, dt) + 1e-9


@given(seeds, st.floats(0.2, 3.0))
def test_energy_sandwich_random(seed, amp):
    g = make_grid(math.pi, 32)
    rng = np.random.default_rng(seed)
    u, v, w = (bandlimited(g, rng) for _ in range(3))
    w = w * amp
    eps = epsilon0_estimate(w, 2.0, p=1) / 2
    rep = energy_Es(State(u, v), w, eps, 1, 2.0)
    assert rep.equivalence_ok
