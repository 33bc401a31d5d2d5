import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import bandlimited, seeds
from nlwave.errors import ConfigurationError, ContractError
from nlwave.spectral import (
    EVEN_REAL,
    GENERAL,
    ODD_IMAGINARY,
    Field,
    Multiplier,
    apply_multiplier,
    dealias_product,
    hs_inner,
    lambda_s,
    make_grid,
    mollify,
    smooth_cutoff,
    sobolev_norm,
)


def test_grid_nodes_and_wavenumbers():
    g = make_grid(math.pi, 8)
    assert np.allclose(g.x, -math.pi + np.arange(8) * math.pi / 4)
    assert sorted(np.round(g.xi).astype(int)) == list(range(-4, 4))
    assert make_grid(20, 256).dx == 0.15625


@pytest.mark.parametrize("L,N,msg", [(math.pi, 7, "N must be even"), (math.pi, 6, ">= 8"), (0.0, 8, "positive")])
def test_grid_rejects_bad_parameters(L, N, msg):
    with pytest.raises(ConfigurationError, match=msg):
        make_grid(L, N)


def test_spectrum_matches_definition(grid_pi, rng):
    f = bandlimited(grid_pi, rng)
    g = grid_pi
    c = np.exp(-1j * np.outer(g.xi, g.x)) @ f.samples / g.N
    assert np.allclose(f.spectrum, c, atol=1e-14)


def test_from_spectrum_rejects_non_hermitian(grid_pi):
    c = np.zeros(grid_pi.N, dtype=complex)
    c[1] = 1.0
    with pytest.raises(ContractError):
        Field.from_spectrum(grid_pi, c)


def test_sobolev_norms_of_sine(grid_pi):
    f = Field.from_function(grid_pi, np.sin)
    assert sobolev_norm(Field.zeros(grid_pi), 3.0) == 0.0
    assert abs(sobolev_norm(f, 0) - math.sqrt(math.pi)) < 1e-13
    assert abs(sobolev_norm(f, 1) - math.sqrt(2 * math.pi)) < 1e-13


def test_multiplier_examples(grid_pi):
    f = Field.from_function(grid_pi, np.sin)
    ident = apply_multiplier(f, Multiplier(lambda xi: np.ones_like(xi), EVEN_REAL))
    assert np.allclose(ident.samples, f.samples, atol=1e-15)
    d = apply_multiplier(f, Multiplier(lambda xi: 1j * xi, ODD_IMAGINARY))
    assert np.max(np.abs(d.samples - np.cos(grid_pi.x))) < 1e-12
    # centered differences agree to their own O(dx^2)
    fd = (np.roll(f.samples, -1) - np.roll(f.samples, 1)) / (2 * grid_pi.dx)
    assert np.max(np.abs(d.samples - fd)) < grid_pi.dx**2
    half = apply_multiplier(f, Multiplier(lambda xi: (1 + xi**2) ** -0.5, EVEN_REAL))
    assert np.max(np.abs(half.samples - np.sin(grid_pi.x) / math.sqrt(2))) < 1e-13


def test_multiplier_parity_is_checked(grid_pi):
    f = Field.from_function(grid_pi, np.sin)
    with pytest.raises(ContractError):
        apply_multiplier(f, Multiplier(lambda xi: xi, EVEN_REAL))
    with pytest.raises(ContractError):
        apply_multiplier(f, Multiplier(lambda xi: 1j * xi**2, ODD_IMAGINARY))


def test_odd_multiplier_zeroes_nyquist(grid_pi):
    nyq = Field(grid_pi, np.cos(grid_pi.N / 2 * grid_pi.x))
    out = apply_multiplier(nyq, Multiplier(lambda xi: 1j * xi, ODD_IMAGINARY))
    assert out.max_abs() == 0.0


def test_general_multiplier_shift(grid_pi):
    # e^{i xi a} is a translation by a
    a = 2 * grid_pi.dx
    f = Field.from_function(grid_pi, lambda x: np.sin(x) + np.cos(2 * x))
    out = apply_multiplier(f, Multiplier(lambda xi: np.exp(1j * xi * a), GENERAL))
    assert np.allclose(out.samples, np.roll(f.samples, -2), atol=1e-13)


def test_lambda_examples(grid_pi, rng):
    f = Field.from_function(grid_pi, np.sin)
    assert lambda_s(f, 0) is f
    assert np.max(np.abs(lambda_s(f, 2).samples - 2 * f.samples)) < 1e-12
    r = bandlimited(grid_pi, rng)
    assert np.max(np.abs(lambda_s(lambda_s(r, 1), -1).samples - r.samples)) < 1e-12


def test_smooth_cutoff_examples(grid_pi, rng):
    f = bandlimited(grid_pi, rng)
    assert np.allclose(smooth_cutoff(f, grid_pi.xi_max).samples, f.samples, atol=1e-14)
    assert smooth_cutoff(Field.from_function(grid_pi, np.sin), 0.5).max_abs() < 1e-15
    once = smooth_cutoff(f, 3)
    assert np.max(np.abs(smooth_cutoff(once, 3).samples - once.samples)) < 1e-15 * max(1, once.max_abs())
    with pytest.raises(ConfigurationError):
        smooth_cutoff(f, -1.0)


def test_mollify_examples(grid_pi, rng):
    c = Field.constant(grid_pi, 2.5)
    assert np.max(np.abs(mollify(c, 0.3).samples - 2.5)) < 1e-12
    f = bandlimited(grid_pi, rng)
    assert sobolev_norm(mollify(f, 1e-3) - f, 0) <= 1e-4 * sobolev_norm(f, 1)
    with pytest.raises(ConfigurationError):
        mollify(f, 0.0)


def test_mollifier_estimate_constant(grid_pi, rng):
    # fitted C in ||J^h1 z - J^h2 z||_s <= C |h1 - h2| ||z||_{s+1}; this bump gives C <= 1
    worst = 0.0
    for _ in range(50):
        z = bandlimited(grid_pi, rng, band=20)
        h1, h2 = rng.uniform(0.01, 0.5, size=2)
        s = rng.uniform(0, 3)
        lhs = sobolev_norm(mollify(z, h1) - mollify(z, h2), s)
        worst = max(worst, lhs / (abs(h1 - h2) * sobolev_norm(z, s + 1)))
    assert 0 < worst <= 1.0


def test_dealias_examples(grid_pi):
    z = Field.zeros(grid_pi)
    assert dealias_product([z, z]).max_abs() == 0.0
    s = Field.from_function(grid_pi, np.sin)
    sq = dealias_product([s, s])
    assert np.max(np.abs(sq.samples - (1 - np.cos(2 * grid_pi.x)) / 2)) < 1e-12
    assert np.allclose(dealias_product([s], total_power=2).samples, sq.samples, atol=1e-15)


def test_dealias_avoids_aliasing_on_coarse_grid():
    g = make_grid(math.pi, 8)
    f = Field.from_function(g, lambda x: np.cos(3 * x))
    # cos^2 3x = 1/2 + cos 6x / 2; mode 6 is unresolved on N = 8 and must be dropped
    padded = dealias_product([f, f])
    assert np.max(np.abs(padded.samples - 0.5)) < 1e-14
    naive = f.samples**2
    assert np.max(np.abs(naive - 0.5)) > 0.4  # the aliased product folds mode 6 onto mode 2
    # oracle: exact product on a 4x finer grid, truncated to |k| <= 3
    fine = make_grid(math.pi, 32)
    ff = Field.from_function(fine, lambda x: np.cos(3 * x) ** 2)
    assert np.allclose(smooth_cutoff(ff, 3).samples[::4], padded.samples, atol=1e-14)


def test_dealias_contract(grid_pi):
    s = Field.from_function(grid_pi, np.sin)
    with pytest.raises(ContractError):
        dealias_product([])
    with pytest.raises(ContractError):
        dealias_product([s, s], total_power=3)
    with pytest.raises(ContractError):
        dealias_product([s, Field.zeros(make_grid(1.0, 64))])


@given(seeds)
def test_parseval_and_round_trip(seed):
    g = make_grid(3.0, 64)
    f = bandlimited(g, np.random.default_rng(seed), band=30)
    quad = float(np.sum(f.samples**2) * g.dx)
    assert abs(sobolev_norm(f, 0) ** 2 - quad) <= 1e-10 * quad
    back = Field.from_spectrum(g, f.spectrum)
    assert np.max(np.abs(back.samples - f.samples)) <= 1e-12 * max(1.0, f.max_abs())


@given(seeds, st.floats(-2, 3), st.floats(0, 2))
def test_norm_monotone_and_lambda_isometry(seed, t, ds):
    g = make_grid(math.pi, 32)
    f = bandlimited(g, np.random.default_rng(seed))
    assert sobolev_norm(f, t) <= sobolev_norm(f, t + ds) * (1 + 1e-14)
    s = ds - 1.0
    lhs, rhs = sobolev_norm(lambda_s(f, s), t - s), sobolev_norm(f, t)
    assert abs(lhs - rhs) <= 1e-10 * rhs


@given(seeds, st.floats(0, 20), st.floats(-2, 3))
def test_cutoff_contracts(seed, theta, s):
    g = make_grid(math.pi, 64)
    f = bandlimited(g, np.random.default_rng(seed), band=25)
    assert sobolev_norm(smooth_cutoff(f, theta), s) <= sobolev_norm(f, s) * (1 + 1e-14)


@given(seeds, st.integers(2, 4))
def test_dealias_matches_fine_grid(seed, q):
    g = make_grid(2.0, 32)
    rng = np.random.default_rng(seed)
    fields = [bandlimited(g, rng, band=6) for _ in range(q)]
    coarse = dealias_product(fields)
    fine = make_grid(2.0, 128)
    fine_fields = [Field.from_spectrum(fine, _embed(f.spectrum, 128)) for f in fields]
    exact = Field(fine, np.prod([f.samples for f in fine_fields], axis=0))
    # compare retained modes below the unpaired Nyquist mode
    below = g.xi_max - 1e-9
    assert np.max(np.abs(smooth_cutoff(exact, below).samples[::4] - smooth_cutoff(coarse, below).samples)) < 1e-10


def _embed(c, M):
    N = len(c)
    out = np.zeros(M, dtype=complex)
    out[: N // 2] = c[: N // 2]
    out[-(N // 2) + 1 :] = c[-(N // 2) + 1 :]
    return out


def test_hs_inner_symmetric(grid_pi, rng):
    f, h = bandlimited(grid_pi, rng), bandlimited(grid_pi, rng)
    assert abs(hs_inner(f, h, 1.5) - hs_inner(h, f, 1.5)) < 1e-12
    assert abs(hs_inner(f, f, 1.5) - sobolev_norm(f, 1.5) ** 2) < 1e-10
