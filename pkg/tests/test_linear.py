import numpy as np
import pytest

from softmmse.constellations import by_name
from softmmse.errors import DegenerateComponentError
from softmmse.linear import bmse, conditional_stats, cwcu_lmmse, lmmse
from softmmse.model import build_model

from conftest import random_model


def scalar_model():
    # h = 1, sigma_x^2 = 1 (QPSK), sigma_n^2 = 1
    return build_model(np.array([[1.0 + 0j]]), by_name("qpsk"), np.array([[1.0 + 0j]]))


def test_scalar_frozen_values():
    model = scalar_model()
    bank = lmmse(model)
    # E = Cxy / Cyy = 1/2; alpha = E h = 1/2; cond_var = E Cnn E^H = 1/4
    assert bank.E == pytest.approx(np.array([[0.5]]))
    assert bank.alpha[0] == pytest.approx(0.5)
    assert bank.cond_var[0] == pytest.approx(0.25)
    assert bmse(bank.E, model)[0] == pytest.approx(0.5)

    cw = cwcu_lmmse(model)
    assert cw.E == pytest.approx(np.array([[1.0]]))
    assert cw.alpha[0] == pytest.approx(1.0)
    assert cw.cond_var[0] == pytest.approx(1.0)
    assert bmse(cw.E, model)[0] == pytest.approx(1.0)


def test_zero_estimator_bmse_is_prior_variance(rng):
    model = random_model(rng, 5, 3, "qpsk")
    assert np.allclose(bmse(np.zeros((3, 5)), model), np.ones(3))


def test_scalar_conditional_stats_monte_carlo():
    # independent check of the closed form: 1e6 conditioned draws
    model = scalar_model()
    bank = lmmse(model)
    rng = np.random.default_rng(7)
    s = (1 + 1j) / np.sqrt(2)
    n_draws = 1_000_000
    noise = (rng.standard_normal(n_draws) + 1j * rng.standard_normal(n_draws)) / np.sqrt(2)
    xh = bank.E[0, 0] * (s + noise)
    mean = xh.mean()
    var = np.mean(np.abs(xh - mean) ** 2)
    se_mean = np.sqrt(var / n_draws)
    assert abs(mean - bank.alpha[0] * s) < 4 * se_mean
    se_var = np.std(np.abs(xh - mean) ** 2) / np.sqrt(n_draws)
    assert abs(var - bank.cond_var[0]) < 4 * se_var


def test_lmmse_matches_normal_equation_oracle():
    # small dense system solved with a plain generic solver
    H = np.array([[1.0, 0.5], [0.5, 1.0]], dtype=complex)
    model = build_model(H, by_name("qpsk"), 0.1 * np.eye(2))
    Cyy = H @ H.conj().T + 0.1 * np.eye(2)
    E_oracle = H.conj().T @ np.linalg.inv(Cyy)
    bank = lmmse(model)
    assert np.allclose(bank.E, E_oracle, atol=1e-12)
    # E solves the normal equations: E Cyy = Cxy
    assert np.max(np.abs(bank.E @ Cyy - H.conj().T)) < 1e-12


def test_random_model_conditional_stats_monte_carlo(rng):
    model = random_model(rng, 6, 4, "qpsk")
    bank = lmmse(model)
    c = by_name("qpsk")
    i = 2
    s = c.symbols[1]
    n_draws = 100_000
    others = [j for j in range(4) if j != i]
    x = np.empty((n_draws, 4), dtype=complex)
    x[:, i] = s
    x[:, others] = c.symbols[rng.integers(0, 4, size=(n_draws, 3))]
    L = np.linalg.cholesky(model.Cnn)
    g = (rng.standard_normal((n_draws, 6)) + 1j * rng.standard_normal((n_draws, 6)))
    y = x @ model.H.T + (g / np.sqrt(2)) @ L.T
    xh = bank.estimate(y)[:, i]
    mean = xh.mean()
    var = np.mean(np.abs(xh - mean) ** 2)
    assert abs(mean - bank.alpha[i] * s) < 4 * np.sqrt(var / n_draws)
    se_var = np.std(np.abs(xh - mean) ** 2) / np.sqrt(n_draws)
    assert abs(var - bank.cond_var[i]) < 3 * se_var


def test_alpha_range_and_realness(rng):
    for _ in range(20):
        m = int(rng.integers(2, 9))
        n = int(rng.integers(1, min(m, 6) + 1))
        model = random_model(rng, m, n, "16qam")
        bank = lmmse(model)
        assert np.all(bank.alpha > 0)
        assert np.all(bank.alpha <= 1 + 1e-12)
        assert np.all(bank.cond_var > 0)


def test_cwcu_rows_are_conditionally_unbiased(rng):
    model = random_model(rng, 6, 4, "qpsk")
    cw = cwcu_lmmse(model)
    for i in range(4):
        assert complex(cw.E[i] @ model.H[:, i]) == pytest.approx(1.0, abs=1e-10)
    assert np.allclose(cw.alpha, 1.0)


def test_cwcu_scales_conditional_variance(rng):
    model = random_model(rng, 5, 3, "qpsk")
    base = lmmse(model)
    cw = cwcu_lmmse(model)
    assert np.allclose(cw.cond_var, base.cond_var / base.alpha**2, rtol=1e-10)


def test_bmse_ordering(rng):
    for _ in range(10):
        model = random_model(rng, 6, 4, "16qam", noise_scale=0.5)
        base = lmmse(model)
        cw = cwcu_lmmse(model)
        b0 = bmse(base.E, model)
        b1 = bmse(cw.E, model)
        assert np.all(b0 <= b1 + 1e-12)
        # the plain bank is the global MMSE optimum
        assert np.all(b0 <= bmse(np.zeros_like(base.E), model) + 1e-12)


def test_degenerate_component_raises():
    H = np.array([[1.0, 0.0], [0.0, 0.0], [1.0, 0.0]], dtype=complex)
    model = build_model(H, by_name("qpsk"), np.eye(3))
    with pytest.raises(DegenerateComponentError) as exc_info:
        cwcu_lmmse(model)
    assert exc_info.value.component == 1


def test_conditional_stats_independent_of_row_scaling(rng):
    # scaling a row scales alpha linearly and cond_var quadratically
    model = random_model(rng, 5, 3, "qpsk")
    bank = lmmse(model)
    E2 = bank.E.copy()
    E2[1] *= 3.0
    a1, v1 = conditional_stats(bank.E, model, 1)
    a2, v2 = conditional_stats(E2, model, 1)
    assert a2 == pytest.approx(3 * a1)
    assert v2 == pytest.approx(9 * v1)
