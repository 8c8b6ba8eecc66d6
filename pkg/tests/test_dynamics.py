import math

import numpy as np
import pytest
import scipy.integrate
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from services.dynamics import (
    decay_rate_estimate,
    decoherence_factor,
    eid_defect,
    ergodic_mean,
    evolve_moments,
    kms_function,
    kms_gap_condition,
    propagators,
    semigroup_gap_finite,
    weyl_symbol,
)
from services.exceptions import ContractionError, InadmissibleCovariance, InvalidModel, NotFaithful
from services.planting import planted_model, random_stable_block
from services.spectral import invariant_splitting


def _ode_moments(dd, m0, Sigma0, T):
    n = dd.Z.shape[0]

    def rhs(_, y):
        m, S = y[:n], y[n:].reshape(n, n)
        return np.concatenate([dd.Z.T @ m + dd.zeta, (dd.Z.T @ S + S @ dd.Z + dd.C).reshape(-1)])

    sol = scipy.integrate.solve_ivp(
        rhs, (0.0, T), np.concatenate([m0, Sigma0.reshape(-1)]), method="DOP853", rtol=1e-11, atol=1e-12,
    )
    y = sol.y[:, -1]
    return y[:n], y[n:].reshape(n, n)


def test_propagators_at_zero():
    E, G, h = propagators(-np.eye(2), 2.0 * np.eye(2), [1.0, 0.0], 0.0)
    assert_allclose(E, np.eye(2))
    assert_allclose(G, np.zeros((2, 2)))
    assert_allclose(h, np.zeros(2))


def test_propagators_reject_negative_time():
    with pytest.raises(InvalidModel):
        propagators(-np.eye(2), np.zeros((2, 2)), np.zeros(2), -1.0)


@pytest.mark.parametrize("t", [0.3, 1.0, 7.5, 40.0])
def test_propagators_damped_closed_form(t):
    E, G, h = propagators(-np.eye(2), 2.0 * np.eye(2), [2.0, 0.0], t)
    assert_allclose(E, math.exp(-t) * np.eye(2), atol=1e-14)
    assert_allclose(G, (1.0 - math.exp(-2.0 * t)) * np.eye(2), atol=1e-12)
    assert_allclose(h, [2.0 * (1.0 - math.exp(-t)), 0.0], atol=1e-12)


def test_gram_derivative_matches_integrand(rng):
    dd = random_stable_block(rng, 2)
    t, step = 1.3, 1e-4
    _, G_plus, _ = propagators(dd.Z, dd.C, dd.zeta, t + step)
    _, G_minus, _ = propagators(dd.Z, dd.C, dd.zeta, t - step)
    E, _, _ = propagators(dd.Z, dd.C, dd.zeta, t)
    derivative = (G_plus - G_minus) / (2.0 * step)
    assert_allclose(derivative, E.T @ dd.C @ E, atol=1e-5 * (1.0 + np.linalg.norm(dd.C)))


def test_evolve_damped_mode(damped):
    times = np.linspace(0.0, 3.0, 7)
    traj = evolve_moments(damped, [1.0, 0.0], np.eye(2), times)
    assert_allclose(traj.means[:, 0], np.exp(-times), atol=1e-12)
    assert_allclose(traj.means[:, 1], 0.0, atol=1e-12)
    for S in traj.covariances:
        assert_allclose(S, np.eye(2), atol=1e-12)


def test_evolve_rejects_inadmissible_start(damped):
    with pytest.raises(InadmissibleCovariance) as err:
        evolve_moments(damped, [0.0, 0.0], 0.5 * np.eye(2), [0.0, 1.0])
    assert err.value.field == "Sigma0"


def test_evolve_rejects_decreasing_grid(damped):
    with pytest.raises(InvalidModel):
        evolve_moments(damped, [0.0, 0.0], np.eye(2), [0.0, 2.0, 1.0])


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(1, 2), T=st.floats(0.1, 20.0))
def test_evolve_matches_ode(seed, d, T):
    rng = np.random.default_rng(seed)
    dd = random_stable_block(rng, d)
    m0 = rng.normal(size=2 * d)
    X = rng.normal(size=(2 * d, 2 * d))
    Sigma0 = X @ X.T + np.eye(2 * d)
    traj = evolve_moments(dd, m0, Sigma0, [0.0, T])
    m_ode, S_ode = _ode_moments(dd, m0, Sigma0, T)
    assert_allclose(traj.means[-1], m_ode, rtol=1e-6, atol=1e-6 * (1.0 + np.linalg.norm(m_ode)))
    assert_allclose(traj.covariances[-1], S_ode, rtol=1e-6, atol=1e-6 * (1.0 + np.linalg.norm(S_ode)))


def test_weyl_symbol_damped(damped):
    symbol = weyl_symbol(damped, [1.0, 0.0], 2.0)
    assert symbol.amplitude == pytest.approx(math.exp(-0.5 * (1.0 - math.exp(-4.0))))
    assert_allclose(symbol.evolved_z, [math.exp(-2.0), 0.0])


def test_decoherence_factor_damped(damped):
    split = invariant_splitting(damped.Z)
    assert decoherence_factor(damped, split, [1.0, 0.0]) == pytest.approx(math.exp(-0.5))


def test_decoherence_factor_trivial_on_center(oscillator):
    split = invariant_splitting(oscillator.Z)
    assert decoherence_factor(oscillator, split, [0.3, -0.7]) == 1.0


@pytest.mark.parametrize("t", [0.5, 2.0, 10.0])
def test_eid_defect_damped_closed_form(damped, t):
    split = invariant_splitting(damped.Z)
    expected = abs(math.exp(-0.5 * (1.0 - math.exp(-2.0 * t))) - math.exp(-0.5))
    assert eid_defect(damped, split, [1.0, 0.0], t) == pytest.approx(expected, abs=1e-10)


def test_eid_defect_vanishes_on_pure_rotation(oscillator):
    split = invariant_splitting(oscillator.Z)
    assert eid_defect(oscillator, split, [1.0, 2.0], 3.0) == pytest.approx(0.0, abs=1e-12)


def test_ergodic_mean_damped(damped):
    result = ergodic_mean(damped, [1.0, 0.0], 2.0 * np.eye(2), T=1000.0)
    assert result.mean_deviation <= 1e-2
    assert result.covariance_deviation <= 1e-2
    assert_allclose(result.predicted_covariance, np.eye(2), atol=1e-12)


def test_ergodic_mean_oscillator(oscillator):
    T = 1000.0
    result = ergodic_mean(oscillator, [1.0, 0.0], np.eye(2), T=T, n_steps=10000)
    assert np.linalg.norm(result.avg_mean) <= 2.0 / T
    assert_allclose(result.predicted_mean, [0.0, 0.0], atol=1e-12)


def test_ergodic_mean_rejects_bad_horizon(damped):
    with pytest.raises(InvalidModel):
        ergodic_mean(damped, [0.0, 0.0], np.eye(2), T=0.0)


def test_kms_function():
    x = np.array([1.5, 3.0, 10.0])
    assert_allclose(kms_function(x), np.sqrt(x ** 2 - 1.0), rtol=1e-12)
    with pytest.raises(NotFaithful):
        kms_function(1.0)


def test_kms_gap_thermal():
    result = kms_gap_condition(-np.eye(2), 3.0 * np.eye(2))
    assert result.holds
    assert result.witness_min_eig == pytest.approx(2.0 * math.sqrt(8.0))


def test_kms_gap_requires_faithful():
    with pytest.raises(NotFaithful):
        kms_gap_condition(-np.eye(2), np.eye(2))


def test_kms_gap_empty_block():
    result = kms_gap_condition(np.zeros((0, 0)), np.zeros((0, 0)))
    assert result.holds
    assert result.witness_min_eig == math.inf


def test_finite_gap_diagonal():
    gap = semigroup_gap_finite(np.diag([-1.0, -3.0]), np.zeros((2, 2)))
    assert gap.gap_form == pytest.approx(1.0)
    assert gap.gap_decay == pytest.approx(1.0, abs=1e-6)


def test_finite_gap_with_projection():
    E = np.diag([1.0, 0.0])
    gap = semigroup_gap_finite(-(np.eye(2) - E), E)
    assert gap.gap_form == pytest.approx(1.0)
    assert gap.gap_decay == pytest.approx(1.0, abs=1e-6)


def test_finite_gap_full_projection():
    gap = semigroup_gap_finite(np.zeros((2, 2)), np.eye(2))
    assert gap.gap_form == math.inf


@pytest.mark.parametrize("A,E", [
    (np.eye(2), np.zeros((2, 2))),
    (-np.eye(2), 2.0 * np.eye(2)),
    ([[-1.0, 0.0], [0.0, -2.0]], 0.5 * np.ones((2, 2))),
])
def test_finite_gap_rejects(A, E):
    with pytest.raises(ContractionError):
        semigroup_gap_finite(A, E)


def test_decay_rate_estimate():
    assert decay_rate_estimate(-np.eye(2)) == pytest.approx(1.0)
    assert decay_rate_estimate(np.zeros((0, 0))) == math.inf


def test_planted_moments_relax(rng):
    planted = planted_model(rng, [], 2)
    d = planted.dd.d
    dd = planted.dd
    traj = evolve_moments(dd, np.zeros(2 * d), np.eye(2 * d), [0.0, 80.0 / decay_rate_estimate(dd.Z)])
    assert_allclose(dd.Z.T @ traj.means[-1] + dd.zeta, 0.0, atol=1e-7 * (1.0 + np.linalg.norm(dd.zeta)))
