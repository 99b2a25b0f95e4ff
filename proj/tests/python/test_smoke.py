import math

import pytest

import prbox

EXPERIMENT = dict(alpha=math.pi, alpha_prime=math.pi / 2, beta=5 * math.pi / 4, beta_prime=3 * math.pi / 4)


def settings(r):
    return prbox.MeasurementSettings(r=r, **EXPERIMENT)


@pytest.fixture
def state():
    return prbox.GaussianTwoModeState(0.75, 1.25)


def test_state_validation():
    with pytest.raises(ArithmeticError, match="gamma > delta"):
        prbox.GaussianTwoModeState(1.25, 0.75)
    with pytest.raises(ValueError):
        prbox.GaussianTwoModeState(-1.0, 2.0)


def test_covariance_is_half_a(state):
    sigma = prbox.covariance_from_state(state)
    assert sigma[0][0] == pytest.approx(0.5 / 0.75**2)
    assert sigma[0][2] == pytest.approx(0.5 / 1.25**2)
    assert sigma[1][3] == pytest.approx(sigma[3][1])


def test_orthant_identity():
    bg = prbox.BivariateGaussian(1.0, 2.0, 0.3)
    assert prbox.quadrant_probability(bg, 1, 1, 0.0) == pytest.approx(0.25 + math.asin(0.3) / (2 * math.pi), abs=1e-10)


def test_bell_and_fidelity(state):
    assert prbox.bell_S(state, settings(0.0)) <= 2.0
    s2 = prbox.bell_S(state, settings(2.0))
    assert s2 > 2 * math.sqrt(2)
    assert prbox.and_gate_success(state, settings(2.0)) == pytest.approx((4 + s2) / 8, abs=1e-9)
    assert prbox.pr_fidelity(2.0) == 0.75


def test_table_and_marginals(state):
    t = prbox.postselected_probs(state, math.pi, 5 * math.pi / 4, 0.5)
    assert t.p_pp + t.p_pm + t.p_mp + t.p_mm == pytest.approx(1.0, abs=1e-12)
    assert 0.0 < t.kept_fraction < 1.0
    assert prbox.no_signaling_report(state, settings(0.5))["max_deviation"] < 1e-9


def test_sweep(state):
    curve = prbox.sweep_beta(state, math.pi, 1.0, [0.0, math.pi / 2, math.pi])
    assert [b for b, _ in curve] == [0.0, math.pi / 2, math.pi]
    assert all(-1.0 <= e <= 1.0 for _, e in curve)


def test_monte_carlo(state):
    a = prbox.simulate_counts(state, math.pi, 5 * math.pi / 4, 0.5, 100_000, 3)
    b = prbox.simulate_counts(state, math.pi, 5 * math.pi / 4, 0.5, 100_000, 3)
    assert a.n_pp == b.n_pp and a.n_discarded == b.n_discarded
    est = prbox.estimate_probabilities(a)
    exact = prbox.correlation_E(prbox.postselected_probs(state, math.pi, 5 * math.pi / 4, 0.5))
    assert abs(est["E"] - exact) < 4 * est["E_se"]
    s, se = prbox.mc_bell_S(state, settings(1.5), 200_000, 1)
    assert abs(s - prbox.bell_S(state, settings(1.5))) < 4 * se


def test_lens_planning():
    assert prbox.frft_distance(3 * math.pi / 4, 15.0) == pytest.approx(25.6, abs=0.05)
    plan = prbox.plan_lens_system(5 * math.pi / 4, [25.0, 15.0], 2, 1e-9)
    assert [s.focal_cm for s in plan.stages] == [25.0, 15.0]
    with pytest.raises(ValueError):
        prbox.plan_lens_system(math.pi, [], 2, 1e-6)


def test_optimizer(state):
    res = prbox.maximize_S(state, 1.0, math.pi / 4, 1e-3)
    assert res.objective == pytest.approx(prbox.bell_S(state, res.settings), abs=1e-8)
    tuned = prbox.tune_r(state, settings(0.0), 0.93, 3.0)
    assert tuned.r <= 3.0
    assert tuned.fidelity == pytest.approx(0.93, abs=1e-3)
