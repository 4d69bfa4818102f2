import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats as sps

from icpricing.choice_models import (
    NO_PURCHASE,
    TABLE_CONFIGS,
    LinearDemandParams,
    MixedLogitParams,
    MnlParams,
    Observations,
    UniformPriceLaw,
    linear_demand_expected_revenue,
    linear_demand_fit,
    linear_demand_probs,
    linear_demand_sample_observations,
    mixed_logit_probs,
    mixed_logit_sample_dataset,
    mixed_logit_sample_observations,
    mnl_expected_revenue,
    mnl_fit,
    mnl_gradient,
    mnl_hessian,
    mnl_loglik,
    mnl_optimal_prices,
    mnl_probs,
    mnl_sample_dataset,
    mnl_sample_observations,
    params_from_config,
    params_to_config,
)
from icpricing.instance import ValidationError


def brute_force_price(A: float, beta: float, hi: float = 10.0, step: float = 1e-6) -> float:
    """Best common price on the grid ``step, 2 step, ..., hi``."""
    best_p, best_r = 0.0, -1.0
    n = int(round(hi / step))
    for start in range(0, n, 1_000_000):
        p = step * np.arange(start + 1, min(start + 1_000_000, n) + 1)
        r = p * A * np.exp(-beta * p) / (1 + A * np.exp(-beta * p))
        k = int(np.argmax(r))
        if r[k] > best_r:
            best_p, best_r = float(p[k]), float(r[k])
    return best_p


# ----------------------------------------------------------------------------
# Parameters
# ----------------------------------------------------------------------------

@pytest.mark.parametrize("alpha, beta", [([0.0], 0.0), ([0.0], -1.0), ([np.inf], 1.0)])
def test_mnl_params_validation(alpha, beta):
    with pytest.raises(ValidationError):
        MnlParams(alpha, beta)


def test_mixed_params_validation():
    with pytest.raises(ValidationError):
        MixedLogitParams([0.6, 0.6], [[0.0], [0.0]], [1.0, 1.0])
    with pytest.raises(ValidationError):
        MixedLogitParams([0.5, 0.5], [[0.0], [0.0]], [1.0, 0.0])


def test_price_law_validation():
    with pytest.raises(ValidationError):
        UniformPriceLaw(3.0, 2.0)


# ----------------------------------------------------------------------------
# MNL probabilities and revenue
# ----------------------------------------------------------------------------

def test_mnl_probs_half():
    assert mnl_probs(MnlParams([0.0], 3.0), [0.0]) == pytest.approx([0.5, 0.5])


def test_mnl_probs_large_beta():
    assert mnl_probs(MnlParams([0.0], 100.0), [10.0])[-1] == pytest.approx(1.0, abs=1e-6)


def test_mnl_probs_symmetry():
    pr = mnl_probs(MnlParams([1.0, 1.0], 0.5), [2.0, 2.0])
    assert pr[0] == pr[1]


@given(st.lists(st.floats(-50, 50), min_size=1, max_size=8), st.floats(1e-3, 50), st.floats(0, 100))
def test_mnl_probs_sum_to_one(alpha, beta, price):
    pr = mnl_probs(MnlParams(alpha, beta), np.full(len(alpha), price))
    assert np.all(pr >= 0)
    assert abs(pr.sum() - 1.0) <= 1e-12


def test_mnl_revenue_zero_price():
    assert mnl_expected_revenue(MnlParams([0.0], 1.0), [0.0]) == 0.0


def test_mnl_revenue_symmetric_two_products():
    two = mnl_expected_revenue(MnlParams([0.3, 0.3], 1.0), [2.0, 2.0])
    e = math.exp(0.3 - 2.0)
    assert two == pytest.approx(2 * 2.0 * e / (1 + 2 * e))


def test_mnl_revenue_formula():
    params = MnlParams([0.5, -1.0, 2.0], 0.7)
    p = np.array([1.0, 3.0, 2.5])
    e = np.exp(params.alpha - params.beta * p)
    assert mnl_expected_revenue(params, p) == pytest.approx(float(np.sum(p * e) / (1 + e.sum())), rel=1e-14)


# ----------------------------------------------------------------------------
# Sampling
# ----------------------------------------------------------------------------

def test_sampling_is_deterministic():
    params = MnlParams([0.0, 1.0], 0.5)
    law = UniformPriceLaw(1.0, 3.0)
    a = mnl_sample_dataset(params, law, 50, seed=4)
    b = mnl_sample_dataset(params, law, 50, seed=4)
    assert a == b
    assert not a == mnl_sample_dataset(params, law, 50, seed=5)


def test_sampling_customer_streams_are_prefix_stable():
    params = MnlParams([0.0, 1.0], 0.5)
    law = UniformPriceLaw(1.0, 3.0)
    short = mnl_sample_observations(params, law, 10, seed=1, instance=(2, 3))
    long = mnl_sample_observations(params, law, 30, seed=1, instance=(2, 3))
    assert np.array_equal(short.prices, long.prices[:10])
    assert np.array_equal(short.choices, long.choices[:10])


def test_sampling_uniform_shares():
    # prices barely matter at this price sensitivity, so every option is equally likely
    n, m = 3, 20000
    obs = mnl_sample_observations(MnlParams(np.zeros(n), 1e-12), UniformPriceLaw(1.0, 2.0), m, seed=0)
    counts = np.bincount(np.where(obs.choices == NO_PURCHASE, n, obs.choices), minlength=n + 1)
    share = counts / m
    se = math.sqrt(0.25 * 0.75 / m)
    assert np.all(np.abs(share - 0.25) < 3 * se)


def test_sampling_prices_follow_law():
    lo, hi = TABLE_CONFIGS["high_utility"][1]
    obs = mnl_sample_observations(MnlParams(np.full(10, 2.0), 0.5), UniformPriceLaw(lo, hi), 200, seed=2)
    assert obs.prices.shape == (200, 10)
    assert obs.prices.min() >= lo and obs.prices.max() <= hi


def test_to_dataset_drops_walkaways():
    obs = Observations(np.array([[1.0], [2.0], [3.0]]), np.array([0, NO_PURCHASE, 0]))
    ds = obs.to_dataset()
    assert ds.m == 2 and ds.dropped == 1


# ----------------------------------------------------------------------------
# MNL estimation
# ----------------------------------------------------------------------------

def _obs(seed=0, m=300):
    return mnl_sample_observations(MnlParams([0.5, -0.5, 0.0], 0.8), UniformPriceLaw(0.5, 3.0), m, seed)


@pytest.mark.parametrize("k", range(20))
def test_gradient_matches_finite_differences(k):
    obs = _obs(seed=k)
    rng = np.random.default_rng(100 + k)
    theta = rng.uniform(-2, 2, obs.n + 1)
    h = 1e-6
    fd = np.array([(mnl_loglik(theta + h * e, obs) - mnl_loglik(theta - h * e, obs)) / (2 * h)
                   for e in np.eye(obs.n + 1)])
    assert np.max(np.abs(fd - mnl_gradient(theta, obs))) < 1e-5


def test_hessian_matches_gradient_differences():
    obs = _obs()
    theta = np.array([0.2, -0.1, 0.4, 0.6])
    h = 1e-6
    fd = np.column_stack([(mnl_gradient(theta + h * e, obs) - mnl_gradient(theta - h * e, obs)) / (2 * h)
                          for e in np.eye(4)])
    assert np.allclose(fd, mnl_hessian(theta, obs), atol=1e-4)


def test_fit_consistency_large_sample():
    truth = MnlParams(np.linspace(-1, 1, 4), 1.0)
    obs = mnl_sample_observations(truth, UniformPriceLaw(1.0, 3.0), 20000, seed=9)
    fit = mnl_fit(obs)
    assert fit.ok
    assert np.max(np.abs(fit.theta - np.append(truth.alpha, truth.beta))) < 0.1


def test_fit_degenerate_all_walkaways():
    obs = Observations(np.ones((5, 2)), np.full(5, NO_PURCHASE))
    fit = mnl_fit(obs)
    assert fit.status == "degenerate" and fit.params is None


def test_fit_unchosen_product():
    obs = Observations(np.array([[1.0, 2.0], [2.0, 1.0], [1.5, 1.5], [1.0, 1.0]]),
                       np.array([0, 0, NO_PURCHASE, 0]))
    assert mnl_fit(obs).status == "separated"


def test_fit_drop_unchosen_covers_chosen_products():
    truth = MnlParams([1.0, -30.0, 0.5], 1.0)
    obs = mnl_sample_observations(truth, UniformPriceLaw(1.0, 3.0), 20000, seed=1)
    assert not np.any(obs.choices == 1)
    fit = mnl_fit(obs, drop_unchosen=True)
    assert fit.ok
    assert np.array_equal(fit.products, [0, 2])
    assert fit.theta == pytest.approx([1.0, 0.5, 1.0], abs=0.1)


def test_fit_loglik_increases():
    fit = mnl_fit(_obs())
    assert fit.ok
    assert np.all(np.diff(fit.loglik_path) >= 0)


# ----------------------------------------------------------------------------
# Optimal MNL prices
# ----------------------------------------------------------------------------

def test_optimal_price_reference_value():
    p, _ = mnl_optimal_prices(MnlParams([0.0], 1.0))
    assert p[0] == pytest.approx(1.27846, abs=1e-5)


@pytest.mark.parametrize("A, beta", [(1.0, 1.0), (3.0, 0.5), (0.2, 2.0)])
def test_optimal_price_matches_grid(A, beta):
    p, _ = mnl_optimal_prices(MnlParams([math.log(A)], beta))
    assert abs(p[0] - brute_force_price(A, beta)) < 1e-4


def test_optimal_price_beta_scaling():
    alpha = [0.3, -0.2]
    p1, _ = mnl_optimal_prices(MnlParams(alpha, 0.5))
    p2, _ = mnl_optimal_prices(MnlParams(alpha, 1.5))
    assert p2[0] == pytest.approx(p1[0] / 3, rel=1e-6)


def test_optimal_prices_are_local_maximum():
    params = MnlParams([1.0, 2.0, -1.0], 0.5)
    p, rev = mnl_optimal_prices(params)
    assert np.all(p == p[0])
    assert rev == pytest.approx(mnl_expected_revenue(params, p))
    for d in (-0.01, 0.01):
        assert rev >= mnl_expected_revenue(params, p + d)


# ----------------------------------------------------------------------------
# Mixed logit
# ----------------------------------------------------------------------------

def test_mixed_identical_classes_equal_mnl():
    mnl = MnlParams([0.2, -0.4], 0.7)
    mix = MixedLogitParams([0.3, 0.7], [mnl.alpha, mnl.alpha], [0.7, 0.7])
    p = [1.5, 2.5]
    assert mixed_logit_probs(mix, p) == pytest.approx(mnl_probs(mnl, p), abs=1e-15)


def test_mixed_degenerate_weight():
    mix = MixedLogitParams([1.0, 0.0], [[0.2, -0.4], [5.0, 5.0]], [0.5, 2.0])
    p = [1.0, 2.0]
    assert mixed_logit_probs(mix, p) == pytest.approx(mnl_probs(MnlParams([0.2, -0.4], 0.5), p))


@given(st.floats(0, 1), st.lists(st.floats(-5, 5), min_size=4, max_size=4), st.floats(0, 10))
def test_mixed_probs_sum_to_one(w, alphas, price):
    mix = MixedLogitParams([w, 1 - w], np.reshape(alphas, (2, 2)), [0.5, 2.0])
    assert abs(mixed_logit_probs(mix, [price, price]).sum() - 1.0) <= 1e-12


def test_mixed_identical_classes_sample_like_mnl():
    alpha = np.array([0.0, -0.5])
    law = UniformPriceLaw(0.5, 1.5)
    m = 6000
    mix = mixed_logit_sample_observations(MixedLogitParams([0.5, 0.5], [alpha, alpha], [1.0, 1.0]), law, m, seed=3)
    mnl = mnl_sample_observations(MnlParams(alpha, 1.0), law, m, seed=4)
    table = np.array([np.bincount(np.where(o.choices < 0, 2, o.choices), minlength=3) for o in (mix, mnl)])
    assert sps.chi2_contingency(table).pvalue > 0.001


def test_mixed_sample_dataset_low_utility():
    lo, hi = TABLE_CONFIGS["low_utility"][1]
    mix = MixedLogitParams([0.5, 0.5], np.full((2, 10), -1.0), [0.5, 2.0])
    ds = mixed_logit_sample_dataset(mix, UniformPriceLaw(lo, hi), 200, seed=0)
    assert ds.n == 10 and ds.m + ds.dropped == 200


# ----------------------------------------------------------------------------
# Linear demand
# ----------------------------------------------------------------------------

def test_linear_direct_formula():
    pr = linear_demand_probs(LinearDemandParams([0.5], [0.1]), [2.0])
    assert pr == pytest.approx([0.3, 0.7])


def test_linear_clamps_negative_scores():
    pr, clamped = linear_demand_probs(LinearDemandParams([0.1, 0.4], [1.0, 0.0]), [1.0, 1.0], return_clamped=True)
    assert pr == pytest.approx([0.0, 0.4, 0.6])
    assert clamped


def test_linear_renormalises():
    pr = linear_demand_probs(LinearDemandParams([0.6, 0.6], [0.0, 0.0]), [1.0, 1.0])
    assert pr == pytest.approx([0.5, 0.5, 0.0])


def test_linear_availability_zeroes_product():
    params = LinearDemandParams([0.3, 0.3], [0.0, 0.0], gamma=[[0, 0.1], [0.1, 0]])
    pr = linear_demand_probs(params, [1.0, 1.0], [True, False])
    assert pr == pytest.approx([0.4, 0.0, 0.6])
    assert linear_demand_expected_revenue(params, [2.0, 1.0], [True, False]) == pytest.approx(0.8)


def test_linear_fit_recovers_noiseless_coefficients():
    truth = LinearDemandParams([0.3, 0.25], [0.05, 0.04], [[0, 0.01], [0.02, 0]], [[0, 0.05], [0.03, 0]])
    obs = linear_demand_sample_observations(truth, UniformPriceLaw(1.0, 3.0), 200, seed=0, availability_rate=0.7)
    targets = np.array([linear_demand_probs(truth, p, a)[:-1] for p, a in zip(obs.prices, obs.availability)])
    fit = linear_demand_fit(obs, targets)
    assert fit.ok
    for name in ("alpha", "beta", "beta_cross", "gamma"):
        assert np.allclose(getattr(fit.params, name), getattr(truth, name), atol=1e-6)


def test_linear_fit_pure_noise_near_zero():
    rng = np.random.default_rng(0)
    m = 20000
    obs = Observations(rng.uniform(1, 3, (m, 1)), np.zeros(m, dtype=np.intp))
    noise = rng.normal(0, 1, (m, 1))
    fit = linear_demand_fit(obs, noise)
    X = np.column_stack([np.ones(m), obs.prices[:, 0]])
    se = np.sqrt(np.diag(np.linalg.inv(X.T @ X)))
    assert abs(fit.params.alpha[0]) < 3 * se[0]
    assert abs(fit.params.beta[0]) < 3 * se[1]


def test_linear_fit_singular_design():
    obs = Observations(np.ones((10, 1)) * 2.0, np.zeros(10, dtype=np.intp))
    assert linear_demand_fit(obs).status == "rank_deficient"


# ----------------------------------------------------------------------------
# Configuration text
# ----------------------------------------------------------------------------

@pytest.mark.parametrize("params", [
    MnlParams([0.1, -2.0], 0.5),
    MixedLogitParams([0.25, 0.75], [[0.0, 1.0], [-1.0, 0.3]], [0.5, 2.0]),
    LinearDemandParams([0.3, 0.2], [0.1, 0.05], [[0, 0.01], [0.02, 0]], [[0, 0.1], [0.2, 0]]),
])
def test_config_round_trip(params):
    back = params_from_config(params_to_config(params))
    assert type(back) is type(params)
    for name in params.__dataclass_fields__:
        assert np.array_equal(getattr(back, name), getattr(params, name))


def test_config_unknown_section():
    with pytest.raises(ValidationError):
        params_from_config("[other]\nx = 1\n")
