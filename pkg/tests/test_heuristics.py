import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_instance
from icpricing.evaluator import total_revenue
from icpricing.exact import solve_g0_branch_and_bound, solve_g0_enumeration
from icpricing.heuristics import (
    baseline_average_prices,
    baseline_random_historical,
    conservative_prices,
    cutoff_prices,
    cutoff_star,
    cutoff_tight_reference_prices,
    gen_conservative_tight_instance,
    gen_cutoff_tight_instance,
    gen_random_price_tight_instance,
    guarantee_report,
    lp_relaxation_prices,
)
from icpricing.instance import TransactionDataset, ValidationError, stats


def single_product(values):
    return TransactionDataset.from_rows([[v] for v in values], [0] * len(values))


def test_conservative_example_one(ex1):
    sol = conservative_prices(ex1)
    assert np.array_equal(sol.prices, [1, 3])
    assert sol.g_value == pytest.approx(3)


def test_conservative_tight_instance():
    ds = gen_conservative_tight_instance(10, 1.0, 2.0)
    sol = conservative_prices(ds)
    assert np.array_equal(sol.prices, [1.0])
    assert sol.g_value == pytest.approx(10)
    assert solve_g0_branch_and_bound(ds).g_value == pytest.approx(18)


def test_conservative_single_customer():
    ds = TransactionDataset.from_rows([[4, 6]], [1])
    sol = conservative_prices(ds)
    assert sol.prices[1] == 6 and sol.g_value == pytest.approx(6)


def test_lp_relaxation_example_one(ex1):
    sol = lp_relaxation_prices(ex1)
    assert sol.bound >= 4.0 - 1e-9
    assert sol.strict_total == pytest.approx(total_revenue(ex1, sol.prices, "strict"))


def test_lp_relaxation_constant_prices():
    ds = TransactionDataset.from_rows([[3, 7]] * 3, [0, 1, 0])
    assert lp_relaxation_prices(ds).g_value <= 13 + 1e-9


@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(1, 3))
def test_lp_bound_dominates(seed, m, n):
    ds = random_instance(np.random.default_rng(seed), m, n)
    assert lp_relaxation_prices(ds).bound >= solve_g0_enumeration(ds).g_value - 1e-7


@pytest.mark.parametrize("values, pstar", [
    ((1, 2, 3, 10), 10.0),
    ((1, 3, 1), 3.0),
    ((4, 4, 4), 4.0),
])
def test_cutoff_star(values, pstar):
    assert cutoff_star(single_product(values))[0] == pstar


def test_cutoff_star_example_one(ex1):
    assert cutoff_star(ex1) == (3.0, 1)


def test_cutoff_example_one(ex1):
    sol = cutoff_prices(ex1)
    assert np.array_equal(sol.prices, [3, 3])
    assert sol.g_value == pytest.approx(3)
    assert sol.strict_total == 0.0


def test_cutoff_single_product():
    sol = cutoff_prices(single_product((1, 2, 3, 10)))
    assert np.array_equal(sol.prices, [10])
    assert sol.g_value == pytest.approx(10)


def test_cutoff_identical_customers():
    ds = TransactionDataset.from_rows([[2, 5, 3]] * 4, [1] * 4)
    assert np.array_equal(cutoff_prices(ds).prices, [5, 5, 5])


def test_average_single_product():
    sol = baseline_average_prices(single_product((1, 1, 2)))
    assert sol.prices == pytest.approx([4 / 3])
    assert sol.g_value == pytest.approx(4 / 3)


def test_average_example_one(ex1):
    sol = baseline_average_prices(ex1)
    assert sol.prices == pytest.approx([4 / 3, 8 / 3])
    assert sol.g_value == pytest.approx(total_revenue(ex1, [4 / 3, 8 / 3], "closure"))


def test_average_constant_prices():
    ds = TransactionDataset.from_rows([[3, 7]] * 3, [0, 1, 0])
    assert baseline_average_prices(ds).g_value == pytest.approx(13)


def test_random_historical_tight_instance():
    ds = gen_random_price_tight_instance(6)
    _, expected = baseline_random_historical(ds, seed=1)
    assert expected == pytest.approx(1.0)
    assert total_revenue(ds, np.ones(6), "closure") == pytest.approx(6)


def test_random_historical_example_one(ex1):
    sol, expected = baseline_random_historical(ex1, seed=0)
    rows = [total_revenue(ex1, r, "closure") for r in ex1.prices]
    assert expected == pytest.approx(sum(rows) / 3)
    assert sol.g_value == pytest.approx(rows[sol.info["row"]])


def test_random_historical_single_row():
    ds = TransactionDataset.from_rows([[2, 3]], [0])
    sol, expected = baseline_random_historical(ds, seed=5)
    assert sol.g_value == expected == pytest.approx(2)


def test_random_historical_seeded():
    ds = random_instance(np.random.default_rng(0), 10, 3)
    a, _ = baseline_random_historical(ds, seed=11)
    b, _ = baseline_random_historical(ds, seed=11)
    assert a.info["row"] == b.info["row"]


@pytest.mark.parametrize("plow, pmax, cons, cut", [
    (1.0, 3.0, 1 / 3, 1 / (1 + math.log(3))),
    (2.0, 2.0, 1.0, 1.0),
    (1.0, math.e, 1 / math.e, 0.5),
])
def test_guarantee_report(plow, pmax, cons, cut):
    rep = guarantee_report(single_product((plow, pmax)))
    assert rep.conservative_ratio == pytest.approx(cons)
    assert rep.cutoff_ratio == pytest.approx(cut)


def test_guarantee_report_example_value():
    assert guarantee_report(single_product((1.0, 3.0))).cutoff_ratio == pytest.approx(0.4766, abs=1e-4)


@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(1, 3))
def test_guarantees_hold(seed, m, n):
    ds = random_instance(np.random.default_rng(seed), m, n, 0.5, 10)
    g = solve_g0_enumeration(ds).g_value
    rep = guarantee_report(ds)
    assert conservative_prices(ds).g_value >= rep.conservative_ratio * g - 1e-9
    assert cutoff_prices(ds).g_value >= rep.cutoff_ratio * g - 1e-9


def test_cutoff_tight_instance_cutoff_earns_m():
    m, k, d = 30, 5, 1e-4
    ds = gen_cutoff_tight_instance(m, k, d)
    assert ds.n == m - k + 1
    assert cutoff_prices(ds).g_value == pytest.approx(m)
    ref = total_revenue(ds, cutoff_tight_reference_prices(m, k, d), "closure")
    harmonic = sum(1 / j for j in range(k + 1, m + 1))
    assert ref == pytest.approx(m * (1 + harmonic), rel=1e-3)


def test_cutoff_tight_small_matches_exact():
    ds = gen_cutoff_tight_instance(4, 2, 0.01)
    g = solve_g0_branch_and_bound(ds).g_value
    ref = total_revenue(ds, cutoff_tight_reference_prices(4, 2, 0.01), "closure")
    assert ref <= g + 1e-9
    assert g == pytest.approx(4 * (1 + 1 / 3 + 1 / 4), rel=1e-2)


@pytest.mark.parametrize("args", [(3, 0, 0.1), (3, 4, 0.1), (3, 1, 0.0), (3, 1, 0.6)])
def test_cutoff_tight_rejects_bad_parameters(args):
    with pytest.raises(ValidationError):
        gen_cutoff_tight_instance(*args)


def test_conservative_tight_rejects_bad_parameters():
    with pytest.raises(ValidationError):
        gen_conservative_tight_instance(5, 2.0, 1.0)


def test_stats_bounds(ex1):
    s = stats(ex1)
    assert (s.plow, s.pmax) == (1.0, 3.0)
