import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import example_one, random_instance
from icpricing.evaluator import (
    NO_PURCHASE,
    check_ic_membership,
    customer_revenues,
    customer_worst_case,
    dplp_oracle,
    dual_certificate,
    no_purchase_feasible,
    normalize_above_pmax,
    product_feasible,
    total_revenue,
    total_worst_case,
    witness_valuation,
)
from icpricing.instance import TransactionDataset, ValidationError

LP = (1.2, 2.3)


@pytest.mark.parametrize(
    "i, p, sem, expected",
    [(0, LP, "strict", True), (0, (1, 2), "closure", False), (0, (1, 2), "strict", True)],
)
def test_no_purchase_feasible(ex1, i, p, sem, expected):
    assert no_purchase_feasible(ex1, i, p, sem) is expected


@pytest.mark.parametrize(
    "i, j, p, sem, expected",
    [(1, 0, LP, "strict", True), (1, 0, (1, 2), "closure", False), (1, 1, (9, 0.5), "closure", True)],
)
def test_product_feasible(ex1, i, j, p, sem, expected):
    assert product_feasible(ex1, i, j, p, sem) is expected


def test_chosen_product_always_feasible():
    rng = np.random.default_rng(3)
    ds = random_instance(rng, 6, 4)
    for _ in range(20):
        p = rng.uniform(0, 12, 4)
        for i in range(ds.m):
            for sem in ("strict", "closure"):
                assert product_feasible(ds, i, int(ds.choices[i]), p, sem)


@pytest.mark.parametrize(
    "i, p, sem, revenue, purchased",
    [(1, LP, "strict", 1.2, 0), (2, (1, 2), "closure", 1.0, 0), (0, (1, 2), "strict", 0.0, None)],
)
def test_customer_worst_case(ex1, i, p, sem, revenue, purchased):
    ev = customer_worst_case(ex1, i, p, sem)
    assert ev.revenue == pytest.approx(revenue, abs=1e-12)
    assert ev.purchased == purchased


@pytest.mark.parametrize("p, sem, total", [(LP, "strict", 1.2), ((1, 2), "closure", 4.0), ((1, 2), "strict", 1.0)])
def test_total_revenue_example(ex1, p, sem, total):
    assert total_revenue(ex1, p, sem) == pytest.approx(total, abs=1e-9)
    assert total_worst_case(ex1, p, sem)[0] == pytest.approx(total, abs=1e-9)


def test_bad_semantics(ex1):
    with pytest.raises(ValueError):
        total_revenue(ex1, (1, 2), "lenient")


def test_ties_go_to_lowest_index():
    ds = TransactionDataset(np.array([[5.0, 5.0, 5.0]]), np.array([2]))
    ev = customer_worst_case(ds, 0, (3.0, 3.0, 3.0), "strict")
    assert ev.purchased == 0 and ev.revenue == 3.0
    _, bought = customer_revenues(ds, (3.0, 3.0, 3.0), "strict")
    assert bought[0] == 0


def _brute_force(ds, i, p, sem):
    """Per-customer revenue by direct scan of the option rules."""
    if no_purchase_feasible(ds, i, p, sem):
        return 0.0
    return min(p[j] for j in range(ds.n) if product_feasible(ds, i, j, p, sem))


@given(st.integers(0, 10_000))
def test_vectorised_matches_scalar(seed):
    rng = np.random.default_rng(seed)
    ds = random_instance(rng, int(rng.integers(1, 6)), int(rng.integers(1, 5)))
    p = rng.uniform(0, 11, ds.n)
    for sem in ("strict", "closure"):
        rev, _ = customer_revenues(ds, p, sem)
        for i in range(ds.m):
            assert rev[i] == _brute_force(ds, i, p, sem)


@given(st.integers(0, 10_000))
def test_closure_dominates_strict(seed):
    rng = np.random.default_rng(seed)
    ds = random_instance(rng, 5, 3)
    p = rng.uniform(0, 11, 3)
    assert total_revenue(ds, p, "closure") >= total_revenue(ds, p, "strict") - 1e-12


@given(st.integers(0, 10_000))
def test_strict_matches_valuation_lp(seed):
    """Two routes to the same worst case: option screening and the LP over valuations."""
    rng = np.random.default_rng(seed)
    ds = random_instance(rng, 3, int(rng.integers(1, 4)))
    p = np.round(rng.uniform(0, 11, ds.n), 1)
    for i in range(ds.m):
        lp_value = dplp_oracle(ds, i, p)
        assert lp_value == pytest.approx(customer_worst_case(ds, i, p, "strict").revenue, abs=1e-7)


@pytest.mark.parametrize("backend", ["simplex", "highs"])
def test_valuation_lp_examples(ex1, backend):
    assert dplp_oracle(ex1, 1, LP, backend) == pytest.approx(1.2, abs=1e-9)
    assert dplp_oracle(ex1, 0, LP, backend) == pytest.approx(0.0, abs=1e-9)
    single = TransactionDataset(np.array([[5.0]]), np.array([0]))
    assert dplp_oracle(single, 0, (4.0,), backend) == pytest.approx(4.0, abs=1e-9)


def test_dual_certificate_examples(ex1):
    cert = dual_certificate(ex1, 1, LP)
    assert cert.tau == pytest.approx(1.2)
    np.testing.assert_array_equal(cert.mu, [0.0, 0.0])
    assert cert.objective == pytest.approx(1.2)
    single = TransactionDataset(np.array([[5.0]]), np.array([0]))
    cert = dual_certificate(single, 0, (4.0,))
    assert cert.tau == 4.0 and cert.mu[0] == 0.0
    cert = dual_certificate(ex1, 0, LP)
    assert cert.objective == 0.0


@given(st.integers(0, 10_000))
def test_dual_certificate_objective_matches(seed):
    rng = np.random.default_rng(seed)
    ds = random_instance(rng, 4, 4)
    p = rng.uniform(0, 11, 4)
    for i in range(ds.m):
        cert = dual_certificate(ds, i, p)
        assert cert.objective == pytest.approx(customer_worst_case(ds, i, p, "strict").revenue, abs=1e-12)
        assert np.all(cert.mu >= 0)


def test_witness_examples(ex1):
    np.testing.assert_array_equal(witness_valuation(ex1, 0, NO_PURCHASE, LP), [1.0, 0.0])
    np.testing.assert_array_equal(witness_valuation(ex1, 1, 0, LP), [2.0, 3.0])
    assert witness_valuation(ex1, 1, 0, (3.5, 2.3)) is None


def test_membership_examples(ex1):
    assert check_ic_membership(ex1, 0, (1.0, 0.0))
    assert not check_ic_membership(ex1, 0, (0.5, 0.0))


def test_witnesses_are_members():
    rng = np.random.default_rng(11)
    for _ in range(30):
        ds = random_instance(rng, 3, 3)
        p = np.round(rng.uniform(0, 11, 3), 1)
        for i, option in itertools.product(range(ds.m), [NO_PURCHASE, 0, 1, 2]):
            v = witness_valuation(ds, i, option, p)
            if v is not None:
                assert check_ic_membership(ds, i, v, against=(option, p))


@pytest.mark.parametrize(
    "P, c, p, expected",
    [
        ([[1.0, 2.0, 3.0]], [2], (1, 2, 99), (1, 2, 2)),
        ([[1.0, 2.0, 3.0]], [2], (1, 2, 2.5), (1, 2, 2.5)),
        ([[3.0, 3.0]], [0], (5, 7), (3, 3)),
    ],
)
def test_normalize_above_pmax(P, c, p, expected):
    ds = TransactionDataset(np.array(P), np.array(c))
    np.testing.assert_array_equal(normalize_above_pmax(ds, p), expected)


@given(st.integers(0, 10_000))
def test_normalize_keeps_closure_value(seed):
    rng = np.random.default_rng(seed)
    ds = random_instance(rng, 4, 3)
    p = rng.uniform(0, 15, 3)
    q = normalize_above_pmax(ds, p)
    assert total_revenue(ds, q, "closure") >= total_revenue(ds, p, "closure") - 1e-9


def test_price_vector_checked(ex1):
    with pytest.raises(ValidationError):
        total_worst_case(ex1, (1.0,))
