"""Approximate robust pricing with provable ratios, plus two naive baselines.

* conservative prices: every product at its lowest purchase price;
* LP-relaxation prices: the price part of the relaxed pricing MILP;
* cut-off prices: a single revenue-maximising threshold ``p*`` over the
  purchase prices, each product priced at its cheapest purchase price
  at or above the threshold.

Ratios hold for the closure objective; strict totals are reported too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .evaluator import total_revenue
from .exact import PricingSolution, _solution, build_opmip
from .instance import TransactionDataset, ValidationError, stats
from .lp import solve_lp_relaxation_of_milp

__all__ = [
    "GuaranteeReport",
    "conservative_price_vector",
    "conservative_prices",
    "lp_relaxation_prices",
    "cutoff_star",
    "cutoff_price_vector",
    "cutoff_prices",
    "baseline_average_prices",
    "baseline_random_historical",
    "guarantee_report",
    "gen_conservative_tight_instance",
    "gen_cutoff_tight_instance",
    "cutoff_tight_reference_prices",
    "gen_random_price_tight_instance",
    "HEURISTICS",
]


@dataclass(frozen=True)
class GuaranteeReport:
    conservative_ratio: float
    cutoff_ratio: float


def conservative_price_vector(ds: TransactionDataset) -> NDArray[np.float64]:
    pmax = stats(ds).pmax
    p = np.full(ds.n, pmax)
    pp = ds.purchase_prices
    np.minimum.at(p, ds.choices, pp)
    return p


def conservative_prices(ds: TransactionDataset) -> PricingSolution:
    """Lowest historical purchase price per product; never-bought products at pmax."""
    sol = _solution(ds, conservative_price_vector(ds), "conservative")
    st = stats(ds)
    assert sol.g_value >= ds.m * st.plow - 1e-9 * ds.m
    return sol


def lp_relaxation_prices(ds: TransactionDataset, backend: str = "simplex") -> PricingSolution:
    """Prices read off the LP relaxation; ``bound`` is the relaxation value."""
    model = build_opmip(ds)
    res = solve_lp_relaxation_of_milp(model, backend=backend)
    if not res.ok:
        raise RuntimeError(f"LP relaxation returned {res.status}")
    sol = _solution(ds, model.prices(res.x), "lp_relaxation", bound=float(res.objective))
    return sol


def cutoff_star(ds: TransactionDataset) -> tuple[float, int]:
    """Threshold maximising ``#{i' : P_i'c >= x} * x`` over purchase prices.

    Ties go to the larger threshold; the returned customer is the lowest
    index paying exactly ``p*``.
    """
    pp = ds.purchase_prices
    s = np.sort(pp)
    # number of purchase prices >= s[k]
    count = len(s) - np.searchsorted(s, s, side="left")
    value = count * s
    top = value.max()
    pstar = float(s[np.flatnonzero(value == top)[-1]])
    istar = int(np.flatnonzero(pp == pstar)[0])
    return pstar, istar


def cutoff_price_vector(ds: TransactionDataset) -> NDArray[np.float64]:
    pstar, _ = cutoff_star(ds)
    pp = ds.purchase_prices
    p = np.full(ds.n, stats(ds).pmax)
    keep = pp >= pstar
    np.minimum.at(p, ds.choices[keep], pp[keep])
    return p


def cutoff_prices(ds: TransactionDataset) -> PricingSolution:
    pstar, istar = cutoff_star(ds)
    sol = _solution(ds, cutoff_price_vector(ds), "cutoff")
    guaranteed = float(np.sum(ds.purchase_prices >= pstar)) * pstar
    assert sol.g_value >= guaranteed - 1e-9 * max(1.0, guaranteed)
    sol.info.update(pstar=pstar, istar=istar, guaranteed=guaranteed)
    return sol


def baseline_average_prices(ds: TransactionDataset) -> PricingSolution:
    return _solution(ds, ds.prices.mean(axis=0), "average")


def baseline_random_historical(ds: TransactionDataset, seed: int | None = None) -> tuple[PricingSolution, float]:
    """Reuse one historical price row drawn uniformly.

    Returns the sampled solution and the exact expected closure total over
    the row draw.
    """
    rng = np.random.default_rng(seed)
    k = int(rng.integers(ds.m))
    sol = _solution(ds, ds.prices[k].copy(), "random_historical")
    expected = float(np.mean([total_revenue(ds, row, "closure") for row in ds.prices]))
    sol.info.update(row=k, expected_total=expected)
    return sol, expected


def guarantee_report(ds: TransactionDataset) -> GuaranteeReport:
    st = stats(ds)
    x = st.pmax / st.plow
    return GuaranteeReport(conservative_ratio=st.plow / st.pmax, cutoff_ratio=1.0 / (1.0 + math.log(x)))


HEURISTICS = {
    "conservative": conservative_prices,
    "lp-relaxation": lp_relaxation_prices,
    "cutoff": cutoff_prices,
    "average": baseline_average_prices,
}


# ----------------------------------------------------------------------------
# Instances on which the guarantees are tight
# ----------------------------------------------------------------------------

def gen_conservative_tight_instance(m: int, p1: float, p2: float) -> TransactionDataset:
    """One product; one customer paid ``p1``, the other ``m - 1`` paid ``p2 > p1``."""
    if m < 2 or not 0 < p1 < p2:
        raise ValidationError("need m >= 2 and 0 < p1 < p2")
    P = np.full((m, 1), float(p2))
    P[0, 0] = p1
    return TransactionDataset(P, np.zeros(m, dtype=int))


def gen_cutoff_tight_instance(m: int, k: int, delta: float) -> TransactionDataset:
    """Instance on which cut-off pricing earns ``m`` while the optimum is about ``m(1 + H_m - H_k)``.

    Product ``j`` (0-based) has base price ``m / (m - j)`` for ``j`` in
    ``0..m-k``.  Customer ``i < m-k`` buys product ``i`` and sees the products
    before it bumped by ``delta``; the last ``k`` customers buy product
    ``m-k`` and see all earlier products bumped.
    """
    if not (1 <= k <= m):
        raise ValidationError("need 1 <= k <= m")
    if not (delta > 0 and (m == 1 or delta < 1.0 / (m - 1))):
        raise ValidationError("need 0 < delta < 1/(m-1)")
    n = m - k + 1
    base = m / (m - np.arange(n))
    P = np.tile(base, (m, 1))
    cols = np.arange(n)
    rows = np.arange(m)
    choice = np.minimum(rows, n - 1)
    P = P + delta * (cols[None, :] < choice[:, None])
    return TransactionDataset(P, choice)


def cutoff_tight_reference_prices(m: int, k: int, delta: float) -> NDArray[np.float64]:
    """Near-optimal prices for :func:`gen_cutoff_tight_instance`: base minus ``j * delta``."""
    n = m - k + 1
    j = np.arange(n)
    return m / (m - j) - j * delta


def gen_random_price_tight_instance(m: int) -> TransactionDataset:
    """``n = m``; customer ``i`` saw price 1 on product ``i`` and 2 elsewhere."""
    if m < 1:
        raise ValidationError("need m >= 1")
    P = np.full((m, m), 2.0)
    np.fill_diagonal(P, 1.0)
    return TransactionDataset(P, np.arange(m))
