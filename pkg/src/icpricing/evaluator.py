"""Worst-case revenue of a price vector.

Each historical customer defines a polyhedron of valuations consistent with
the purchase.  For new prices ``p`` the firm assumes the least profitable
choice that some valuation in that polyhedron could justify.  Two tie
conventions are supported:

``strict``
    The customer model as stated: no purchase is possible as soon as
    ``p[c] >= P[i, c]`` and product ``j`` is possible when
    ``p[j] - p[c] <= P[i, j] - P[i, c]``.
``closure``
    Every tie is resolved for the firm: equality keeps the purchase and
    makes competing products unavailable.  This is the value the mixed
    integer program maximises.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .instance import TOL, TransactionDataset, as_price_vector, stats

__all__ = [
    "Semantics",
    "NO_PURCHASE",
    "CustomerEval",
    "DualCertificate",
    "no_purchase_feasible",
    "product_feasible",
    "feasibility_matrix",
    "customer_revenues",
    "customer_worst_case",
    "total_worst_case",
    "total_revenue",
    "dual_certificate",
    "witness_valuation",
    "check_ic_membership",
    "dplp_oracle",
    "normalize_above_pmax",
]

Semantics = Literal["strict", "closure"]
NO_PURCHASE = -1


def _check_sem(sem: str) -> None:
    if sem not in ("strict", "closure"):
        raise ValueError(f"semantics must be 'strict' or 'closure', got {sem!r}")


@dataclass(frozen=True)
class CustomerEval:
    """Worst-case outcome for one customer."""

    revenue: float
    purchased: int | None
    feasible_set: frozenset[int]
    no_purchase_feasible: bool


@dataclass(frozen=True)
class DualCertificate:
    tau: float
    mu: NDArray[np.float64]
    objective: float


def no_purchase_feasible(ds: TransactionDataset, i: int, p: ArrayLike, sem: Semantics = "strict", tol: float = TOL) -> bool:
    _check_sem(sem)
    p = np.asarray(p, dtype=float)
    c = ds.choices[i]
    if sem == "strict":
        return bool(p[c] >= ds.prices[i, c] - tol)
    return bool(p[c] > ds.prices[i, c] + tol)


def product_feasible(ds: TransactionDataset, i: int, j: int, p: ArrayLike, sem: Semantics = "strict", tol: float = TOL) -> bool:
    _check_sem(sem)
    p = np.asarray(p, dtype=float)
    c = ds.choices[i]
    if j == c:
        return True
    d = p[j] - p[c]
    h = ds.prices[i, j] - ds.prices[i, c]
    if sem == "strict":
        return bool(d <= h + tol)
    return bool(d < h - tol)


def feasibility_matrix(ds: TransactionDataset, p: ArrayLike, sem: Semantics = "strict", tol: float = TOL) -> tuple[NDArray[np.bool_], NDArray[np.bool_]]:
    """Vectorised feasibility screening.

    Returns ``(F, nopurchase)`` where ``F[i, j]`` says product ``j`` is a
    possible worst-case purchase for customer ``i`` and ``nopurchase[i]``
    says walking away is possible.
    """
    _check_sem(sem)
    p = np.asarray(p, dtype=float)
    rows = np.arange(ds.m)
    c = ds.choices
    pc = p[c]
    Pc = ds.prices[rows, c]
    D = p[None, :] - pc[:, None]
    H = ds.prices - Pc[:, None]
    if sem == "strict":
        F = D <= H + tol
        nop = pc >= Pc - tol
    else:
        F = D < H - tol
        nop = pc > Pc + tol
    F[rows, c] = True
    return F, nop


def customer_revenues(ds: TransactionDataset, p: ArrayLike, sem: Semantics = "strict", tol: float = TOL) -> tuple[NDArray[np.float64], NDArray[np.intp]]:
    """Per-customer revenue and purchased product (-1 for no purchase)."""
    p = np.asarray(p, dtype=float)
    F, nop = feasibility_matrix(ds, p, sem, tol)
    masked = np.where(F, p[None, :], np.inf)
    # argmin returns the first minimiser, i.e. the lowest product index
    j = masked.argmin(axis=1)
    rev = masked[np.arange(ds.m), j]
    rev = np.where(nop, 0.0, rev)
    j = np.where(nop, NO_PURCHASE, j)
    return rev, j


def total_revenue(ds: TransactionDataset, p: ArrayLike, sem: Semantics = "strict", tol: float = TOL) -> float:
    """Unnormalised sum of worst-case revenues (divide by m for the average)."""
    return float(customer_revenues(ds, p, sem, tol)[0].sum())


def customer_worst_case(ds: TransactionDataset, i: int, p: ArrayLike, sem: Semantics = "strict", tol: float = TOL) -> CustomerEval:
    p = as_price_vector(p, ds.n)
    nop = no_purchase_feasible(ds, i, p, sem, tol)
    feas = frozenset(j for j in range(ds.n) if product_feasible(ds, i, j, p, sem, tol))
    if nop:
        return CustomerEval(0.0, None, feas, True)
    j = min(feas, key=lambda k: (p[k], k))
    return CustomerEval(float(p[j]), j, feas, False)


def total_worst_case(ds: TransactionDataset, p: ArrayLike, sem: Semantics = "strict", tol: float = TOL) -> tuple[float, list[CustomerEval]]:
    """Total revenue together with one ``CustomerEval`` per customer."""
    p = as_price_vector(p, ds.n)
    F, nop = feasibility_matrix(ds, p, sem, tol)
    rev, bought = customer_revenues(ds, p, sem, tol)
    per = [
        CustomerEval(
            float(rev[i]),
            None if bought[i] == NO_PURCHASE else int(bought[i]),
            frozenset(np.flatnonzero(F[i]).tolist()),
            bool(nop[i]),
        )
        for i in range(ds.m)
    ]
    return float(rev.sum()), per


def dual_certificate(ds: TransactionDataset, i: int, p: ArrayLike, tol: float = TOL) -> DualCertificate:
    """Optimal dual of the compact per-customer program (strict semantics)."""
    p = as_price_vector(p, ds.n)
    mu = np.zeros(ds.n)
    if no_purchase_feasible(ds, i, p, "strict", tol):
        return DualCertificate(0.0, mu, 0.0)
    order = np.argsort(p, kind="stable")
    feasible = [product_feasible(ds, i, int(j), p, "strict", tol) for j in order]
    k = feasible.index(True)
    jstar = order[k]
    tau = float(p[jstar])
    for j in order[:k]:
        mu[j] = tau - p[j]
    F = np.array([product_feasible(ds, i, j, p, "strict", tol) for j in range(ds.n)])
    objective = tau - float(mu[F].sum())
    return DualCertificate(tau, mu, objective)


def witness_valuation(ds: TransactionDataset, i: int, option: int, p: ArrayLike, tol: float = TOL) -> NDArray[np.float64] | None:
    """Explicit valuation justifying ``option`` (a product or ``NO_PURCHASE``).

    Returns ``None`` when the option is infeasible under strict semantics.
    """
    p = as_price_vector(p, ds.n)
    c = int(ds.choices[i])
    P = ds.prices[i]
    v = np.zeros(ds.n)
    if option == NO_PURCHASE:
        if not no_purchase_feasible(ds, i, p, "strict", tol):
            return None
        v[c] = P[c]
    elif option == c:
        v[c] = max(P[c], p[c])
    else:
        if not product_feasible(ds, i, option, p, "strict", tol):
            return None
        v[option] = max(P[option], p[option])
        v[c] = max(P[c], P[c] - P[option] + p[option])
    return v


def check_ic_membership(ds: TransactionDataset, i: int, v: ArrayLike, against: tuple[int, ArrayLike] | None = None, tol: float = TOL) -> bool:
    """Test ``v`` against customer ``i``'s historical IC inequalities.

    With ``against=(j, p)`` the valuation must also rationalise option ``j``
    (or no purchase when ``j == NO_PURCHASE``) at prices ``p``.
    """
    v = np.asarray(v, dtype=float)
    if np.any(v < -tol):
        return False
    c = int(ds.choices[i])
    P = ds.prices[i]
    u_hist = v[c] - P[c]
    if u_hist < -tol or np.any(v - P > u_hist + tol):
        return False
    if against is None:
        return True
    j, p = against
    p = np.asarray(p, dtype=float)
    if j == NO_PURCHASE:
        return bool(np.all(v <= p + tol))
    u = v[j] - p[j]
    return bool(u >= -tol and np.all(v - p <= u + tol))


def dplp_oracle(ds: TransactionDataset, i: int, p: ArrayLike, backend: str = "simplex") -> float:
    """Worst-case revenue of customer ``i`` via the perspective LP over valuations.

    One valuation vector per option (n products plus no purchase), each
    scaled by its choice weight.  Independent of the combinatorial screening
    used elsewhere in this module.
    """
    from .lp import LpModel, solve_lp

    p = as_price_vector(p, ds.n)
    n = ds.n
    c = int(ds.choices[i])
    P = ds.prices[i]
    lp = LpModel(sense="min")
    options = list(range(n)) + [NO_PURCHASE]
    x = {o: lp.add_var(f"x_{o}", 0.0, None) for o in options}
    v = {(o, j): lp.add_var(f"v_{o}_{j}", 0.0, None) for o in options for j in range(n)}
    lp.set_objective({x[j]: p[j] for j in range(n)})
    for j in range(n):
        lp.add_constr({v[j, j]: 1.0, x[j]: -p[j]}, ">=", 0.0)
        for k in range(n):
            if k != j:
                # v^j_j - p_j x_j >= v^j_k - p_k x_j
                lp.add_constr({v[j, j]: 1.0, v[j, k]: -1.0, x[j]: p[k] - p[j]}, ">=", 0.0)
        lp.add_constr({v[NO_PURCHASE, j]: 1.0, x[NO_PURCHASE]: -p[j]}, "<=", 0.0)
    lp.add_constr({x[o]: 1.0 for o in options}, "=", 1.0)
    for o in options:
        lp.add_constr({v[o, c]: 1.0, x[o]: -P[c]}, ">=", 0.0)
        for k in range(n):
            if k != c:
                lp.add_constr({v[o, c]: 1.0, v[o, k]: -1.0, x[o]: P[k] - P[c]}, ">=", 0.0)
    sol = solve_lp(lp, backend=backend)
    if sol.status != "optimal":
        raise RuntimeError(f"valuation LP for customer {i} returned {sol.status}")
    return float(sol.objective)


def normalize_above_pmax(ds: TransactionDataset, p: ArrayLike) -> NDArray[np.float64]:
    """Lower every price at or above pmax to the largest price below pmax.

    When no price lies below pmax all prices are set to pmax.
    """
    p = as_price_vector(p, ds.n).copy()
    pmax = stats(ds).pmax
    below = p[p < pmax]
    target = below.max() if below.size else pmax
    p[p >= pmax] = target
    return p
