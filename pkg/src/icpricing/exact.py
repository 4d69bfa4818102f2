"""Exact robust pricing through a mixed-integer reformulation.

The closure objective ``g(0)`` is the optimum of a MILP with prices ``p``,
per-customer revenues ``tau``/``taubar`` and binaries ``y[i, j]`` that mark
which products the adversary may not use (``y[i, c_i] = 1`` means customer
``i`` buys).  Every big-M constant is specific to its ``(i, j)`` pair.

Solvers:

* :func:`solve_g0_enumeration` walks all ``2**(m*n)`` binary vectors in
  Gray-code order, re-optimising the restricted LP after each bit flip.
* :func:`solve_g0_branch_and_bound` is a best-first branch-and-bound that
  warm-starts every child LP from its parent's tableau.
* :func:`solve_exact` chains branch-and-bound with the price repair and the
  rank stagger that turn a closure-optimal vector into implementable prices.
"""

from __future__ import annotations

import heapq
import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .evaluator import CustomerEval, customer_revenues, total_revenue, total_worst_case
from .instance import TOL, TransactionDataset, ValidationError, as_price_vector, stats
from .lp import LpModel, LpSolution, Simplex, solve_lp

__all__ = [
    "MilpModel",
    "PricingSolution",
    "SolverLimits",
    "SolverLimitError",
    "build_opmip",
    "solve_g0_enumeration",
    "solve_g0_branch_and_bound",
    "solve_g0_highs_milp",
    "reprice_zeros",
    "stagger_prices",
    "solve_exact",
    "solve_same_price_case",
    "solve_constant_price_case",
    "ENUMERATION_LIMIT",
]

ENUMERATION_LIMIT = 24
Backend = Literal["simplex", "highs"]


class SolverLimitError(RuntimeError):
    """Raised by callers that insist on a proven optimum."""


@dataclass
class SolverLimits:
    node_cap: int = 200_000
    gap_tol: float = 0.0
    time_cap: float | None = None


@dataclass
class PricingSolution:
    """Prices with their objective values and provenance.

    ``g_value`` is the closure objective at ``base_prices`` (equal to
    ``prices`` except after staggering).  ``strict_total`` is the worst-case
    revenue of ``prices`` under strict semantics.  ``per_customer`` holds
    closure evaluations at ``base_prices``.
    """

    prices: NDArray[np.float64]
    g_value: float
    strict_total: float
    per_customer: list[CustomerEval]
    method: str
    gap: float = 0.0
    nodes: int = 0
    bound: float | None = None
    base_prices: NDArray[np.float64] | None = None
    info: dict = field(default_factory=dict)

    @property
    def optimal(self) -> bool:
        return self.gap == 0.0


def _solution(ds: TransactionDataset, prices: ArrayLike, method: str, **kw) -> PricingSolution:
    p = np.asarray(prices, dtype=float)
    base = kw.pop("base_prices", None)
    bp = p if base is None else np.asarray(base, dtype=float)
    g, per = total_worst_case(ds, bp, "closure")
    return PricingSolution(p, g, total_revenue(ds, p, "strict"), per, method, base_prices=bp, **kw)


# ----------------------------------------------------------------------------
# Model
# ----------------------------------------------------------------------------

@dataclass
class MilpModel:
    """The pricing MILP in dense form with index helpers.

    Column layout: ``p`` (n), ``tau`` (m), ``taubar`` (m), then ``y`` row-major
    (m x n).
    """

    ds: TransactionDataset
    lp: LpModel
    pmax: float

    @property
    def m(self) -> int:
        return self.ds.m

    @property
    def n(self) -> int:
        return self.ds.n

    @property
    def num_continuous(self) -> int:
        return self.n + 2 * self.m

    @property
    def num_binary(self) -> int:
        return self.m * self.n

    def p_idx(self, j: int) -> int:
        return j

    def tau_idx(self, i: int) -> int:
        return self.n + i

    def taubar_idx(self, i: int) -> int:
        return self.n + self.m + i

    def y_idx(self, i: int, j: int) -> int:
        return self.n + 2 * self.m + i * self.n + j

    @property
    def y_offset(self) -> int:
        return self.n + 2 * self.m

    def prices(self, x: ArrayLike) -> NDArray[np.float64]:
        return np.clip(np.asarray(x, dtype=float)[: self.n], 0.0, self.pmax)

    def y(self, x: ArrayLike) -> NDArray[np.float64]:
        return np.asarray(x, dtype=float)[self.y_offset:].reshape(self.m, self.n)


def build_opmip(ds: TransactionDataset) -> MilpModel:
    """Assemble the big-M MILP whose optimum is the closure objective g(0)."""
    m, n = ds.m, ds.n
    P = ds.prices
    c = ds.choices
    Pc = ds.purchase_prices
    pmax = float(Pc.max())
    N = n + 2 * m + m * n
    tau = n + np.arange(m)
    taubar = n + m + np.arange(m)
    Y = (n + 2 * m + np.arange(m * n)).reshape(m, n)

    rows_A, lo, hi, names = [], [], [], []

    def row() -> NDArray:
        r = np.zeros(N)
        rows_A.append(r)
        return r

    for i in range(m):
        for j in range(n):
            # tau_i <= p_j + (1 - y_ij) P_ic
            r = row()
            r[tau[i]], r[j], r[Y[i, j]] = 1.0, -1.0, Pc[i]
            lo.append(-math.inf); hi.append(Pc[i]); names.append(f"dual_{i}_{j}")
    for i in range(m):
        # p_c <= P_ic + (pmax - P_ic)(1 - y_ic)
        r = row()
        r[c[i]], r[Y[i, c[i]]] = 1.0, pmax - Pc[i]
        lo.append(-math.inf); hi.append(pmax); names.append(f"buy_{i}")
    for i in range(m):
        for j in range(n):
            if j == c[i]:
                continue
            # p_j - p_c >= P_ij - P_ic - (pmax + P_ij - P_ic) y_ij
            h = P[i, j] - Pc[i]
            r = row()
            r[j] += 1.0
            r[c[i]] -= 1.0
            r[Y[i, j]] = pmax + h
            lo.append(h); hi.append(math.inf); names.append(f"avail_{i}_{j}")
    for i in range(m):
        r = row()
        r[taubar[i]], r[Y[i, c[i]]] = 1.0, -Pc[i]
        lo.append(-math.inf); hi.append(0.0); names.append(f"lin1_{i}")
        r = row()
        r[taubar[i]], r[tau[i]] = 1.0, -1.0
        lo.append(-math.inf); hi.append(0.0); names.append(f"lin2_{i}")
        r = row()
        r[tau[i]], r[taubar[i]], r[Y[i, c[i]]] = 1.0, -1.0, Pc[i]
        lo.append(-math.inf); hi.append(Pc[i]); names.append(f"lin3_{i}")

    A = np.array(rows_A)
    obj = np.zeros(N)
    obj[taubar] = 1.0
    lb = np.zeros(N)
    ub = np.full(N, math.inf)
    ub[:n] = pmax
    ub[Y.ravel()] = 1.0
    integer = np.zeros(N, dtype=bool)
    integer[Y.ravel()] = True
    var_names = ([f"p_{j}" for j in range(n)] + [f"tau_{i}" for i in range(m)]
                 + [f"taubar_{i}" for i in range(m)] + [f"y_{i}_{j}" for i in range(m) for j in range(n)])
    lp = LpModel.from_arrays(obj, A, lo, hi, lb, ub, sense="max", integer=integer,
                             var_names=var_names, row_names=names, name="opmip")
    return MilpModel(ds, lp, pmax)


# ----------------------------------------------------------------------------
# Node LP back ends
# ----------------------------------------------------------------------------

class _SimplexNodes:
    """Warm-started node LPs on the in-repo tableau simplex.

    Open nodes share their parent's solved tableau.  Past the memory budget
    only the basis is kept and the tableau is refactored on demand.
    """

    def __init__(self, model: MilpModel, memory_budget: float = 1e9):
        c, A, rlo, rhi, lb, ub = model.lp.to_arrays()
        self.root_state = Simplex(-c, A, rlo, rhi, lb, ub)
        self.budget = memory_budget
        self.stored = 0.0

    def solve_root(self):
        sx = self.root_state
        st = sx.solve()
        return st, -sx.objective, sx.x[: sx.N].copy(), sx

    def solve_child(self, parent, fixes: list[tuple[int, float]]):
        sx = parent.copy() if isinstance(parent, Simplex) else self.root_state.restore(parent)
        for j, v in fixes:
            sx.set_bounds(j, v, v)
        st = sx.resolve()
        if st == "iteration_limit":
            fresh = self.root_state.restore((sx.basis, sx.x, sx.lo, sx.hi))
            st = fresh.resolve()
            sx = fresh
        return st, -sx.objective, sx.x[: sx.N].copy(), sx

    def keep(self, state):
        """Store a tableau while within budget, otherwise only its basis."""
        size = state.T.nbytes
        if self.stored + size <= self.budget:
            self.stored += size
            return state
        return state.snapshot()

    def release(self, state):
        if isinstance(state, Simplex):
            self.stored -= state.T.nbytes


class _HighsNodes:
    """Cold node LPs through SciPy's HiGHS; the state is the bound vector."""

    def __init__(self, model: MilpModel):
        self.model = model
        c, A, rlo, rhi, lb, ub = model.lp.to_arrays()
        self.arrays = (c, A, rlo, rhi)
        self.root_state = (lb.copy(), ub.copy())

    def _solve(self, lb, ub):
        c, A, rlo, rhi = self.arrays
        sol = solve_lp(LpModel.from_arrays(c, A, rlo, rhi, lb, ub, sense="max"), backend="highs")
        return sol.status, sol.objective, sol.x, (lb, ub)

    def solve_root(self):
        return self._solve(*self.root_state)

    def solve_child(self, parent, fixes):
        lb, ub = parent[0].copy(), parent[1].copy()
        for j, v in fixes:
            lb[j] = ub[j] = v
        return self._solve(lb, ub)

    def keep(self, state):
        return state

    def release(self, state):
        pass


# ----------------------------------------------------------------------------
# Enumeration oracle
# ----------------------------------------------------------------------------

def solve_g0_enumeration(ds: TransactionDataset, backend: Backend = "simplex") -> PricingSolution:
    """Maximise over every binary vector ``y``; exact but exponential.

    Consecutive vectors differ in one bit (Gray code), so each restricted LP
    is re-optimised from the previous basis.
    """
    k = ds.m * ds.n
    if k > ENUMERATION_LIMIT:
        raise ValidationError(f"enumeration needs m*n <= {ENUMERATION_LIMIT}, got {k}")
    model = build_opmip(ds)
    off = model.y_offset
    best, best_x, solves = -math.inf, None, 0
    if backend == "simplex":
        c, A, rlo, rhi, lb, ub = model.lp.to_arrays()
        lb, ub = lb.copy(), ub.copy()
        ub[off:] = 0.0
        sx = Simplex(-c, A, rlo, rhi, lb, ub)
        st = sx.solve()
        bits = np.zeros(k)
        for step in range(1 << k):
            if step:
                b = (step & -step).bit_length() - 1
                bits[b] = 1.0 - bits[b]
                sx.set_bounds(off + b, bits[b], bits[b])
                st = sx.resolve()
                if st == "iteration_limit":
                    lb[off:] = ub[off:] = bits
                    sx = Simplex(-c, A, rlo, rhi, lb, ub)
                    st = sx.solve()
            solves += 1
            if st == "optimal" and -sx.objective > best:
                best, best_x = -sx.objective, sx.primal
    elif backend == "highs":
        c, A, rlo, rhi, lb, ub = model.lp.to_arrays()
        for bits in itertools.product((0.0, 1.0), repeat=k):
            lb2, ub2 = lb.copy(), ub.copy()
            lb2[off:] = ub2[off:] = bits
            sol = solve_lp(LpModel.from_arrays(c, A, rlo, rhi, lb2, ub2, sense="max"), backend="highs")
            solves += 1
            if sol.ok and sol.objective > best:
                best, best_x = sol.objective, sol.x
    else:
        raise ValueError(f"unknown backend {backend!r}")
    p = model.prices(best_x)
    sol = _solution(ds, p, "enumeration", nodes=solves, bound=best)
    sol.info["lp_value"] = best
    sol.info["y"] = np.round(model.y(best_x)).astype(int)
    return sol


# ----------------------------------------------------------------------------
# Branch-and-bound
# ----------------------------------------------------------------------------

class _Shared:
    """Parent LP state referenced by its open children."""

    __slots__ = ("state", "refs")

    def __init__(self, state, refs: int):
        self.state = state
        self.refs = refs


@dataclass(order=True)
class _Node:
    key: float
    seq: int
    bound: float = field(compare=False)
    parent: _Shared = field(compare=False, repr=False)
    fixes: list = field(compare=False, repr=False)
    depth: int = field(compare=False, default=0)


def _branch_variable(model: MilpModel, x: NDArray, tol: float = 1e-6) -> tuple[int, int] | None:
    """Pick ``(i, j)`` to branch on, or ``None`` when ``y`` is integral.

    Purchase indicators ``y[i, c_i]`` go first; within a group the most
    fractional wins, ties to the larger purchase price, then lower index.
    """
    y = model.y(x)
    frac = np.minimum(y, 1.0 - y)
    frac = np.where(frac > tol, frac, 0.0)
    if not frac.any():
        return None
    ds = model.ds
    rows = np.arange(ds.m)
    Pc = ds.purchase_prices
    fc = frac[rows, ds.choices]
    if fc.any():
        order = np.lexsort((rows, -Pc, -fc))
        i = int(order[0])
        return i, int(ds.choices[i])
    key = np.broadcast_to(Pc[:, None], frac.shape)
    flat = np.lexsort((np.arange(frac.size), -key.ravel(), -frac.ravel()))
    i, j = divmod(int(flat[0]), ds.n)
    return i, j


def _warm_incumbents(ds: TransactionDataset) -> list[NDArray]:
    from .heuristics import conservative_price_vector, cutoff_price_vector

    return [cutoff_price_vector(ds), conservative_price_vector(ds)]


def _rounding_incumbent(model: MilpModel, x: NDArray, backend: Backend) -> NDArray | None:
    """Round ``y`` to the nearest integers and re-solve the restricted LP.

    If that LP is infeasible every non-purchase indicator of a buying
    customer is set to one, which always admits ``p = 0``.
    """
    ds = model.ds
    y = np.rint(model.y(x))
    c, A, rlo, rhi, lb, ub = model.lp.to_arrays()
    off = model.y_offset
    for attempt in range(2):
        lb2, ub2 = lb.copy(), ub.copy()
        lb2[off:] = ub2[off:] = y.ravel()
        sol = solve_lp(LpModel.from_arrays(c, A, rlo, rhi, lb2, ub2, sense="max"), backend=backend)
        if sol.ok:
            return model.prices(sol.x)
        buying = y[np.arange(ds.m), ds.choices] == 1
        y[buying] = 1.0
    return None


def solve_g0_branch_and_bound(
    ds: TransactionDataset,
    limits: SolverLimits | None = None,
    backend: Backend = "simplex",
    prune_tol: float = 1e-7,
) -> PricingSolution:
    """Best-first branch-and-bound on the binaries of the pricing MILP.

    The incumbent is the closure objective at the price part of every node
    LP, seeded with the cut-off and conservative prices and a rounding
    repair at the root.  Ties in the queue pop in insertion order.  When a
    limit stops the search early, ``gap`` is the difference between the
    best open bound and the incumbent.
    """
    limits = limits or SolverLimits()
    t0 = time.perf_counter()
    model = build_opmip(ds)
    nodes = _SimplexNodes(model) if backend == "simplex" else _HighsNodes(model)
    if backend not in ("simplex", "highs"):
        raise ValueError(f"unknown backend {backend!r}")

    best_p = np.full(ds.n, model.pmax)
    best = total_revenue(ds, best_p, "closure")

    def offer(p: NDArray) -> None:
        nonlocal best, best_p
        v = total_revenue(ds, p, "closure")
        if v > best + 1e-12:
            best, best_p = v, p.copy()

    for p in _warm_incumbents(ds):
        offer(np.clip(p, 0.0, model.pmax))

    st, obj, x, state = nodes.solve_root()
    if st != "optimal":
        raise RuntimeError(f"root relaxation returned {st}")
    root_bound = obj
    offer(model.prices(x))
    rp = _rounding_incumbent(model, x, backend)
    if rp is not None:
        offer(rp)

    counter = itertools.count()
    heap: list[_Node] = []
    count = 1
    tol = prune_tol + limits.gap_tol

    def branch(bound: float, x: NDArray, state, depth: int) -> None:
        """Queue both children of a solved node; they are solved when popped."""
        i, j = _branch_variable(model, x)
        yij = model.y_idx(i, j)
        down = [(yij, 0.0)]
        if j == ds.choices[i]:
            # a non-buying customer gains nothing from blocking competitors
            down += [(model.y_idx(i, k), 1.0) for k in range(ds.n) if k != j]
        shared = _Shared(nodes.keep(state), 2)
        for fixes in (down, [(yij, 1.0)]):
            heapq.heappush(heap, _Node(-bound, next(counter), bound, shared, fixes, depth + 1))

    if _branch_variable(model, x) is not None and obj > best + tol:
        branch(obj, x, state, 0)
    hit_limit = False
    while heap:
        if heap[0].bound <= best + tol:
            break
        if count >= limits.node_cap or (limits.time_cap is not None and time.perf_counter() - t0 > limits.time_cap):
            hit_limit = True
            break
        node = heapq.heappop(heap)
        st, obj, cx, cstate = nodes.solve_child(node.parent.state, node.fixes)
        node.parent.refs -= 1
        if node.parent.refs == 0:
            nodes.release(node.parent.state)
            node.parent.state = None
        count += 1
        if st == "iteration_limit":
            hit_limit = True
            heapq.heappush(heap, node)
            break
        if st != "optimal":
            continue
        offer(model.prices(cx))
        if obj <= best + tol or _branch_variable(model, cx) is None:
            continue
        branch(obj, cx, cstate, node.depth)

    open_bound = max((nd.bound for nd in heap), default=-math.inf)
    gap = max(open_bound - best, 0.0) if (hit_limit or limits.gap_tol > 0) else 0.0
    if gap <= prune_tol:
        gap = 0.0
    sol = _solution(ds, best_p, "exact_bb", gap=gap, nodes=count, bound=root_bound)
    sol.info.update(wall_time=time.perf_counter() - t0, limit_reached=hit_limit, best_bound=max(open_bound, sol.g_value))
    return sol


def solve_g0_highs_milp(ds: TransactionDataset, time_limit: float | None = None) -> PricingSolution:
    """Solve the pricing MILP with SciPy's HiGHS MILP; an external cross-check."""
    from scipy.optimize import Bounds, LinearConstraint, milp

    model = build_opmip(ds)
    c, A, rlo, rhi, lb, ub = model.lp.to_arrays()
    integ = np.array(model.lp.integer, dtype=int)
    options = {} if time_limit is None else {"time_limit": time_limit}
    res = milp(-c, constraints=LinearConstraint(A, rlo, rhi), bounds=Bounds(lb, ub), integrality=integ,
               options=options)
    if res.x is None:
        raise RuntimeError(f"HiGHS MILP failed: {res.message}")
    p = model.prices(res.x)
    gap = 0.0 if res.status == 0 else float(abs(getattr(res, "mip_gap", 0.0)) * abs(res.fun))
    sol = _solution(ds, p, "highs_milp", gap=gap, bound=-float(getattr(res, "mip_dual_bound", res.fun)))
    sol.info["milp_value"] = -float(res.fun)
    return sol


# ----------------------------------------------------------------------------
# Post-processing into implementable prices
# ----------------------------------------------------------------------------

def reprice_zeros(ds: TransactionDataset, p0: ArrayLike, tol: float = TOL) -> NDArray[np.float64]:
    """Raise zero prices to the smallest historical price.

    For an optimal ``p0`` the closure objective is unchanged.  Raising a
    zero price can never lower it, so a drop signals a bug and raises; a
    gain only means ``p0`` was not optimal.
    """
    p = as_price_vector(p0, ds.n).copy()
    zero = p <= tol
    if not zero.any():
        return p
    before = total_revenue(ds, p0, "closure")
    p[zero] = stats(ds).global_min_price
    after = total_revenue(ds, p, "closure")
    if after < before - 1e-6:
        raise RuntimeError(f"repricing zeros lowered the closure objective from {before} to {after}")
    return p


def stagger_prices(p0: ArrayLike, m: int, n: int, delta: float) -> tuple[NDArray[np.float64], float]:
    """Rank-proportional decrements that make every closure tie strict.

    The ``k``-th smallest price (1-based, ties by index) is lowered by
    ``k * delta_used / (m n)``.  ``delta_used`` is ``delta`` capped so that
    every price keeps at least half its value.  Returns the new prices and
    ``delta_used``.
    """
    if not delta > 0:
        raise ValidationError("delta must be positive")
    p0 = np.asarray(p0, dtype=float)
    if p0.shape != (n,):
        raise ValidationError(f"price vector must have length {n}")
    if np.any(p0 <= 0):
        raise ValidationError("stagger needs strictly positive prices")
    order = np.argsort(p0, kind="stable")
    ranks = np.empty(n)
    ranks[order] = np.arange(1, n + 1)
    cap = 0.5 * m * n * float(np.min(p0[order] / np.arange(1, n + 1)))
    used = min(float(delta), cap)
    return p0 - ranks * used / (m * n), used


def solve_exact(
    ds: TransactionDataset,
    delta: float,
    limits: SolverLimits | None = None,
    backend: Backend = "simplex",
) -> PricingSolution:
    """Closure-optimal prices turned into strict prices losing at most ``delta``."""
    if not delta > 0:
        raise ValidationError("delta must be positive")
    base = solve_g0_branch_and_bound(ds, limits, backend)
    p0 = reprice_zeros(ds, base.prices)
    p, used = stagger_prices(p0, ds.m, ds.n, delta)
    sol = _solution(ds, p, "exact_bb", base_prices=p0, gap=base.gap, nodes=base.nodes, bound=base.bound)
    sol.info.update(base.info)
    sol.info["delta_used"] = used
    return sol


# ----------------------------------------------------------------------------
# Closed-form special cases
# ----------------------------------------------------------------------------

def solve_same_price_case(ds: TransactionDataset) -> PricingSolution:
    """All products share one price within each customer's row.

    The best uniform price is one of the historical prices; with the prices
    sorted ascending it maximises ``(m - i + 1) * P_(i)``.
    """
    P = ds.prices
    spread = np.ptp(P, axis=1)
    bad = np.flatnonzero(spread > 0)
    if bad.size:
        raise ValidationError(f"customer {int(bad[0])} sees different prices for different products")
    vals = np.sort(P[:, 0], kind="stable")
    m = ds.m
    scores = (m - np.arange(m)) * vals
    top = scores.max()
    # ties go to the larger price
    k = int(np.flatnonzero(scores == top)[-1])
    price = float(vals[k])
    sol = _solution(ds, np.full(ds.n, price), "same_price")
    sol.info["analytic_value"] = float(top)
    return sol


def solve_constant_price_case(ds: TransactionDataset) -> PricingSolution:
    """Every customer saw the same price vector; keeping it is optimal."""
    P = ds.prices
    spread = np.ptp(P, axis=0)
    bad = np.flatnonzero(spread > 0)
    if bad.size:
        i = int(np.flatnonzero(P[:, bad[0]] != P[0, bad[0]])[0])
        raise ValidationError(f"customer {i} saw a different price for product {int(bad[0])}")
    sol = _solution(ds, P[0].copy(), "constant_price")
    sol.info["analytic_value"] = float(ds.purchase_prices.sum())
    return sol
