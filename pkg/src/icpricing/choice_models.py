"""Parametric demand models used as synthetic ground truth.

Probability vectors have ``n + 1`` entries: the ``n`` products followed by
the no-purchase option.

Random streams: every customer draws from its own Philox generator seeded
by ``SeedSequence([seed, instance, customer])``, so a dataset does not
depend on the order in which customers are simulated and two instances of
one sweep never share a stream.
"""

from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import expit, logsumexp

from .instance import TransactionDataset, ValidationError

__all__ = [
    "NO_PURCHASE",
    "MnlParams",
    "MixedLogitParams",
    "LinearDemandParams",
    "UniformPriceLaw",
    "Observations",
    "customer_rng",
    "mnl_probs",
    "mnl_expected_revenue",
    "mnl_sample_observations",
    "mnl_sample_dataset",
    "mnl_loglik",
    "mnl_gradient",
    "mnl_hessian",
    "MnlFit",
    "mnl_fit",
    "golden_section_max",
    "mnl_equal_price_optimum",
    "mnl_optimal_prices",
    "mixed_logit_probs",
    "mixed_logit_expected_revenue",
    "mixed_logit_sample_observations",
    "mixed_logit_sample_dataset",
    "linear_demand_probs",
    "linear_demand_expected_revenue",
    "linear_demand_sample_observations",
    "LinearFit",
    "linear_demand_fit",
    "params_to_config",
    "params_from_config",
    "TABLE_CONFIGS",
]

NO_PURCHASE = -1


# ----------------------------------------------------------------------------
# Parameter types
# ----------------------------------------------------------------------------

def _vec(a: ArrayLike, name: str) -> NDArray[np.float64]:
    v = np.array(a, dtype=float).reshape(-1)
    if not np.all(np.isfinite(v)):
        raise ValidationError(f"{name} must be finite")
    v.setflags(write=False)
    return v


@dataclass(frozen=True)
class MnlParams:
    """Multinomial logit: utility ``alpha_j - beta * p_j``, outside option 0."""

    alpha: NDArray[np.float64]
    beta: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", _vec(self.alpha, "alpha"))
        if not (math.isfinite(self.beta) and self.beta > 0):
            raise ValidationError("beta must be positive")
        object.__setattr__(self, "beta", float(self.beta))

    @property
    def n(self) -> int:
        return self.alpha.size


@dataclass(frozen=True)
class MixedLogitParams:
    """Finite mixture of MNL classes."""

    weights: NDArray[np.float64]
    alphas: NDArray[np.float64]
    betas: NDArray[np.float64]

    def __post_init__(self) -> None:
        w = _vec(self.weights, "weights")
        a = np.array(self.alphas, dtype=float)
        b = _vec(self.betas, "betas")
        if a.ndim != 2 or a.shape[0] != w.size or b.size != w.size:
            raise ValidationError("need one alpha row and one beta per class")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValidationError("class weights must be non-negative and sum to 1")
        if np.any(b <= 0):
            raise ValidationError("betas must be positive")
        if not np.all(np.isfinite(a)):
            raise ValidationError("alphas must be finite")
        a.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "alphas", a)
        object.__setattr__(self, "betas", b)

    @property
    def n(self) -> int:
        return self.alphas.shape[1]

    def classes(self) -> list[MnlParams]:
        return [MnlParams(a, b) for a, b in zip(self.alphas, self.betas)]


@dataclass(frozen=True)
class LinearDemandParams:
    """Linear purchase probabilities with cross-price and availability terms.

    Score of product ``j``:
    ``alpha_j - beta_j p_j + sum_{k != j} (beta_cross[j, k] I_k p_k + gamma[j, k] (1 - I_k))``.
    Diagonals of ``beta_cross`` and ``gamma`` are ignored.
    """

    alpha: NDArray[np.float64]
    beta: NDArray[np.float64]
    beta_cross: NDArray[np.float64] | None = None
    gamma: NDArray[np.float64] | None = None

    def __post_init__(self) -> None:
        a = _vec(self.alpha, "alpha")
        b = _vec(self.beta, "beta")
        n = a.size
        if b.size != n:
            raise ValidationError("alpha and beta lengths differ")
        mats = []
        for name in ("beta_cross", "gamma"):
            M = getattr(self, name)
            M = np.zeros((n, n)) if M is None else np.array(M, dtype=float)
            if M.shape != (n, n) or not np.all(np.isfinite(M)):
                raise ValidationError(f"{name} must be a finite {n}x{n} matrix")
            np.fill_diagonal(M, 0.0)
            M.setflags(write=False)
            mats.append(M)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "beta_cross", mats[0])
        object.__setattr__(self, "gamma", mats[1])

    @property
    def n(self) -> int:
        return self.alpha.size


@dataclass(frozen=True)
class UniformPriceLaw:
    """Every price drawn independently from ``U(low, high)``."""

    low: float
    high: float

    def __post_init__(self) -> None:
        if not (0 <= self.low < self.high and math.isfinite(self.high)):
            raise ValidationError("price law needs 0 <= low < high")

    def sample(self, rng: np.random.Generator, n: int) -> NDArray[np.float64]:
        p = rng.uniform(self.low, self.high, n)
        while np.any(p <= 0):
            # a zero draw has probability zero; redraw to keep prices positive
            bad = p <= 0
            p[bad] = rng.uniform(self.low, self.high, int(bad.sum()))
        return p


@dataclass(frozen=True)
class Observations:
    """Simulated sessions including walk-aways (``choice == NO_PURCHASE``)."""

    prices: NDArray[np.float64]
    choices: NDArray[np.intp]
    availability: NDArray[np.bool_] | None = None

    @property
    def m(self) -> int:
        return self.prices.shape[0]

    @property
    def n(self) -> int:
        return self.prices.shape[1]

    @property
    def purchased(self) -> NDArray[np.bool_]:
        return self.choices != NO_PURCHASE

    def to_dataset(self) -> TransactionDataset:
        """Drop walk-aways; ``dropped`` records how many."""
        keep = self.purchased
        if not keep.any():
            raise ValidationError("no purchasing customers to build a dataset from")
        return TransactionDataset(self.prices[keep], self.choices[keep], dropped=int((~keep).sum()))


def customer_rng(seed: int, instance: int | Sequence[int], customer: int) -> np.random.Generator:
    """Philox stream keyed by ``(seed, instance, customer)``.

    Each customer gets an independent stream, so a dataset does not depend
    on the order in which customers are drawn.  ``instance`` may be a tuple
    of non-negative integers.
    """
    key = [int(seed), *np.atleast_1d(np.asarray(instance, dtype=np.int64)).tolist(), int(customer)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def _sample(probs_at: Callable[[NDArray], NDArray], n: int, law: UniformPriceLaw, m: int, seed: int, instance: int | Sequence[int]) -> Observations:
    if m < 1:
        raise ValidationError("m must be positive")
    P = np.empty((m, n))
    c = np.empty(m, dtype=np.intp)
    for i in range(m):
        rng = customer_rng(seed, instance, i)
        P[i] = law.sample(rng, n)
        pr = probs_at(P[i])
        k = int(np.searchsorted(np.cumsum(pr), rng.random() * pr.sum(), side="right"))
        k = min(k, n)
        c[i] = NO_PURCHASE if k == n else k
    return Observations(P, c)


# ----------------------------------------------------------------------------
# MNL
# ----------------------------------------------------------------------------

def mnl_probs(params: MnlParams, p: ArrayLike) -> NDArray[np.float64]:
    """Choice probabilities for a price vector or a matrix of price rows."""
    p = np.asarray(p, dtype=float)
    u = params.alpha - params.beta * p
    shift = np.maximum(u.max(axis=-1, keepdims=True), 0.0)
    e = np.exp(u - shift)
    e0 = np.exp(-shift)
    total = e.sum(axis=-1, keepdims=True) + e0
    return np.concatenate([e / total, e0 / total], axis=-1)


def mnl_expected_revenue(params: MnlParams, p: ArrayLike) -> float:
    p = np.asarray(p, dtype=float)
    return float(np.sum(p * mnl_probs(params, p)[..., :-1], axis=-1))


def mnl_sample_observations(params: MnlParams, law: UniformPriceLaw, m: int, seed: int, instance: int | Sequence[int] = 0) -> Observations:
    return _sample(lambda row: mnl_probs(params, row), params.n, law, m, seed, instance)


def mnl_sample_dataset(params: MnlParams, law: UniformPriceLaw, m: int, seed: int, instance: int | Sequence[int] = 0) -> TransactionDataset:
    return mnl_sample_observations(params, law, m, seed, instance).to_dataset()


def _utilities(theta: NDArray, obs: Observations) -> NDArray:
    return theta[:-1] - theta[-1] * obs.prices


def mnl_loglik(theta: ArrayLike, obs: Observations) -> float:
    """Log-likelihood at ``theta = (alpha_1..alpha_n, beta)``."""
    theta = np.asarray(theta, dtype=float)
    U = _utilities(theta, obs)
    buy = obs.purchased
    chosen = U[np.flatnonzero(buy), obs.choices[buy]].sum()
    Z = logsumexp(np.column_stack([U, np.zeros(obs.m)]), axis=1)
    return float(chosen - Z.sum())


def _probs_from_theta(theta: NDArray, obs: Observations) -> NDArray:
    U = _utilities(theta, obs)
    full = np.column_stack([U, np.zeros(obs.m)])
    full -= full.max(axis=1, keepdims=True)
    e = np.exp(full)
    return (e / e.sum(axis=1, keepdims=True))[:, :-1]


def mnl_gradient(theta: ArrayLike, obs: Observations) -> NDArray[np.float64]:
    theta = np.asarray(theta, dtype=float)
    pi = _probs_from_theta(theta, obs)
    n = obs.n
    onehot = np.zeros((obs.m, n))
    buy = np.flatnonzero(obs.purchased)
    onehot[buy, obs.choices[buy]] = 1.0
    g_alpha = (onehot - pi).sum(axis=0)
    g_beta = float(np.sum((pi - onehot) * obs.prices))
    return np.append(g_alpha, g_beta)


def mnl_hessian(theta: ArrayLike, obs: Observations) -> NDArray[np.float64]:
    """Hessian of the log-likelihood (negative semidefinite)."""
    theta = np.asarray(theta, dtype=float)
    pi = _probs_from_theta(theta, obs)
    P = obs.prices
    n = obs.n
    H = np.empty((n + 1, n + 1))
    H[:n, :n] = pi.T @ pi - np.diag(pi.sum(axis=0))
    pbar = np.sum(pi * P, axis=1)
    cross = pi * P - pi * pbar[:, None]
    H[:n, n] = H[n, :n] = cross.sum(axis=0)
    H[n, n] = -float(np.sum(pi * P * P) - np.sum(pbar ** 2))
    return H


@dataclass
class MnlFit:
    """Outcome of :func:`mnl_fit`.  ``params`` is ``None`` unless ``ok``."""

    status: Literal["converged", "max_iter", "degenerate", "separated", "nonpositive_beta", "stalled"]
    theta: NDArray[np.float64]
    iterations: int
    loglik_path: list[float] = field(default_factory=list)
    products: NDArray[np.intp] | None = None  # estimated products; ``None`` means all

    @property
    def ok(self) -> bool:
        return self.status == "converged"

    @property
    def params(self) -> MnlParams | None:
        return MnlParams(self.theta[:-1], float(self.theta[-1])) if self.ok else None

    @property
    def loglik(self) -> float:
        return self.loglik_path[-1] if self.loglik_path else math.nan


def mnl_fit(obs: Observations, max_iter: int = 200, gtol: float = 1e-6, theta0: ArrayLike | None = None,
            drop_unchosen: bool = False) -> MnlFit:
    """Maximum likelihood by damped Newton steps with backtracking.

    Converges when the gradient's infinity norm drops below ``gtol``.  A
    failure keeps the last iterate in ``theta``.

    A product nobody chose has no finite estimate (its ``alpha`` runs off
    to minus infinity).  By default that is reported as ``"separated"``;
    with ``drop_unchosen`` the product is left out and the fit covers the
    chosen products only, listed in ``products``.
    """
    chosen = np.zeros(obs.n, dtype=bool)
    chosen[obs.choices[obs.purchased]] = True
    if not chosen.all() and chosen.any():
        if not drop_unchosen:
            theta = np.zeros(obs.n + 1)
            return MnlFit("separated", theta, 0, [mnl_loglik(theta, obs)])
        keep = np.flatnonzero(chosen)
        remap = np.full(obs.n, NO_PURCHASE, dtype=np.intp)
        remap[keep] = np.arange(keep.size)
        c = np.where(obs.purchased, remap[np.maximum(obs.choices, 0)], NO_PURCHASE)
        sub = Observations(obs.prices[:, keep], c)
        t0 = None if theta0 is None else np.append(np.asarray(theta0, dtype=float)[keep], np.asarray(theta0, dtype=float)[-1])
        fit = mnl_fit(sub, max_iter, gtol, t0)
        fit.products = keep
        return fit
    n = obs.n
    theta = np.zeros(n + 1) if theta0 is None else np.array(theta0, dtype=float)
    if theta0 is None:
        theta[-1] = 0.1
    buys = int(obs.purchased.sum())
    if buys == 0 or buys == obs.m or obs.m < n + 1:
        return MnlFit("degenerate", theta, 0, [mnl_loglik(theta, obs)])
    ll = mnl_loglik(theta, obs)
    path = [ll]
    for it in range(1, max_iter + 1):
        g = mnl_gradient(theta, obs)
        if np.max(np.abs(g)) < gtol:
            status = "converged" if theta[-1] > 0 else "nonpositive_beta"
            return MnlFit(status, theta, it - 1, path)
        H = mnl_hessian(theta, obs)
        try:
            step = np.linalg.solve(-H, g)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(-H, g, rcond=None)[0]
        if not np.all(np.isfinite(step)) or step @ g <= 0:
            step = g
        t = 1.0
        for _ in range(60):
            cand = theta + t * step
            ll_new = mnl_loglik(cand, obs)
            if ll_new >= ll:
                break
            t *= 0.5
        else:
            return MnlFit("stalled", theta, it, path)
        theta, ll = cand, ll_new
        path.append(ll)
    g = mnl_gradient(theta, obs)
    if np.max(np.abs(g)) < gtol:
        status = "converged" if theta[-1] > 0 else "nonpositive_beta"
        return MnlFit(status, theta, max_iter, path)
    return MnlFit("max_iter", theta, max_iter, path)


def golden_section_max(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-8) -> float:
    """Maximiser of a unimodal ``f`` on ``[lo, hi]`` to within ``tol``."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
    return 0.5 * (a + b)


def mnl_equal_price_optimum(A: float, beta: float) -> tuple[float, float]:
    """Best common price for attractiveness sum ``A``; returns ``(p*, revenue)``."""
    if not (A > 0 and beta > 0):
        raise ValidationError("A and beta must be positive")
    logA = math.log(A)

    def revenue(p: float) -> float:
        return p * float(expit(logA - beta * p))

    p = golden_section_max(revenue, 0.0, 100.0 / beta, 1e-8)
    return p, revenue(p)


def mnl_optimal_prices(params: MnlParams) -> tuple[NDArray[np.float64], float]:
    """Revenue-maximising prices under a common price sensitivity.

    With one ``beta`` and zero costs all optimal prices coincide, so a 1-d
    search over the common price suffices.
    """
    A = float(np.exp(logsumexp(params.alpha)))
    p, rev = mnl_equal_price_optimum(A, params.beta)
    return np.full(params.n, p), rev


# ----------------------------------------------------------------------------
# Mixed logit
# ----------------------------------------------------------------------------

def mixed_logit_probs(params: MixedLogitParams, p: ArrayLike) -> NDArray[np.float64]:
    out = 0.0
    for w, cls in zip(params.weights, params.classes()):
        out = out + w * mnl_probs(cls, p)
    return out


def mixed_logit_expected_revenue(params: MixedLogitParams, p: ArrayLike) -> float:
    p = np.asarray(p, dtype=float)
    return float(np.sum(p * mixed_logit_probs(params, p)[..., :-1], axis=-1))


def mixed_logit_sample_observations(params: MixedLogitParams, law: UniformPriceLaw, m: int, seed: int, instance: int | Sequence[int] = 0) -> Observations:
    return _sample(lambda row: mixed_logit_probs(params, row), params.n, law, m, seed, instance)


def mixed_logit_sample_dataset(params: MixedLogitParams, law: UniformPriceLaw, m: int, seed: int, instance: int | Sequence[int] = 0) -> TransactionDataset:
    return mixed_logit_sample_observations(params, law, m, seed, instance).to_dataset()


# ----------------------------------------------------------------------------
# Linear demand
# ----------------------------------------------------------------------------

def _linear_scores(params: LinearDemandParams, p: NDArray, avail: NDArray) -> NDArray:
    I = avail.astype(float)
    cross = params.beta_cross @ (I * p) + params.gamma @ (1.0 - I)
    raw = params.alpha - params.beta * p + cross
    return np.where(avail, raw, 0.0)


def linear_demand_probs(params: LinearDemandParams, p: ArrayLike, availability: ArrayLike | None = None,
                        *, return_clamped: bool = False):
    """Clamped linear probabilities.

    Scores are clipped to ``[0, 1]``; if they then sum above one they are
    rescaled to sum to one and the no-purchase probability is zero.  With
    ``return_clamped`` a flag reports whether any of this fired.
    """
    p = np.asarray(p, dtype=float)
    avail = np.ones(params.n, bool) if availability is None else np.asarray(availability, bool)
    raw = _linear_scores(params, p, avail)
    q = np.clip(raw, 0.0, 1.0)
    clamped = bool(np.any(q != raw))
    s = q.sum()
    if s > 1.0:
        q = q / s
        clamped = True
        out = np.append(q, 0.0)
    else:
        out = np.append(q, 1.0 - s)
    return (out, clamped) if return_clamped else out


def linear_demand_expected_revenue(params: LinearDemandParams, p: ArrayLike, availability: ArrayLike | None = None) -> float:
    p = np.asarray(p, dtype=float)
    return float(np.sum(p * linear_demand_probs(params, p, availability)[:-1]))


def linear_demand_sample_observations(params: LinearDemandParams, law: UniformPriceLaw, m: int, seed: int,
                                      instance: int | Sequence[int] = 0, availability_rate: float = 1.0) -> Observations:
    n = params.n
    P = np.empty((m, n))
    I = np.ones((m, n), dtype=bool)
    c = np.empty(m, dtype=np.intp)
    for i in range(m):
        rng = customer_rng(seed, instance, i)
        P[i] = law.sample(rng, n)
        if availability_rate < 1.0:
            I[i] = rng.random(n) < availability_rate
        pr = linear_demand_probs(params, P[i], I[i])
        k = min(int(np.searchsorted(np.cumsum(pr), rng.random(), side="right")), n)
        c[i] = NO_PURCHASE if k == n else k
    return Observations(P, c, I)


@dataclass
class LinearFit:
    status: Literal["ok", "rank_deficient"]
    params: LinearDemandParams | None
    unidentified: list[tuple[str, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def linear_demand_fit(obs: Observations, targets: ArrayLike | None = None) -> LinearFit:
    """Per-product least squares on purchase indicators.

    Regressors for product ``j`` are an intercept, its own price, the other
    prices times their availability and the other availability complements.
    ``targets`` (m x n) may replace the one-hot purchase indicators, e.g. by
    exact probabilities.  Regressors that vanish identically, or duplicate
    the intercept because a product is never offered, carry no information
    and are fixed at zero; any remaining collinearity is reported as
    ``rank_deficient``.
    """
    m, n = obs.m, obs.n
    P = obs.prices
    I = np.ones((m, n), bool) if obs.availability is None else np.asarray(obs.availability, bool)
    if targets is None:
        Y = np.zeros((m, n))
        buy = np.flatnonzero(obs.purchased)
        Y[buy, obs.choices[buy]] = 1.0
    else:
        Y = np.asarray(targets, dtype=float)
    alpha, beta = np.zeros(n), np.zeros(n)
    bx, gm = np.zeros((n, n)), np.zeros((n, n))
    unidentified: list[tuple[str, int, int]] = []
    for j in range(n):
        rows = I[:, j]
        others = [k for k in range(n) if k != j]
        cols = [np.ones(rows.sum()), P[rows, j]]
        labels: list[tuple[str, int]] = [("alpha", j), ("beta", j)]
        for k in others:
            x = (I[rows, k] * P[rows, k]).astype(float)
            if np.any(x != 0):
                cols.append(x)
                labels.append(("beta_cross", k))
            else:
                unidentified.append(("beta_cross", j, k))
            z = 1.0 - I[rows, k].astype(float)
            if np.any(z != 0) and np.any(z != 1):
                cols.append(z)
                labels.append(("gamma", k))
            else:
                unidentified.append(("gamma", j, k))
        X = np.column_stack(cols)
        if X.shape[0] < X.shape[1] or np.linalg.matrix_rank(X) < X.shape[1]:
            return LinearFit("rank_deficient", None, unidentified)
        coef = np.linalg.solve(X.T @ X, X.T @ Y[rows, j])
        for (kind, k), v in zip(labels, coef):
            if kind == "alpha":
                alpha[j] = v
            elif kind == "beta":
                beta[j] = -v
            elif kind == "beta_cross":
                bx[j, k] = v
            else:
                gm[j, k] = v
    return LinearFit("ok", LinearDemandParams(alpha, beta, bx, gm), unidentified)


# ----------------------------------------------------------------------------
# Plain-text configuration
# ----------------------------------------------------------------------------

TABLE_CONFIGS = {
    # label: (alpha range, price range); beta is 0.5 in both
    "low_utility": ((-2.0, 0.0), (2.5, 4.5)),
    "high_utility": ((1.0, 3.0), (5.5, 8.5)),
}


def _fmt_vec(v: ArrayLike) -> str:
    return ", ".join(repr(float(x)) for x in np.asarray(v).ravel())


def _fmt_mat(M: ArrayLike) -> str:
    return "; ".join(_fmt_vec(r) for r in np.atleast_2d(M))


def _parse_vec(s: str) -> NDArray:
    return np.array([float(t) for t in s.split(",") if t.strip()])


def _parse_mat(s: str) -> NDArray:
    return np.array([_parse_vec(r) for r in s.split(";")])


def params_to_config(params: MnlParams | MixedLogitParams | LinearDemandParams) -> str:
    """Serialise parameters as ``key = value`` lines under a model section."""
    cp = configparser.ConfigParser()
    if isinstance(params, MnlParams):
        cp["mnl"] = {"alpha": _fmt_vec(params.alpha), "beta": repr(params.beta)}
    elif isinstance(params, MixedLogitParams):
        cp["mixed_logit"] = {"weights": _fmt_vec(params.weights), "alphas": _fmt_mat(params.alphas),
                             "betas": _fmt_vec(params.betas)}
    elif isinstance(params, LinearDemandParams):
        cp["linear_demand"] = {"alpha": _fmt_vec(params.alpha), "beta": _fmt_vec(params.beta),
                               "beta_cross": _fmt_mat(params.beta_cross), "gamma": _fmt_mat(params.gamma)}
    else:
        raise TypeError(f"cannot serialise {type(params).__name__}")
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def params_from_config(text: str) -> MnlParams | MixedLogitParams | LinearDemandParams:
    cp = configparser.ConfigParser()
    cp.read_string(text)
    if cp.has_section("mnl"):
        s = cp["mnl"]
        return MnlParams(_parse_vec(s["alpha"]), float(s["beta"]))
    if cp.has_section("mixed_logit"):
        s = cp["mixed_logit"]
        return MixedLogitParams(_parse_vec(s["weights"]), _parse_mat(s["alphas"]), _parse_vec(s["betas"]))
    if cp.has_section("linear_demand"):
        s = cp["linear_demand"]
        return LinearDemandParams(_parse_vec(s["alpha"]), _parse_vec(s["beta"]),
                                  _parse_mat(s["beta_cross"]), _parse_mat(s["gamma"]))
    raise ValidationError("config has no [mnl], [mixed_logit] or [linear_demand] section")
