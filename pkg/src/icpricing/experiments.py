"""Synthetic comparison sweeps.

Three experiment kinds mirror the benchmark studies:

* ``approx_performance``: uniform random prices and uniform random choices;
  the approximations are scored against the exact robust optimum.
* ``small_data``: MNL ground truth; the data-driven prices compete with the
  optimal prices of an MNL model fitted to the same few observations.
* ``misspecification``: two-class mixed logit ground truth with an MNL fit.

A ``custom`` kind runs the approximation comparison on datasets read from
disk.  Records come back sorted by (config, m, n, instance, method) no
matter how many workers were used, and wall time is kept apart from the
deterministic columns.
"""

from __future__ import annotations

import configparser
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Literal

import numpy as np
from numpy.typing import NDArray

from .choice_models import (
    TABLE_CONFIGS,
    MixedLogitParams,
    MnlParams,
    Observations,
    UniformPriceLaw,
    mixed_logit_expected_revenue,
    mixed_logit_sample_observations,
    mnl_expected_revenue,
    mnl_fit,
    mnl_optimal_prices,
    mnl_sample_observations,
)
from .exact import (
    SolverLimits,
    reprice_zeros,
    solve_g0_branch_and_bound,
    solve_g0_highs_milp,
    stagger_prices,
)
from .heuristics import (
    baseline_average_prices,
    baseline_random_historical,
    conservative_prices,
    cutoff_prices,
    lp_relaxation_prices,
)
from .instance import TransactionDataset, ValidationError, load_dataset

__all__ = [
    "ExperimentConfig",
    "RunRecord",
    "APPROX_METHODS",
    "CHOICE_METHODS",
    "load_experiment_config",
    "run_experiment",
    "run_approx_performance",
    "run_small_data",
    "run_misspecification",
    "run_custom",
    "approx_instance",
]

log = logging.getLogger(__name__)

Kind = Literal["approx_performance", "small_data", "misspecification", "custom"]
ExactBackend = Literal["bb", "highs_milp", "none"]

APPROX_METHODS = ("exact", "conservative", "lp_relaxation", "cutoff", "average", "random_historical")
CHOICE_METHODS = ("exact", "cutoff", "mnl_fitted", "mnl_true")
_KIND_CODE = {"approx_performance": 0, "small_data": 1, "misspecification": 2, "custom": 3}
# beyond this size the in-repo branch-and-bound is not expected to finish
DESK_M, DESK_N = 20, 6


@dataclass(frozen=True)
class ExperimentConfig:
    """Settings of one sweep.

    ``m_values`` and ``n_values`` span the grid; ``seeds`` instances are
    drawn per cell from the master ``seed``.  ``price_range`` is used by
    ``approx_performance``; the choice-model kinds take alpha and price
    ranges from the named ``utilities`` configurations.
    """

    kind: Kind
    m_values: tuple[int, ...] = (10, 15, 20)
    n_values: tuple[int, ...] = (4, 6)
    seeds: int = 20
    seed: int = 0
    price_range: tuple[float, float] = (0.0, 10.0)
    utilities: tuple[str, ...] = ("low_utility",)
    beta: float = 0.5
    mixture_betas: tuple[float, float] = (0.5, 2.0)
    mixture_weights: tuple[float, float] = (0.5, 0.5)
    identical_classes: bool = False
    delta: float = 1e-4
    limits: SolverLimits = field(default_factory=SolverLimits)
    exact: ExactBackend = "bb"
    methods: tuple[str, ...] = ()
    data_files: tuple[str, ...] = ()
    max_resamples: int = 100
    workers: int = 1
    out_dir: str = "results"

    def __post_init__(self) -> None:
        if self.kind not in _KIND_CODE:
            raise ValidationError(f"unknown experiment kind {self.kind!r}")
        if self.kind == "custom":
            if not self.data_files:
                raise ValidationError("custom experiments need at least one data file")
        else:
            if not self.m_values or not self.n_values:
                raise ValidationError("m and n lists must be non-empty")
            if min(self.m_values) < 1 or min(self.n_values) < 1:
                raise ValidationError("m and n values must be positive")
            if self.seeds < 1:
                raise ValidationError("seeds must be positive")
        lo, hi = self.price_range
        if not 0 <= lo < hi:
            raise ValidationError("price range must satisfy 0 <= low < high")
        for u in self.utilities:
            if u not in TABLE_CONFIGS:
                raise ValidationError(f"unknown utility configuration {u!r}")
        if not self.beta > 0 or min(self.mixture_betas) <= 0:
            raise ValidationError("price sensitivities must be positive")
        if not self.delta > 0:
            raise ValidationError("delta must be positive")
        if self.exact not in ("bb", "highs_milp", "none"):
            raise ValidationError(f"unknown exact backend {self.exact!r}")
        if self.max_resamples < 0 or self.workers < 1:
            raise ValidationError("max_resamples must be >= 0 and workers >= 1")
        allowed = APPROX_METHODS if self.kind in ("approx_performance", "custom") else CHOICE_METHODS
        bad = [m for m in self.methods if m not in allowed]
        if bad:
            raise ValidationError(f"unknown methods {bad} for {self.kind}")

    @property
    def method_list(self) -> tuple[str, ...]:
        if self.methods:
            chosen = self.methods
        elif self.kind in ("approx_performance", "custom"):
            chosen = APPROX_METHODS
        else:
            chosen = CHOICE_METHODS
        if self.exact == "none":
            chosen = tuple(m for m in chosen if m != "exact")
        return chosen

    @property
    def requires_external_backend(self) -> bool:
        """True for sizes the in-repo branch-and-bound is not meant for."""
        if self.exact != "bb" or "exact" not in self.method_list or self.kind == "custom":
            return False
        return max(self.m_values) > DESK_M or max(self.n_values) > DESK_N


@dataclass(frozen=True)
class RunRecord:
    """One (instance, method) outcome.

    ``value`` is the closure objective for ``approx_performance`` and
    ``custom`` and the expected ground-truth revenue otherwise.  ``ratio``
    is ``value`` over the exact optimum (approximation sweeps) or over the
    true-model optimal revenue (choice-model sweeps).  ``improvement`` is
    ``(value - fitted MNL value) / true optimal revenue``.
    """

    experiment: str
    config: str
    m: int
    n: int
    instance: int
    method: str
    value: float
    strict_value: float = math.nan
    ratio: float = math.nan
    improvement: float = math.nan
    gap: float = 0.0
    flagged: bool = False
    resamples: int = 0
    buyers: int = 0
    wall_time: float = 0.0


def _timed(fn: Callable, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def _stream(*key: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(k) for k in key])))


def _exact(ds: TransactionDataset, cfg: ExperimentConfig, stagger: bool) -> tuple[NDArray, float, float]:
    """Exact robust prices with ``(closure value, gap)``; staggered on request."""
    if cfg.exact == "highs_milp":
        sol = solve_g0_highs_milp(ds, cfg.limits.time_cap)
    else:
        sol = solve_g0_branch_and_bound(ds, cfg.limits)
    p = sol.prices
    if stagger:
        p, _ = stagger_prices(reprice_zeros(ds, p), ds.m, ds.n, cfg.delta)
    return p, sol.g_value, sol.gap


# ----------------------------------------------------------------------------
# Approximation performance
# ----------------------------------------------------------------------------

def approx_instance(cfg: ExperimentConfig, m: int, n: int, k: int) -> TransactionDataset:
    """Uniform prices on ``price_range`` and uniformly random choices."""
    rng = _stream(cfg.seed, _KIND_CODE["approx_performance"], m, n, k)
    law = UniformPriceLaw(*cfg.price_range)
    P = np.vstack([law.sample(rng, n) for _ in range(m)])
    choices = rng.integers(0, n, size=m)
    return TransactionDataset(P, choices)


def _score_approx(ds: TransactionDataset, cfg: ExperimentConfig, label: str, m: int, n: int, k: int) -> list[RunRecord]:
    methods = cfg.method_list
    rows: list[tuple[str, float, float, float, float]] = []  # method, value, strict, gap, time
    exact_value = math.nan
    exact_gap = 0.0
    if "exact" in methods:
        (p, g, gap), t = _timed(_exact, ds, cfg, False)
        exact_value, exact_gap = g, gap
        rows.append(("exact", g, math.nan, gap, t))
    runners = {
        "conservative": conservative_prices,
        "lp_relaxation": lp_relaxation_prices,
        "cutoff": cutoff_prices,
        "average": baseline_average_prices,
    }
    for name in methods:
        if name in runners:
            sol, t = _timed(runners[name], ds)
            rows.append((name, sol.g_value, sol.strict_total, 0.0, t))
        elif name == "random_historical":
            (sol, expected), t = _timed(baseline_random_historical, ds, cfg.seed)
            rows.append((name, expected, math.nan, 0.0, t))
    flagged = exact_gap > 0
    out = []
    for name, value, strict, gap, t in rows:
        ratio = math.nan
        if not math.isnan(exact_value) and not flagged and exact_value > 0:
            ratio = value / exact_value
            if ratio > 1 + 1e-9:
                log.warning("%s beats the exact optimum on %s instance %d (%.12g > %.12g)",
                            name, label, k, value, exact_value)
        out.append(RunRecord(cfg.kind, label, m, n, k, name, value, strict, ratio, math.nan,
                             gap, flagged, 0, ds.m, t))
    return out


def _approx_task(args: tuple[ExperimentConfig, int, int, int]) -> list[RunRecord]:
    cfg, m, n, k = args
    ds = approx_instance(cfg, m, n, k)
    return _score_approx(ds, cfg, "uniform", m, n, k)


def run_approx_performance(cfg: ExperimentConfig) -> list[RunRecord]:
    """Exact optimum and every approximation on uniform random instances."""
    if cfg.kind != "approx_performance":
        cfg = replace(cfg, kind="approx_performance")
    _warn_scale(cfg)
    tasks = [(cfg, m, n, k) for m in cfg.m_values for n in cfg.n_values for k in range(cfg.seeds)]
    return _collect(_approx_task, tasks, cfg.workers)


def run_custom(cfg: ExperimentConfig) -> list[RunRecord]:
    """Approximation comparison on datasets loaded from ``data_files``."""
    out = []
    for k, path in enumerate(cfg.data_files):
        ds = load_dataset(path)
        out += _score_approx(ds, cfg, Path(path).name, ds.m, ds.n, k)
    return _sorted(out)


# ----------------------------------------------------------------------------
# Choice-model experiments
# ----------------------------------------------------------------------------

def _fit_prices(obs: Observations) -> NDArray | None:
    fit = mnl_fit(obs, drop_unchosen=True)
    if not fit.ok:
        return None
    p, _ = mnl_optimal_prices(fit.params)
    return np.full(obs.n, p[0])


def _choice_task(args: tuple[ExperimentConfig, str, int, int, int]) -> list[RunRecord]:
    cfg, label, m, n, k = args
    (alo, ahi), (plo, phi) = TABLE_CONFIGS[label]
    law = UniformPriceLaw(plo, phi)
    code = _KIND_CODE[cfg.kind]
    ucode = list(TABLE_CONFIGS).index(label)
    misspec = cfg.kind == "misspecification"
    for attempt in range(cfg.max_resamples + 1):
        rng = _stream(cfg.seed, code, ucode, m, n, k, attempt)
        key = (code, ucode, m, n, k, attempt)
        if misspec:
            alphas = rng.uniform(alo, ahi, (2, n))
            betas = np.asarray(cfg.mixture_betas, dtype=float)
            if cfg.identical_classes:
                alphas[1] = alphas[0]
                betas = np.full(2, betas[0])
            truth = MixedLogitParams(cfg.mixture_weights, alphas, betas)
            obs = mixed_logit_sample_observations(truth, law, m, cfg.seed, key)
            score = lambda p: mixed_logit_expected_revenue(truth, p)  # noqa: E731
            # identical classes are a plain MNL, whose optimum is known
            true_opt = mnl_optimal_prices(truth.classes()[0])[1] if cfg.identical_classes else math.nan
        else:
            truth = MnlParams(rng.uniform(alo, ahi, n), cfg.beta)
            obs = mnl_sample_observations(truth, law, m, cfg.seed, key)
            score = lambda p: mnl_expected_revenue(truth, p)  # noqa: E731
            true_opt = mnl_optimal_prices(truth)[1]
        if not obs.purchased.any():
            continue
        fitted, t_fit = _timed(_fit_prices, obs)
        if fitted is not None:
            break
    else:
        raise RuntimeError(f"MNL fit failed {cfg.max_resamples + 1} times for {label} m={m} instance {k}")
    resamples = attempt
    ds = obs.to_dataset()
    rows: list[tuple[str, NDArray, float, float]] = []
    for name in cfg.method_list:
        if name == "exact":
            (p, _, gap), t = _timed(_exact, ds, cfg, True)
            rows.append((name, p, gap, t))
        elif name == "cutoff":
            sol, t = _timed(cutoff_prices, ds)
            rows.append((name, sol.prices, 0.0, t))
        elif name == "mnl_fitted":
            rows.append((name, fitted, 0.0, t_fit))
        elif name == "mnl_true" and not math.isnan(true_opt):
            mnl = truth.classes()[0] if misspec else truth
            rows.append((name, mnl_optimal_prices(mnl)[0], 0.0, 0.0))
    fit_value = score(fitted)
    out = []
    for name, p, gap, t in rows:
        value = score(p)
        ratio = value / true_opt if not math.isnan(true_opt) else math.nan
        improvement = (value - fit_value) / true_opt if not math.isnan(true_opt) else math.nan
        out.append(RunRecord(cfg.kind, label, m, n, k, name, value, math.nan, ratio, improvement,
                             gap, gap > 0, resamples, ds.m, t))
    return out


def _run_choice(cfg: ExperimentConfig) -> list[RunRecord]:
    _warn_scale(cfg)
    tasks = [(cfg, u, m, n, k) for u in cfg.utilities for m in cfg.m_values for n in cfg.n_values
             for k in range(cfg.seeds)]
    return _collect(_choice_task, tasks, cfg.workers)


def run_small_data(cfg: ExperimentConfig) -> list[RunRecord]:
    """MNL ground truth; data-driven prices versus fitted-MNL prices.

    An instance whose MNL fit fails is redrawn; ``resamples`` counts the
    redraws.
    """
    return _run_choice(replace(cfg, kind="small_data"))


def run_misspecification(cfg: ExperimentConfig) -> list[RunRecord]:
    """Mixed-logit ground truth fitted with a single-class MNL."""
    return _run_choice(replace(cfg, kind="misspecification"))


# ----------------------------------------------------------------------------
# Plumbing
# ----------------------------------------------------------------------------

def _warn_scale(cfg: ExperimentConfig) -> None:
    if cfg.requires_external_backend:
        log.warning("sizes up to m=%d, n=%d need an external backend (exact = highs_milp)",
                    max(cfg.m_values), max(cfg.n_values))


def config_key(label: str) -> tuple[int, str]:
    """Named utility configurations first, in table order."""
    names = list(TABLE_CONFIGS)
    return (names.index(label) if label in names else len(names), label)


def method_key(name: str) -> int:
    order: dict[str, int] = {}
    for m in APPROX_METHODS + CHOICE_METHODS:
        order.setdefault(m, len(order))
    return order.get(name, len(order))


def _sorted(records: list[RunRecord]) -> list[RunRecord]:
    return sorted(records, key=lambda r: (config_key(r.config), r.m, r.n, r.instance, method_key(r.method)))


def _collect(fn: Callable, tasks: list, workers: int) -> list[RunRecord]:
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(fn, tasks))
    else:
        chunks = [fn(t) for t in tasks]
    return _sorted([r for chunk in chunks for r in chunk])


def run_experiment(cfg: ExperimentConfig) -> list[RunRecord]:
    runners = {
        "approx_performance": run_approx_performance,
        "small_data": run_small_data,
        "misspecification": run_misspecification,
        "custom": run_custom,
    }
    return runners[cfg.kind](cfg)


_DEFAULTS: dict[str, dict] = {
    "approx_performance": {},
    "small_data": {"m_values": (20, 40, 60), "n_values": (10,), "utilities": ("low_utility", "high_utility"),
                   "exact": "highs_milp"},
    "misspecification": {"m_values": (50,), "n_values": (10,), "utilities": ("low_utility", "high_utility"),
                         "exact": "highs_milp"},
    "custom": {},
}


def _ints(s: str) -> tuple[int, ...]:
    return tuple(int(t) for t in s.replace(",", " ").split())


def _floats(s: str) -> tuple[float, ...]:
    return tuple(float(t) for t in s.replace(",", " ").split())


def _words(s: str) -> tuple[str, ...]:
    return tuple(t for t in s.replace(",", " ").split())


def load_experiment_config(kind: Kind, text: str | None = None, **overrides) -> ExperimentConfig:
    """Build a config from kind defaults, an optional INI ``[experiment]``
    section, and keyword overrides (``None`` values are ignored).

    Keys: ``m``, ``n``, ``seeds``, ``seed``, ``price_low``, ``price_high``,
    ``utilities``, ``beta``, ``mixture_betas``, ``mixture_weights``,
    ``identical_classes``, ``delta``, ``node_cap``, ``gap_tol``,
    ``time_cap``, ``exact``, ``methods``, ``data``, ``max_resamples``,
    ``workers``, ``out``.
    """
    if kind not in _KIND_CODE:
        raise ValidationError(f"unknown experiment kind {kind!r}")
    kw: dict = dict(_DEFAULTS[kind])
    limits = {}
    if text:
        cp = configparser.ConfigParser()
        try:
            cp.read_string(text)
        except configparser.Error as exc:
            raise ValidationError(f"bad experiment config: {exc}") from exc
        if cp.has_section("experiment"):
            s = cp["experiment"]
            try:
                conv = {
                    "m": ("m_values", _ints), "n": ("n_values", _ints), "seeds": ("seeds", int),
                    "seed": ("seed", int), "utilities": ("utilities", _words), "beta": ("beta", float),
                    "mixture_betas": ("mixture_betas", _floats), "mixture_weights": ("mixture_weights", _floats),
                    "delta": ("delta", float), "exact": ("exact", str.strip), "methods": ("methods", _words),
                    "data": ("data_files", _words), "max_resamples": ("max_resamples", int),
                    "workers": ("workers", int), "out": ("out_dir", str.strip),
                }
                for key, (attr, fn) in conv.items():
                    if key in s:
                        kw[attr] = fn(s[key])
                if "identical_classes" in s:
                    kw["identical_classes"] = s.getboolean("identical_classes")
                if "price_low" in s or "price_high" in s:
                    kw["price_range"] = (float(s.get("price_low", "0")), float(s.get("price_high", "10")))
                for key, fn in (("node_cap", int), ("gap_tol", float), ("time_cap", float)):
                    if key in s:
                        limits[key] = fn(s[key])
            except ValueError as exc:
                raise ValidationError(f"bad experiment config value: {exc}") from exc
    for key in ("node_cap", "gap_tol", "time_cap"):
        v = overrides.pop(key, None)
        if v is not None:
            limits[key] = v
    kw.update({k: v for k, v in overrides.items() if v is not None})
    if limits:
        kw["limits"] = replace(kw.get("limits", SolverLimits()), **limits)
    return ExperimentConfig(kind=kind, **kw)
