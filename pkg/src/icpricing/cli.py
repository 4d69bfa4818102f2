"""Command-line front end.

Exit codes: 0 success, 2 validation error, 3 solver limit reached before a
proven optimum, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .choice_models import (
    TABLE_CONFIGS,
    MixedLogitParams,
    MnlParams,
    UniformPriceLaw,
    mixed_logit_sample_dataset,
    mnl_sample_dataset,
    params_from_config,
    params_to_config,
)
from .evaluator import total_worst_case
from .exact import (
    PricingSolution,
    SolverLimitError,
    SolverLimits,
    _solution,
    reprice_zeros,
    solve_exact,
    solve_g0_highs_milp,
    stagger_prices,
)
from .experiments import approx_instance, load_experiment_config, run_experiment
from .heuristics import (
    baseline_average_prices,
    baseline_random_historical,
    conservative_prices,
    cutoff_prices,
    gen_conservative_tight_instance,
    gen_cutoff_tight_instance,
    lp_relaxation_prices,
)
from .instance import (
    TransactionDataset,
    ValidationError,
    as_price_vector,
    dumps_dataset,
    load_dataset,
    save_dataset,
)
from .report import emit_report

EXIT_OK, EXIT_VALIDATION, EXIT_LIMIT, EXIT_IO = 0, 2, 3, 4
HEURISTIC_NAMES = ("conservative", "lp-relaxation", "cutoff", "average", "random-historical")
GENERATORS = ("uniform", "mnl", "mixed-logit", "conservative-tight", "cutoff-tight")
EXPERIMENTS = ("approx_performance", "small_data", "misspecification", "custom")

log = logging.getLogger("icpricing")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--data", help="transaction dataset (CSV)")
    g.add_argument("--data-format", choices=("wide", "long"), default="wide", help="dataset layout")
    g.add_argument("--config", help="INI file with model parameters or experiment settings")
    g.add_argument("--seed", type=int, help="master seed")
    g.add_argument("--delta", type=float, help="revenue slack for strict prices (default 1e-4)")
    g.add_argument("--gap-tol", type=float, help="absolute optimality gap accepted by branch-and-bound")
    g.add_argument("--node-cap", type=int, help="branch-and-bound node limit")
    g.add_argument("--time-cap", type=float, help="solver time limit in seconds")
    g.add_argument("--out", help="output file or directory")
    g.add_argument("--format", dest="fmt", help="text, json or csv; csv, markdown or both for experiments")
    g.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="icpricing", description="Robust pricing from transaction data.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="exact robust prices")
    s.add_argument("--backend", choices=("bb", "highs_milp"), default="bb")

    e = sub.add_parser("evaluate", parents=[common], help="worst-case revenue of a price vector")
    e.add_argument("--prices", required=True, help="comma-separated prices, one per product")
    e.add_argument("--semantics", choices=("strict", "closure"), default="strict")

    h = sub.add_parser("heuristic", parents=[common], help="approximate prices")
    h.add_argument("name", choices=HEURISTIC_NAMES)

    g = sub.add_parser("generate", parents=[common], help="write a synthetic dataset")
    g.add_argument("model", choices=GENERATORS)
    g.add_argument("--m", type=int, default=20, help="number of customers")
    g.add_argument("--n", type=int, default=6, help="number of products")
    g.add_argument("--k", type=int, default=1, help="tail size for cutoff-tight")
    g.add_argument("--utility", choices=tuple(TABLE_CONFIGS), default="low_utility")
    g.add_argument("--params-out", help="write the drawn model parameters here")

    x = sub.add_parser("experiment", parents=[common], help="run a comparison sweep")
    x.add_argument("kind", choices=EXPERIMENTS)
    x.add_argument("--m", help="comma-separated customer counts")
    x.add_argument("--n", help="comma-separated product counts")
    x.add_argument("--seeds", type=int, help="instances per cell")
    x.add_argument("--exact", choices=("bb", "highs_milp", "none"))
    x.add_argument("--workers", type=int)
    return parser


def _load(args) -> TransactionDataset:
    if not args.data:
        raise ValidationError("--data is required")
    return load_dataset(args.data, args.data_format)


def _limits(args) -> SolverLimits:
    lim = SolverLimits()
    if args.node_cap is not None:
        lim.node_cap = args.node_cap
    if args.gap_tol is not None:
        lim.gap_tol = args.gap_tol
    lim.time_cap = args.time_cap
    if lim.node_cap < 1 or lim.gap_tol < 0:
        raise ValidationError("node cap must be positive and gap tolerance non-negative")
    return lim


def _fmt_prices(p) -> str:
    return ",".join(repr(float(v)) for v in p)


def _emit(args, sol: PricingSolution, ds: TransactionDataset) -> None:
    fmt = args.fmt or "text"
    if fmt not in ("text", "json", "csv"):
        raise ValidationError(f"unknown output format {fmt!r}")
    if fmt == "json":
        data = {
            "method": sol.method,
            "prices": [float(v) for v in sol.prices],
            "g_value": sol.g_value,
            "strict_total": sol.strict_total,
            "gap": sol.gap,
            "nodes": sol.nodes,
            "bound": sol.bound,
            "info": {k: v for k, v in sol.info.items() if isinstance(v, (int, float, str, bool))},
        }
        text = json.dumps(data, indent=2) + "\n"
    elif fmt == "csv":
        text = "product,price\n" + "".join(f"{j + 1},{float(v)!r}\n" for j, v in enumerate(sol.prices))
    else:
        lines = [
            f"method        {sol.method}",
            f"customers     {ds.m}",
            f"products      {ds.n}",
            f"prices        {_fmt_prices(sol.prices)}",
            f"closure value {sol.g_value:.10g}",
            f"strict total  {sol.strict_total:.10g}",
        ]
        if sol.gap:
            lines.append(f"gap           {sol.gap:.6g}")
        if sol.nodes:
            lines.append(f"nodes         {sol.nodes}")
        text = "\n".join(lines) + "\n"
    _write(args.out, text)


def _write(out: str | None, text: str) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    ds = _load(args)
    delta = 1e-4 if args.delta is None else args.delta
    if args.backend == "highs_milp":
        if not delta > 0:
            raise ValidationError("delta must be positive")
        base = solve_g0_highs_milp(ds, args.time_cap)
        p0 = reprice_zeros(ds, base.prices)
        p, used = stagger_prices(p0, ds.m, ds.n, delta)
        sol = _solution(ds, p, "highs_milp", base_prices=p0, gap=base.gap)
        sol.info["delta_used"] = used
    else:
        sol = solve_exact(ds, delta, _limits(args))
    _emit(args, sol, ds)
    if sol.gap > 0:
        log.error("solver limit reached; best prices shown, gap %.6g", sol.gap)
        return EXIT_LIMIT
    return EXIT_OK


def _label(purchased: int | None) -> int:
    """1-based product number; 0 for no purchase."""
    return 0 if purchased is None else purchased + 1


def cmd_evaluate(args) -> int:
    ds = _load(args)
    try:
        p = as_price_vector([float(t) for t in args.prices.split(",")], ds.n)
    except ValueError as exc:
        raise ValidationError(f"bad --prices: {exc}") from exc
    total, per = total_worst_case(ds, p, args.semantics)
    fmt = args.fmt or "text"
    if fmt == "csv":
        rows = ["customer,revenue,purchased"]
        rows += [f"{i + 1},{c.revenue!r},{_label(c.purchased)}" for i, c in enumerate(per)]
        text = "\n".join(rows) + "\n"
    elif fmt == "json":
        text = json.dumps({
            "semantics": args.semantics,
            "total": total,
            "customers": [{"revenue": c.revenue, "purchased": _label(c.purchased)} for c in per],
        }, indent=2) + "\n"
    elif fmt == "text":
        text = f"{args.semantics} worst-case revenue {total:.10g}\n"
    else:
        raise ValidationError(f"unknown output format {fmt!r}")
    _write(args.out, text)
    return EXIT_OK


def cmd_heuristic(args) -> int:
    ds = _load(args)
    if args.name == "random-historical":
        sol, expected = baseline_random_historical(ds, args.seed)
    else:
        runner = {
            "conservative": conservative_prices,
            "lp-relaxation": lp_relaxation_prices,
            "cutoff": cutoff_prices,
            "average": baseline_average_prices,
        }[args.name]
        sol = runner(ds)
    _emit(args, sol, ds)
    return EXIT_OK


def cmd_generate(args) -> int:
    seed = 0 if args.seed is None else args.seed
    if args.m < 1 or args.n < 1:
        raise ValidationError("m and n must be positive")
    params = None
    if args.model == "uniform":
        cfg = load_experiment_config("approx_performance", m_values=(args.m,), n_values=(args.n,), seeds=1,
                                     seed=seed)
        ds = approx_instance(cfg, args.m, args.n, 0)
    elif args.model in ("mnl", "mixed-logit"):
        (alo, ahi), (plo, phi) = TABLE_CONFIGS[args.utility]
        law = UniformPriceLaw(plo, phi)
        rng = np.random.default_rng(seed)
        if args.config:
            params = params_from_config(Path(args.config).read_text(encoding="utf-8"))
        elif args.model == "mnl":
            params = MnlParams(rng.uniform(alo, ahi, args.n), 0.5)
        else:
            params = MixedLogitParams([0.5, 0.5], rng.uniform(alo, ahi, (2, args.n)), [0.5, 2.0])
        if args.model == "mnl" and isinstance(params, MnlParams):
            ds = mnl_sample_dataset(params, law, args.m, seed)
        elif args.model == "mixed-logit" and isinstance(params, MixedLogitParams):
            ds = mixed_logit_sample_dataset(params, law, args.m, seed)
        else:
            raise ValidationError(f"--config does not hold {args.model} parameters")
    elif args.model == "conservative-tight":
        ds = gen_conservative_tight_instance(args.m, 1.0, 2.0)
    else:
        ds = gen_cutoff_tight_instance(args.m, args.k, 1e-6 if args.delta is None else args.delta)
    if args.out:
        save_dataset(ds, args.out, args.data_format)
    else:
        sys.stdout.write(dumps_dataset(ds, args.data_format))
    if params is not None and args.params_out:
        Path(args.params_out).write_text(params_to_config(params), encoding="utf-8")
    log.info("wrote %d customers x %d products (%d walk-aways dropped)", ds.m, ds.n, ds.dropped)
    return EXIT_OK


def _int_list(s: str | None) -> tuple[int, ...] | None:
    if s is None:
        return None
    try:
        return tuple(int(t) for t in s.split(",") if t.strip())
    except ValueError as exc:
        raise ValidationError(f"bad integer list {s!r}") from exc


def cmd_experiment(args) -> int:
    text = Path(args.config).read_text(encoding="utf-8") if args.config else None
    extra = {}
    if args.kind == "custom" and args.data:
        extra["data_files"] = tuple(t for t in args.data.split(",") if t)
    cfg = load_experiment_config(
        args.kind, text,
        m_values=_int_list(args.m), n_values=_int_list(args.n), seeds=args.seeds, seed=args.seed,
        delta=args.delta, node_cap=args.node_cap, gap_tol=args.gap_tol, time_cap=args.time_cap,
        exact=args.exact, workers=args.workers, out_dir=args.out, **extra,
    )
    fmt = args.fmt or "both"
    if fmt not in ("csv", "markdown", "both"):
        raise ValidationError(f"unknown report format {fmt!r}")
    records = run_experiment(cfg)
    paths = emit_report(records, cfg.out_dir, fmt)
    for p in paths:
        print(p)
    flagged = sum(r.flagged for r in records)
    if flagged:
        log.warning("%d records without a proven optimum", flagged)
        return EXIT_LIMIT
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "evaluate": cmd_evaluate,
    "heuristic": cmd_heuristic,
    "generate": cmd_generate,
    "experiment": cmd_experiment,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SolverLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
