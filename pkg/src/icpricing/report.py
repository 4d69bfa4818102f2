"""CSV and markdown summaries of experiment records.

``records.csv`` holds one row per (instance, method) and ``summary.csv``
one row per (experiment, config, m, n, method); neither contains wall time,
so a fixed master seed reproduces them byte for byte.  Wall times go to
``timings.csv``.  ``summary.md`` renders the summaries as "mean (stderr)"
tables.
"""

from __future__ import annotations

import csv
import io
import math
from collections import OrderedDict
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Iterable, Literal, Sequence

import numpy as np

from .experiments import RunRecord, config_key, method_key
from .instance import ValidationError

__all__ = [
    "SummaryRow",
    "mean_stderr",
    "format_mean_stderr",
    "summarize",
    "records_csv",
    "timings_csv",
    "summary_csv",
    "summary_markdown",
    "emit_report",
]

RECORD_COLUMNS = tuple(f.name for f in fields(RunRecord) if f.name != "wall_time")
TIMING_COLUMNS = ("experiment", "config", "m", "n", "instance", "method", "wall_time")
METHOD_LABELS = {
    "exact": "Data-driven optimal",
    "cutoff": "Cut-off pricing",
    "mnl_fitted": "MNL optimal pricing",
    "mnl_true": "True MNL optimum",
    "conservative": "Conservative",
    "lp_relaxation": "LP relaxation",
    "average": "Average price",
    "random_historical": "Random historical",
}
CONFIG_LABELS = {"low_utility": "Low-utility experiment", "high_utility": "High-utility experiment"}


@dataclass(frozen=True)
class SummaryRow:
    experiment: str
    config: str
    m: int
    n: int
    method: str
    count: int
    excluded: int
    resamples: int
    mean_value: float
    stderr_value: float | None
    mean_ratio: float | None
    stderr_ratio: float | None
    mean_improvement: float | None
    stderr_improvement: float | None


def mean_stderr(values: Iterable[float]) -> tuple[float | None, float | None]:
    """Mean and standard error of the non-NaN values; stderr is ``None`` below two values."""
    a = np.array([v for v in values if not math.isnan(v)], dtype=float)
    if a.size == 0:
        return None, None
    if a.size == 1:
        return float(a[0]), None
    return float(a.mean()), float(a.std(ddof=1) / math.sqrt(a.size))


def format_mean_stderr(mean: float | None, se: float | None, digits: int = 3, percent: bool = False) -> str:
    if mean is None:
        return ""
    scale, unit = (100.0, "%") if percent else (1.0, "")
    d = 1 if percent else digits
    text = f"{mean * scale:.{d}f}{unit}"
    if se is not None:
        text += f" ({se * scale:.{d}f}{unit})"
    return text


def summarize(records: Sequence[RunRecord]) -> list[SummaryRow]:
    """One row per (experiment, config, m, n, method); flagged rows are left out of the ratio means."""
    groups: OrderedDict[tuple, list[RunRecord]] = OrderedDict()
    for r in sorted(records, key=lambda r: (r.experiment, config_key(r.config), r.m, r.n, method_key(r.method))):
        groups.setdefault((r.experiment, r.config, r.m, r.n, r.method), []).append(r)
    out = []
    for (exp, config, m, n, method), rs in groups.items():
        ok = [r for r in rs if not r.flagged]
        mv, sv = mean_stderr(r.value for r in rs)
        mr, sr = mean_stderr(r.ratio for r in ok)
        mi, si = mean_stderr(r.improvement for r in ok)
        # resamples are per instance, so count each instance once
        resamples = sum({r.instance: r.resamples for r in rs}.values())
        out.append(SummaryRow(exp, config, m, n, method, len(rs), len(rs) - len(ok), resamples,
                              mv, sv, mr, sr, mi, si))
    return out


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return "" if math.isnan(x) else repr(x)
    return str(x)


def _csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(x) for x in row])
    return buf.getvalue()


def records_csv(records: Sequence[RunRecord]) -> str:
    return _csv(RECORD_COLUMNS, ([getattr(r, c) for c in RECORD_COLUMNS] for r in records))


def timings_csv(records: Sequence[RunRecord]) -> str:
    return _csv(TIMING_COLUMNS, ([getattr(r, c) for c in TIMING_COLUMNS] for r in records))


def summary_csv(summary: Sequence[SummaryRow]) -> str:
    cols = [f.name for f in fields(SummaryRow)]
    return _csv(cols, ([getattr(s, c) for c in cols] for s in summary))


def _table(header: list[str], rows: list[list[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(r) + " |" for r in rows]
    return "\n".join(lines)


def _approx_md(rows: list[SummaryRow]) -> str:
    methods = list(OrderedDict.fromkeys(s.method for s in rows))
    cells: OrderedDict[tuple, dict[str, str]] = OrderedDict()
    for s in rows:
        cells.setdefault((s.config, s.m, s.n), {})[s.method] = format_mean_stderr(s.mean_ratio, s.stderr_ratio,
                                                                                  percent=True)
    multi = len({k[0] for k in cells}) > 1
    header = (["Data"] if multi else []) + ["m", "n"] + [METHOD_LABELS.get(mt, mt) for mt in methods]
    body = [([c] if multi else []) + [str(m), str(n)] + [d.get(mt, "") for mt in methods]
            for (c, m, n), d in cells.items()]
    return "Ratio to the exact optimum, mean (stderr)\n\n" + _table(header, body)


def _small_data_md(rows: list[SummaryRow]) -> str:
    methods = [mt for mt in OrderedDict.fromkeys(s.method for s in rows) if mt != "mnl_fitted"]
    cells: OrderedDict[tuple, dict[str, str]] = OrderedDict()
    for s in rows:
        cells.setdefault((s.config, s.m), {})[s.method] = format_mean_stderr(s.mean_improvement,
                                                                             s.stderr_improvement, percent=True)
    header = ["Experiment", "m"] + [METHOD_LABELS.get(mt, mt) for mt in methods]
    body = [[CONFIG_LABELS.get(c, c), str(m)] + [d.get(mt, "") for mt in methods] for (c, m), d in cells.items()]
    return ("Improvement over fitted-MNL prices, relative to the true optimal revenue, mean (stderr)\n\n"
            + _table(header, body))


def _misspec_md(rows: list[SummaryRow]) -> str:
    methods = list(OrderedDict.fromkeys(s.method for s in rows))
    cols = list(OrderedDict.fromkeys((s.config, s.m, s.n) for s in rows))
    one_size = len({(m, n) for _, m, n in cols}) == 1
    header = ["Pricing method"] + [CONFIG_LABELS.get(c, c) if one_size else f"{CONFIG_LABELS.get(c, c)}, m={m}"
                                   for c, m, _ in cols]
    lookup = {(s.method, s.config, s.m, s.n): s for s in rows}
    body = []
    for mt in methods:
        line = [METHOD_LABELS.get(mt, mt)]
        for col in cols:
            s = lookup.get((mt, *col))
            line.append(format_mean_stderr(s.mean_value, s.stderr_value) if s else "")
        body.append(line)
    return "Expected revenue under the mixed logit model, mean (stderr)\n\n" + _table(header, body)


def summary_markdown(summary: Sequence[SummaryRow]) -> str:
    parts = []
    for exp in OrderedDict.fromkeys(s.experiment for s in summary):
        rows = [s for s in summary if s.experiment == exp]
        if exp == "small_data":
            parts.append(_small_data_md(rows))
        elif exp == "misspecification":
            parts.append(_misspec_md(rows))
        else:
            parts.append(_approx_md(rows))
        excluded = sum(s.excluded for s in rows)
        resampled = sum(s.resamples for s in rows if s.method == rows[0].method)
        notes = []
        if excluded:
            notes.append(f"{excluded} rows without a proven optimum left out of the ratios")
        if resampled:
            notes.append(f"{resampled} instances redrawn after a failed MNL fit")
        if notes:
            parts[-1] += "\n\n" + "; ".join(notes) + "."
    return f"# {', '.join(OrderedDict.fromkeys(s.experiment for s in summary))}\n\n" + "\n\n".join(parts) + "\n"


def emit_report(
    records: Sequence[RunRecord],
    out_dir: str | Path,
    format: Literal["csv", "markdown", "both"] = "both",
) -> list[Path]:
    """Write the report files into ``out_dir`` and return their paths.

    An output directory that cannot be created or written raises ``OSError``.
    """
    if not records:
        raise ValidationError("no records to report")
    if format not in ("csv", "markdown", "both"):
        raise ValidationError(f"unknown report format {format!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = summarize(records)
    files: list[tuple[str, str]] = []
    if format in ("csv", "both"):
        files += [("records.csv", records_csv(records)), ("summary.csv", summary_csv(summary)),
                  ("timings.csv", timings_csv(records))]
    if format in ("markdown", "both"):
        files.append(("summary.md", summary_markdown(summary)))
    paths = []
    for name, text in files:
        path = out / name
        path.write_text(text, encoding="utf-8")
        paths.append(path)
    return paths
