"""Transaction data model, validation and CSV ingestion.

A transaction dataset stores, for each of ``m`` historical customers, the
prices of all ``n`` products they saw and the product they bought.  Product
indices are 0-based inside the library; files use 1-based indices with 0
as the no-purchase sentinel.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

__all__ = [
    "ValidationError",
    "DatasetParseError",
    "TransactionDataset",
    "DatasetStats",
    "as_price_vector",
    "load_dataset",
    "save_dataset",
    "dumps_dataset",
    "loads_dataset",
    "mask_unseen_products",
    "stats",
]

TOL = 1e-9


class ValidationError(ValueError):
    """Raised when data violates a model invariant."""


class DatasetParseError(ValidationError):
    """Raised for malformed input files; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _frozen(a: NDArray) -> NDArray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class TransactionDataset:
    """Historical prices ``P`` (m x n) and chosen products ``choices`` (0-based).

    Attributes
    ----------
    prices : ndarray of shape (m, n)
        Strictly positive prices observed by each customer.
    choices : ndarray of shape (m,)
        Index of the product each customer bought.
    dropped : int
        Number of no-purchase rows removed at ingestion.
    """

    prices: NDArray[np.float64]
    choices: NDArray[np.intp]
    dropped: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        P = np.asarray(self.prices, dtype=np.float64)
        c = np.asarray(self.choices)
        if P.ndim != 2:
            raise ValidationError("prices must be a 2-d matrix")
        m, n = P.shape
        if m < 1 or n < 1:
            raise ValidationError("need at least one customer and one product")
        if c.shape != (m,):
            raise ValidationError(f"choices must have length {m}, got shape {c.shape}")
        if not np.all(np.isfinite(P)):
            raise ValidationError("prices must be finite")
        bad = np.argwhere(P <= 0)
        if bad.size:
            i, j = bad[0]
            raise ValidationError(f"non-positive price {P[i, j]} at customer {i}, product {j}")
        if not np.issubdtype(c.dtype, np.integer):
            if not np.all(np.equal(np.mod(c, 1), 0)):
                raise ValidationError("choices must be integers")
        c = c.astype(np.intp)
        out = np.flatnonzero((c < 0) | (c >= n))
        if out.size:
            raise ValidationError(f"choice {c[out[0]]} of customer {out[0]} outside 0..{n - 1}")
        object.__setattr__(self, "prices", _frozen(P))
        object.__setattr__(self, "choices", _frozen(c))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TransactionDataset):
            return NotImplemented
        return np.array_equal(self.prices, other.prices) and np.array_equal(self.choices, other.choices)

    __hash__ = None  # type: ignore[assignment]

    @property
    def m(self) -> int:
        return self.prices.shape[0]

    @property
    def n(self) -> int:
        return self.prices.shape[1]

    @property
    def purchase_prices(self) -> NDArray[np.float64]:
        """P[i, c_i] for every customer."""
        return self.prices[np.arange(self.m), self.choices]

    def purchase_price_sets(self) -> list[NDArray[np.float64]]:
        """Sorted purchase prices of each product (empty for products never bought)."""
        pp = self.purchase_prices
        return [np.sort(pp[self.choices == j]) for j in range(self.n)]

    @classmethod
    def from_rows(cls, prices: ArrayLike, choices: ArrayLike, *, one_based: bool = False) -> "TransactionDataset":
        """Build a dataset; with ``one_based`` the choices follow the file convention."""
        c = np.asarray(choices)
        if one_based:
            c = c - 1
        return cls(np.asarray(prices, dtype=np.float64), c)


@dataclass(frozen=True)
class DatasetStats:
    pmax: float
    plow: float
    global_min_price: float

    @property
    def pbar(self) -> float:
        return self.pmax


def stats(ds: TransactionDataset) -> DatasetStats:
    pp = ds.purchase_prices
    return DatasetStats(pmax=float(pp.max()), plow=float(pp.min()), global_min_price=float(ds.prices.min()))


def as_price_vector(p: ArrayLike, n: int) -> NDArray[np.float64]:
    """Validate a candidate price vector of length ``n``."""
    v = np.asarray(p, dtype=np.float64).reshape(-1)
    if v.shape != (n,):
        raise ValidationError(f"price vector must have length {n}, got {v.size}")
    if not np.all(np.isfinite(v)) or np.any(v < 0):
        raise ValidationError("prices must be finite and non-negative")
    return v


def mask_unseen_products(ds: TransactionDataset, seen: ArrayLike) -> TransactionDataset:
    """Replace unseen entries by the sum of all historical prices.

    A product a customer never saw behaves as if it had been offered at a
    price nobody would pay; the total of all prices is large enough.
    """
    S = np.asarray(seen, dtype=bool)
    if S.shape != ds.prices.shape:
        raise ValidationError(f"mask shape {S.shape} does not match {ds.prices.shape}")
    chosen_seen = S[np.arange(ds.m), ds.choices]
    if not chosen_seen.all():
        i = int(np.flatnonzero(~chosen_seen)[0])
        raise ValidationError(f"customer {i} has the chosen product marked unseen")
    big = float(ds.prices.sum())
    P = np.where(S, ds.prices, big)
    return TransactionDataset(P, ds.choices, dropped=ds.dropped)


# ----------------------------------------------------------------------------
# CSV input/output
# ----------------------------------------------------------------------------

def _parse_float(tok: str, line: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise DatasetParseError(f"cannot parse number {tok!r}", line) from None


def _parse_int(tok: str, line: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise DatasetParseError(f"cannot parse integer {tok!r}", line) from None


def _read_wide(rows: list[tuple[int, list[str]]]) -> TransactionDataset:
    (hline, header), body = rows[0], rows[1:]
    header = [h.strip() for h in header]
    n = len(header) - 1
    if n < 1 or header[-1] != "choice" or header[:-1] != [f"p_{j + 1}" for j in range(n)]:
        raise DatasetParseError("wide header must be p_1,...,p_n,choice", hline)
    P, c = [], []
    dropped = 0
    for line, row in body:
        if len(row) != n + 1:
            raise DatasetParseError(f"expected {n + 1} fields, got {len(row)}", line)
        prices = [_parse_float(t, line) for t in row[:-1]]
        choice = _parse_int(row[-1], line)
        if choice < 0 or choice > n:
            raise ValidationError(f"line {line}: choice {choice} outside 0..{n}")
        if any(not x > 0 for x in prices):
            raise ValidationError(f"line {line}: prices must be strictly positive")
        if choice == 0:
            dropped += 1
            continue
        P.append(prices)
        c.append(choice - 1)
    if not P:
        raise ValidationError("no purchasing customers in file")
    return TransactionDataset(np.array(P, dtype=np.float64), np.array(c), dropped=dropped)


def _read_long(rows: list[tuple[int, list[str]]]) -> TransactionDataset:
    (hline, header), body = rows[0], rows[1:]
    if [h.strip() for h in header] != ["customer_id", "product_id", "price", "chosen"]:
        raise DatasetParseError("long header must be customer_id,product_id,price,chosen", hline)
    table: dict[str, dict[int, float]] = {}
    chosen: dict[str, list[int]] = {}
    order: list[str] = []
    for line, row in body:
        if len(row) != 4:
            raise DatasetParseError(f"expected 4 fields, got {len(row)}", line)
        cid = row[0].strip()
        pid = _parse_int(row[1], line)
        price = _parse_float(row[2], line)
        flag = _parse_int(row[3], line)
        if flag not in (0, 1):
            raise DatasetParseError("chosen must be 0 or 1", line)
        if pid < 1:
            raise ValidationError(f"line {line}: product_id must be >= 1")
        if not price > 0:
            raise ValidationError(f"line {line}: prices must be strictly positive")
        if cid not in table:
            table[cid] = {}
            chosen[cid] = []
            order.append(cid)
        if pid in table[cid]:
            raise DatasetParseError(f"duplicate product {pid} for customer {cid}", line)
        table[cid][pid] = price
        if flag:
            chosen[cid].append(pid)
    if not order:
        raise ValidationError("no customers in file")
    n = max(max(t) for t in table.values())
    P, c = [], []
    dropped = 0
    for cid in order:
        if sorted(table[cid]) != list(range(1, n + 1)):
            raise ValidationError(f"customer {cid} does not list all {n} products")
        if len(chosen[cid]) > 1:
            raise ValidationError(f"customer {cid} has more than one chosen product")
        if not chosen[cid]:
            dropped += 1
            continue
        P.append([table[cid][j] for j in range(1, n + 1)])
        c.append(chosen[cid][0] - 1)
    if not P:
        raise ValidationError("no purchasing customers in file")
    return TransactionDataset(np.array(P, dtype=np.float64), np.array(c), dropped=dropped)


def loads_dataset(text: str, format: Literal["wide", "long"] = "wide") -> TransactionDataset:
    """Parse a dataset from CSV text."""
    reader = csv.reader(io.StringIO(text))
    rows = [(k + 1, r) for k, r in enumerate(reader) if r and any(t.strip() for t in r)]
    if not rows:
        raise DatasetParseError("empty file", 1)
    if format == "wide":
        return _read_wide(rows)
    if format == "long":
        return _read_long(rows)
    raise ValueError(f"unknown format {format!r}")


def load_dataset(path: str | os.PathLike, format: Literal["wide", "long"] = "wide") -> TransactionDataset:
    """Read a wide or long CSV file.  ``dataset.dropped`` counts no-purchase rows."""
    with open(path, encoding="utf-8", newline="") as fh:
        return loads_dataset(fh.read(), format)


def _fmt(x: float) -> str:
    # repr gives the shortest string that round-trips the double exactly
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def dumps_dataset(ds: TransactionDataset, format: Literal["wide", "long"] = "wide") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if format == "wide":
        w.writerow([f"p_{j + 1}" for j in range(ds.n)] + ["choice"])
        for row, c in zip(ds.prices, ds.choices):
            w.writerow([_fmt(x) for x in row] + [int(c) + 1])
    elif format == "long":
        w.writerow(["customer_id", "product_id", "price", "chosen"])
        for i, (row, c) in enumerate(zip(ds.prices, ds.choices)):
            for j, x in enumerate(row):
                w.writerow([i + 1, j + 1, _fmt(x), int(j == c)])
    else:
        raise ValueError(f"unknown format {format!r}")
    return buf.getvalue()


def save_dataset(ds: TransactionDataset, path: str | os.PathLike, format: Literal["wide", "long"] = "wide") -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(dumps_dataset(ds, format))
