"""Dense linear programming: a model builder and a bounded-variable simplex.

The solver works on ``min c.x`` subject to ``row_lo <= A x <= row_hi`` and
``lb <= x <= ub``.  Each row gets a logical variable ``s = A x`` so that the
tableau always has the identity of the logicals as a starting basis.  Phase 1
minimises the sum of bound violations of basic variables, phase 2 is the
usual primal simplex with Dantzig pricing.  After a run of degenerate pivots
the pricing switches to Bland's smallest-index rule until progress resumes.

:class:`Simplex` also exposes a dual simplex so that branch-and-bound can
tighten bounds on a solved tableau and re-optimise from the parent basis.
"""

from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass, field
from typing import Literal, Mapping, TextIO

import numpy as np
from numpy.typing import ArrayLike, NDArray

__all__ = [
    "LpModel",
    "LpSolution",
    "Simplex",
    "solve_lp",
    "solve_lp_relaxation_of_milp",
    "LpStatus",
]

LpStatus = Literal["optimal", "infeasible", "unbounded", "iteration_limit"]

INF = math.inf


class LpModel:
    """Incrementally built linear (or mixed-integer) program.

    Bounds given as ``None`` are infinite.  Constraint senses are ``"<="``,
    ``">="`` and ``"="``.
    """

    def __init__(self, sense: Literal["max", "min"] = "max", name: str = "model"):
        if sense not in ("max", "min"):
            raise ValueError("sense must be 'max' or 'min'")
        self.sense = sense
        self.name = name
        self.var_names: list[str] = []
        self.lb: list[float] = []
        self.ub: list[float] = []
        self.integer: list[bool] = []
        self.obj: dict[int, float] = {}
        self.rows: list[dict[int, float]] = []
        self.row_lo: list[float] = []
        self.row_hi: list[float] = []
        self.row_names: list[str] = []
        self._dense: tuple | None = None

    # -- building -----------------------------------------------------------
    def add_var(self, name: str | None = None, lb: float | None = 0.0, ub: float | None = None, integer: bool = False) -> int:
        k = len(self.var_names)
        self.var_names.append(name or f"x{k}")
        self.lb.append(-INF if lb is None else float(lb))
        self.ub.append(INF if ub is None else float(ub))
        self.integer.append(bool(integer))
        self._dense = None
        return k

    def add_constr(self, coeffs: Mapping[int, float], sense: str, rhs: float, name: str | None = None) -> int:
        nv = len(self.var_names)
        row = {}
        for j, a in coeffs.items():
            if not 0 <= j < nv:
                raise ValueError(f"constraint references undeclared variable {j}")
            a = float(a)
            if not math.isfinite(a):
                raise ValueError("coefficients must be finite")
            if a != 0.0:
                row[int(j)] = row.get(int(j), 0.0) + a
        rhs = float(rhs)
        if sense == "<=":
            lo, hi = -INF, rhs
        elif sense == ">=":
            lo, hi = rhs, INF
        elif sense in ("=", "=="):
            lo, hi = rhs, rhs
        else:
            raise ValueError(f"unknown constraint sense {sense!r}")
        k = len(self.rows)
        self.rows.append(row)
        self.row_lo.append(lo)
        self.row_hi.append(hi)
        self.row_names.append(name or f"c{k}")
        self._dense = None
        return k

    def set_objective(self, coeffs: Mapping[int, float], sense: Literal["max", "min"] | None = None) -> None:
        self.obj = {int(j): float(a) for j, a in coeffs.items()}
        if sense is not None:
            self.sense = sense
        self._dense = None

    @classmethod
    def from_arrays(
        cls,
        c: ArrayLike,
        A: ArrayLike,
        row_lo: ArrayLike,
        row_hi: ArrayLike,
        lb: ArrayLike,
        ub: ArrayLike,
        sense: Literal["max", "min"] = "max",
        integer: ArrayLike | None = None,
        var_names: list[str] | None = None,
        row_names: list[str] | None = None,
        name: str = "model",
    ) -> "LpModel":
        A = np.asarray(A, dtype=float)
        R, N = A.shape
        model = cls(sense, name)
        model.var_names = list(var_names) if var_names else [f"x{k}" for k in range(N)]
        model.lb = [float(v) for v in np.asarray(lb, dtype=float)]
        model.ub = [float(v) for v in np.asarray(ub, dtype=float)]
        model.integer = [bool(v) for v in (np.zeros(N, bool) if integer is None else np.asarray(integer))]
        cc = np.asarray(c, dtype=float)
        model.obj = {int(j): float(cc[j]) for j in np.flatnonzero(cc)}
        model.rows = [{int(j): float(A[r, j]) for j in np.flatnonzero(A[r])} for r in range(R)]
        model.row_lo = [float(v) for v in np.asarray(row_lo, dtype=float)]
        model.row_hi = [float(v) for v in np.asarray(row_hi, dtype=float)]
        model.row_names = list(row_names) if row_names else [f"c{k}" for k in range(R)]
        model._dense = (cc.copy(), A.copy(), np.asarray(row_lo, float).copy(), np.asarray(row_hi, float).copy(),
                        np.asarray(lb, float).copy(), np.asarray(ub, float).copy())
        return model

    # -- views ----------------------------------------------------------------
    @property
    def num_vars(self) -> int:
        return len(self.var_names)

    @property
    def num_constrs(self) -> int:
        return len(self.rows)

    def to_arrays(self) -> tuple[NDArray, NDArray, NDArray, NDArray, NDArray, NDArray]:
        """Dense ``(c, A, row_lo, row_hi, lb, ub)`` in the model's own sense."""
        if self._dense is None:
            N, R = self.num_vars, self.num_constrs
            c = np.zeros(N)
            for j, a in self.obj.items():
                c[j] = a
            A = np.zeros((R, N))
            for r, row in enumerate(self.rows):
                for j, a in row.items():
                    A[r, j] = a
            self._dense = (c, A, np.array(self.row_lo, float), np.array(self.row_hi, float),
                           np.array(self.lb, float), np.array(self.ub, float))
        return self._dense

    def relaxed(self) -> "LpModel":
        """Copy with every integrality flag dropped."""
        out = LpModel.from_arrays(*self.to_arrays(), sense=self.sense, var_names=self.var_names,
                                  row_names=self.row_names, name=self.name)
        return out

    def activity(self, x: ArrayLike) -> NDArray[np.float64]:
        return self.to_arrays()[1] @ np.asarray(x, dtype=float)

    def max_violation(self, x: ArrayLike) -> float:
        """Largest bound or row violation of ``x``."""
        c, A, rlo, rhi, lb, ub = self.to_arrays()
        x = np.asarray(x, dtype=float)
        s = A @ x if A.size else np.zeros(0)
        parts = [np.maximum(lb - x, 0), np.maximum(x - ub, 0), np.maximum(rlo - s, 0), np.maximum(s - rhi, 0)]
        return float(max((p.max() if p.size else 0.0) for p in parts))

    # -- text export ----------------------------------------------------------
    def to_lp_string(self) -> str:
        """CPLEX LP text format."""
        out = io.StringIO()
        names = self.var_names

        def expr(coeffs: Mapping[int, float]) -> str:
            if not coeffs:
                return "0 " + names[0] if names else "0"
            parts = []
            for j, a in sorted(coeffs.items()):
                sign = "-" if a < 0 else "+"
                parts.append(f"{sign} {abs(a)!r} {names[j]}")
            s = " ".join(parts)
            return s[2:] if s.startswith("+ ") else s

        out.write(f"\\ {self.name}\n")
        out.write("Maximize\n" if self.sense == "max" else "Minimize\n")
        out.write(f" obj: {expr(self.obj)}\n")
        out.write("Subject To\n")
        for r, row in enumerate(self.rows):
            lo, hi, nm = self.row_lo[r], self.row_hi[r], self.row_names[r]
            if lo == hi:
                out.write(f" {nm}: {expr(row)} = {lo!r}\n")
            else:
                if lo > -INF:
                    out.write(f" {nm}{'_lo' if hi < INF else ''}: {expr(row)} >= {lo!r}\n")
                if hi < INF:
                    out.write(f" {nm}{'_hi' if lo > -INF else ''}: {expr(row)} <= {hi!r}\n")
        out.write("Bounds\n")
        for j, nm in enumerate(names):
            lo, hi = self.lb[j], self.ub[j]
            if lo == -INF and hi == INF:
                out.write(f" {nm} free\n")
            elif lo == hi:
                out.write(f" {nm} = {lo!r}\n")
            else:
                left = "-inf" if lo == -INF else repr(lo)
                right = "+inf" if hi == INF else repr(hi)
                out.write(f" {left} <= {nm} <= {right}\n")
        ints = [names[j] for j in range(self.num_vars) if self.integer[j]]
        if ints:
            out.write("Generals\n")
            for k in range(0, len(ints), 8):
                out.write(" " + " ".join(ints[k:k + 8]) + "\n")
        out.write("End\n")
        return out.getvalue()

    def write_lp(self, target: str | os.PathLike | TextIO) -> None:
        text = self.to_lp_string()
        if hasattr(target, "write"):
            target.write(text)
        else:
            with open(target, "w", encoding="utf-8") as fh:
                fh.write(text)


@dataclass
class LpSolution:
    """Result of an LP solve.  ``duals`` are row multipliers in the model's sense."""

    status: LpStatus
    objective: float
    x: NDArray[np.float64]
    duals: NDArray[np.float64] | None = None
    reduced_costs: NDArray[np.float64] | None = None
    iterations: int = 0

    @property
    def ok(self) -> bool:
        return self.status == "optimal"


# ----------------------------------------------------------------------------
# Bounded-variable tableau simplex
# ----------------------------------------------------------------------------

class Simplex:
    """Tableau simplex for ``min c.x`` with boxed structural and row variables.

    Parameters
    ----------
    c, A, row_lo, row_hi, lb, ub
        Problem data; infinite bounds are ``+-inf``.
    max_iter
        Pivot budget per call to :meth:`solve` or :meth:`resolve`.
    """

    feas_tol = 1e-9
    dual_tol = 1e-9
    pivot_tol = 1e-10
    degenerate_switch = 25
    refactor_every = 200

    def __init__(self, c, A, row_lo, row_hi, lb, ub, max_iter: int = 50_000):
        A = np.asarray(A, dtype=float)
        R, N = A.shape
        self.R, self.N = R, N
        self.K = np.hstack([A, -np.eye(R)])
        self.cost = np.concatenate([np.asarray(c, float), np.zeros(R)])
        self.lo = np.concatenate([np.asarray(lb, float), np.asarray(row_lo, float)])
        self.hi = np.concatenate([np.asarray(ub, float), np.asarray(row_hi, float)])
        if np.any(self.lo > self.hi):
            self._bad_bounds = True
        else:
            self._bad_bounds = False
        self.max_iter = max_iter
        self.basis = np.arange(N, N + R)
        self.is_basic = np.zeros(N + R, dtype=bool)
        self.is_basic[self.basis] = True
        self.T = -self.K.copy()
        self.x = np.zeros(N + R)
        nb = np.arange(N)
        self.x[nb] = self._rest_value(nb, self.cost[nb])
        self._recompute_basics()
        self.d = self.cost - self.cost[self.basis] @ self.T
        self.status: str = "unsolved"
        self.iterations = 0
        self._since_refactor = 0

    # -- helpers --------------------------------------------------------------
    def _rest_value(self, idx, dj):
        """Bound at which a nonbasic variable rests, chosen to suit its reduced cost."""
        lo, hi = self.lo[idx], self.hi[idx]
        at_hi = (dj < 0) & np.isfinite(hi)
        v = np.where(np.isfinite(lo), lo, np.where(np.isfinite(hi), hi, 0.0))
        return np.where(at_hi, hi, v)

    def _recompute_basics(self) -> None:
        nb = ~self.is_basic
        self.x[self.basis] = -(self.T[:, nb] @ self.x[nb])

    def copy(self) -> "Simplex":
        new = object.__new__(Simplex)
        new.__dict__.update(self.__dict__)
        for k in ("basis", "is_basic", "T", "x", "d", "lo", "hi"):
            setattr(new, k, getattr(self, k).copy())
        return new

    def refactor(self) -> None:
        """Rebuild the tableau from the original matrix and the current basis."""
        # Basic logicals contribute unit columns, so only the block of
        # structural basics against rows with a nonbasic logical is dense.
        N, R = self.N, self.R
        struct_pos = np.flatnonzero(self.basis < N)
        logic_pos = np.flatnonzero(self.basis >= N)
        S = self.basis[struct_pos]
        L = self.basis[logic_pos] - N
        U = np.setdiff1d(np.arange(R), L, assume_unique=True)
        A = self.K[:, :N]
        T = np.empty((R, N + R))
        if S.size:
            ZS = np.linalg.solve(A[np.ix_(U, S)], self.K[U])
            T[struct_pos] = ZS
            T[logic_pos] = A[np.ix_(L, S)] @ ZS - self.K[L]
        else:
            T[logic_pos] = -self.K[L]
        T[:, self.basis] = np.eye(R)
        self.T = T
        self.d = self.cost - self.cost[self.basis] @ self.T
        self.d[self.basis] = 0.0
        self._recompute_basics()
        self._since_refactor = 0

    def snapshot(self) -> tuple[NDArray, NDArray, NDArray, NDArray]:
        """Compact state (basis, nonbasic values, bounds) for later :meth:`restore`."""
        return self.basis.copy(), self.x.copy(), self.lo.copy(), self.hi.copy()

    def restore(self, snap) -> "Simplex":
        new = object.__new__(Simplex)
        new.__dict__.update(self.__dict__)
        basis, x, lo, hi = snap
        new.basis, new.x, new.lo, new.hi = basis.copy(), x.copy(), lo.copy(), hi.copy()
        new.is_basic = np.zeros(self.N + self.R, dtype=bool)
        new.is_basic[basis] = True
        new.refactor()
        return new

    def _pivot(self, k: int, j: int) -> None:
        T = self.T
        piv = T[k, j]
        T[k] /= piv
        col = T[:, j].copy()
        col[k] = 0.0
        rows = np.flatnonzero(col)
        if rows.size:
            # pricing-MILP tableaus stay sparse; update only the rows that change
            T[rows] -= col[rows, None] * T[k]
        T[:, j] = 0.0
        T[k, j] = 1.0
        self.d -= self.d[j] * T[k]
        self.d[j] = 0.0
        leaving = self.basis[k]
        self.is_basic[leaving] = False
        self.is_basic[j] = True
        self.basis[k] = j
        self._since_refactor += 1
        if self._since_refactor >= self.refactor_every:
            self.refactor()

    # -- bound changes --------------------------------------------------------
    def set_bounds(self, j: int, lo: float, hi: float) -> None:
        """Change the box of variable ``j`` keeping the current basis."""
        self.lo[j], self.hi[j] = lo, hi
        if lo > hi:
            self._bad_bounds = True
        if not self.is_basic[j]:
            old = self.x[j]
            new = float(self._rest_value(np.array([j]), np.array([self.d[j]]))[0])
            if new != old:
                self.x[j] = new
                self.x[self.basis] -= self.T[:, j] * (new - old)

    # -- primal simplex -------------------------------------------------------
    def _primal(self, budget: int) -> str:
        ft, dt, pt = self.feas_tol, self.dual_tol, self.pivot_tol
        degenerate = 0
        for _ in range(budget):
            xb = self.x[self.basis]
            lob, hib = self.lo[self.basis], self.hi[self.basis]
            below = xb < lob - ft
            above = xb > hib + ft
            phase1 = bool(below.any() or above.any())
            if phase1:
                w = above.astype(float) - below.astype(float)
                d = -(w @ self.T)
            else:
                d = self.d
            nb = ~self.is_basic
            movable = nb & (self.lo < self.hi)
            x = self.x
            can_up = movable & (x < self.hi - ft) & (d < -dt)
            can_down = movable & (x > self.lo + ft) & (d > dt)
            elig = can_up | can_down
            if not elig.any():
                return "infeasible" if phase1 else "optimal"
            bland = degenerate >= self.degenerate_switch
            if bland:
                j = int(np.flatnonzero(elig)[0])
            else:
                score = np.where(elig, np.abs(d), -1.0)
                j = int(score.argmax())
            direction = 1.0 if can_up[j] else -1.0
            g = -self.T[:, j] * direction
            t_best = self.hi[j] - self.lo[j]
            leave = -1
            leave_val = 0.0
            with np.errstate(divide="ignore", invalid="ignore"):
                t = np.full(self.R, INF)
                val = np.zeros(self.R)
                dec = g < -pt
                inc = g > pt
                # feasible basics stop at the bound they move toward
                fdec = dec & ~below & np.isfinite(lob)
                t[fdec] = (xb[fdec] - lob[fdec]) / -g[fdec]
                val[fdec] = lob[fdec]
                finc = inc & ~above & np.isfinite(hib)
                t[finc] = (hib[finc] - xb[finc]) / g[finc]
                val[finc] = hib[finc]
                # infeasible basics stop once they reach feasibility
                rb = inc & below
                t[rb] = (lob[rb] - xb[rb]) / g[rb]
                val[rb] = lob[rb]
                ra = dec & above
                t[ra] = (xb[ra] - hib[ra]) / -g[ra]
                val[ra] = hib[ra]
            t = np.maximum(t, 0.0)
            tmin = t.min() if self.R else INF
            if tmin < t_best:
                ties = np.flatnonzero(t <= tmin + 1e-12)
                if bland:
                    k = int(ties[np.argmin(self.basis[ties])])
                else:
                    k = int(ties[np.argmax(np.abs(g[ties]))])
                leave, t_best, leave_val = k, t[k], val[k]
            if not math.isfinite(t_best):
                if phase1:
                    return "infeasible"
                return "unbounded"
            self.iterations += 1
            degenerate = degenerate + 1 if t_best <= 1e-12 else 0
            self.x[j] += direction * t_best
            self.x[self.basis] += g * t_best
            if leave < 0:
                # bound flip of the entering variable
                self.x[j] = self.hi[j] if direction > 0 else self.lo[j]
            else:
                self.x[self.basis[leave]] = leave_val
                self._pivot(leave, j)
        return "iteration_limit"

    # -- dual simplex ---------------------------------------------------------
    def dual_feasible(self) -> bool:
        nb = ~self.is_basic & (self.lo < self.hi)
        d, x, dt = self.d, self.x, self.dual_tol * 10
        at_lo = np.isclose(x, self.lo) & np.isfinite(self.lo)
        at_hi = np.isclose(x, self.hi) & np.isfinite(self.hi)
        ok = np.where(at_lo & at_hi, True,
                      np.where(at_lo, d >= -dt, np.where(at_hi, d <= dt, np.abs(d) <= dt)))
        return bool(np.all(ok[nb]))

    def _dual(self, budget: int) -> str:
        ft, pt = self.feas_tol, self.pivot_tol
        degenerate = 0
        for _ in range(budget):
            xb = self.x[self.basis]
            lob, hib = self.lo[self.basis], self.hi[self.basis]
            viol = np.maximum(lob - xb, 0.0) + np.maximum(xb - hib, 0.0)
            if not np.any(viol > ft):
                return "optimal"
            bland = degenerate >= self.degenerate_switch
            if bland:
                rows = np.flatnonzero(viol > ft)
                k = int(rows[np.argmin(self.basis[rows])])
            else:
                k = int(viol.argmax())
            raise_it = xb[k] < lob[k]
            target = lob[k] if raise_it else hib[k]
            row = self.T[k]
            nb = ~self.is_basic & (self.lo < self.hi)
            up_ok = nb & (self.x < self.hi - ft)
            down_ok = nb & (self.x > self.lo + ft)
            if raise_it:
                elig = (up_ok & (row < -pt)) | (down_ok & (row > pt))
            else:
                elig = (up_ok & (row > pt)) | (down_ok & (row < -pt))
            if not elig.any():
                return "infeasible"
            cand = np.flatnonzero(elig)
            ratios = np.abs(self.d[cand]) / np.abs(row[cand])
            rmin = ratios.min()
            ties = cand[ratios <= rmin + 1e-12]
            if bland:
                j = int(ties.min())
            else:
                j = int(ties[np.argmax(np.abs(row[ties]))])
            degenerate = degenerate + 1 if rmin <= 1e-12 else 0
            delta = (xb[k] - target) / row[j]
            self.iterations += 1
            self.x[self.basis] -= self.T[:, j] * delta
            self.x[j] += delta
            self.x[self.basis[k]] = target
            self._pivot(k, j)
        return "iteration_limit"

    # -- drivers --------------------------------------------------------------
    def solve(self) -> str:
        if self._bad_bounds:
            self.status = "infeasible"
            return self.status
        start = self.iterations
        self.status = self._primal(self.max_iter)
        if self.status == "optimal":
            self.status = self._polish(start)
        return self.status

    def resolve(self) -> str:
        """Re-optimise after bound changes, preferring the dual simplex."""
        if self._bad_bounds or np.any(self.lo > self.hi):
            self.status = "infeasible"
            return self.status
        start = self.iterations
        if self.dual_feasible():
            st = self._dual(self.max_iter)
            if st == "infeasible":
                # confirm with a clean refactorisation before declaring
                self.refactor()
                st = self._dual(self.max_iter - (self.iterations - start))
            if st in ("infeasible", "iteration_limit"):
                self.status = st
                return st
        st = self._primal(max(self.max_iter - (self.iterations - start), 1))
        self.status = st
        return st

    def _polish(self, start: int) -> str:
        """Refactor once and re-run primal iterations to wash out drift."""
        self.refactor()
        st = self._primal(max(self.max_iter - (self.iterations - start), 1))
        return st

    @property
    def objective(self) -> float:
        return float(self.cost[: self.N] @ self.x[: self.N])

    @property
    def primal(self) -> NDArray[np.float64]:
        return self.x[: self.N].copy()


def _solve_highs(model: LpModel) -> LpSolution:
    from scipy.optimize import linprog

    c, A, rlo, rhi, lb, ub = model.to_arrays()
    sign = -1.0 if model.sense == "max" else 1.0
    eq = rlo == rhi
    le = np.isfinite(rhi) & ~eq
    ge = np.isfinite(rlo) & ~eq
    A_ub = np.vstack([A[le], -A[ge]])
    b_ub = np.concatenate([rhi[le], -rlo[ge]])
    bounds = [(None if not np.isfinite(lo) else lo, None if not np.isfinite(hi) else hi) for lo, hi in zip(lb, ub)]
    res = linprog(sign * c, A_ub=A_ub if len(b_ub) else None, b_ub=b_ub if len(b_ub) else None,
                  A_eq=A[eq] if eq.any() else None, b_eq=rlo[eq] if eq.any() else None,
                  bounds=bounds, method="highs")
    status = {0: "optimal", 1: "iteration_limit", 2: "infeasible", 3: "unbounded"}.get(res.status, "infeasible")
    if status != "optimal":
        return LpSolution(status, math.nan, np.full(len(c), math.nan))
    x = np.asarray(res.x)
    duals = np.zeros(len(rlo))
    m_le, m_ge = int(le.sum()), int(ge.sum())
    if m_le + m_ge:
        marg = np.asarray(res.ineqlin.marginals)
        duals[le] = marg[:m_le]
        duals[ge] = -marg[m_le:]
    if eq.any():
        duals[eq] = np.asarray(res.eqlin.marginals)
    return LpSolution("optimal", float(c @ x), x, sign * duals, None, int(getattr(res, "nit", 0)))


def solve_lp(model: LpModel, backend: Literal["simplex", "highs"] = "simplex", max_iter: int = 50_000) -> LpSolution:
    """Solve the continuous relaxation of ``model``.

    ``backend="highs"`` delegates to SciPy's HiGHS wrapper and exists for
    cross-checking; the in-repo simplex is the default.
    """
    if backend == "highs":
        return _solve_highs(model)
    if backend != "simplex":
        raise ValueError(f"unknown backend {backend!r}")
    c, A, rlo, rhi, lb, ub = model.to_arrays()
    # presolve: drop empty rows after checking them
    empty = ~A.any(axis=1) if A.size else np.ones(len(rlo), bool)
    if np.any(empty & ((rlo > 1e-9) | (rhi < -1e-9))):
        return LpSolution("infeasible", math.nan, np.full(len(c), math.nan))
    keep = ~empty
    sign = -1.0 if model.sense == "max" else 1.0
    sx = Simplex(sign * c, A[keep], rlo[keep], rhi[keep], lb, ub, max_iter=max_iter)
    status = sx.solve()
    if status != "optimal":
        return LpSolution(status, math.nan, sx.primal if status == "iteration_limit" else np.full(len(c), math.nan),
                          iterations=sx.iterations)
    x = sx.primal
    duals = np.zeros(len(rlo))
    duals[keep] = sign * sx.d[sx.N:]
    return LpSolution("optimal", float(c @ x), x, duals, sign * sx.d[: sx.N], sx.iterations)


def solve_lp_relaxation_of_milp(model, backend: Literal["simplex", "highs"] = "simplex") -> LpSolution:
    """Drop integrality and solve.  Accepts an :class:`LpModel` or anything with ``.lp``."""
    lp = getattr(model, "lp", model)
    return solve_lp(lp.relaxed() if any(lp.integer) else lp, backend=backend)
