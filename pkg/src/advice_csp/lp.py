"""Dense bounded-variable linear programming for small ranged-constraint LPs.

The solver maximizes c.x subject to per-row ranges L_r <= a_r.x <= U_r and
a per-variable box.  Ranged rows expand to at most two inequalities at
solve time after an interval-arithmetic presolve that drops rows the box
already implies.  The core is a two-phase dense tableau simplex over
bounded variables (with bound flips); pricing is steepest-coefficient and
switches to Bland's anti-cycling rule when the objective stalls.  The
whole pipeline is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, InternalError

FEAS_TOL = 1e-7
OPT_TOL = 1e-9
PIVOT_TOL = 1e-9
_STALL_LIMIT = 40
_REFRESH = 128

_LO, _HI, _BASIC = 0, 1, 2


@dataclass(frozen=True, eq=False)
class RangedRow:
    """One constraint a.x in [lo, hi]; either end may be infinite."""

    a: np.ndarray
    lo: float = -math.inf
    hi: float = math.inf


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """maximize c.x + offset over box(lo, hi) intersected with ranged rows."""

    c: np.ndarray
    rows: tuple[RangedRow, ...] = ()
    lo: np.ndarray | None = None
    hi: np.ndarray | None = None
    offset: float = 0.0

    def __post_init__(self):
        c = np.asarray(self.c, dtype=np.float64)
        if c.ndim != 1:
            raise InputError("objective must be a vector")
        if np.any(np.isnan(c)) or np.any(np.isinf(c)):
            raise InputError("objective coefficients must be finite")
        p = c.shape[0]
        lo = np.full(p, -math.inf) if self.lo is None else np.asarray(self.lo, dtype=np.float64)
        hi = np.full(p, math.inf) if self.hi is None else np.asarray(self.hi, dtype=np.float64)
        if lo.shape != (p,) or hi.shape != (p,):
            raise InputError("box bounds must match the variable count")
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)):
            raise InputError("box bounds must not be NaN")
        if np.any(lo > hi):
            raise InputError("box requires lo <= hi")
        rows = []
        for r in self.rows:
            a = np.asarray(r.a, dtype=np.float64)
            if a.shape != (p,):
                raise InputError("constraint row length must match the variable count")
            if np.any(np.isnan(a)) or np.any(np.isinf(a)):
                raise InputError("constraint coefficients must be finite")
            if math.isnan(r.lo) or math.isnan(r.hi):
                raise InputError("row range must not be NaN")
            if r.lo > r.hi:
                raise InputError("row range requires lo <= hi")
            rows.append(RangedRow(a=a, lo=float(r.lo), hi=float(r.hi)))
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "rows", tuple(rows))
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def p(self) -> int:
        return self.c.shape[0]


@dataclass(frozen=True, eq=False)
class LpOutcome:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None = None
    value: float | None = None

    @property
    def is_optimal(self) -> bool:
        return self.status == "optimal"


def _row_extremes(a: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> tuple[float, float]:
    """Smallest and largest value a.x can take inside the box."""
    pos = a > 0
    neg = a < 0
    rmin = float(np.dot(a[pos], lo[pos]) + np.dot(a[neg], hi[neg]))
    rmax = float(np.dot(a[pos], hi[pos]) + np.dot(a[neg], lo[neg]))
    return rmin, rmax


def _expand_rows(lp: LinearProgram) -> tuple[np.ndarray, np.ndarray] | None:
    """Presolve and expand ranged rows to G x <= h; None means infeasible."""
    G_rows, h_vals = [], []
    for row in lp.rows:
        rmin, rmax = _row_extremes(row.a, lp.lo, lp.hi)
        scale = max(1.0, abs(row.lo) if math.isfinite(row.lo) else 0.0,
                    abs(row.hi) if math.isfinite(row.hi) else 0.0)
        if rmin > row.hi + FEAS_TOL * scale or rmax < row.lo - FEAS_TOL * scale:
            return None
        if math.isfinite(row.hi) and not rmax <= row.hi:
            G_rows.append(row.a)
            h_vals.append(row.hi)
        if math.isfinite(row.lo) and not rmin >= row.lo:
            G_rows.append(-row.a)
            h_vals.append(-row.lo)
    if not G_rows:
        return np.zeros((0, lp.p)), np.zeros(0)
    return np.array(G_rows, dtype=np.float64), np.array(h_vals, dtype=np.float64)


class _Simplex:
    """Tableau state shared by both phases."""

    def __init__(self, G, h, lo, hi, p):
        m = G.shape[0]
        self.m, self.p = m, p
        self.ncols = p + m
        self.lo = np.concatenate([lo, np.zeros(m)])
        self.hi = np.concatenate([hi, np.full(m, math.inf)])
        self.D = np.hstack([G, np.eye(m), h.reshape(-1, 1)])
        self.status = np.full(self.ncols, _LO, dtype=np.int8)
        self.xval = np.zeros(self.ncols)
        for j in range(p):
            if math.isfinite(self.lo[j]):
                self.status[j], self.xval[j] = _LO, self.lo[j]
            elif math.isfinite(self.hi[j]):
                self.status[j], self.xval[j] = _HI, self.hi[j]
            else:
                raise InputError("variables without any finite bound are unsupported")
        self.basis = np.arange(p, p + m)
        self.status[self.basis] = _BASIC
        self.xval[self.basis] = h - G @ self.xval[:p]
        self.n_art = 0

    def add_artificials(self):
        """One artificial column per infeasible slack; returns phase-1 costs."""
        viol = np.flatnonzero(self.xval[self.basis] < -FEAS_TOL)
        self.n_art = viol.size
        if self.n_art == 0:
            return None
        # Flip violated rows so each incoming artificial carries coefficient +1.
        self.D[viol] *= -1.0
        art_cols = np.zeros((self.m, self.n_art))
        first_art = self.ncols
        for k, r in enumerate(viol):
            art_cols[r, k] = 1.0
            slack = self.basis[r]
            self.status[slack], self.xval[slack] = _LO, 0.0
            self.basis[r] = first_art + k
        rhs = self.D[:, -1].copy()
        self.D = np.hstack([self.D[:, :-1], art_cols, rhs.reshape(-1, 1)])
        self.lo = np.concatenate([self.lo, np.zeros(self.n_art)])
        self.hi = np.concatenate([self.hi, np.full(self.n_art, math.inf)])
        self.status = np.concatenate([self.status, np.full(self.n_art, _BASIC, dtype=np.int8)])
        self.xval = np.concatenate([self.xval, np.zeros(self.n_art)])
        self.ncols += self.n_art
        cost = np.zeros(self.ncols)
        cost[first_art:] = -1.0
        self._refresh_values()
        return cost

    def _nonbasic_values(self) -> np.ndarray:
        vals = self.xval.copy()
        vals[self.basis] = 0.0
        return vals

    def _refresh_values(self):
        vals = self._nonbasic_values()
        self.xval[self.basis] = self.D[:, -1] - self.D[:, :-1] @ vals

    def reduced_costs(self, cost: np.ndarray) -> np.ndarray:
        y = cost[self.basis] @ self.D[:, :-1]
        return cost - y

    def drop_artificials(self):
        """Pivot out or delete rows for basic artificials, then cut columns."""
        first_art = self.ncols - self.n_art
        keep_rows = np.ones(self.m, dtype=bool)
        for r in range(self.m):
            b = self.basis[r]
            if b < first_art:
                continue
            row = self.D[r, :first_art]
            cand = np.flatnonzero((np.abs(row) > PIVOT_TOL) & (self.status[:first_art] != _BASIC))
            if cand.size:
                j = int(cand[np.argmax(np.abs(row[cand]))])
                self._pivot(r, j)
            else:
                keep_rows[r] = False
        if not np.all(keep_rows):
            self.D = self.D[keep_rows]
            self.basis = self.basis[keep_rows]
            self.m = self.D.shape[0]
        self.D = np.hstack([self.D[:, :first_art], self.D[:, -1:]])
        self.lo = self.lo[:first_art]
        self.hi = self.hi[:first_art]
        self.status = self.status[:first_art]
        self.xval = self.xval[:first_art]
        self.ncols = first_art
        self.n_art = 0
        self._refresh_values()

    def _pivot(self, r: int, j: int):
        b = self.basis[r]
        col = self.D[:, j].copy()
        prow = self.D[r] / col[r]
        self.D -= np.outer(col, prow)
        self.D[r] = prow
        self.basis[r] = j
        self.status[j] = _BASIC
        return b

    def optimize(self, cost: np.ndarray, max_iter: int) -> str:
        """Run the simplex loop; returns "optimal" or "unbounded"."""
        rc = self.reduced_costs(cost)
        use_bland = False
        stalled = 0
        tol = OPT_TOL * max(1.0, float(np.max(np.abs(cost))) if cost.size else 1.0)
        for it in range(max_iter):
            if it and it % _REFRESH == 0:
                self._refresh_values()
                rc = self.reduced_costs(cost)
            movable = self.hi - self.lo > 0
            up = (self.status == _LO) & (rc > tol) & movable
            down = (self.status == _HI) & (rc < -tol) & movable
            eligible = np.flatnonzero(up | down)
            if eligible.size == 0:
                self._refresh_values()
                rc = self.reduced_costs(cost)
                up = (self.status == _LO) & (rc > tol) & movable
                down = (self.status == _HI) & (rc < -tol) & movable
                eligible = np.flatnonzero(up | down)
                if eligible.size == 0:
                    return "optimal"
            if use_bland:
                j = int(eligible[0])
            else:
                j = int(eligible[np.argmax(np.abs(rc[eligible]))])
            direction = 1.0 if self.status[j] == _LO else -1.0
            col = self.D[:, j]
            denom = col * direction
            limit = self.hi[j] - self.lo[j]
            bvars = self.basis
            t = np.full(self.m, math.inf)
            dec = denom > PIVOT_TOL
            if np.any(dec):
                bound = self.lo[bvars[dec]]
                with np.errstate(invalid="ignore"):
                    t[dec] = (self.xval[bvars[dec]] - bound) / denom[dec]
            inc = denom < -PIVOT_TOL
            if np.any(inc):
                bound = self.hi[bvars[inc]]
                with np.errstate(invalid="ignore"):
                    t[inc] = (bound - self.xval[bvars[inc]]) / (-denom[inc])
            t = np.maximum(t, 0.0)
            t_min = float(np.min(t)) if self.m else math.inf
            t_star = min(limit, t_min)
            if math.isinf(t_star):
                return "unbounded"
            delta = direction * t_star
            gain = rc[j] * delta
            stalled = stalled + 1 if gain <= tol else 0
            if stalled > _STALL_LIMIT:
                use_bland = True
            if t_star > 0:
                self.xval[bvars] -= col * delta
                self.xval[j] += delta
            if limit <= t_min:
                # The entering variable runs to its other bound: a flip.
                self.status[j] = _HI if self.status[j] == _LO else _LO
                self.xval[j] = self.hi[j] if self.status[j] == _HI else self.lo[j]
                continue
            cand = np.flatnonzero(t <= t_star + PIVOT_TOL)
            if use_bland:
                r = int(cand[np.argmin(bvars[cand])])
            else:
                r = int(cand[np.argmax(np.abs(denom[cand]))])
            leaving = self._pivot(r, j)
            leaves_low = denom[r] > 0
            self.status[leaving] = _LO if leaves_low else _HI
            self.xval[leaving] = self.lo[leaving] if leaves_low else self.hi[leaving]
            rc = rc - rc[j] * self.D[r, :-1]
        raise InternalError("simplex iteration cap exceeded")


def _check_feasible(lp: LinearProgram, x: np.ndarray) -> None:
    if np.any(x < lp.lo - FEAS_TOL) or np.any(x > lp.hi + FEAS_TOL):
        raise InternalError("solver returned a point outside the variable box")
    for row in lp.rows:
        v = float(row.a @ x)
        scale = max(1.0, float(np.max(np.abs(row.a))) * float(np.max(np.abs(x))) if x.size else 1.0)
        if v < row.lo - FEAS_TOL * scale or v > row.hi + FEAS_TOL * scale:
            raise InternalError("solver returned a point violating a constraint row")


def solve_lp(lp: LinearProgram) -> LpOutcome:
    """Maximize the program; outcomes are optimal, infeasible, or unbounded."""
    p = lp.p
    if p == 0:
        for row in lp.rows:
            if 0.0 < row.lo - FEAS_TOL or 0.0 > row.hi + FEAS_TOL:
                return LpOutcome(status="infeasible")
        return LpOutcome(status="optimal", x=np.zeros(0), value=lp.offset)
    expanded = _expand_rows(lp)
    if expanded is None:
        return LpOutcome(status="infeasible")
    G, h = expanded
    sx = _Simplex(G, h, lp.lo.copy(), lp.hi.copy(), p)
    max_iter = 2000 + 200 * (sx.m + sx.ncols)
    phase1_cost = sx.add_artificials()
    if phase1_cost is not None:
        status = sx.optimize(phase1_cost, max_iter)
        if status != "optimal":
            raise InternalError("phase 1 cannot be unbounded")
        infeas = -float(phase1_cost @ sx.xval)
        if infeas > FEAS_TOL * max(1.0, float(np.max(np.abs(h))) if h.size else 1.0):
            return LpOutcome(status="infeasible")
        sx.drop_artificials()
    cost = np.concatenate([lp.c, np.zeros(sx.ncols - p)])
    status = sx.optimize(cost, max_iter)
    if status == "unbounded":
        return LpOutcome(status="unbounded")
    sx._refresh_values()
    x = np.clip(sx.xval[:p], lp.lo, lp.hi)
    _check_feasible(lp, x)
    value = float(lp.c @ x) + lp.offset
    return LpOutcome(status="optimal", x=x, value=value)
