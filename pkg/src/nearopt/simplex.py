"""Two-phase revised simplex with native variable bounds.

The program is brought into the computational form ``M z = h`` with
``lo <= z <= up``:

* <= rows are negated into >= rows; = rows stay as single equalities;
* every inequality row gets a surplus column with coefficient -1;
* free variables (both bounds infinite) are split into positive parts;
  all other bounds are handled natively (nonbasic columns rest on a bound).

Phase 1 minimises the sum of artificial columns added for rows violated at
the initial bound point; phase 2 minimises the true objective. Pricing is
Dantzig's rule with ties broken by lowest column index; after a run of
degenerate pivots Bland's rule takes over until the objective strictly
improves again. The basis inverse is kept explicitly and refreshed from
scratch periodically.

`solve` accepts an optional warm start produced by a previous solve of a
program whose rows and columns form a prefix of the current one (same
variables, constraints appended at the end); the new rows' surplus columns
are appended to the basis and phase 1 is skipped when the result is primal
feasible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalFailureError
from .lp import (EQ, GEQ, INFEASIBLE, LEQ, OPTIMAL, UNBOUNDED, LinearProgram,
                 Solution)

_AT_LOWER = 0
_AT_UPPER = 1
_BASIC = 2

_DEGEN_STEP = 1e-11


@dataclass
class SolverOptions:
    """Numerical knobs; defaults follow double-precision simplex practice."""

    tol_feas: float = 1e-7
    tol_pivot: float = 1e-9
    tol_opt: float = 1e-7
    tol_dual: float = 1e-6
    bland_after: int = 50
    refactor_every: int = 128
    max_iterations: int | None = None


class _StandardForm:
    """Dense computational form of a LinearProgram (without artificials)."""

    def __init__(self, lp: LinearProgram):
        n = lp.n
        m = lp.m
        # column layout per original variable: (plus column, minus column or -1)
        var_cols: list[tuple[int, int]] = []
        lo: list[float] = []
        up: list[float] = []
        for k in range(n):
            l, u = lp.lower[k], lp.upper[k]
            if math.isinf(l) and math.isinf(u):
                var_cols.append((len(lo), len(lo) + 1))
                lo += [0.0, 0.0]
                up += [math.inf, math.inf]
            else:
                var_cols.append((len(lo), -1))
                lo.append(l)
                up.append(u)
        n_struct = len(lo)

        A_struct = np.zeros((m, n_struct))
        b = np.zeros(m)
        row_sign = np.ones(m)
        is_eq = np.zeros(m, dtype=bool)
        for i, con in enumerate(lp.constraints):
            sgn = -1.0 if con.sense == LEQ else 1.0
            row_sign[i] = sgn
            is_eq[i] = con.sense == EQ
            b[i] = sgn * (con.rhs - con.expr.constant)
            for var, coef in con.expr.terms.items():
                p, q = var_cols[var.index]
                A_struct[i, p] += sgn * coef
                if q >= 0:
                    A_struct[i, q] -= sgn * coef

        ineq_rows = np.nonzero(~is_eq)[0]
        n_cols = n_struct + len(ineq_rows)
        A = np.zeros((m, n_cols))
        A[:, :n_struct] = A_struct
        surplus_col = np.full(m, -1, dtype=int)
        for pos, i in enumerate(ineq_rows):
            col = n_struct + pos
            A[i, col] = -1.0
            surplus_col[i] = col
        lo += [0.0] * len(ineq_rows)
        up += [math.inf] * len(ineq_rows)

        c = np.zeros(n_cols)
        for var, coef in lp.objective.terms.items():
            p, q = var_cols[var.index]
            c[p] += coef
            if q >= 0:
                c[q] -= coef

        self.m = m
        self.n_cols = n_cols
        self.n_struct = n_struct
        self.var_cols = var_cols
        self.A = A
        self.b = b
        self.c = c
        self.lo = np.asarray(lo)
        self.up = np.asarray(up)
        self.row_sign = row_sign
        self.is_eq = is_eq
        self.surplus_col = surplus_col
        self.obj_const = lp.objective.constant


class _Engine:
    def __init__(self, sf: _StandardForm, options: SolverOptions):
        self.sf = sf
        self.opt = options
        self.m = sf.m
        self.b = sf.b
        self.n_real = sf.n_cols
        # extended by artificials on cold starts
        self.A = sf.A
        self.lo = sf.lo.copy()
        self.up = sf.up.copy()
        self.c2 = sf.c
        self.x = np.zeros(sf.n_cols)
        self.vstat = np.full(sf.n_cols, _AT_LOWER, dtype=np.int8)
        self.basis = np.empty(self.m, dtype=int)
        self.Binv = np.eye(self.m)
        self.n_art = 0

    # -- setup -----------------------------------------------------------

    def _initial_point(self) -> None:
        lo, up = self.lo, self.up
        at_upper = np.isinf(lo) & ~np.isinf(up)
        self.vstat[:] = _AT_LOWER
        self.vstat[at_upper] = _AT_UPPER
        self.x = np.where(at_upper, up, lo)

    def _cold_start(self) -> None:
        self._initial_point()
        rho = self.b - self.A @ self.x
        art_signs = []
        art_rows = []
        for i in range(self.m):
            s = self.sf.surplus_col[i]
            if s >= 0 and rho[i] <= 0.0:
                self.basis[i] = s
                self.x[s] = -rho[i]
            else:
                art_rows.append(i)
                art_signs.append(1.0 if rho[i] >= 0 else -1.0)
        self.n_art = len(art_rows)
        if self.n_art:
            art_block = np.zeros((self.m, self.n_art))
            for j, (i, sgn) in enumerate(zip(art_rows, art_signs)):
                art_block[i, j] = sgn
            self.A = np.hstack([self.sf.A, art_block])
            self.lo = np.concatenate([self.lo, np.zeros(self.n_art)])
            self.up = np.concatenate([self.up, np.full(self.n_art, math.inf)])
            self.c2 = np.concatenate([self.sf.c, np.zeros(self.n_art)])
            self.x = np.concatenate([self.x, np.zeros(self.n_art)])
            self.vstat = np.concatenate(
                [self.vstat, np.full(self.n_art, _AT_LOWER, dtype=np.int8)])
            for j, (i, sgn) in enumerate(zip(art_rows, art_signs)):
                col = self.n_real + j
                self.basis[i] = col
                self.x[col] = abs(rho[i])
        self.vstat[self.basis] = _BASIC
        diag = np.ones(self.m)
        for i in range(self.m):
            col = self.basis[i]
            diag[i] = -1.0 if col < self.n_real else art_signs[col - self.n_real]
        self.Binv = np.diag(diag) if self.m else np.zeros((0, 0))

    def _try_warm_start(self, warm) -> bool:
        basis_cols, upper_cols = warm
        basis = list(basis_cols)
        if len(basis) > self.m:
            return False
        for i in range(len(basis), self.m):
            s = self.sf.surplus_col[i]
            if s < 0:
                return False
            basis.append(int(s))
        basis = np.asarray(basis, dtype=int)
        if len(set(basis.tolist())) != self.m:
            return False
        if self.m and (basis.min() < 0 or basis.max() >= self.n_real):
            return False
        self._initial_point()
        upper = [c for c in upper_cols if c < self.n_real]
        finite_up = np.isfinite(self.up[upper]) if upper else np.array([], dtype=bool)
        if upper and not finite_up.all():
            return False
        self.vstat[upper] = _AT_UPPER
        self.x[upper] = self.up[upper]
        self.vstat[basis] = _BASIC
        self.basis = basis
        try:
            self.Binv = np.linalg.inv(self.A[:, basis]) if self.m else np.zeros((0, 0))
        except np.linalg.LinAlgError:
            return False
        self._resync()
        xb = self.x[basis]
        tol = self.opt.tol_feas
        if self.m and ((xb < self.lo[basis] - tol).any() or (xb > self.up[basis] + tol).any()):
            return False
        np.clip(xb, self.lo[basis], self.up[basis], out=xb)
        self.x[basis] = xb
        return True

    # -- core loop ---------------------------------------------------------

    def _resync(self) -> None:
        xn = self.x.copy()
        xn[self.basis] = 0.0
        self.x[self.basis] = self.Binv @ (self.b - self.A @ xn)

    def _refactor(self) -> None:
        if not self.m:
            return
        try:
            self.Binv = np.linalg.inv(self.A[:, self.basis])
        except np.linalg.LinAlgError:
            raise NumericalFailureError("basis matrix became singular") from None
        self._resync()

    def _run(self, cost: np.ndarray, phase: int) -> str:
        opt = self.opt
        movable = (self.up - self.lo) > 0.0
        maxit = opt.max_iterations or (20000 + 20 * (self.m + self.A.shape[1]))
        price_tol = 1e-9 * max(1.0, float(np.max(np.abs(cost))) if cost.size else 1.0)
        bland = False
        degen = 0
        since_refactor = 0
        it = 0
        while True:
            it += 1
            if it > maxit:
                raise NumericalFailureError(f"iteration limit {maxit} reached in phase {phase}")
            y = cost[self.basis] @ self.Binv if self.m else np.zeros(0)
            d = cost - y @ self.A if self.m else cost.astype(float).copy()
            at_lo = (self.vstat == _AT_LOWER) & movable
            at_up = (self.vstat == _AT_UPPER) & movable
            score = np.where(at_lo, -d, np.where(at_up, d, -math.inf))
            if bland:
                cand = np.nonzero(score > price_tol)[0]
                if cand.size == 0:
                    return OPTIMAL
                q = int(cand[0])
            else:
                q = int(np.argmax(score)) if score.size else 0
                if not score.size or score[q] <= price_tol:
                    return OPTIMAL
            sigma = 1.0 if self.vstat[q] == _AT_LOWER else -1.0

            w = self.Binv @ self.A[:, q] if self.m else np.zeros(0)
            retried = False
            while True:
                delta = sigma * w
                xb = self.x[self.basis]
                with np.errstate(divide="ignore", invalid="ignore"):
                    t_low = np.where(delta > opt.tol_pivot,
                                     (xb - self.lo[self.basis]) / delta, math.inf)
                    t_upp = np.where(delta < -opt.tol_pivot,
                                     (xb - self.up[self.basis]) / delta, math.inf)
                t_rows = np.minimum(t_low, t_upp)
                t_min_rows = float(t_rows.min()) if t_rows.size else math.inf
                t_flip = self.up[q] - self.lo[q]
                t_star = min(t_min_rows, t_flip)
                if math.isinf(t_star):
                    if phase == 1:
                        raise NumericalFailureError("phase-1 subproblem unbounded")
                    return UNBOUNDED
                t_star = max(t_star, 0.0)

                if t_flip <= t_min_rows:
                    # bound flip: no basis change
                    self.x[self.basis] = xb - t_flip * delta
                    self.x[q] = self.up[q] if sigma > 0 else self.lo[q]
                    self.vstat[q] = _AT_UPPER if sigma > 0 else _AT_LOWER
                    break

                tie = np.nonzero(t_rows <= t_star + 1e-9 * (1.0 + abs(t_star)))[0]
                if bland:
                    r = int(tie[np.argmin(self.basis[tie])])
                else:
                    r = int(tie[np.argmax(np.abs(w[tie]))])
                pivot = w[r]
                if abs(pivot) < opt.tol_pivot:
                    if retried:
                        raise NumericalFailureError(
                            "no admissible pivot above tolerance")
                    self._refactor()
                    w = self.Binv @ self.A[:, q]
                    retried = True
                    continue

                t_star = float(t_rows[r])
                leave = int(self.basis[r])
                self.x[self.basis] = xb - t_star * delta
                base = self.lo[q] if sigma > 0 else self.up[q]
                self.x[q] = base + sigma * t_star
                if delta[r] > 0:
                    self.x[leave] = self.lo[leave]
                    self.vstat[leave] = _AT_LOWER
                else:
                    self.x[leave] = self.up[leave]
                    self.vstat[leave] = _AT_UPPER
                self.vstat[q] = _BASIC
                self.basis[r] = q
                # product-form update of the basis inverse
                br = self.Binv[r] / pivot
                self.Binv -= np.outer(w, br)
                self.Binv[r] = br
                since_refactor += 1
                if since_refactor >= opt.refactor_every:
                    self._refactor()
                    since_refactor = 0
                break

            if t_star <= _DEGEN_STEP:
                degen += 1
                if degen >= opt.bland_after:
                    bland = True
            else:
                degen = 0
                bland = False

    # -- phases ------------------------------------------------------------

    def run(self, warm=None) -> str:
        if warm is not None and self._try_warm_start(warm):
            return self._run(self.c2, phase=2)
        self._cold_start()
        if self.n_art:
            c1 = np.zeros(self.A.shape[1])
            c1[self.n_real:] = 1.0
            self._run(c1, phase=1)
            self._resync()
            infeas = float(self.x[self.n_real:].sum())
            if infeas > self.opt.tol_feas:
                return INFEASIBLE
            self._pin_artificials()
        return self._run(self.c2, phase=2)

    def _pin_artificials(self) -> None:
        self.up[self.n_real:] = 0.0
        swapped = False
        for r in range(self.m):
            col = self.basis[r]
            if col < self.n_real:
                continue
            row = self.Binv[r] @ self.A[:, :self.n_real]
            nonbasic = self.vstat[:self.n_real] != _BASIC
            candidates = np.nonzero(nonbasic & (np.abs(row) > self.opt.tol_pivot)
                                    & ((self.up[:self.n_real] - self.lo[:self.n_real]) > 0))[0]
            if candidates.size == 0:
                continue  # redundant row; artificial stays basic pinned at zero
            q = int(candidates[np.argmax(np.abs(row[candidates]))])
            pivot = row[q]
            w = self.Binv @ self.A[:, q]
            self.vstat[col] = _AT_LOWER
            self.x[col] = 0.0
            self.vstat[q] = _BASIC
            self.basis[r] = q
            br = self.Binv[r] / pivot
            self.Binv -= np.outer(w, br)
            self.Binv[r] = br
            swapped = True
        if swapped:
            self._resync()

    # -- extraction ----------------------------------------------------------

    def extract_solution(self, lp: LinearProgram) -> Solution:
        self._refactor()
        sf = self.sf
        x = self.x
        primal = {}
        for k, var in enumerate(lp.variables):
            p, q = sf.var_cols[k]
            primal[var] = float(x[p] - (x[q] if q >= 0 else 0.0))
        obj = float(sf.c @ x[:self.n_real] + sf.obj_const)

        y = self.c2[self.basis] @ self.Binv if self.m else np.zeros(0)
        dual = {con.name: float(sf.row_sign[i] * y[i])
                for i, con in enumerate(lp.constraints)}
        d = self.c2 - (y @ self.A if self.m else 0.0)
        nb = np.nonzero(self.vstat[:self.n_real] != _BASIC)[0]
        dual_obj = float((y @ self.b if self.m else 0.0)
                         + d[nb] @ x[nb] + sf.obj_const)
        self._certify(obj, dual_obj, d)

        basis_cols = self.basis.tolist()
        if any(c >= self.n_real for c in basis_cols):
            warm = None
        else:
            uppers = tuple(int(j) for j in np.nonzero(self.vstat[:self.n_real] == _AT_UPPER)[0])
            warm = (tuple(int(c) for c in basis_cols), uppers)
        return Solution(OPTIMAL, primal, obj, dual, dual_obj, warm)

    def _certify(self, obj: float, dual_obj: float, d: np.ndarray) -> None:
        opt = self.opt
        scale = max(1.0, float(np.max(np.abs(self.b))) if self.m else 1.0)
        resid = self.b - self.A @ self.x if self.m else np.zeros(0)
        if resid.size and np.max(np.abs(resid)) > opt.tol_feas * scale * 10:
            raise NumericalFailureError("optimal point violates row feasibility")
        below = self.x < self.lo - opt.tol_feas * 10
        above = self.x > self.up + opt.tol_feas * 10
        if below.any() or above.any():
            raise NumericalFailureError("optimal point violates variable bounds")
        dtol = opt.tol_opt * max(1.0, float(np.max(np.abs(self.c2))))
        at_lo = (self.vstat == _AT_LOWER) & ((self.up - self.lo) > 0)
        at_up = (self.vstat == _AT_UPPER) & ((self.up - self.lo) > 0)
        if (d[at_lo] < -dtol).any() or (d[at_up] > dtol).any():
            raise NumericalFailureError("dual feasibility certificate failed")
        if abs(obj - dual_obj) > opt.tol_dual * max(1.0, abs(obj)):
            raise NumericalFailureError("strong duality certificate failed")


def solve(lp: LinearProgram, options: SolverOptions | None = None,
          warm_start: tuple | None = None) -> Solution:
    """Solve a minimisation program; returns status, primal, duals.

    Optimality is certified by primal feasibility, sign-correct reduced
    costs, and strong duality before the solution is returned.
    """
    opts = options or SolverOptions()
    engine = _Engine(_StandardForm(lp), opts)
    status = engine.run(warm_start)
    if status == INFEASIBLE:
        return Solution(INFEASIBLE)
    if status == UNBOUNDED:
        return Solution(UNBOUNDED, objective_value=-math.inf)
    return engine.extract_solution(lp)
