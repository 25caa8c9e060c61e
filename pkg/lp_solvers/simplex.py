"""Bundled bounded-variable revised simplex.

Sparse LU of the basis (scipy.sparse.linalg.splu) with product-form eta
updates between refactorizations. Dantzig pricing, switching to Bland's rule
after a run of degenerate pivots. Two phases; phase 1 is skipped when the
starting point (slack basis, structurals at their hinted bounds) is feasible.
"""

import logging

import numpy as np
import scipy.sparse as sps
from scipy.sparse.linalg import splu

from config import (
    FEASIBILITY_TOL,
    SIMPLEX_DEGENERATE_LIMIT,
    SIMPLEX_MAX_ITERATIONS,
    SIMPLEX_REFACTOR_INTERVAL,
)
from lp_solvers.base import EQ, GE, LE, BaseLpSolver, LpProblem, LpSolveError, LpStatus

logger = logging.getLogger(__name__)

_BASIC, _AT_LOWER, _AT_UPPER = 0, 1, 2
_PIVOT_TOL = 1e-9


class SimplexSolver(BaseLpSolver):

    name = "simplex"
    residual_tol = FEASIBILITY_TOL

    def __init__(
        self,
        tol: float | None = None,
        max_iterations: int | None = None,
        refactor_interval: int | None = None,
        degenerate_limit: int | None = None,
    ):
        self.tol = FEASIBILITY_TOL if tol is None else tol
        self.max_iterations = max_iterations or SIMPLEX_MAX_ITERATIONS
        self.refactor_interval = refactor_interval or SIMPLEX_REFACTOR_INTERVAL
        self.degenerate_limit = degenerate_limit or SIMPLEX_DEGENERATE_LIMIT
        self._problem = None
        self._x = None
        self._objective = None
        self._iterations = 0

    # ── BaseLpSolver ─────────────────────────────────────────────

    def load(self, problem: LpProblem):
        if np.any(~np.isfinite(problem.lower)):
            raise LpSolveError("simplex backend requires finite lower bounds")
        self._problem = problem
        self._x = None
        self._objective = None
        self._iterations = 0

    def values(self) -> np.ndarray:
        if self._x is None:
            raise LpSolveError("no optimal solution available")
        return self._x.copy()

    def objective_value(self) -> float:
        if self._objective is None:
            raise LpSolveError("no optimal solution available")
        return self._objective

    @property
    def iterations(self) -> int:
        return self._iterations

    def solve(self) -> LpStatus:
        if self._problem is None:
            raise LpSolveError("no problem loaded")
        p = self._problem
        n, m = p.num_vars, p.num_rows
        if m == 0:
            return self._solve_unconstrained()

        self._build_standard_form()

        if self._num_artificial:
            status = self._run(self._phase1_cost)
            if status is not LpStatus.OPTIMAL:
                return status
            infeasibility = float(self._phase1_cost @ self._current_x())
            if infeasibility > self.tol * max(1.0, float(np.abs(p.rhs).max())):
                logger.debug("Phase 1 ended with infeasibility %.3g", infeasibility)
                return LpStatus.INFEASIBLE
            # artificials are pinned at zero for phase 2
            self._hi[self._art_slice] = 0.0

        status = self._run(self._cost)
        if status is not LpStatus.OPTIMAL:
            return status

        x = self._current_x()[:n]
        x = np.minimum(np.maximum(x, p.lower), p.upper)
        self._x = x
        self._objective = float(p.c @ x)
        return LpStatus.OPTIMAL

    # ── Setup ────────────────────────────────────────────────────

    def _solve_unconstrained(self) -> LpStatus:
        p = self._problem
        if np.any((p.c < 0) & ~np.isfinite(p.upper)):
            return LpStatus.UNBOUNDED
        self._x = np.where(p.c < 0, p.upper, p.lower).astype(float)
        self._objective = float(p.c @ self._x)
        return LpStatus.OPTIMAL

    def _build_standard_form(self):
        """Columns = structurals | slacks | artificials, every row an equality."""
        p = self._problem
        n, m = p.num_vars, p.num_rows

        x0 = p.lower.astype(float).copy()
        if p.start_at_upper is not None:
            use_upper = p.start_at_upper & np.isfinite(p.upper)
            x0[use_upper] = p.upper[use_upper]
        residual = p.rhs - p.A @ x0

        slack_rows, slack_signs = [], []
        for i, sense in enumerate(p.senses):
            if sense == LE:
                slack_rows.append(i)
                slack_signs.append(1.0)
            elif sense == GE:
                slack_rows.append(i)
                slack_signs.append(-1.0)
            elif sense != EQ:
                raise LpSolveError(f"unknown row sense {sense!r}")
        slack_of_row = dict(zip(slack_rows, range(len(slack_rows))))

        basis = np.empty(m, dtype=int)
        basic_values = np.empty(m)
        art_rows, art_signs = [], []
        n_slack = len(slack_rows)
        for i in range(m):
            j = slack_of_row.get(i)
            if j is not None and slack_signs[j] * residual[i] >= -self.tol:
                basis[i] = n + j
                basic_values[i] = max(slack_signs[j] * residual[i], 0.0)
            else:
                basis[i] = n + n_slack + len(art_rows)
                basic_values[i] = abs(residual[i])
                art_rows.append(i)
                art_signs.append(1.0 if residual[i] >= 0 else -1.0)

        n_art = len(art_rows)
        slack_cols = sps.csc_matrix(
            (slack_signs, (slack_rows, range(n_slack))), shape=(m, n_slack)
        )
        art_cols = sps.csc_matrix((art_signs, (art_rows, range(n_art))), shape=(m, n_art))
        self._M = sps.hstack([p.A.tocsc(), slack_cols, art_cols], format="csc")
        self._MT = self._M.T.tocsr()
        total = n + n_slack + n_art

        self._lo = np.concatenate([p.lower.astype(float), np.zeros(n_slack + n_art)])
        self._hi = np.concatenate([
            p.upper.astype(float), np.full(n_slack, np.inf), np.full(n_art, np.inf)
        ])
        self._cost = np.concatenate([p.c.astype(float), np.zeros(n_slack + n_art)])
        self._phase1_cost = np.zeros(total)
        self._phase1_cost[n + n_slack:] = 1.0
        self._art_slice = slice(n + n_slack, total)
        self._num_artificial = n_art

        self._x_full = np.concatenate([x0, np.zeros(n_slack + n_art)])
        self._state = np.where(
            np.isclose(self._x_full, self._hi) & np.isfinite(self._hi), _AT_UPPER, _AT_LOWER
        )
        self._basis = basis
        self._state[basis] = _BASIC
        self._xB = basic_values
        self._rhs = p.rhs.astype(float)
        self._refactor()
        logger.debug("Standard form: %d rows, %d columns (%d slack, %d artificial)",
                     m, total, n_slack, n_art)

    # ── Linear algebra ───────────────────────────────────────────

    def _refactor(self):
        try:
            self._lu = splu(self._M[:, self._basis].tocsc())
        except RuntimeError as e:
            raise LpSolveError(f"singular basis: {e}") from e
        self._etas: list[tuple[int, np.ndarray]] = []
        nonbasic = self._state != _BASIC
        x_nb = np.where(nonbasic, self._x_full, 0.0)
        self._xB = self._lu.solve(self._rhs - self._M @ x_nb)

    def _ftran(self, a: np.ndarray) -> np.ndarray:
        u = self._lu.solve(a)
        for r, w in self._etas:
            vr = u[r] / w[r]
            u -= w * vr
            u[r] = vr
        return u

    def _btran(self, c: np.ndarray) -> np.ndarray:
        z = c.copy()
        for r, w in reversed(self._etas):
            z[r] = (z[r] - (w @ z - w[r] * z[r])) / w[r]
        return self._lu.solve(z, trans="T")

    def _current_x(self) -> np.ndarray:
        x = self._x_full.copy()
        x[self._basis] = self._xB
        return x

    # ── Iteration ────────────────────────────────────────────────

    def _run(self, cost: np.ndarray) -> LpStatus:
        tol = self.tol
        lo, hi, state = self._lo, self._hi, self._state
        movable = (hi - lo) > tol
        degenerate_run = 0
        bland = False
        self._refactor()

        while True:
            if self._iterations >= self.max_iterations:
                return LpStatus.ITERATION_LIMIT

            y = self._btran(cost[self._basis])
            d = cost - self._MT @ y
            eligible = movable & (
                ((state == _AT_LOWER) & (d < -tol)) | ((state == _AT_UPPER) & (d > tol))
            )
            candidates = np.flatnonzero(eligible)
            if candidates.size == 0:
                self._refactor()
                return LpStatus.OPTIMAL

            if bland:
                q = int(candidates[0])
            else:
                q = int(candidates[np.argmax(np.abs(d[candidates]))])
            direction = 1.0 if state[q] == _AT_LOWER else -1.0

            w = self._ftran(self._M[:, q].toarray().ravel())
            delta = -direction * w
            xB = self._xB
            loB, hiB = lo[self._basis], hi[self._basis]

            ratios = np.full(delta.shape, np.inf)
            dec = delta < -_PIVOT_TOL
            ratios[dec] = (xB[dec] - loB[dec]) / -delta[dec]
            inc = (delta > _PIVOT_TOL) & np.isfinite(hiB)
            ratios[inc] = (hiB[inc] - xB[inc]) / delta[inc]
            np.maximum(ratios, 0.0, out=ratios)

            t_min = ratios.min()
            t_flip = hi[q] - lo[q]
            if not np.isfinite(t_min) and not np.isfinite(t_flip):
                return LpStatus.UNBOUNDED

            self._iterations += 1
            if t_flip <= t_min:
                theta = t_flip
                self._xB = xB + theta * delta
                self._x_full[q] = hi[q] if direction > 0 else lo[q]
                state[q] = _AT_UPPER if direction > 0 else _AT_LOWER
            else:
                theta = t_min
                ties = np.flatnonzero(ratios <= t_min + tol)
                if bland:
                    r = int(ties[np.argmin(self._basis[ties])])
                else:
                    r = int(ties[np.argmax(np.abs(delta[ties]))])
                leaving = int(self._basis[r])
                entering_value = self._x_full[q] + direction * theta

                self._xB = xB + theta * delta
                if delta[r] < 0:
                    self._x_full[leaving] = lo[leaving]
                    state[leaving] = _AT_LOWER
                else:
                    self._x_full[leaving] = hi[leaving]
                    state[leaving] = _AT_UPPER
                self._basis[r] = q
                state[q] = _BASIC
                self._xB[r] = entering_value
                self._etas.append((r, w))
                if len(self._etas) >= self.refactor_interval:
                    self._refactor()

            if theta <= tol:
                degenerate_run += 1
                if not bland and degenerate_run >= self.degenerate_limit:
                    logger.debug("Switching to Bland's rule at iteration %d", self._iterations)
                    bland = True
            else:
                degenerate_run = 0
                bland = False
