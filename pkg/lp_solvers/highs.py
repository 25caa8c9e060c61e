"""HiGHS backend through scipy.optimize.linprog."""

import logging

import numpy as np
import scipy.sparse as sps
from scipy.optimize import linprog

from lp_solvers.base import EQ, GE, LE, BaseLpSolver, LpProblem, LpSolveError, LpStatus

logger = logging.getLogger(__name__)

_STATUS = {
    0: LpStatus.OPTIMAL,
    1: LpStatus.ITERATION_LIMIT,
    2: LpStatus.INFEASIBLE,
    3: LpStatus.UNBOUNDED,
}


class HighsSolver(BaseLpSolver):

    name = "highs"
    # HiGHS default primal feasibility tolerance
    residual_tol = 1e-7

    def __init__(self, method: str = "highs"):
        self.method = method
        self._problem = None
        self._result = None

    def load(self, problem: LpProblem):
        self._problem = problem
        self._result = None

    def solve(self) -> LpStatus:
        if self._problem is None:
            raise LpSolveError("no problem loaded")
        p = self._problem
        senses = np.array(p.senses)
        A = sps.csr_matrix(p.A)

        le = senses == LE
        ge = senses == GE
        eq = senses == EQ
        A_ub = sps.vstack([A[le], -A[ge]], format="csr")
        b_ub = np.concatenate([p.rhs[le], -p.rhs[ge]])
        bounds = [
            (lo, None if not np.isfinite(hi) else hi)
            for lo, hi in zip(p.lower.tolist(), p.upper.tolist())
        ]

        try:
            self._result = linprog(
                p.c,
                A_ub=A_ub if A_ub.shape[0] else None,
                b_ub=b_ub if A_ub.shape[0] else None,
                A_eq=A[eq] if eq.any() else None,
                b_eq=p.rhs[eq] if eq.any() else None,
                bounds=bounds,
                method=self.method,
            )
        except ValueError as e:
            raise LpSolveError(f"HiGHS rejected the problem: {e}") from e

        status = _STATUS.get(self._result.status, LpStatus.ERROR)
        if status is LpStatus.ERROR:
            logger.error("HiGHS failed: %s", self._result.message)
        return status

    def values(self) -> np.ndarray:
        if self._result is None or self._result.x is None:
            raise LpSolveError("no optimal solution available")
        return np.asarray(self._result.x, dtype=float)

    def objective_value(self) -> float:
        if self._result is None or self._result.fun is None:
            raise LpSolveError("no optimal solution available")
        return float(self._result.fun)

    @property
    def iterations(self) -> int:
        if self._result is None:
            return 0
        return int(getattr(self._result, "nit", 0) or 0)
