"""Abstract base class for LP backends."""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.sparse as sps

logger = logging.getLogger(__name__)


class LpSolveError(Exception):
    pass


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration_limit"
    ERROR = "error"


# Row senses
LE, GE, EQ = "<=", ">=", "="


@dataclass(frozen=True, eq=False)
class LpProblem:
    """min c^T x  s.t.  A x (sense) rhs,  lower <= x <= upper.

    ``start_at_upper`` marks columns whose starting nonbasic value is their
    upper bound (a hint; backends may ignore it).
    """

    c: np.ndarray
    A: sps.csr_matrix
    senses: tuple[str, ...]
    rhs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    start_at_upper: np.ndarray | None = None

    @property
    def num_vars(self) -> int:
        return self.c.shape[0]

    @property
    def num_rows(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True, eq=False)
class SolverResult:
    status: LpStatus
    x: np.ndarray | None
    objective: float | None
    iterations: int


class BaseLpSolver(ABC):
    """Interface that each LP backend must implement."""

    name: str = "base"
    # primal residual accepted by the post-solve self-check
    residual_tol: float = 1e-9

    @abstractmethod
    def load(self, problem: LpProblem):
        """Load a problem, discarding any previous state."""
        ...

    @abstractmethod
    def solve(self) -> LpStatus:
        """Solve the loaded problem and return the termination status."""
        ...

    @abstractmethod
    def values(self) -> np.ndarray:
        """Primal values of the last optimal solve."""
        ...

    @abstractmethod
    def objective_value(self) -> float:
        """Objective of the last optimal solve."""
        ...

    @property
    @abstractmethod
    def iterations(self) -> int:
        """Iteration count reported by the last solve."""
        ...

    def run(self, problem: LpProblem) -> SolverResult:
        """Main entry point: load, solve and collect the result."""
        self.load(problem)
        status = self.solve()
        if status is not LpStatus.OPTIMAL:
            logger.warning("%s backend finished with status %s after %d iterations",
                           self.name, status.value, self.iterations)
            return SolverResult(status, None, None, self.iterations)
        logger.debug("%s backend: optimal %.9g in %d iterations",
                     self.name, self.objective_value(), self.iterations)
        return SolverResult(status, self.values(), self.objective_value(), self.iterations)
