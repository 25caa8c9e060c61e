"""
LP backend abstraction.

Provides the bundled revised simplex and an optional HiGHS backend
behind the same interface.
"""

from lp_solvers.base import BaseLpSolver, LpProblem, LpSolveError, LpStatus, SolverResult

AVAILABLE_SOLVERS = ("simplex", "highs")


def get_solver(name: str | None = None) -> BaseLpSolver:
    """Get an LP backend instance by name (default from config)."""
    if name is None:
        from config import LP_SOLVER
        name = LP_SOLVER
    if name == "simplex":
        from lp_solvers.simplex import SimplexSolver
        return SimplexSolver()
    elif name == "highs":
        from lp_solvers.highs import HighsSolver
        return HighsSolver()
    else:
        raise LpSolveError(f"Unknown LP solver: {name}. Available: {', '.join(AVAILABLE_SOLVERS)}")


__all__ = [
    "AVAILABLE_SOLVERS",
    "BaseLpSolver",
    "LpProblem",
    "LpSolveError",
    "LpStatus",
    "SolverResult",
    "get_solver",
]
