"""LP relaxations for the local, global and robust variants.

Variables are ordered edges first (input order), then node-color pairs
(v, c) lexicographically, then per-node overlap y_v or deletion z_v.
Node-color variables exist only for colors incident to the node unless the
model is built with ``sparsify=False``; absent ones are fixed at 1.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np
import scipy.sparse as sps

from coloring import Variant, VariantKind
from config import FEASIBILITY_TOL
from hypergraph import EdgeColoredHypergraph
from lp_solvers import BaseLpSolver, LpProblem, LpSolveError, LpStatus, get_solver
from lp_solvers.base import GE, LE

logger = logging.getLogger(__name__)


class VarRole(str, Enum):
    EDGE = "edge"
    NODE_COLOR = "node_color"
    OVERLAP = "overlap"
    DELETION = "deletion"


@dataclass(frozen=True)
class LpVariable:
    name: str
    role: VarRole
    key: int | tuple[int, int]
    lower: float
    upper: float


@dataclass(frozen=True)
class LpRow:
    name: str
    coefs: tuple[tuple[int, float], ...]
    sense: str
    rhs: float


@dataclass
class LpModel:
    variant: Variant
    variables: list[LpVariable] = field(default_factory=list)
    rows: list[LpRow] = field(default_factory=list)
    objective: dict[int, float] = field(default_factory=dict)
    sparsified: bool = True

    def add_variable(self, name: str, role: VarRole, key, lower: float, upper: float) -> int:
        self.variables.append(LpVariable(name, role, key, lower, upper))
        return len(self.variables) - 1

    def add_row(self, name: str, coefs: dict[int, float], sense: str, rhs: float):
        self.rows.append(LpRow(name, tuple(sorted(coefs.items())), sense, float(rhs)))

    @property
    def num_variables(self) -> int:
        return len(self.variables)

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    def count(self, role: VarRole) -> int:
        return sum(1 for var in self.variables if var.role is role)

    def to_problem(self) -> LpProblem:
        n = self.num_variables
        data, rows, cols = [], [], []
        for i, row in enumerate(self.rows):
            for j, a in row.coefs:
                rows.append(i)
                cols.append(j)
                data.append(a)
        A = sps.csr_matrix((data, (rows, cols)), shape=(self.num_rows, n))
        c = np.zeros(n)
        for j, coef in self.objective.items():
            c[j] = coef
        lower = np.array([var.lower for var in self.variables], dtype=float)
        upper = np.array([var.upper for var in self.variables], dtype=float)
        # all-ones point on x variables, zero on y/z, is feasible for every model
        start = np.array(
            [var.role in (VarRole.EDGE, VarRole.NODE_COLOR) for var in self.variables],
            dtype=bool,
        )
        return LpProblem(
            c=c,
            A=A,
            senses=tuple(row.sense for row in self.rows),
            rhs=np.array([row.rhs for row in self.rows], dtype=float),
            lower=lower,
            upper=upper,
            start_at_upper=start,
        )


@dataclass(frozen=True, eq=False)
class LpSolution:
    variant: Variant
    objective: float
    edge: dict[int, float]
    node_color: dict[tuple[int, int], float]
    overlap: dict[int, float]
    deletion: dict[int, float]
    status: LpStatus
    iterations: int
    solver: str

    def x(self, v: int, c: int) -> float:
        """x_v^c; colors without a variable sit at 1."""
        return self.node_color.get((v, c), 1.0)

    def y(self, v: int) -> float:
        return self.overlap.get(v, 0.0)

    def z(self, v: int) -> float:
        return self.deletion.get(v, 0.0)

    def is_integral(self, tol: float = FEASIBILITY_TOL) -> bool:
        values = [*self.edge.values(), *self.node_color.values(),
                  *self.overlap.values(), *self.deletion.values()]
        return all(abs(v - round(v)) <= tol for v in values)


def build_lp(hg: EdgeColoredHypergraph, variant: Variant, sparsify: bool = True) -> LpModel:
    """Relaxation for ``variant``: min sum x_e subject to node sums and coverage."""
    kind, b = variant.kind, variant.budget
    model = LpModel(variant=variant, sparsified=sparsify)

    edge_var = []
    for idx in range(hg.num_edges):
        j = model.add_variable(f"x_e{idx + 1}", VarRole.EDGE, idx, 0.0, 1.0)
        edge_var.append(j)
        model.objective[j] = 1.0

    node_color_var: dict[tuple[int, int], int] = {}
    for v in hg.nodes:
        colors = hg.incident_colors(v) if sparsify else tuple(hg.colors)
        for c in colors:
            node_color_var[(v, c)] = model.add_variable(
                f"x_v{v}_c{c}", VarRole.NODE_COLOR, (v, c), 0.0, 1.0
            )

    extra_var: dict[int, int] = {}
    if kind is VariantKind.GLOBAL:
        for v in hg.nodes:
            extra_var[v] = model.add_variable(f"y_v{v}", VarRole.OVERLAP, v, 0.0, np.inf)
    elif kind is VariantKind.ROBUST:
        for v in hg.nodes:
            extra_var[v] = model.add_variable(f"z_v{v}", VarRole.DELETION, v, 0.0, 1.0)

    # node sums; a sparsified node's absent colors contribute their fixed 1s
    for v in hg.nodes:
        colors = hg.incident_colors(v) if sparsify else tuple(hg.colors)
        if not colors:
            continue
        total = len(colors)
        coefs = {node_color_var[(v, c)]: 1.0 for c in colors}
        if kind is VariantKind.LOCAL:
            rhs = total - b
        elif kind is VariantKind.GLOBAL:
            coefs[extra_var[v]] = 1.0
            rhs = total - 1
        else:
            rhs = total - 1
        model.add_row(f"node_v{v}", coefs, GE, rhs)

    for idx, edge in enumerate(hg.edges):
        for v in edge.members:
            coefs = {node_color_var[(v, edge.color)]: 1.0, edge_var[idx]: -1.0}
            if kind is VariantKind.ROBUST:
                coefs[extra_var[v]] = -1.0
            model.add_row(f"cover_e{idx + 1}_v{v}", coefs, LE, 0.0)

    if kind in (VariantKind.GLOBAL, VariantKind.ROBUST):
        model.add_row("budget", {j: 1.0 for j in extra_var.values()}, LE, b)

    logger.debug("Built %s LP: %d variables, %d rows", variant, model.num_variables, model.num_rows)
    return model


def _self_check(model: LpModel, problem: LpProblem, x: np.ndarray, objective: float, tol: float):
    """Primal feasibility and objective recomputation within ``tol``."""
    scale = max(1.0, float(np.abs(problem.rhs).max(initial=0.0)))
    limit = tol * scale
    if np.any(x < problem.lower - limit) or np.any(x > problem.upper + limit):
        raise LpSolveError("solver returned values outside variable bounds")
    activity = problem.A @ x
    senses = np.array(problem.senses)
    violation = np.zeros_like(activity)
    le, ge = senses == LE, senses == GE
    violation[le] = activity[le] - problem.rhs[le]
    violation[ge] = problem.rhs[ge] - activity[ge]
    eq = ~(le | ge)
    violation[eq] = np.abs(activity[eq] - problem.rhs[eq])
    worst = float(violation.max(initial=0.0))
    if worst > limit:
        raise LpSolveError(f"primal residual {worst:.3g} exceeds tolerance {limit:.3g}")
    recomputed = float(problem.c @ x)
    if abs(recomputed - objective) > limit:
        raise LpSolveError(
            f"objective {objective!r} does not match recomputed value {recomputed!r}"
        )


def _snap(values: np.ndarray, tol: float) -> np.ndarray:
    nearest = np.round(values)
    return np.where(np.abs(values - nearest) <= tol, nearest, values)


def solve_lp(model: LpModel, solver: BaseLpSolver | str | None = None) -> LpSolution:
    """Solve ``model`` and return values keyed by role.

    Raises LpSolveError for any non-optimal status; ECC models are always
    feasible and bounded below by 0, so that indicates a solver failure.
    """
    if not isinstance(solver, BaseLpSolver):
        solver = get_solver(solver)
    problem = model.to_problem()
    result = solver.run(problem)
    if result.status is not LpStatus.OPTIMAL:
        raise LpSolveError(f"{solver.name} solver returned status {result.status.value}")

    _self_check(model, problem, result.x, result.objective, solver.residual_tol)
    x = _snap(result.x, solver.residual_tol)
    objective = max(0.0, float(problem.c @ x))

    by_role: dict[VarRole, dict] = {role: {} for role in VarRole}
    for var, value in zip(model.variables, x.tolist()):
        by_role[var.role][var.key] = value

    logger.info("Solved %s LP with %s: objective %.6g in %d iterations",
                model.variant, solver.name, objective, result.iterations)
    return LpSolution(
        variant=model.variant,
        objective=objective,
        edge=by_role[VarRole.EDGE],
        node_color=by_role[VarRole.NODE_COLOR],
        overlap=by_role[VarRole.OVERLAP],
        deletion=by_role[VarRole.DELETION],
        status=result.status,
        iterations=result.iterations,
        solver=solver.name,
    )


def lp_lower_bound(hg: EdgeColoredHypergraph, variant: Variant,
                   solver: BaseLpSolver | str | None = None) -> float:
    return solve_lp(build_lp(hg, variant), solver).objective


# ── LP file export ───────────────────────────────────────────────


def _format_terms(terms: list[tuple[float, str]]) -> list[str]:
    parts = []
    for coef, name in terms:
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = name if mag == 1 else f"{mag:.12g} {name}"
        parts.append(f"{sign} {body}")
    if parts and parts[0].startswith("+ "):
        parts[0] = parts[0][2:]
    return parts


def _wrap(prefix: str, parts: list[str], suffix: str = "", width: int = 200) -> list[str]:
    lines, current = [], prefix
    for part in parts:
        if len(current) + len(part) + 1 > width:
            lines.append(current)
            current = "   "
        current += " " + part
    current += suffix
    lines.append(current)
    return lines


def format_lp(model: LpModel) -> str:
    """CPLEX LP text format."""
    names = [var.name for var in model.variables]
    out = [f"\\ {model.variant} relaxation", "Minimize"]
    obj_terms = [(coef, names[j]) for j, coef in sorted(model.objective.items())]
    out.extend(_wrap(" obj:", _format_terms(obj_terms) or ["0"]))

    out.append("Subject To")
    for row in model.rows:
        terms = _format_terms([(a, names[j]) for j, a in row.coefs])
        if not terms:
            continue
        out.extend(_wrap(f" {row.name}:", terms, f" {row.sense} {row.rhs:.12g}"))

    out.append("Bounds")
    for var in model.variables:
        if np.isfinite(var.upper):
            out.append(f" {var.lower:.12g} <= {var.name} <= {var.upper:.12g}")
        else:
            out.append(f" {var.name} >= {var.lower:.12g}")
    out.append("End")
    return "\n".join(out) + "\n"


def write_lp_file(model: LpModel, path: str | Path):
    Path(path).write_text(format_lp(model), encoding="utf-8")
    logger.info("Wrote LP model (%d variables, %d rows) to %s",
                model.num_variables, model.num_rows, path)
