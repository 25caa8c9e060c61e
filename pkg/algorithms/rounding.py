"""Deterministic threshold rounding of LP solutions with bicriteria certificates."""

import logging
import math
from dataclasses import dataclass

from coloring import (
    ColorAssignment,
    EvaluationReport,
    Variant,
    VariantKind,
    evaluate,
)
from config import COMPARE_TOL, THRESHOLD_GUARD
from hypergraph import EdgeColoredHypergraph
from metrics import measure_alpha, measure_beta
from algorithms.lp_relaxation import LpSolution

logger = logging.getLogger(__name__)


class RoundingError(Exception):
    pass


class GuaranteeViolationError(Exception):
    pass


# open interval per variant: (low, high)
_PARAM_RANGE = {
    VariantKind.LOCAL: (0.0, 1.0),
    VariantKind.GLOBAL: (0.0, 1.0),
    VariantKind.ROBUST: (0.0, 0.5),
}
_PARAM_NAME = {VariantKind.LOCAL: "rho", VariantKind.GLOBAL: "delta", VariantKind.ROBUST: "eps"}


@dataclass(frozen=True)
class RoundingParams:
    """Threshold of one rounding scheme: rho (local), delta (global) or eps (robust).

    ``fill_unassigned=None`` means the variant default: on for global and
    robust, off for local.
    """

    kind: VariantKind
    threshold: float
    fill_unassigned: bool | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", VariantKind(self.kind))
        low, high = _PARAM_RANGE[self.kind]
        if not low < self.threshold < high:
            raise RoundingError(
                f"{self.name} must lie in ({low:g}, {high:g}), got {self.threshold!r}"
            )

    @property
    def name(self) -> str:
        return _PARAM_NAME[self.kind]

    @property
    def fill(self) -> bool:
        if self.fill_unassigned is None:
            return self.kind is not VariantKind.LOCAL
        return self.fill_unassigned

    def label(self) -> str:
        return f"{self.name}={self.threshold:.6g}"

    @classmethod
    def local(cls, rho: float, fill_unassigned: bool | None = None) -> "RoundingParams":
        return cls(VariantKind.LOCAL, rho, fill_unassigned)

    @classmethod
    def global_(cls, delta: float, fill_unassigned: bool | None = None) -> "RoundingParams":
        return cls(VariantKind.GLOBAL, delta, fill_unassigned)

    @classmethod
    def robust(cls, eps: float, fill_unassigned: bool | None = None) -> "RoundingParams":
        return cls(VariantKind.ROBUST, eps, fill_unassigned)

    @classmethod
    def single_criteria(cls, b: int) -> "RoundingParams":
        """rho = b/(b+1): never more than b colors on a node."""
        return cls.local(b / (b + 1))

    @classmethod
    def default_for(cls, variant: Variant) -> "RoundingParams":
        if variant.kind is VariantKind.LOCAL:
            return cls.single_criteria(variant.budget)
        if variant.kind is VariantKind.GLOBAL:
            return cls.global_(0.5)
        return cls.robust(1 / 3)


def presets(variant: Variant) -> list[RoundingParams]:
    if variant.kind is VariantKind.LOCAL:
        return [RoundingParams.single_criteria(variant.budget), RoundingParams.local(0.5)]
    if variant.kind is VariantKind.GLOBAL:
        return [RoundingParams.global_(0.5)]
    return [RoundingParams.robust(1 / 3), RoundingParams.robust(0.25)]


@dataclass(frozen=True)
class GuaranteeCertificate:
    variant: Variant
    params: RoundingParams
    lp_value: float
    mistakes: int
    budget_used: int
    promised_alpha: float
    promised_beta: float
    observed_alpha: float
    observed_beta: float

    def holds(self, tol: float = COMPARE_TOL) -> bool:
        return not self.violations(tol)

    def violations(self, tol: float = COMPARE_TOL) -> list[str]:
        problems = []
        if self.mistakes > self.promised_alpha * self.lp_value * (1 + tol) + tol:
            problems.append(
                f"{self.mistakes} mistakes exceed {self.promised_alpha:.6g} x LP {self.lp_value:.6g}"
            )
        if self.observed_beta > self.promised_beta + tol:
            problems.append(
                f"budget factor {self.observed_beta:.6g} exceeds {self.promised_beta:.6g}"
            )
        return problems

    def verify(self, tol: float = COMPARE_TOL):
        problems = self.violations(tol)
        if problems:
            raise GuaranteeViolationError(f"{self.variant} {self.params.label()}: "
                                          + "; ".join(problems))

    def as_dict(self) -> dict:
        return {
            "param": self.params.label(),
            "lp_value": self.lp_value,
            "promised_alpha": self.promised_alpha,
            "observed_alpha": self.observed_alpha,
            "promised_beta": self.promised_beta,
            "observed_beta": self.observed_beta,
        }


@dataclass(frozen=True)
class RoundingResult:
    assignment: ColorAssignment
    certificate: GuaranteeCertificate
    report: EvaluationReport


def round_half(x: float, delta: float) -> int:
    """floor(x) when the fractional part is below delta, ceil(x) otherwise."""
    if x < 0:
        raise ValueError(f"round_half expects x >= 0, got {x}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    low = math.floor(x)
    return low if x - low < delta else math.ceil(x)


def local_color_ceiling(b: int, rho: float) -> int:
    """Largest per-node color count rounding at rho can produce: ceil(b/rho) - 1."""
    return math.ceil(b / rho - THRESHOLD_GUARD) - 1


# ── Shared steps ─────────────────────────────────────────────────


def _check_solution(sol: LpSolution, variant: Variant):
    if sol.variant != variant:
        raise RoundingError(f"LP solution was built for {sol.variant}, not {variant}")


def _fill(hg: EdgeColoredHypergraph, colors: list[set[int]], deleted: frozenset[int]) -> int:
    filled = 0
    for v in hg.nodes:
        if v not in deleted and not colors[v - 1]:
            colors[v - 1].add(hg.favorite(v))
            filled += 1
    return filled


def _finish(
    hg: EdgeColoredHypergraph,
    variant: Variant,
    params: RoundingParams,
    sol: LpSolution,
    colors: list[set[int]],
    deleted: frozenset[int],
    promised_alpha: float,
    promised_beta: float,
) -> RoundingResult:
    before = evaluate(hg, ColorAssignment(tuple(frozenset(s) for s in colors), deleted), variant)
    if params.fill:
        filled = _fill(hg, colors, deleted)
        logger.debug("Filled %d empty nodes with their favorite color", filled)

    assignment = ColorAssignment(tuple(frozenset(s) for s in colors), deleted)
    report = evaluate(hg, assignment, variant)
    if report.mistakes > before.mistakes:
        raise RoundingError("fill step increased the number of mistakes")

    cert = GuaranteeCertificate(
        variant=variant,
        params=params,
        lp_value=sol.objective,
        mistakes=report.mistakes,
        budget_used=report.budget_used,
        promised_alpha=promised_alpha,
        promised_beta=promised_beta,
        observed_alpha=measure_alpha(report.mistakes, sol.objective),
        observed_beta=measure_beta(variant.kind, report.budget_used, variant.budget),
    )
    logger.info("Rounded %s at %s: %d mistakes (LP %.6g), budget used %d",
                variant, params.label(), report.mistakes, sol.objective, report.budget_used)
    return RoundingResult(assignment, cert, report)


# ── Schemes ──────────────────────────────────────────────────────


def round_local(
    hg: EdgeColoredHypergraph,
    b: int,
    sol: LpSolution,
    params: RoundingParams | None = None,
) -> RoundingResult:
    """Assign c to v iff x_v^c < 1 - rho.

    Promises alpha = 1/(1-rho) and beta = (ceil(b/rho) - 1)/b, which is
    1/rho - 1/b whenever b/rho is an integer.
    """
    variant = Variant.local(b)
    params = params or RoundingParams.single_criteria(b)
    if params.kind is not VariantKind.LOCAL:
        raise RoundingError(f"expected local rounding parameters, got {params.kind.value}")
    _check_solution(sol, variant)

    rho = params.threshold
    cut = 1.0 - rho - THRESHOLD_GUARD
    ceiling = local_color_ceiling(b, rho)
    colors = []
    for v in hg.nodes:
        chosen = {c for c in hg.incident_colors(v) if sol.x(v, c) < cut}
        if len(chosen) > ceiling:
            raise RoundingError(
                f"node {v} received {len(chosen)} colors, above the ceiling {ceiling}; "
                "LP solution does not satisfy the node constraint"
            )
        colors.append(chosen)

    return _finish(hg, variant, params, sol, colors, frozenset(),
                   promised_alpha=1.0 / (1.0 - rho), promised_beta=ceiling / b)


def round_global(
    hg: EdgeColoredHypergraph,
    b: int,
    sol: LpSolution,
    params: RoundingParams | None = None,
) -> RoundingResult:
    """Per-node threshold (1 - delta) / (round_half(y_v, delta) + 2).

    Promises alpha = (b+2)/(1-delta) + 1 and beta = 1/delta.
    """
    variant = Variant.global_(b)
    params = params or RoundingParams.global_(0.5)
    if params.kind is not VariantKind.GLOBAL:
        raise RoundingError(f"expected global rounding parameters, got {params.kind.value}")
    _check_solution(sol, variant)

    delta = params.threshold
    colors = []
    for v in hg.nodes:
        allowed = round_half(max(sol.y(v), 0.0), delta)
        cut = (1.0 - delta) / (allowed + 2) - THRESHOLD_GUARD
        chosen = {c for c in hg.incident_colors(v) if sol.x(v, c) < cut}
        if len(chosen) > allowed + 1:
            raise RoundingError(
                f"node {v} received {len(chosen)} colors with y_v={sol.y(v):.6g}; "
                "LP solution does not satisfy the node constraint"
            )
        colors.append(chosen)

    return _finish(hg, variant, params, sol, colors, frozenset(),
                   promised_alpha=(b + 2) / (1.0 - delta) + 1.0, promised_beta=1.0 / delta)


def round_robust(
    hg: EdgeColoredHypergraph,
    b: int,
    sol: LpSolution,
    params: RoundingParams | None = None,
) -> RoundingResult:
    """Delete v iff z_v >= eps; otherwise assign c iff x_v^c < 1/2.

    Promises alpha = 2/(1-2 eps) and beta = 1/eps.
    """
    variant = Variant.robust(b)
    params = params or RoundingParams.robust(1 / 3)
    if params.kind is not VariantKind.ROBUST:
        raise RoundingError(f"expected robust rounding parameters, got {params.kind.value}")
    _check_solution(sol, variant)

    eps = params.threshold
    deleted = frozenset(v for v in hg.nodes if sol.z(v) >= eps - THRESHOLD_GUARD)
    cut = 0.5 - THRESHOLD_GUARD
    colors = []
    for v in hg.nodes:
        if v in deleted:
            colors.append(set())
            continue
        chosen = {c for c in hg.incident_colors(v) if sol.x(v, c) < cut}
        if len(chosen) > 1:
            raise RoundingError(
                f"node {v} received {len(chosen)} colors; "
                "LP solution does not satisfy the node constraint"
            )
        colors.append(chosen)

    return _finish(hg, variant, params, sol, colors, deleted,
                   promised_alpha=2.0 / (1.0 - 2.0 * eps), promised_beta=1.0 / eps)


def round_lp(
    hg: EdgeColoredHypergraph,
    variant: Variant,
    sol: LpSolution,
    params: RoundingParams | None = None,
) -> RoundingResult:
    if variant.kind is VariantKind.LOCAL:
        return round_local(hg, variant.budget, sol, params)
    if variant.kind is VariantKind.GLOBAL:
        return round_global(hg, variant.budget, sol, params)
    return round_robust(hg, variant.budget, sol, params)
