"""Color assignments, budget variants, objective evaluation and feasibility."""

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from hypergraph import EdgeColoredHypergraph

logger = logging.getLogger(__name__)


class VariantError(Exception):
    pass


class AssignmentFormatError(Exception):
    pass


class VariantKind(str, Enum):
    LOCAL = "local"
    GLOBAL = "global"
    ROBUST = "robust"


@dataclass(frozen=True)
class Variant:
    """Constraint family plus its budget b.

    local: at most b colors per node (b >= 1); global: one free color per node
    and b shared extra colors; robust: one color per node and up to b deleted
    nodes.
    """

    kind: VariantKind
    budget: int

    def __post_init__(self):
        object.__setattr__(self, "kind", VariantKind(self.kind))
        if isinstance(self.budget, bool) or int(self.budget) != self.budget:
            raise VariantError(f"budget must be an integer, got {self.budget!r}")
        object.__setattr__(self, "budget", int(self.budget))
        if self.budget < 0:
            raise VariantError(f"budget must be >= 0, got {self.budget}")
        if self.kind is VariantKind.LOCAL and self.budget < 1:
            raise VariantError("local variant requires budget >= 1")

    @classmethod
    def local(cls, b: int) -> "Variant":
        return cls(VariantKind.LOCAL, b)

    @classmethod
    def global_(cls, b: int) -> "Variant":
        return cls(VariantKind.GLOBAL, b)

    @classmethod
    def robust(cls, b: int) -> "Variant":
        return cls(VariantKind.ROBUST, b)

    @classmethod
    def parse(cls, kind: str, b: int) -> "Variant":
        try:
            kind = VariantKind(kind)
        except ValueError as e:
            raise VariantError(f"unknown variant {kind!r}") from e
        return cls(kind, b)

    def with_budget(self, b: int) -> "Variant":
        return Variant(self.kind, b)

    def __str__(self) -> str:
        return f"{self.kind.value}(b={self.budget})"


@dataclass(frozen=True)
class ColorAssignment:
    """lambda: node -> color set, plus the deleted-node set (robust only).

    ``colors[v - 1]`` is the color set of node v. Deleted nodes conceptually
    hold every color; their stored set is ignored by evaluation.
    """

    colors: tuple[frozenset[int], ...]
    deleted: frozenset[int] = field(default_factory=frozenset)

    @classmethod
    def from_mapping(
        cls,
        num_nodes: int,
        mapping: Mapping[int, Iterable[int]],
        deleted: Iterable[int] = (),
    ) -> "ColorAssignment":
        colors = tuple(frozenset(mapping.get(v, ())) for v in range(1, num_nodes + 1))
        return cls(colors=colors, deleted=frozenset(deleted))

    @classmethod
    def empty(cls, num_nodes: int) -> "ColorAssignment":
        return cls(colors=tuple(frozenset() for _ in range(num_nodes)))

    @property
    def num_nodes(self) -> int:
        return len(self.colors)

    def of(self, v: int) -> frozenset[int]:
        return self.colors[v - 1]

    def has(self, v: int, c: int) -> bool:
        return v in self.deleted or c in self.colors[v - 1]

    def max_colors(self) -> int:
        return max((len(s) for s in self.colors), default=0)

    def extra_colors(self) -> int:
        return sum(max(0, len(s) - 1) for s in self.colors)

    def budget_used(self, kind: VariantKind) -> int:
        """Budget consumption in the variant's own unit."""
        kind = VariantKind(kind)
        if kind is VariantKind.LOCAL:
            return self.max_colors()
        if kind is VariantKind.GLOBAL:
            return self.extra_colors()
        return len(self.deleted)

    def to_mapping(self) -> dict[int, list[int]]:
        return {v: sorted(s) for v, s in enumerate(self.colors, start=1)}


@dataclass(frozen=True, eq=False)
class EvaluationReport:
    mistakes: int
    satisfied: int
    linear_penalty: int
    budget_used: int
    unused_nodes: int
    per_edge_satisfied: np.ndarray

    @property
    def num_edges(self) -> int:
        return self.mistakes + self.satisfied


def evaluate(
    hg: EdgeColoredHypergraph,
    assignment: ColorAssignment,
    variant: Variant | None = None,
) -> EvaluationReport:
    """Mistakes, linear node-edge penalty and unused nodes.

    ``budget_used`` is measured in the unit of ``variant`` (0 when omitted).
    """
    if assignment.num_nodes != hg.num_nodes:
        raise VariantError(
            f"assignment covers {assignment.num_nodes} nodes, hypergraph has {hg.num_nodes}"
        )

    satisfied = np.ones(hg.num_edges, dtype=bool)
    linear = 0
    for idx, edge in enumerate(hg.edges):
        errors = sum(1 for v in edge.members if not assignment.has(v, edge.color))
        if errors:
            satisfied[idx] = False
            linear += errors

    used = np.zeros(hg.num_nodes + 1, dtype=bool)
    for idx in np.flatnonzero(satisfied):
        used[list(hg.edges[idx].members)] = True
    unused = int(hg.num_nodes - used[1:].sum())

    n_sat = int(satisfied.sum())
    return EvaluationReport(
        mistakes=hg.num_edges - n_sat,
        satisfied=n_sat,
        linear_penalty=linear,
        budget_used=assignment.budget_used(variant.kind) if variant else 0,
        unused_nodes=unused,
        per_edge_satisfied=satisfied,
    )


def linear_penalty(hg: EdgeColoredHypergraph, assignment: ColorAssignment) -> int:
    return sum(
        1
        for edge in hg.edges
        for v in edge.members
        if not assignment.has(v, edge.color)
    )


@dataclass(frozen=True)
class Feasibility:
    ok: bool
    violation: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_feasible(variant: Variant, assignment: ColorAssignment) -> Feasibility:
    """Whether ``assignment`` satisfies the constraint family of ``variant``."""
    b = variant.budget
    kind = variant.kind

    if kind is not VariantKind.ROBUST and assignment.deleted:
        return Feasibility(False, f"{kind.value} variant cannot delete nodes "
                                  f"({len(assignment.deleted)} deleted)")

    if kind is VariantKind.LOCAL:
        for v, s in enumerate(assignment.colors, start=1):
            if len(s) > b:
                return Feasibility(False, f"node {v} has {len(s)} > {b} colors")
        return Feasibility(True)

    if kind is VariantKind.GLOBAL:
        for v, s in enumerate(assignment.colors, start=1):
            if not s:
                return Feasibility(False, f"node {v} has no color")
        extra = assignment.extra_colors()
        if extra > b:
            return Feasibility(False, f"{extra} > {b} extra colors")
        return Feasibility(True)

    if len(assignment.deleted) > b:
        return Feasibility(False, f"{len(assignment.deleted)} > {b} deleted nodes")
    for v, s in enumerate(assignment.colors, start=1):
        if v not in assignment.deleted and len(s) != 1:
            return Feasibility(False, f"node {v} has {len(s)} colors, expected exactly 1")
    return Feasibility(True)


# ── JSON ─────────────────────────────────────────────────────────


def assignment_to_dict(
    variant: Variant,
    assignment: ColorAssignment,
    report: EvaluationReport,
    **extra,
) -> dict:
    data = {
        "variant": variant.kind.value,
        "budget": variant.budget,
        "colors": {str(v): cols for v, cols in assignment.to_mapping().items()},
        "deleted": sorted(assignment.deleted),
        "mistakes": report.mistakes,
        "satisfied": report.satisfied,
        "budget_used": report.budget_used,
    }
    data.update(extra)
    return data


def assignment_to_json(variant: Variant, assignment: ColorAssignment,
                       report: EvaluationReport, **extra) -> str:
    return json.dumps(assignment_to_dict(variant, assignment, report, **extra), indent=2)


def assignment_from_json(text: str) -> tuple[Variant, ColorAssignment]:
    """Inverse of :func:`assignment_to_json` (extra fields are ignored)."""
    try:
        data = json.loads(text)
        variant = Variant.parse(data["variant"], data["budget"])
        mapping = {int(v): [int(c) for c in cols] for v, cols in data["colors"].items()}
        deleted = [int(v) for v in data.get("deleted", [])]
    except (ValueError, KeyError, TypeError, AttributeError) as e:
        raise AssignmentFormatError(f"invalid assignment JSON: {e}") from e

    n = max(mapping, default=0)
    if sorted(mapping) != list(range(1, n + 1)):
        raise AssignmentFormatError("colors must list every node 1..n exactly once")
    return variant, ColorAssignment.from_mapping(n, mapping, deleted)
