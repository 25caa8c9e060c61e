"""Exact answers: brute-force oracle, linear-objective oracle, XP edge-subset
enumeration, conflict branching and easy-node kernelization."""

import logging
import math
from dataclasses import dataclass, field
from itertools import combinations

from coloring import (
    ColorAssignment,
    Variant,
    VariantError,
    VariantKind,
    check_feasible,
    evaluate,
)
from config import BRANCHING_MAX_DEPTH, BRUTE_FORCE_LIMIT, ENUMERATION_LIMIT
from hypergraph import Edge, EdgeColoredHypergraph

logger = logging.getLogger(__name__)


class GuardError(Exception):
    """Instance is too large for the requested exact method."""


@dataclass(frozen=True)
class DecisionInstance:
    """Is there X within E, |X| <= t, such that E minus X is colorable within budget?"""

    hg: EdgeColoredHypergraph
    variant: Variant
    t: int

    def __post_init__(self):
        if isinstance(self.t, bool) or int(self.t) != self.t or self.t < 0:
            raise VariantError(f"mistake bound t must be an integer >= 0, got {self.t!r}")
        object.__setattr__(self, "t", int(self.t))

    @property
    def budget(self) -> int:
        return self.variant.budget

    @property
    def kind(self) -> VariantKind:
        return self.variant.kind


@dataclass(frozen=True)
class Conflict:
    node: int
    edges: tuple[int, ...]


@dataclass(frozen=True)
class DecisionResult:
    answer: bool
    removed_edges: frozenset[int] = frozenset()
    assignment: ColorAssignment | None = None
    explored: int = 0
    max_depth: int = 0
    method: str = "branching"

    def verify(self, inst: DecisionInstance) -> bool:
        """Certificate check: |X| <= t, no mistakes outside X, variant-feasible."""
        if not self.answer or self.assignment is None:
            return False
        if len(self.removed_edges) > inst.t:
            return False
        if not check_feasible(inst.variant, self.assignment):
            return False
        report = evaluate(inst.hg, self.assignment, inst.variant)
        return all(
            ok or idx in self.removed_edges
            for idx, ok in enumerate(report.per_edge_satisfied.tolist())
        )

    def to_dict(self, inst: DecisionInstance) -> dict:
        data = {
            "answer": "yes" if self.answer else "no",
            "variant": inst.kind.value,
            "budget": inst.budget,
            "mistakes": inst.t,
            "method": self.method,
            "explored": self.explored,
        }
        if self.answer and self.assignment is not None:
            # edges are reported 1-based, in file order
            data["removed_edges"] = sorted(idx + 1 for idx in self.removed_edges)
            data["colors"] = {str(v): cols for v, cols in self.assignment.to_mapping().items()}
            data["deleted"] = sorted(self.assignment.deleted)
        return data


def useful_budget(hg: EdgeColoredHypergraph, variant: Variant) -> int:
    """Budget beyond which spending more cannot help."""
    if variant.kind is VariantKind.LOCAL:
        return min(variant.budget, max((hg.chromatic_degree(v) for v in hg.nodes), default=0))
    if variant.kind is VariantKind.GLOBAL:
        return min(variant.budget, sum(max(hg.chromatic_degree(v) - 1, 0) for v in hg.nodes))
    return min(variant.budget, sum(1 for v in hg.nodes if hg.chromatic_degree(v) >= 2))


# ── Brute-force oracle ───────────────────────────────────────────


# option = (color set or None for a deleted node, budget cost)
_Option = tuple[frozenset[int] | None, int]


def _node_options(hg: EdgeColoredHypergraph, variant: Variant) -> list[list[_Option]]:
    """Per-node choices, restricted to incident colors.

    Local nodes take exactly min(b, d_v^chi) colors since extra colors never
    add mistakes.
    """
    b = useful_budget(hg, variant)
    options = []
    for v in hg.nodes:
        incident = hg.incident_colors(v)
        if variant.kind is VariantKind.LOCAL:
            size = min(variant.budget, len(incident))
            opts = [(frozenset(s), 0) for s in combinations(incident, size)]
        elif not incident:
            opts = [(frozenset({hg.favorite(v)}), 0)]
        elif variant.kind is VariantKind.GLOBAL:
            opts = [
                (frozenset(s), size - 1)
                for size in range(1, min(len(incident), b + 1) + 1)
                for s in combinations(incident, size)
            ]
        else:
            opts = [(frozenset({c}), 0) for c in incident]
            if b > 0 and len(incident) > 1:
                opts.append((None, 1))
        options.append(opts)
    return options


def count_assignments(options: list[list[_Option]], budget: int, cap: int) -> int:
    """Number of option picks with total cost <= budget, saturating at cap + 1."""
    ways = [1] + [0] * budget
    for opts in options:
        new = [0] * (budget + 1)
        for spent, count in enumerate(ways):
            if not count:
                continue
            for _, cost in opts:
                if spent + cost <= budget:
                    new[spent + cost] = min(new[spent + cost] + count, cap + 1)
        ways = new
    return min(sum(ways), cap + 1)


class _MissCounter:
    """Incremental count of edges with at least one node lacking the edge color."""

    def __init__(self, hg: EdgeColoredHypergraph):
        self._hg = hg
        self._misses = [0] * hg.num_edges
        self.broken = 0

    def add(self, v: int, colors: frozenset[int] | None):
        if colors is None:
            return
        for idx in self._hg.incident_edges(v):
            if self._hg.edges[idx].color not in colors:
                self._misses[idx] += 1
                if self._misses[idx] == 1:
                    self.broken += 1

    def remove(self, v: int, colors: frozenset[int] | None):
        if colors is None:
            return
        for idx in self._hg.incident_edges(v):
            if self._hg.edges[idx].color not in colors:
                self._misses[idx] -= 1
                if self._misses[idx] == 0:
                    self.broken -= 1


def brute_force_optimum(
    hg: EdgeColoredHypergraph,
    variant: Variant,
    limit: int | None = None,
) -> tuple[int, ColorAssignment]:
    """Exact minimum number of mistakes and a witness.

    Depth-first branch and bound over per-node options. Refuses with
    GuardError when the number of feasible maps exceeds ``limit``.
    """
    limit = BRUTE_FORCE_LIMIT if limit is None else limit
    budget = useful_budget(hg, variant) if variant.kind is not VariantKind.LOCAL else 0
    options = _node_options(hg, variant)
    total = count_assignments(options, budget, limit)
    if total > limit:
        raise GuardError(f"brute force over more than {limit} assignments refused")

    state = _MissCounter(hg)
    fixed: dict[int, frozenset[int] | None] = {}
    levels: list[tuple[int, list[_Option]]] = []
    for v, opts in zip(hg.nodes, options):
        if len(opts) == 1 and opts[0][1] == 0:
            fixed[v] = opts[0][0]
            state.add(v, opts[0][0])
        else:
            levels.append((v, opts))

    best = hg.num_edges + 1
    best_cursor: list[int] = []
    cursor = [-1] * len(levels)
    level, spent, visited = 0, 0, 0
    while level >= 0 and best > 0:
        if level == len(levels):
            if state.broken < best:
                best = state.broken
                best_cursor = list(cursor)
            level -= 1
            continue
        v, opts = levels[level]
        if cursor[level] >= 0:
            colors, cost = opts[cursor[level]]
            state.remove(v, colors)
            spent -= cost
        cursor[level] += 1
        while cursor[level] < len(opts) and opts[cursor[level]][1] > budget - spent:
            cursor[level] += 1
        if cursor[level] == len(opts):
            cursor[level] = -1
            level -= 1
            continue
        colors, cost = opts[cursor[level]]
        state.add(v, colors)
        spent += cost
        visited += 1
        if state.broken < best:
            level += 1

    chosen = dict(fixed)
    for (v, opts), pick in zip(levels, best_cursor):
        chosen[v] = opts[pick][0]
    deleted = frozenset(v for v, colors in chosen.items() if colors is None)
    mapping = {v: colors for v, colors in chosen.items() if colors is not None}
    witness = ColorAssignment.from_mapping(hg.num_nodes, mapping, deleted)
    logger.debug("Brute force %s: optimum %d over %d assignments (%d visited)",
                 variant, best, total, visited)
    return best, witness


def linear_optimum(hg: EdgeColoredHypergraph, variant: Variant) -> int:
    """Minimum linear node-edge penalty over the feasible set.

    Each node's penalty depends only on its own colors, so per-node best
    costs are enumerated and combined by a knapsack over the shared budget.
    """
    work = sum(2 ** hg.chromatic_degree(v) for v in hg.nodes)
    if work > ENUMERATION_LIMIT:
        raise GuardError(f"linear optimum over {work} color subsets refused")

    # best[v][s]: smallest penalty at node v with s of its incident colors
    best = []
    for v in hg.nodes:
        incident = hg.incident_colors(v)
        d = hg.degree(v)
        row = [d]
        for size in range(1, len(incident) + 1):
            row.append(min(d - sum(hg.color_count(v, c) for c in s)
                           for s in combinations(incident, size)))
        best.append(row)

    b = variant.budget
    if variant.kind is VariantKind.LOCAL:
        return sum(min(row[: b + 1]) for row in best)

    if variant.kind is VariantKind.ROBUST:
        keep = [row[1] if len(row) > 1 else 0 for row in best]
        keep.sort(reverse=True)
        return sum(keep[b:])

    cap = useful_budget(hg, variant)
    inf = math.inf
    dp = [0] + [inf] * cap
    for row in best:
        # at least one color per node; isolated nodes cost nothing
        costs = row[1:] or [0]
        new = [inf] * (cap + 1)
        for spent, value in enumerate(dp):
            if value == inf:
                continue
            for extra, cost in enumerate(costs):
                if spent + extra > cap:
                    break
                new[spent + extra] = min(new[spent + extra], value + cost)
        dp = new
    return int(min(dp))


# ── XP enumeration ───────────────────────────────────────────────


def colorable(
    hg: EdgeColoredHypergraph,
    kept_edges,
    variant: Variant,
) -> ColorAssignment | None:
    """Assignment satisfying every kept edge within budget, or None."""
    need: list[set[int]] = [set() for _ in hg.nodes]
    for idx in kept_edges:
        edge = hg.edges[idx]
        for v in edge.members:
            need[v - 1].add(edge.color)

    b = variant.budget
    deleted: set[int] = set()
    if variant.kind is VariantKind.LOCAL:
        if any(len(s) > b for s in need):
            return None
    elif variant.kind is VariantKind.GLOBAL:
        if sum(max(len(s) - 1, 0) for s in need) > b:
            return None
    else:
        deleted = {v for v in hg.nodes if len(need[v - 1]) > 1}
        if len(deleted) > b:
            return None

    mapping = {}
    for v in hg.nodes:
        if v in deleted:
            continue
        mapping[v] = need[v - 1] or {hg.favorite(v)}
    return ColorAssignment.from_mapping(hg.num_nodes, mapping, deleted)


def decide_enumeration(inst: DecisionInstance, limit: int | None = None) -> DecisionResult:
    """Try every X with |X| <= t in increasing size."""
    limit = ENUMERATION_LIMIT if limit is None else limit
    m = inst.hg.num_edges
    t = min(inst.t, m)
    total = sum(math.comb(m, s) for s in range(t + 1))
    if total > limit:
        raise GuardError(f"enumeration of {total} edge subsets exceeds limit {limit}")

    explored = 0
    for size in range(t + 1):
        for removed in combinations(range(m), size):
            explored += 1
            gone = set(removed)
            kept = [idx for idx in range(m) if idx not in gone]
            assignment = colorable(inst.hg, kept, inst.variant)
            if assignment is not None:
                return DecisionResult(True, frozenset(removed), assignment,
                                      explored=explored, method="enumeration")
    return DecisionResult(False, explored=explored, method="enumeration")


def optimize_via_enumeration(
    hg: EdgeColoredHypergraph,
    variant: Variant,
    limit: int | None = None,
) -> tuple[int, DecisionResult]:
    for t in range(hg.num_edges + 1):
        result = decide_enumeration(DecisionInstance(hg, variant, t), limit)
        if result.answer:
            return t, result
    raise AssertionError("removing every edge always leaves a colorable instance")


# ── Conflict branching ───────────────────────────────────────────


def find_conflict(
    hg: EdgeColoredHypergraph,
    variant: Variant,
    removed: frozenset[int] = frozenset(),
    paid: tuple[frozenset[int], ...] | None = None,
    deleted: frozenset[int] = frozenset(),
) -> Conflict | None:
    """First conflict by lowest node id, witness edges lexicographically smallest.

    Local: b + 1 kept incident edges with pairwise distinct colors. Global and
    robust: two kept incident edges of distinct colors, neither color already
    paid for at the node.
    """
    for v in hg.nodes:
        if v in deleted:
            continue
        taken = paid[v - 1] if paid is not None else frozenset()
        witness: list[int] = []
        seen: set[int] = set()
        for idx in hg.incident_edges(v):
            if idx in removed:
                continue
            c = hg.edges[idx].color
            if c in seen or c in taken:
                continue
            seen.add(c)
            witness.append(idx)
            if variant.kind is VariantKind.LOCAL:
                if len(witness) == variant.budget + 1:
                    return Conflict(v, tuple(witness))
            elif len(witness) == 2:
                return Conflict(v, tuple(witness))
    return None


@dataclass(frozen=True)
class _SearchState:
    removed: frozenset[int]
    paid: tuple[frozenset[int], ...]
    deleted: frozenset[int]
    t: int
    b: int
    depth: int


def _leaf_assignment(hg: EdgeColoredHypergraph, state: _SearchState) -> ColorAssignment:
    mapping = {}
    for v in hg.nodes:
        if v in state.deleted:
            continue
        need = {hg.edges[idx].color for idx in hg.incident_edges(v) if idx not in state.removed}
        mapping[v] = need or {hg.favorite(v)}
    return ColorAssignment.from_mapping(hg.num_nodes, mapping, state.deleted)


def _children(hg: EdgeColoredHypergraph, kind: VariantKind, state: _SearchState,
              conflict: Conflict) -> list[_SearchState]:
    """Branches in preference order."""
    out = []
    v = conflict.node
    if kind is VariantKind.GLOBAL and state.b > 0:
        for idx in conflict.edges:
            paid = list(state.paid)
            paid[v - 1] = paid[v - 1] | {hg.edges[idx].color}
            out.append(_SearchState(state.removed, tuple(paid), state.deleted,
                                    state.t, state.b - 1, state.depth + 1))
    if kind is VariantKind.ROBUST and state.b > 0:
        out.append(_SearchState(state.removed, state.paid, state.deleted | {v},
                                state.t, state.b - 1, state.depth + 1))
    if state.t > 0:
        for idx in conflict.edges:
            out.append(_SearchState(state.removed | {idx}, state.paid, state.deleted,
                                    state.t - 1, state.b, state.depth + 1))
    return out


def decide_branching(inst: DecisionInstance) -> DecisionResult:
    """Bounded search tree over conflicts, depth-first with an explicit stack.

    Every branch lowers t or b, so depth is at most t (local) or t + b.
    Global: each color paid for during the search costs one unit; at a
    conflict-free leaf every node has at most one unpaid color left, which
    becomes its free color.
    """
    hg, kind = inst.hg, inst.kind
    b = 0 if kind is VariantKind.LOCAL else useful_budget(hg, inst.variant)
    bound = inst.t + b
    root = _SearchState(frozenset(), tuple(frozenset() for _ in hg.nodes), frozenset(),
                        inst.t, b, 0)
    stack = [root]
    explored = 0
    max_depth = 0

    while stack:
        state = stack.pop()
        explored += 1
        max_depth = max(max_depth, state.depth)
        assert state.depth <= bound, "search depth exceeded t + b"

        conflict = find_conflict(hg, inst.variant, state.removed, state.paid, state.deleted)
        if conflict is None:
            assignment = _leaf_assignment(hg, state)
            logger.debug("Branching %s t=%d: yes after %d nodes", inst.variant, inst.t, explored)
            return DecisionResult(True, state.removed, assignment, explored, max_depth)
        stack.extend(reversed(_children(hg, kind, state, conflict)))

    logger.debug("Branching %s t=%d: no after %d nodes", inst.variant, inst.t, explored)
    return DecisionResult(False, explored=explored, max_depth=max_depth)


# ── Kernelization ────────────────────────────────────────────────


@dataclass(frozen=True)
class Kernel:
    """Reduced instance plus the maps needed to lift its certificates.

    ``verdict`` is set when the reduction alone decides the instance.
    """

    instance: DecisionInstance
    original: DecisionInstance
    node_map: dict[int, int]
    edge_map: tuple[int, ...]
    removed_nodes: tuple[int, ...]
    verdict: bool | None = None
    size_bound: int = field(default=0)


def is_easy(hg: EdgeColoredHypergraph, variant: Variant, v: int) -> bool:
    limit = variant.budget if variant.kind is VariantKind.LOCAL else 1
    return hg.chromatic_degree(v) <= limit


def kernelize(inst: DecisionInstance) -> Kernel:
    """Remove easy nodes and apply the kernel size bound.

    Removing a node never changes the chromatic degree of another node, so
    one pass finds every easy node. Edges lose their easy members and those
    left with no members are dropped.
    """
    hg = inst.hg
    removed = tuple(v for v in hg.nodes if is_easy(hg, inst.variant, v))
    gone = set(removed)
    keep = [v for v in hg.nodes if v not in gone]
    relabel = {old: new for new, old in enumerate(keep, start=1)}

    edges, edge_map = [], []
    for idx, edge in enumerate(hg.edges):
        members = tuple(relabel[v] for v in edge.members if v not in gone)
        if members:
            edges.append(Edge(edge.color, members))
            edge_map.append(idx)
    reduced = EdgeColoredHypergraph(len(keep), hg.num_colors, edges)

    verdict = None
    t, variant = inst.t, inst.variant
    if inst.kind is VariantKind.LOCAL:
        size_bound = reduced.rank * inst.t
    else:
        size_bound = reduced.rank * inst.t + inst.budget
    if not keep:
        verdict = True
        t = 0
        if inst.kind is not VariantKind.LOCAL:
            variant = variant.with_budget(0)
    elif len(keep) > size_bound:
        verdict = False

    logger.info("Kernel for %s t=%d: %d of %d nodes kept (bound %d)%s",
                inst.variant, inst.t, len(keep), hg.num_nodes, size_bound,
                "" if verdict is None else f", answer {'yes' if verdict else 'no'}")
    return Kernel(
        instance=DecisionInstance(reduced, variant, t),
        original=inst,
        node_map={new: old for old, new in relabel.items()},
        edge_map=tuple(edge_map),
        removed_nodes=removed,
        verdict=verdict,
        size_bound=size_bound,
    )


def lift_certificate(kernel: Kernel, result: DecisionResult) -> DecisionResult:
    """Map a kernel answer back; removed easy nodes take their incident colors."""
    if not result.answer:
        return DecisionResult(False, explored=result.explored, max_depth=result.max_depth,
                              method=result.method)

    hg = kernel.original.hg
    mapping: dict[int, set[int]] = {}
    deleted: set[int] = set()
    if result.assignment is not None:
        for new, cols in enumerate(result.assignment.colors, start=1):
            old = kernel.node_map[new]
            if new in result.assignment.deleted:
                deleted.add(old)
            else:
                mapping[old] = set(cols)
    for v in kernel.removed_nodes:
        mapping[v] = set(hg.incident_colors(v)) or {hg.favorite(v)}

    removed_edges = frozenset(kernel.edge_map[idx] for idx in result.removed_edges)
    assignment = ColorAssignment.from_mapping(hg.num_nodes, mapping, deleted)
    return DecisionResult(True, removed_edges, assignment, result.explored,
                          result.max_depth, result.method)


def decide(inst: DecisionInstance, method: str = "branching",
           use_kernel: bool = False) -> DecisionResult:
    """Decision front end used by the CLI and the optimizers."""
    if method not in ("branching", "enumeration"):
        raise ValueError(f"unknown decision method {method!r}")
    solve = decide_branching if method == "branching" else decide_enumeration
    if not use_kernel:
        return solve(inst)

    kernel = kernelize(inst)
    if kernel.verdict is False:
        return DecisionResult(False, method="kernel")
    if kernel.verdict is True:
        return lift_certificate(kernel, DecisionResult(
            True, assignment=ColorAssignment.empty(0), method="kernel"))
    return lift_certificate(kernel, solve(kernel.instance))


def optimize_via_decision(
    hg: EdgeColoredHypergraph,
    variant: Variant,
    use_kernel: bool = False,
    max_depth: int | None = None,
) -> tuple[int, DecisionResult]:
    """Smallest t with a yes answer, trying t = 0, 1, 2, ..."""
    max_depth = BRANCHING_MAX_DEPTH if max_depth is None else max_depth
    b = 0 if variant.kind is VariantKind.LOCAL else useful_budget(hg, variant)
    for t in range(hg.num_edges + 1):
        if t + b > max_depth:
            raise GuardError(
                f"search depth t + b = {t + b} exceeds the limit {max_depth}"
            )
        result = decide(DecisionInstance(hg, variant, t), use_kernel=use_kernel)
        if result.answer:
            logger.info("Exact %s: optimum %d mistakes", variant, t)
            return t, result
    raise AssertionError("removing every edge always leaves a colorable instance")
