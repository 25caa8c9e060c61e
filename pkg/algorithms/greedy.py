"""Greedy r-approximations: exact minimizers of the linear node-edge-error objective."""

import heapq
import logging
from dataclasses import dataclass

import pandas as pd

from coloring import ColorAssignment, Variant, VariantKind, linear_penalty
from hypergraph import EdgeColoredHypergraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GreedyStep:
    step: int
    node: int
    action: str  # "add" or "delete"
    color: int | None
    errors_fixed: int


@dataclass(frozen=True)
class GreedyResult:
    assignment: ColorAssignment
    trace: tuple[GreedyStep, ...]
    # linear penalty of the starting labeling the trace is applied to
    initial_penalty: int
    budget_surplus: int

    def trace_frame(self) -> pd.DataFrame:
        """Trace as a table with columns step, node, action, gain."""
        return pd.DataFrame(
            [
                {
                    "step": s.step,
                    "node": s.node,
                    "action": "delete" if s.action == "delete" else f"add-color {s.color}",
                    "gain": s.errors_fixed,
                }
                for s in self.trace
            ],
            columns=["step", "node", "action", "gain"],
        )


def _favorite_assignment(hg: EdgeColoredHypergraph) -> list[set[int]]:
    return [{hg.favorite(v)} for v in hg.nodes]


def greedy_local(hg: EdgeColoredHypergraph, b: int) -> GreedyResult:
    """Give each node its top-min(b, d_v^chi) favorite colors."""
    if b < 1:
        raise ValueError(f"local budget must be >= 1, got {b}")

    colors = []
    trace = []
    for v in hg.nodes:
        chosen = hg.favorites(v)[:b]
        colors.append(frozenset(chosen))
        for c in chosen:
            trace.append(GreedyStep(len(trace) + 1, v, "add", c, hg.color_count(v, c)))

    initial = sum(len(e) for e in hg.edges)
    assignment = ColorAssignment(colors=tuple(colors))
    logger.info("Greedy local b=%d: %d color assignments", b, len(trace))
    return GreedyResult(assignment, tuple(trace), initial, budget_surplus=0)


def greedy_global(hg: EdgeColoredHypergraph, b: int) -> GreedyResult:
    """Start from favorites; spend b extra colors on the largest marginal gains.

    Ties go to the smallest node id. Stops early once no addition fixes an
    error; the unused budget is reported as surplus.
    """
    if b < 0:
        raise ValueError(f"global budget must be >= 0, got {b}")

    colors = _favorite_assignment(hg)
    initial = linear_penalty(hg, ColorAssignment(tuple(frozenset(s) for s in colors)))

    # one heap entry per node: (-gain of its next favorite, node)
    heap = []
    for v in hg.nodes:
        fav = hg.favorites(v)
        if len(fav) > 1:
            heap.append((-hg.color_count(v, fav[1]), v))
    heapq.heapify(heap)

    trace = []
    while len(trace) < b and heap:
        neg_gain, u = heapq.heappop(heap)
        fav = hg.favorites(u)
        c = fav[len(colors[u - 1])]
        colors[u - 1].add(c)
        trace.append(GreedyStep(len(trace) + 1, u, "add", c, -neg_gain))
        nxt = len(colors[u - 1])
        if nxt < len(fav):
            heapq.heappush(heap, (-hg.color_count(u, fav[nxt]), u))

    surplus = b - len(trace)
    if surplus:
        logger.info("Greedy global: no positive gain left, %d of %d budget unused", surplus, b)
    assignment = ColorAssignment(colors=tuple(frozenset(s) for s in colors))
    return GreedyResult(assignment, tuple(trace), initial, budget_surplus=surplus)


def greedy_robust(hg: EdgeColoredHypergraph, b: int) -> GreedyResult:
    """Favorites for everyone, then delete up to b nodes of largest non-dominant degree.

    Gains do not depend on earlier deletions, so they are computed once.
    """
    if b < 0:
        raise ValueError(f"robust budget must be >= 0, got {b}")

    colors = tuple(frozenset(s) for s in _favorite_assignment(hg))
    initial = linear_penalty(hg, ColorAssignment(colors))

    ranked = sorted(
        ((hg.non_dominant_degree(v), v) for v in hg.nodes),
        key=lambda item: (-item[0], item[1]),
    )
    trace = []
    for gain, v in ranked[:b]:
        if gain <= 0:
            break
        trace.append(GreedyStep(len(trace) + 1, v, "delete", None, gain))

    surplus = b - len(trace)
    if surplus:
        logger.info("Greedy robust: no positive gain left, %d of %d budget unused", surplus, b)
    deleted = frozenset(s.node for s in trace)
    return GreedyResult(ColorAssignment(colors, deleted), tuple(trace), initial, surplus)


def run_greedy(hg: EdgeColoredHypergraph, variant: Variant) -> GreedyResult:
    if variant.kind is VariantKind.LOCAL:
        return greedy_local(hg, variant.budget)
    if variant.kind is VariantKind.GLOBAL:
        return greedy_global(hg, variant.budget)
    return greedy_robust(hg, variant.budget)
