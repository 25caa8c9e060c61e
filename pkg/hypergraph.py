"""Edge-colored hypergraph model, text format, and structural statistics."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

logger = logging.getLogger(__name__)


class HypergraphError(Exception):
    """Malformed hypergraph input. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source and line is not None:
            where = f"{source}:{line}: "
        elif line is not None:
            where = f"line {line}: "
        elif source:
            where = f"{source}: "
        super().__init__(f"{where}{message}")


@dataclass(frozen=True)
class Edge:
    color: int
    members: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)


class EdgeColoredHypergraph:
    """Immutable hypergraph H = (V, E, l) with nodes 1..n and colors 1..k.

    Per-node incidence lists and color counts n_{v,c} are computed once at
    construction. Edge ids are 0-based positions in input order.
    """

    def __init__(self, num_nodes: int, num_colors: int, edges: Sequence[Edge]):
        self._n = num_nodes
        self._k = num_colors
        self._edges = tuple(edges)

        incidence: list[list[int]] = [[] for _ in range(num_nodes + 1)]
        counts: list[dict[int, int]] = [{} for _ in range(num_nodes + 1)]
        for idx, edge in enumerate(self._edges):
            for v in edge.members:
                incidence[v].append(idx)
                counts[v][edge.color] = counts[v].get(edge.color, 0) + 1

        self._incidence = tuple(tuple(ids) for ids in incidence)
        self._counts = tuple(counts)
        # favorites: incident colors by count desc, ties by ascending color id
        self._favorites = tuple(
            tuple(sorted(c, key=lambda col, cnt=c: (-cnt[col], col))) for c in counts
        )
        self._rank = max((len(e) for e in self._edges), default=0)

    # ── Sizes ────────────────────────────────────────────────────

    @property
    def num_nodes(self) -> int:
        return self._n

    @property
    def num_colors(self) -> int:
        return self._k

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    @property
    def rank(self) -> int:
        """Maximum edge size r (0 for an empty edge set)."""
        return self._rank

    @property
    def nodes(self) -> range:
        return range(1, self._n + 1)

    @property
    def colors(self) -> range:
        return range(1, self._k + 1)

    # ── Per-node views ───────────────────────────────────────────

    def incident_edges(self, v: int) -> tuple[int, ...]:
        return self._incidence[v]

    def degree(self, v: int) -> int:
        return len(self._incidence[v])

    def color_count(self, v: int, c: int) -> int:
        return self._counts[v].get(c, 0)

    def color_counts(self, v: int) -> dict[int, int]:
        return dict(self._counts[v])

    def chromatic_degree(self, v: int) -> int:
        return len(self._counts[v])

    def incident_colors(self, v: int) -> tuple[int, ...]:
        """Colors with n_{v,c} > 0 in ascending id order."""
        return tuple(sorted(self._counts[v]))

    def favorites(self, v: int) -> tuple[int, ...]:
        """Incident colors in preference order (positive counts only)."""
        return self._favorites[v]

    def favorite(self, v: int) -> int:
        """pi_v(1); color 1 for isolated nodes."""
        fav = self._favorites[v]
        return fav[0] if fav else 1

    def preference(self, v: int) -> tuple[int, ...]:
        """Full permutation pi_v of [k]: favorites, then zero-count colors ascending."""
        fav = self._favorites[v]
        seen = set(fav)
        return fav + tuple(c for c in self.colors if c not in seen)

    def non_dominant_degree(self, v: int) -> int:
        fav = self._favorites[v]
        if not fav:
            return 0
        return self.degree(v) - self._counts[v][fav[0]]

    def __repr__(self) -> str:
        return (
            f"EdgeColoredHypergraph(n={self._n}, m={self.num_edges}, "
            f"k={self._k}, r={self._rank})"
        )


def build_hypergraph(
    raw_edges: Iterable[tuple[int, Iterable[int]]],
    n: int,
    k: int,
    line_numbers: Sequence[int] | None = None,
    source: str | None = None,
) -> EdgeColoredHypergraph:
    """Validate ``(color, members)`` pairs and build the hypergraph.

    Errors report the input line of the offending edge (``line_numbers`` maps
    edge position to file line; defaults to the 1-based edge position).
    """
    if n < 1:
        raise HypergraphError(f"node count must be >= 1, got {n}", source=source)
    if k < 1:
        raise HypergraphError(f"color count must be >= 1, got {k}", source=source)

    edges = []
    for pos, (color, members) in enumerate(raw_edges):
        line = line_numbers[pos] if line_numbers is not None else pos + 1
        members = tuple(members)
        if not members:
            raise HypergraphError("empty edge", line=line, source=source)
        if not 1 <= color <= k:
            raise HypergraphError(f"color {color} outside 1..{k}", line=line, source=source)
        seen = set()
        for v in members:
            if not 1 <= v <= n:
                raise HypergraphError(f"node {v} outside 1..{n}", line=line, source=source)
            if v in seen:
                raise HypergraphError(f"duplicate node {v} in edge", line=line, source=source)
            seen.add(v)
        edges.append(Edge(color=color, members=members))

    return EdgeColoredHypergraph(n, k, edges)


# ── Text format ──────────────────────────────────────────────────


def _parse_ints(tokens: list[str], line: int, source: str | None) -> list[int]:
    try:
        return [int(tok) for tok in tokens]
    except ValueError as e:
        raise HypergraphError(f"non-integer token: {e}", line=line, source=source) from e


def parse_hypergraph(text: str, source: str | None = None) -> EdgeColoredHypergraph:
    """Parse the ``n m k`` header + ``c v1 v2 ...`` edge lines format.

    Lines starting with ``#`` and blank lines are ignored.
    """
    header = None
    raw_edges: list[tuple[int, list[int]]] = []
    line_numbers: list[int] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        values = _parse_ints(stripped.split(), lineno, source)
        if header is None:
            if len(values) != 3:
                raise HypergraphError(
                    f"header must be 'n m k', got {len(values)} values",
                    line=lineno, source=source,
                )
            header = values
            continue
        if len(values) < 2:
            raise HypergraphError("edge line needs a color and at least one node",
                                  line=lineno, source=source)
        if len(raw_edges) >= header[1]:
            raise HypergraphError(f"more than m={header[1]} edge lines",
                                  line=lineno, source=source)
        raw_edges.append((values[0], values[1:]))
        line_numbers.append(lineno)

    if header is None:
        raise HypergraphError("missing header line", source=source)
    n, m, k = header
    if len(raw_edges) != m:
        raise HypergraphError(f"header declares {m} edges, found {len(raw_edges)}",
                              source=source)

    hg = build_hypergraph(raw_edges, n, k, line_numbers=line_numbers, source=source)
    logger.debug("Parsed %r from %s", hg, source or "<text>")
    return hg


def load_hypergraph(path: str | Path) -> EdgeColoredHypergraph:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise HypergraphError(f"cannot read file: {e}", source=str(path)) from e
    return parse_hypergraph(text, source=str(path))


def format_hypergraph(hg: EdgeColoredHypergraph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {part}" for part in comment.splitlines())
    lines.append(f"{hg.num_nodes} {hg.num_edges} {hg.num_colors}")
    for edge in hg.edges:
        lines.append(" ".join(str(x) for x in (edge.color, *edge.members)))
    return "\n".join(lines) + "\n"


def write_hypergraph(hg: EdgeColoredHypergraph, path: str | Path, comment: str | None = None):
    Path(path).write_text(format_hypergraph(hg, comment), encoding="utf-8")


# ── Statistics ───────────────────────────────────────────────────


@dataclass(frozen=True)
class NodeStructure:
    node: int
    degree: int
    chromatic_degree: int
    non_dominant_degree: int
    non_dominant_pct: float


@dataclass(frozen=True)
class StructureStats:
    nodes: tuple[NodeStructure, ...]
    max_non_dominant: int
    mean_non_dominant: float
    median_non_dominant: float
    frac_multi_color: float
    frac_non_dominant_5: float
    frac_non_dominant_10: float

    def aggregates(self) -> dict:
        return {
            "max_non_dominant": self.max_non_dominant,
            "mean_non_dominant": self.mean_non_dominant,
            "median_non_dominant": self.median_non_dominant,
            "frac_chromatic_gt_1": self.frac_multi_color,
            "frac_non_dominant_pct_ge_5": self.frac_non_dominant_5,
            "frac_non_dominant_pct_ge_10": self.frac_non_dominant_10,
        }


def structure_stats(hg: EdgeColoredHypergraph) -> StructureStats:
    """Per-node degree/chromatic/non-dominant table plus Table-3 style aggregates."""
    rows = []
    for v in hg.nodes:
        d = hg.degree(v)
        nd = hg.non_dominant_degree(v)
        rows.append(NodeStructure(
            node=v,
            degree=d,
            chromatic_degree=hg.chromatic_degree(v),
            non_dominant_degree=nd,
            non_dominant_pct=nd / d if d else 0.0,
        ))

    nd = np.array([r.non_dominant_degree for r in rows], dtype=float)
    pct = np.array([r.non_dominant_pct for r in rows], dtype=float)
    chi = np.array([r.chromatic_degree for r in rows], dtype=int)

    return StructureStats(
        nodes=tuple(rows),
        max_non_dominant=int(nd.max()),
        mean_non_dominant=float(nd.mean()),
        median_non_dominant=float(np.median(nd)),
        frac_multi_color=float(np.mean(chi > 1)),
        # small epsilon so exact 5% / 10% shares are counted
        frac_non_dominant_5=float(np.mean(pct >= 0.05 - 1e-12)),
        frac_non_dominant_10=float(np.mean(pct >= 0.10 - 1e-12)),
    )


def dataset_summary(hg: EdgeColoredHypergraph) -> dict:
    """|V|, |E|, k, r, mean edge size, max and mean chromatic degree."""
    sizes = np.array([len(e) for e in hg.edges], dtype=float)
    chi = np.array([hg.chromatic_degree(v) for v in hg.nodes], dtype=float)
    return {
        "nodes": hg.num_nodes,
        "edges": hg.num_edges,
        "colors": hg.num_colors,
        "rank": hg.rank,
        "mean_edge_size": float(sizes.mean()) if sizes.size else 0.0,
        "max_chromatic_degree": int(chi.max()),
        "mean_chromatic_degree": float(chi.mean()),
    }
