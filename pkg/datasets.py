"""Synthetic planted-overlap hypergraphs for demos and harness smoke runs."""

import logging

import numpy as np

from hypergraph import EdgeColoredHypergraph, build_hypergraph

logger = logging.getLogger(__name__)


def generate_planted(
    n: int,
    k: int,
    m: int,
    overlap: float = 0.2,
    noise: float = 0.05,
    max_edge_size: int = 4,
    seed: int = 0,
) -> EdgeColoredHypergraph:
    """Random hypergraph with a planted cluster per node.

    Every node gets a primary cluster; a fraction ``overlap`` of nodes also
    joins a second one. Edges are drawn inside a cluster and carry its color,
    except that with probability ``noise`` the color is replaced by a random
    other color.
    """
    if n < 1 or k < 1 or m < 0:
        raise ValueError(f"need n >= 1, k >= 1, m >= 0; got n={n}, k={k}, m={m}")
    if not 0 <= overlap <= 1 or not 0 <= noise <= 1:
        raise ValueError("overlap and noise must lie in [0, 1]")
    if max_edge_size < 1:
        raise ValueError("max_edge_size must be >= 1")

    rng = np.random.default_rng(seed)
    primary = rng.integers(1, k + 1, size=n)
    members: list[list[int]] = [[] for _ in range(k + 1)]
    for v in range(1, n + 1):
        members[primary[v - 1]].append(v)

    if k > 1:
        overlapping = np.flatnonzero(rng.random(n) < overlap) + 1
        for v in overlapping.tolist():
            # uniform over colors other than the primary one
            second = int(rng.integers(1, k))
            if second >= primary[v - 1]:
                second += 1
            members[second].append(v)
        logger.debug("Planted %d overlapping nodes", len(overlapping))

    populated = [c for c in range(1, k + 1) if members[c]]
    raw_edges = []
    for _ in range(m):
        c = populated[int(rng.integers(len(populated)))]
        pool = np.array(members[c])
        size = int(rng.integers(1, min(max_edge_size, len(pool)) + 1))
        chosen = sorted(rng.choice(pool, size=size, replace=False).tolist())
        color = c
        if k > 1 and rng.random() < noise:
            color = int(rng.integers(1, k))
            if color >= c:
                color += 1
        raw_edges.append((color, chosen))

    hg = build_hypergraph(raw_edges, n, k)
    logger.info("Generated planted hypergraph %r (seed %d)", hg, seed)
    return hg
