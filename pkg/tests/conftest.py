import os

import numpy as np
import pytest

from algorithms.exact import GuardError, brute_force_optimum, optimize_via_enumeration
from coloring import Variant
from config import DATA_DIR
from hypergraph import EdgeColoredHypergraph, build_hypergraph

SUITE_SIZE = int(os.getenv("ECC_SUITE_SIZE", "1000"))
SUITE_SEED = 20240611


def instance_a() -> EdgeColoredHypergraph:
    return build_hypergraph([(1, [1, 2]), (2, [2, 3]), (1, [1, 2, 3])], n=3, k=2)


def instance_b() -> EdgeColoredHypergraph:
    return build_hypergraph([(1, [1, 2, 3]), (2, [2, 3, 4])], n=4, k=2)


def random_hypergraph(rng: np.random.Generator) -> EdgeColoredHypergraph:
    """n <= 8, m <= 10, k <= 4, r <= 4."""
    n = int(rng.integers(1, 9))
    k = int(rng.integers(1, 5))
    m = int(rng.integers(0, 11))
    raw = []
    for _ in range(m):
        size = int(rng.integers(1, min(4, n) + 1))
        members = sorted(rng.choice(np.arange(1, n + 1), size=size, replace=False).tolist())
        raw.append((int(rng.integers(1, k + 1)), members))
    return build_hypergraph(raw, n, k)


def suite_variants(hg: EdgeColoredHypergraph):
    """Budgets of the acceptance suites: local 1..3, global and robust 0..3."""
    for b in (1, 2, 3):
        yield Variant.local(b)
    for b in (0, 1, 2, 3):
        yield Variant.global_(b)
        yield Variant.robust(b)


class OracleCache:
    """Exact mistake optima, computed once per (instance, variant)."""

    def __init__(self):
        self._cache: dict[tuple[int, Variant], int] = {}

    def optimum(self, key: int, hg: EdgeColoredHypergraph, variant: Variant) -> int:
        if (key, variant) not in self._cache:
            try:
                value, _ = brute_force_optimum(hg, variant)
            except GuardError:
                value, _ = optimize_via_enumeration(hg, variant)
            self._cache[(key, variant)] = value
        return self._cache[(key, variant)]


@pytest.fixture
def hg_a():
    return instance_a()


@pytest.fixture
def hg_b():
    return instance_b()


@pytest.fixture
def monochromatic():
    return build_hypergraph([(1, [1, 2]), (1, [2, 3, 4]), (1, [1, 4])], n=4, k=3)


@pytest.fixture(scope="session")
def random_suite() -> list[EdgeColoredHypergraph]:
    rng = np.random.default_rng(SUITE_SEED)
    return [random_hypergraph(rng) for _ in range(SUITE_SIZE)]


@pytest.fixture(scope="session")
def oracle() -> OracleCache:
    return OracleCache()


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def ecc_file(tmp_path):
    """Write hypergraph text to a temporary file and return its path."""
    def _write(text: str, name: str = "instance.ecc"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return _write
