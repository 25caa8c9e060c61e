"""Approximation metrics: observed alpha/beta and satisfaction against the LP bound."""

import logging
import math

from coloring import VariantKind

logger = logging.getLogger(__name__)

# LP values and mistake counts below this are treated as zero
ZERO_TOL = 1e-6


def measure_alpha(mistakes: float, lp_value: float) -> float:
    """Ratio of mistakes to the LP lower bound.

    1 when both are (numerically) zero, inf when only the bound is zero.
    """
    if lp_value <= ZERO_TOL:
        return 1.0 if mistakes <= ZERO_TOL else math.inf
    return mistakes / lp_value


def measure_beta(kind: VariantKind | str, budget_used: int, b: int) -> float:
    """Budget violation factor.

    ``budget_used`` is the variant's own unit: max colors on a node (local),
    extra colors (global) or deleted nodes (robust).
    """
    VariantKind(kind)
    if b == 0:
        return 1.0 if budget_used == 0 else math.inf
    return budget_used / b


def round_up(value: float, decimals: int = 3) -> float:
    """Ceil to ``decimals`` places; inf/nan pass through."""
    if not math.isfinite(value):
        return value
    scale = 10 ** decimals
    # strip float noise such as 1.2000000000000002 before ceiling
    return math.ceil(round(value * scale, 6)) / scale


def satisfied_fraction_of_bound(satisfied: int, num_edges: int, lp_value: float) -> float:
    """satisfied / (|E| - LP); NaN when the bound is not positive."""
    bound = num_edges - lp_value
    if bound <= ZERO_TOL:
        logger.debug("No satisfiable edges above the LP bound (|E|=%d, LP=%.6g)", num_edges, lp_value)
        return math.nan
    return satisfied / bound
