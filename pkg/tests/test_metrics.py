import logging
import math

import pytest

from coloring import VariantKind
from metrics import measure_alpha, measure_beta, round_up, satisfied_fraction_of_bound


@pytest.mark.parametrize(
    "mistakes, lp_value, expected",
    [
        (0, 0.0, 1.0),
        (0, 1e-9, 1.0),
        (1, 0.0, math.inf),
        (3, 2.5, 1.2),
        (2, 4.0, 0.5),
    ],
)
def test_measure_alpha(mistakes, lp_value, expected):
    assert measure_alpha(mistakes, lp_value) == pytest.approx(expected)


def test_measure_beta():
    assert measure_beta(VariantKind.LOCAL, 3, 2) == 1.5
    assert measure_beta("robust", 0, 0) == 1.0
    assert measure_beta(VariantKind.GLOBAL, 2, 0) == math.inf
    with pytest.raises(ValueError):
        measure_beta("mixed", 1, 1)


@pytest.mark.parametrize(
    "value, expected",
    [
        (1.2, 1.2),
        (1.2000000000000002, 1.2),
        (1.0001, 1.001),
        (2 / 3, 0.667),
        (5.0, 5.0),
    ],
)
def test_round_up(value, expected):
    assert round_up(value) == pytest.approx(expected)


def test_round_up_passes_non_finite():
    assert round_up(math.inf) == math.inf
    assert math.isnan(round_up(math.nan))


def test_satisfied_fraction_of_bound():
    assert satisfied_fraction_of_bound(8, 10, 1.0) == pytest.approx(8 / 9)
    assert math.isnan(satisfied_fraction_of_bound(0, 3, 3.0))
    assert math.isnan(satisfied_fraction_of_bound(0, 0, 0.0))


def test_satisfied_fraction_logs_degenerate_bound(caplog):
    with caplog.at_level(logging.DEBUG, logger="metrics"):
        satisfied_fraction_of_bound(0, 2, 2.0)
    assert "LP bound" in caplog.text
