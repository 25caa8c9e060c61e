import numpy as np
import pytest

from coloring import (
    AssignmentFormatError,
    ColorAssignment,
    Variant,
    VariantError,
    VariantKind,
    assignment_from_json,
    assignment_to_json,
    check_feasible,
    evaluate,
    linear_penalty,
)
from hypergraph import build_hypergraph


def assign(n, mapping, deleted=()):
    return ColorAssignment.from_mapping(n, mapping, deleted)


def test_evaluate_single_color(hg_a):
    report = evaluate(hg_a, assign(3, {1: {1}, 2: {1}, 3: {1}}))
    assert report.mistakes == 1
    assert report.satisfied == 2
    assert report.linear_penalty == 2
    assert report.per_edge_satisfied.tolist() == [True, False, True]
    assert report.unused_nodes == 0


def test_evaluate_overlap_satisfies_all(hg_a):
    report = evaluate(hg_a, assign(3, {1: {1}, 2: {1, 2}, 3: {1, 2}}))
    assert report.mistakes == 0
    assert report.satisfied == 3


def test_evaluate_monochromatic(monochromatic):
    report = evaluate(monochromatic, assign(4, {v: {1} for v in range(1, 5)}))
    assert report.mistakes == 0


def test_deleted_nodes_hold_every_color(hg_b):
    lam = assign(4, {1: {1}, 4: {2}}, deleted={2, 3})
    report = evaluate(hg_b, lam, Variant.robust(2))
    assert report.mistakes == 0
    assert report.budget_used == 2


def test_isolated_node_is_unused():
    hg = build_hypergraph([(1, [1, 2])], n=3, k=1)
    report = evaluate(hg, assign(3, {1: {1}, 2: {1}, 3: {1}}))
    assert report.unused_nodes == 1


def test_wrong_dimension_rejected(hg_a):
    with pytest.raises(VariantError):
        evaluate(hg_a, ColorAssignment.empty(2))


@pytest.mark.parametrize(
    "variant, mapping, deleted, ok, message",
    [
        (Variant.local(1), {1: {1}, 2: {1, 2}, 3: {1}}, (), False, "node 2 has 2 > 1 colors"),
        (Variant.global_(1), {1: {1}, 2: {1, 2}, 3: {1}}, (), True, None),
        (Variant.global_(0), {1: {1}, 2: {1, 2}, 3: {1}}, (), False, "1 > 0 extra colors"),
        (Variant.global_(1), {1: {1}, 2: {1}}, (), False, "node 3 has no color"),
        (Variant.robust(0), {1: {1}, 3: {1}}, {2}, False, "1 > 0 deleted nodes"),
        (Variant.robust(1), {1: {1}, 3: {1}}, {2}, True, None),
        (Variant.robust(1), {1: {1}, 2: {1}, 3: {1, 2}}, (), False, "node 3 has 2 colors"),
        (Variant.local(2), {1: {1}}, {3}, False, "cannot delete"),
    ],
)
def test_check_feasible(variant, mapping, deleted, ok, message):
    result = check_feasible(variant, assign(3, mapping, deleted))
    assert bool(result) is ok
    if message:
        assert message in result.violation


def test_variant_validation():
    with pytest.raises(VariantError):
        Variant.local(0)
    with pytest.raises(VariantError):
        Variant.global_(-1)
    with pytest.raises(VariantError):
        Variant.robust(1.5)
    with pytest.raises(VariantError, match="unknown variant"):
        Variant.parse("mixed", 1)
    assert Variant.parse("global", 3) == Variant(VariantKind.GLOBAL, 3)
    assert str(Variant.robust(2)) == "robust(b=2)"


def test_penalty_sandwich(random_suite):
    """1(e mistaken) <= p(e) <= |e| * 1(e mistaken) for every edge."""
    rng = np.random.default_rng(3)
    for hg in random_suite[:300]:
        mapping = {
            v: set(rng.choice(np.arange(1, hg.num_colors + 1),
                              size=int(rng.integers(0, hg.num_colors + 1)),
                              replace=False).tolist())
            for v in hg.nodes
        }
        lam = assign(hg.num_nodes, mapping)
        report = evaluate(hg, lam)
        for idx, edge in enumerate(hg.edges):
            p = sum(1 for v in edge.members if not lam.has(v, edge.color))
            mistaken = not report.per_edge_satisfied[idx]
            assert int(mistaken) <= p <= len(edge) * int(mistaken)
        assert report.linear_penalty == linear_penalty(hg, lam)
        assert report.mistakes <= report.linear_penalty <= max(hg.rank, 1) * report.mistakes


def test_adding_colors_never_adds_mistakes(random_suite):
    for hg in random_suite[:200]:
        base = assign(hg.num_nodes, {v: {hg.favorite(v)} for v in hg.nodes})
        more = assign(hg.num_nodes, {v: set(hg.colors) for v in hg.nodes if v % 2})
        richer = assign(hg.num_nodes, {
            v: base.of(v) | more.of(v) for v in hg.nodes
        })
        assert evaluate(hg, richer).mistakes <= evaluate(hg, base).mistakes
        deleted = ColorAssignment(base.colors, frozenset({1}))
        assert evaluate(hg, deleted).mistakes <= evaluate(hg, base).mistakes


def test_json_round_trip(hg_b):
    variant = Variant.robust(2)
    lam = assign(4, {1: {1}, 4: {2}}, deleted={2, 3})
    report = evaluate(hg_b, lam, variant)
    text = assignment_to_json(variant, lam, report, algorithm="lp-round")
    parsed_variant, parsed = assignment_from_json(text)
    assert parsed_variant == variant
    assert parsed == lam


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        '{"variant": "local", "budget": 1}',
        '{"variant": "weird", "budget": 1, "colors": {"1": [1]}}',
        '{"variant": "local", "budget": 1, "colors": {"1": [1], "3": [1]}}',
    ],
)
def test_bad_assignment_json(text):
    with pytest.raises((AssignmentFormatError, VariantError)):
        assignment_from_json(text)
