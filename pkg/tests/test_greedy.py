import pytest

from algorithms.greedy import greedy_global, greedy_local, greedy_robust, run_greedy
from coloring import ColorAssignment, Variant, check_feasible, evaluate, linear_penalty
from hypergraph import build_hypergraph
from conftest import suite_variants


def colors_of(result):
    return {v: set(s) for v, s in enumerate(result.assignment.colors, start=1)}


def test_local_b1_instance_a(hg_a):
    result = greedy_local(hg_a, 1)
    assert colors_of(result) == {1: {1}, 2: {1}, 3: {1}}
    assert evaluate(hg_a, result.assignment).mistakes == 1


def test_local_b2_instance_a(hg_a):
    result = greedy_local(hg_a, 2)
    assert colors_of(result) == {1: {1}, 2: {1, 2}, 3: {1, 2}}
    assert evaluate(hg_a, result.assignment).mistakes == 0


def test_local_large_budget_has_no_mistakes(random_suite):
    for hg in random_suite[:100]:
        b = max([hg.chromatic_degree(v) for v in hg.nodes] + [1])
        assert evaluate(hg, greedy_local(hg, b).assignment).mistakes == 0


def test_local_never_assigns_zero_count_colors():
    hg = build_hypergraph([(2, [1])], n=2, k=3)
    result = greedy_local(hg, 3)
    assert colors_of(result) == {1: {2}, 2: set()}


def test_global_b2_instance_a(hg_a):
    result = greedy_global(hg_a, 2)
    steps = [(s.node, s.color, s.errors_fixed) for s in result.trace]
    assert steps == [(2, 2, 1), (3, 2, 1)]
    assert evaluate(hg_a, result.assignment).mistakes == 0
    assert result.budget_surplus == 0


def test_global_b0_is_favorites(hg_a):
    result = greedy_global(hg_a, 0)
    assert colors_of(result) == {v: {hg_a.favorite(v)} for v in hg_a.nodes}
    assert result.trace == ()


def test_global_monochromatic_reports_surplus(monochromatic):
    result = greedy_global(monochromatic, 5)
    assert result.trace == ()
    assert result.budget_surplus == 5
    assert result.assignment.extra_colors() == 0


def test_robust_b1_instance_a(hg_a):
    result = greedy_robust(hg_a, 1)
    assert result.assignment.deleted == {2}
    assert evaluate(hg_a, result.assignment).mistakes == 1


def test_robust_b0_is_favorites(hg_b):
    result = greedy_robust(hg_b, 0)
    assert result.assignment.deleted == frozenset()
    assert colors_of(result) == {1: {1}, 2: {1}, 3: {1}, 4: {2}}


def test_robust_star_deletes_center():
    star = build_hypergraph([(1, [1, 2]), (2, [1, 3]), (3, [1, 4])], n=4, k=3)
    result = greedy_robust(star, 1)
    assert result.assignment.deleted == {1}
    assert result.trace[0].errors_fixed == 2
    assert evaluate(star, result.assignment).mistakes == 0


def test_trace_frame(hg_a):
    frame = greedy_global(hg_a, 2).trace_frame()
    assert list(frame.columns) == ["step", "node", "action", "gain"]
    assert frame["action"].tolist() == ["add-color 2", "add-color 2"]
    robust = greedy_robust(hg_a, 1).trace_frame()
    assert robust["action"].tolist() == ["delete"]


def test_local_rejects_zero_budget(hg_a):
    with pytest.raises(ValueError):
        greedy_local(hg_a, 0)


def test_outputs_are_feasible_and_traces_add_up(random_suite):
    for hg in random_suite[:300]:
        for variant in suite_variants(hg):
            result = run_greedy(hg, variant)
            assert check_feasible(variant, result.assignment), variant
            final = linear_penalty(hg, result.assignment)
            fixed = sum(step.errors_fixed for step in result.trace)
            assert result.initial_penalty - final == fixed
            if variant.kind.value != "local":
                gains = [step.errors_fixed for step in result.trace]
                assert gains == sorted(gains, reverse=True)


def test_global_dominates_aligned_local_budget(random_suite):
    for hg in random_suite[:300]:
        for b in (1, 2, 3):
            local = greedy_local(hg, b).assignment
            glob = greedy_global(hg, (b - 1) * hg.num_nodes).assignment
            assert linear_penalty(hg, glob) <= linear_penalty(hg, local)


def test_empty_assignment_penalty_is_total_size(hg_a):
    assert linear_penalty(hg_a, ColorAssignment.empty(3)) == 7
    assert greedy_local(hg_a, 1).initial_penalty == 7
