import pytest

from algorithms.exact import (
    DecisionInstance,
    GuardError,
    brute_force_optimum,
    colorable,
    count_assignments,
    decide,
    decide_branching,
    decide_enumeration,
    find_conflict,
    kernelize,
    lift_certificate,
    linear_optimum,
    optimize_via_decision,
    optimize_via_enumeration,
    useful_budget,
)
from coloring import Variant, VariantError, check_feasible, evaluate
from hypergraph import build_hypergraph


@pytest.fixture
def alternating_path():
    """Six nodes on a path of five 2-edges with alternating colors."""
    raw = [(1, [1, 2]), (2, [2, 3]), (1, [3, 4]), (2, [4, 5]), (1, [5, 6])]
    return build_hypergraph(raw, n=6, k=2)


def test_brute_force_known_optima(hg_a, hg_b, monochromatic):
    assert brute_force_optimum(hg_a, Variant.local(1))[0] == 1
    assert brute_force_optimum(hg_a, Variant.local(2))[0] == 0
    assert brute_force_optimum(hg_b, Variant.robust(1))[0] == 1
    assert brute_force_optimum(hg_b, Variant.robust(2))[0] == 0
    assert brute_force_optimum(monochromatic, Variant.global_(0))[0] == 0


def test_brute_force_witness_achieves_optimum(random_suite):
    for hg in random_suite[:150]:
        for variant in (Variant.local(1), Variant.global_(1), Variant.robust(1)):
            best, witness = brute_force_optimum(hg, variant)
            assert check_feasible(variant, witness)
            assert evaluate(hg, witness, variant).mistakes == best


def test_brute_force_guard(hg_a):
    with pytest.raises(GuardError):
        brute_force_optimum(hg_a, Variant.global_(2), limit=1)


def test_count_assignments_saturates():
    options = [[(frozenset({1}), 0), (frozenset({2}), 0)]] * 10
    assert count_assignments(options, 0, 100) == 101
    assert count_assignments(options[:3], 0, 100) == 8


def test_useful_budget(hg_a, monochromatic):
    assert useful_budget(hg_a, Variant.global_(10)) == 2
    assert useful_budget(hg_a, Variant.robust(10)) == 2
    assert useful_budget(hg_a, Variant.local(5)) == 2
    assert useful_budget(monochromatic, Variant.global_(3)) == 0


def test_linear_optimum_instance_a(hg_a):
    assert linear_optimum(hg_a, Variant.local(1)) == 2
    assert linear_optimum(hg_a, Variant.global_(2)) == 0
    assert linear_optimum(hg_a, Variant.robust(1)) == 1


def test_colorable(hg_a):
    everything = range(hg_a.num_edges)
    assert colorable(hg_a, everything, Variant.local(1)) is None
    lam = colorable(hg_a, everything, Variant.local(2))
    assert evaluate(hg_a, lam).mistakes == 0
    assert colorable(hg_a, [0, 2], Variant.local(1)) is not None
    assert colorable(hg_a, everything, Variant.global_(1)) is None
    assert colorable(hg_a, everything, Variant.robust(2)).deleted == {2, 3}


def test_decide_instance_a_local(hg_a):
    hg = hg_a
    yes_inst = DecisionInstance(hg, Variant.local(1), 1)
    yes = decide_branching(yes_inst)
    assert yes.answer
    assert len(yes.removed_edges) == 1
    assert yes.verify(yes_inst)
    assert not decide_branching(DecisionInstance(hg, Variant.local(1), 0)).answer


def test_decide_instance_b_robust(hg_b):
    assert not decide_branching(DecisionInstance(hg_b, Variant.robust(1), 0)).answer
    inst = DecisionInstance(hg_b, Variant.robust(1), 1)
    result = decide_branching(inst)
    assert result.answer and result.verify(inst)
    assert result.max_depth <= 2


def test_decide_global_pays_for_colors(hg_a):
    inst = DecisionInstance(hg_a, Variant.global_(2), 0)
    result = decide_branching(inst)
    assert result.answer
    assert result.verify(inst)
    assert result.assignment.extra_colors() <= 2
    assert not decide_branching(DecisionInstance(hg_a, Variant.global_(1), 0)).answer


def test_enumeration_matches_branching(hg_a, hg_b):
    for hg in (hg_a, hg_b):
        for variant in (Variant.local(1), Variant.global_(1), Variant.robust(1)):
            for t in range(3):
                inst = DecisionInstance(hg, variant, t)
                assert decide_enumeration(inst).answer == decide_branching(inst).answer


def test_enumeration_guard(alternating_path):
    inst = DecisionInstance(alternating_path, Variant.local(1), 3)
    with pytest.raises(GuardError):
        decide_enumeration(inst, limit=5)


def test_negative_mistake_bound(hg_a):
    with pytest.raises(VariantError):
        DecisionInstance(hg_a, Variant.local(1), -1)


def test_find_conflict_order(hg_a):
    conflict = find_conflict(hg_a, Variant.local(1))
    assert conflict.node == 2
    assert conflict.edges == (0, 1)
    assert find_conflict(hg_a, Variant.local(2)) is None


def test_kernel_instance_a_global(hg_a):
    kernel = kernelize(DecisionInstance(hg_a, Variant.global_(1), 1))
    assert kernel.removed_nodes == (1,)
    reduced = kernel.instance.hg
    lifted = [{kernel.node_map[v] for v in edge.members} for edge in reduced.edges]
    assert lifted == [{2}, {2, 3}, {2, 3}]
    assert kernel.edge_map == (0, 1, 2)
    assert kernel.verdict is None


def test_kernel_all_easy_is_yes(monochromatic):
    inst = DecisionInstance(monochromatic, Variant.local(1), 0)
    kernel = kernelize(inst)
    assert kernel.verdict is True
    result = decide(inst, use_kernel=True)
    assert result.answer
    assert result.verify(inst)


def test_kernel_size_bound_answers_no(alternating_path):
    inst = DecisionInstance(alternating_path, Variant.local(1), 1)
    kernel = kernelize(inst)
    assert kernel.removed_nodes == (1, 6)
    assert kernel.size_bound == 2
    assert kernel.verdict is False
    assert not decide(inst, use_kernel=True).answer
    assert not decide_branching(inst).answer


def test_lifted_certificate_is_valid(hg_a):
    inst = DecisionInstance(hg_a, Variant.global_(1), 1)
    kernel = kernelize(inst)
    result = lift_certificate(kernel, decide_branching(kernel.instance))
    assert result.answer
    assert result.verify(inst)


def test_optimize_via_decision(hg_a):
    assert optimize_via_decision(hg_a, Variant.local(1))[0] == 1
    assert optimize_via_decision(hg_a, Variant.local(2))[0] == 0
    assert optimize_via_decision(hg_a, Variant.local(1), use_kernel=True)[0] == 1
    with pytest.raises(GuardError):
        optimize_via_decision(hg_a, Variant.local(1), max_depth=0)


def test_optimize_via_enumeration(hg_b):
    t, result = optimize_via_enumeration(hg_b, Variant.robust(1))
    assert t == 1
    assert result.method == "enumeration"


def test_result_to_dict(hg_b):
    inst = DecisionInstance(hg_b, Variant.robust(2), 0)
    data = decide(inst).to_dict(inst)
    assert data["answer"] == "yes"
    assert data["deleted"] == [2, 3]
    assert data["removed_edges"] == []
    no = DecisionInstance(hg_b, Variant.robust(0), 0)
    assert decide(no).to_dict(no) == {
        "answer": "no",
        "variant": "robust",
        "budget": 0,
        "mistakes": 0,
        "method": "branching",
        "explored": 1,
    }


def test_unknown_method(hg_a):
    with pytest.raises(ValueError):
        decide(DecisionInstance(hg_a, Variant.local(1), 0), method="magic")
