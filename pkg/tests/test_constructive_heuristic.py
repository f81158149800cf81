import pytest

from app.models.instance_models import GeneratorConfig, PrecedenceSet, ProblemClass, StaticCostTable
from app.models.plan_models import Vertex
from app.models.task_catalog import PROBLEM_CLASS_CODES
from app.services.constructive_heuristic import construct, init_pools
from app.services.feasibility import check_feasibility
from app.services.instance_generator import generate
from app.utils.errors import AssumptionViolationError
from plan_builders import chain


def test_pools_for_benchmark_class():
    pools = init_pools(range(1, 10), PrecedenceSet(pairs=((1, 2), (3, 4), (6, 8))))
    assert pools.executable == (1, 3, 5, 6, 7, 9)
    assert pools.blocked == (2, 4, 8)


def test_pools_without_precedence():
    pools = init_pools([3, 1, 2], PrecedenceSet())
    assert pools.executable == (1, 2, 3)
    assert pools.blocked == ()


def test_pools_for_chain():
    pools = init_pools([1, 2, 3], PrecedenceSet(pairs=((1, 2), (2, 3))))
    assert pools.executable == (1,)
    assert pools.blocked == (2, 3)


def test_tie_goes_to_later_alliance(benchmark_instance):
    instance = benchmark_instance([('A', (50.0, 0.0))])
    plan, breakdown = construct(instance)
    assert plan.assignment == {1: 2}
    assert plan.sequence(2) == chain(2, 1)
    assert breakdown.total == pytest.approx(125.0)


def test_no_tasks_gives_bare_chains(benchmark_instance):
    instance = benchmark_instance([])
    plan, breakdown = construct(instance)
    assert plan.sequences == {r: chain(r) for r in (1, 2, 3)}
    assert breakdown.total == 0.0


def test_precedence_gates_commit_order(benchmark_instance):
    instance = benchmark_instance([('A', (40.0, 0.0)), ('A', (5.0, 0.0))], precedence=[(1, 2)], robots=[1])
    plan, _ = construct(instance)
    assert plan.sequence(1) == chain(1, 1, 2)


def test_constructed_plan_is_closed_and_feasible(coalition_instance):
    plan, _ = construct(coalition_instance)
    assert plan.is_closed
    assert check_feasibility(plan, coalition_instance).feasible
    assert plan.sequence(1)[-1] == Vertex.end(1)


@pytest.mark.parametrize('code', PROBLEM_CLASS_CODES)
def test_generated_instances_construct_feasibly(code):
    for seed in range(3):
        instance = generate(GeneratorConfig(problem_class=ProblemClass.parse(code), seed=seed))
        plan, breakdown = construct(instance)
        assert check_feasibility(plan, instance).feasible
        assert sorted(plan.assignment) == instance.task_ids
        assert breakdown.total > 0


def test_task_without_capable_alliance(benchmark_instance):
    instance = benchmark_instance([('A', (1.0, 0.0))])
    hopeless = instance.model_copy(update={'static_costs': StaticCostTable(entries={})})
    with pytest.raises(AssumptionViolationError):
        construct(hopeless)
