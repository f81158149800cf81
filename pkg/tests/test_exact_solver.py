import random

import pytest

from app.models.instance_models import ObjectiveWeights
from app.models.task_catalog import TASK_TYPES
from app.services.constructive_heuristic import construct
from app.services.exact_solver import enumerate_plans, solve_exact
from app.services.feasibility import check_feasibility
from app.services.local_search import improve
from app.utils.errors import OracleLimitError
from config import config


def test_single_task_optimum(benchmark_instance):
    instance = benchmark_instance([('A', (2.0, 0.0))])
    result = solve_exact(instance)
    assert result.best_objective.total == pytest.approx(101.0)
    assert result.best_plan.assignment[1] in (1, 2)
    assert result.plans_enumerated == 3
    assert result.feasible_plans == 3


def test_no_tasks(benchmark_instance):
    result = solve_exact(benchmark_instance([]))
    assert result.best_objective.total == 0.0
    assert result.best_plan.assignment == {}
    assert result.plans_enumerated == 1


def test_refuses_large_instances(benchmark_instance):
    instance = benchmark_instance([('A', (float(k), 0.0)) for k in range(1, 5)])
    with pytest.raises(OracleLimitError):
        solve_exact(instance, max_tasks=3)


def test_verdicts_agree_with_feasibility_check(benchmark_instance):
    instance = benchmark_instance(
        [('B', (10.0, 0.0)), ('B', (0.0, 10.0)), ('A', (5.0, 5.0))], precedence=[(1, 3)]
    )
    seen = 0
    for plan, acyclic in enumerate_plans(instance):
        assert check_feasibility(plan, instance).feasible == acyclic
        seen += 1
    assert seen == 2 * 2 * 3 * 6


def test_heuristics_never_beat_the_optimum(benchmark_instance):
    instance = benchmark_instance(
        [('A', (20.0, 5.0)), ('B', (-10.0, 15.0)), ('D', (5.0, -25.0)), ('C', (30.0, 30.0))],
        precedence=[(1, 2)],
    )
    plan, _ = construct(instance)
    _, breakdown, _ = improve(plan, instance)
    assert breakdown.total >= solve_exact(instance).best_objective.total - 1e-9


def test_optimum_is_invariant_under_task_renaming(benchmark_instance):
    specs = [('A', (20.0, 0.0)), ('B', (0.0, 20.0)), ('D', (-15.0, -5.0))]
    forward = benchmark_instance(specs, precedence=[(1, 2)])
    # reverse ids: task k becomes 4 - k
    renamed = benchmark_instance(list(reversed(specs)), precedence=[(3, 2)])
    assert solve_exact(forward).best_objective.total == pytest.approx(solve_exact(renamed).best_objective.total)


def test_precedence_respected_by_optimum(benchmark_instance):
    instance = benchmark_instance([('A', (10.0, 0.0)), ('A', (-10.0, 0.0))], precedence=[(1, 2)])
    result = solve_exact(instance)
    assert check_feasibility(result.best_plan, instance).feasible
    assert result.feasible_plans < result.plans_enumerated


def _random_small_instances(build, count, max_tasks, seed):
    rng = random.Random(seed)
    weights = ObjectiveWeights.from_tuple(config.DEFAULT_WEIGHTS)
    for _ in range(count):
        n = rng.randint(1, max_tasks)
        specs = [(rng.choice(TASK_TYPES), (rng.uniform(-50.0, 50.0), rng.uniform(-50.0, 50.0)))
                 for _ in range(n)]
        precedence = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if rng.random() < 0.2]
        yield build(specs, precedence=precedence, weights=weights)


def _compare_with_optimum(instance):
    """True when the heuristics reach the optimum; asserts they never beat it"""
    plan, _ = construct(instance)
    improved, breakdown, _ = improve(plan, instance)
    optimum = solve_exact(instance).best_objective.total
    assert breakdown.total >= optimum - 1e-9

    verdicts = [(candidate, acyclic) for candidate, acyclic in enumerate_plans(instance)]
    for heuristic_plan in (plan, improved):
        assert check_feasibility(heuristic_plan, instance).feasible
        assert (heuristic_plan, True) in verdicts
    return breakdown.total <= optimum + 1e-9


def test_heuristics_against_optimum_on_random_instances(benchmark_instance):
    for instance in _random_small_instances(benchmark_instance, 15, max_tasks=3, seed=2):
        _compare_with_optimum(instance)


@pytest.mark.slow
def test_heuristics_match_optimum_often(benchmark_instance):
    instances = list(_random_small_instances(benchmark_instance, 50, max_tasks=5, seed=2024))
    matches = sum(_compare_with_optimum(instance) for instance in instances)
    assert matches >= 0.4 * len(instances)
