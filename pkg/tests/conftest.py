import pytest

from app.models.instance_models import (
    Alliance,
    Instance,
    ObjectiveWeights,
    PrecedenceSet,
    Robot,
    StaticCostTable,
    Task,
)
from app.models.plan_models import MissionPlan
from app.models.task_catalog import BENCHMARK_ALLIANCES, TASK_DURATIONS
from app.services.instance_generator import benchmark_fleet
from plan_builders import chain

MAKESPAN_ONLY = ObjectiveWeights(w1=1.0, w2=0.0, w3=0.0)


@pytest.fixture
def benchmark_instance():
    """Builder for instances on the three-robot benchmark fleet with catalogue durations"""
    def build(task_specs, precedence=(), weights=MAKESPAN_ONLY, robots=None):
        fleet, alliances = benchmark_fleet()
        if robots is not None:
            fleet = tuple(r for r in fleet if r.id in robots)
            alliances = tuple(a for a in alliances if a.members <= set(robots))
        tasks = tuple(
            Task(id=k + 1, type_label=type_label, position=position)
            for k, (type_label, position) in enumerate(task_specs)
        )
        column = {members: c for c, members in enumerate(BENCHMARK_ALLIANCES)}
        entries = {
            (t.id, a.id): TASK_DURATIONS[t.type_label][column[a.members]]
            for t in tasks for a in alliances
        }
        return Instance(
            robots=fleet,
            tasks=tasks,
            alliances=alliances,
            static_costs=StaticCostTable(entries=entries),
            precedence=PrecedenceSet(pairs=tuple(precedence)),
            weights=weights,
        )
    return build


@pytest.fixture
def coalition_instance():
    """Two robots, four tasks; t2 needs the coalition {r1, r2}, t1 precedes t3"""
    robots = (
        Robot(id=1, start_position=(0.0, 0.0), speed=1.0),
        Robot(id=2, start_position=(0.0, 10.0), speed=1.0),
    )
    tasks = (
        Task(id=1, type_label='A', position=(10.0, 0.0)),
        Task(id=2, type_label='B', position=(20.0, 5.0)),
        Task(id=3, type_label='A', position=(30.0, 0.0)),
        Task(id=4, type_label='A', position=(10.0, 10.0)),
    )
    alliances = (
        Alliance(id=1, members=frozenset({1})),
        Alliance(id=2, members=frozenset({2})),
        Alliance(id=3, members=frozenset({1, 2})),
    )
    entries = {}
    for t in (1, 3, 4):
        entries[(t, 1)] = 10.0
        entries[(t, 2)] = 10.0
    entries[(2, 3)] = 20.0
    return Instance(
        robots=robots,
        tasks=tasks,
        alliances=alliances,
        static_costs=StaticCostTable(entries=entries),
        precedence=PrecedenceSet(pairs=((1, 3),)),
        weights=ObjectiveWeights(w1=1.0, w2=0.2, w3=0.1),
    )


@pytest.fixture
def coalition_plan():
    return MissionPlan(
        {1: chain(1, 1, 2, 3), 2: chain(2, 4, 2)},
        {1: 1, 2: 3, 3: 1, 4: 2},
    )
