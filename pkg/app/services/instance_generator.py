import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from app.models.instance_models import (
    Alliance,
    GeneratorConfig,
    Instance,
    InstanceMeta,
    ObjectiveWeights,
    Position,
    PrecedenceSet,
    ProblemClass,
    Robot,
    StaticCostTable,
    Task,
)
from app.models.task_catalog import (
    BENCHMARK_ALLIANCES,
    CIRCLE_RADIUS,
    FULL_TURN,
    MAX_OFFSET,
    ROBOT_SPEEDS,
    RNG_ALGORITHM,
    ROBOT_START,
    TASK_DURATIONS,
    TASK_TYPES,
)
from app.utils.errors import PlanInputError
from config import config

logger = logging.getLogger(__name__)

TypedTask = Tuple[int, str]


def class_tasks_and_precedence(problem_class: ProblemClass) -> Tuple[List[TypedTask], PrecedenceSet]:
    """
    Task ids 1..|T| typed A, B, C, D in that order, plus the three precedence templates:
    t1 before t2, the third A task before the first B task and the first C task
    before the first D task.
    """
    if problem_class.count_a < 3:
        raise PlanInputError(
            f"problem class {problem_class.code} needs at least 3 type A tasks for the precedence templates"
        )
    n_a = problem_class.count_a
    n_each = problem_class.count_each_bcd

    typed: List[TypedTask] = []
    for type_label, count in zip(TASK_TYPES, (n_a, n_each, n_each, n_each)):
        first = len(typed) + 1
        typed.extend((first + k, type_label) for k in range(count))

    precedence = PrecedenceSet(pairs=(
        (1, 2),
        (3, n_a + 1),
        (n_a + n_each + 1, n_a + 2 * n_each + 1),
    ))
    return typed, precedence


def task_position(i: int, total: int, l1: float, theta1: float) -> Position:
    """Point on the radius-50 circle at angle 2*pi*i/|T| + pi/|T|, shifted by (l1, theta1) in polar form"""
    if total < 1 or not 1 <= i <= total:
        raise PlanInputError(f"task index {i} outside 1..{total}")
    if not 0.0 <= l1 <= MAX_OFFSET:
        raise PlanInputError(f"offset length {l1} outside [0, {MAX_OFFSET}]")
    if not 0.0 <= theta1 < FULL_TURN:
        raise PlanInputError(f"offset angle {theta1} outside [0, 2pi)")
    theta0 = FULL_TURN * i / total + math.pi / total
    x = CIRCLE_RADIUS * math.cos(theta0) + l1 * math.cos(theta1)
    y = CIRCLE_RADIUS * math.sin(theta0) + l1 * math.sin(theta1)
    return (x, y)


def benchmark_fleet() -> Tuple[Tuple[Robot, ...], Tuple[Alliance, ...]]:
    robots = tuple(
        Robot(id=k + 1, start_position=ROBOT_START, end_position=None, speed=speed)
        for k, speed in enumerate(ROBOT_SPEEDS)
    )
    alliances = tuple(Alliance(id=k + 1, members=members) for k, members in enumerate(BENCHMARK_ALLIANCES))
    return robots, alliances


def generate(problem_config: GeneratorConfig) -> Instance:
    """Draw one benchmark instance; identical configs give identical instances"""
    problem_class = problem_config.problem_class
    typed, precedence = class_tasks_and_precedence(problem_class)
    total = problem_class.total_tasks

    rng = np.random.Generator(getattr(np.random, RNG_ALGORITHM)(problem_config.seed))
    offsets = rng.uniform(0.0, MAX_OFFSET, size=total)
    angles = rng.uniform(0.0, FULL_TURN, size=total)

    tasks = tuple(
        Task(id=task_id, type_label=type_label,
             position=task_position(task_id, total, float(offsets[k]), float(angles[k])))
        for k, (task_id, type_label) in enumerate(typed)
    )

    robots, alliances = benchmark_fleet()
    entries = {
        (task_id, alliance.id): TASK_DURATIONS[type_label][column]
        for task_id, type_label in typed
        for column, alliance in enumerate(alliances)
    }

    weights = problem_config.weights or ObjectiveWeights.from_tuple(config.DEFAULT_WEIGHTS)
    instance = Instance(
        meta=InstanceMeta(seed=problem_config.seed, problem_class=problem_class.code),
        robots=robots,
        tasks=tasks,
        alliances=alliances,
        static_costs=StaticCostTable(entries=entries),
        precedence=precedence,
        weights=weights,
    )
    logger.debug(f"Generated {problem_class.code} instance with seed {problem_config.seed}")
    return instance


def generate_batch(
    problem_class: ProblemClass,
    count: int,
    seed: int,
    weights: Optional[ObjectiveWeights] = None,
) -> List[Instance]:
    """Instances seed, seed+1, ..., seed+count-1 of one class"""
    return [
        generate(GeneratorConfig(problem_class=problem_class, seed=seed + k, weights=weights))
        for k in range(count)
    ]
