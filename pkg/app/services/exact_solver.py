import itertools
import logging
from typing import Iterator, Optional, Tuple

from app.models.instance_models import Instance, ObjectiveWeights
from app.models.plan_models import MissionPlan, OracleResult, Vertex
from app.services.feasibility import topological_peel
from app.services.objective import ObjectiveEvaluator
from app.services.plan_graph import adjacency, augment
from app.utils.errors import OracleInternalError, OracleLimitError
from config import config

logger = logging.getLogger(__name__)


def _plan_from(instance: Instance, assignment: Tuple[int, ...], order: Tuple[int, ...]) -> MissionPlan:
    task_ids = instance.task_ids
    alliance_of = dict(zip(task_ids, assignment))
    sequences = {}
    for r in instance.robot_ids:
        visits = [Vertex.task(t) for t in order if r in instance.alliance(alliance_of[t]).members]
        sequences[r] = (Vertex.start(r), *visits, Vertex.end(r))
    return MissionPlan(sequences, alliance_of)


def enumerate_plans(instance: Instance) -> Iterator[Tuple[MissionPlan, bool]]:
    """
    Every capable assignment crossed with every global task order.

    Each robot's sequence is the order restricted to its tasks. Yields the plan
    together with its acyclicity verdict; duplicates are not removed.
    """
    task_ids = instance.task_ids
    choices = [[a.id for a in instance.capable_alliances(t)] for t in task_ids]
    precedence = instance.precedence
    for assignment in itertools.product(*choices):
        for order in itertools.permutations(task_ids):
            plan = _plan_from(instance, assignment, order)
            yield plan, topological_peel(adjacency(augment(plan, precedence))).acyclic


def solve_exact(
    instance: Instance,
    max_tasks: Optional[int] = None,
    weights: Optional[ObjectiveWeights] = None,
) -> OracleResult:
    """Brute-force optimum for tiny instances; first minimum in enumeration order wins"""
    limit = config.ORACLE_MAX_TASKS if max_tasks is None else max_tasks
    n = len(instance.tasks)
    if n > limit:
        raise OracleLimitError(f"exact solver refuses {n} tasks (limit {limit})")

    evaluator = ObjectiveEvaluator(instance, weights)
    best_plan = None
    best = None
    enumerated = 0
    feasible = 0
    for plan, acyclic in enumerate_plans(instance):
        enumerated += 1
        if not acyclic:
            continue
        feasible += 1
        breakdown = evaluator.evaluate(augment(plan, instance.precedence))
        if best is None or breakdown.total < best.total:
            best_plan, best = plan, breakdown

    if best is None:
        raise OracleInternalError(
            f"no feasible plan among {enumerated} candidates; capability or acyclic precedence is violated"
        )
    logger.info(
        f"Exact solver: {enumerated} plans enumerated, {feasible} feasible, optimum J={best.total:.3f}"
    )
    return OracleResult(best_plan=best_plan, best_objective=best,
                        plans_enumerated=enumerated, feasible_plans=feasible)


