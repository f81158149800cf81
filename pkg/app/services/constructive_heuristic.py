import logging
import math
from typing import Iterable, Optional, Tuple

from app.models.instance_models import Instance, ObjectiveWeights, PrecedenceSet
from app.models.plan_models import MissionPlan, ObjectiveBreakdown, TaskPools
from app.services.objective import ObjectiveEvaluator
from app.services.plan_graph import append_task, augment
from app.utils.errors import AssumptionViolationError

logger = logging.getLogger(__name__)


def init_pools(tasks: Iterable[int], precedence: PrecedenceSet) -> TaskPools:
    """Split tasks into executable (no predecessor at all) and blocked ones"""
    constrained = {j for _, j in precedence.pairs}
    ordered = sorted(tasks)
    return TaskPools(
        executable=tuple(t for t in ordered if t not in constrained),
        blocked=tuple(t for t in ordered if t in constrained),
    )


class ConstructiveHeuristic:
    """
    Greedy construction of an initial mission plan.

    Every round tries each executable task with each capable alliance, appended
    as the new leaf of all members' path graphs, and commits the assignment with
    the smallest objective increment. Ties go to the candidate visited last
    (tasks ascending, alliances in declaration order). A blocked task becomes
    executable once all of its precedence predecessors are assigned.
    """

    def __init__(self, instance: Instance, weights: Optional[ObjectiveWeights] = None):
        self.instance = instance
        self.evaluator = ObjectiveEvaluator(instance, weights)

    def _check_capability(self):
        hopeless = [t for t in self.instance.task_ids if not self.instance.capable_alliances(t)]
        if hopeless:
            raise AssumptionViolationError(
                f"no alliance is capable of tasks {hopeless}; every task needs a finite static cost"
            )

    def construct(self) -> Tuple[MissionPlan, ObjectiveBreakdown]:
        self._check_capability()
        instance = self.instance
        precedence = instance.precedence

        plan = MissionPlan.empty(instance.robot_ids)
        current = self.evaluator.evaluate(augment(plan, precedence)).total
        pools = init_pools(instance.task_ids, precedence)
        executable = list(pools.executable)
        blocked = list(pools.blocked)
        assigned = set()

        while executable:
            best = None
            delta_min = math.inf
            for task in sorted(executable):
                for alliance in instance.alliances:
                    if not math.isfinite(instance.static_cost(task, alliance.id)):
                        continue
                    candidate = append_task(plan, task, alliance.id, alliance.sorted_members)
                    total = self.evaluator.evaluate(augment(candidate, precedence)).total
                    delta = total - current
                    if delta <= delta_min:
                        delta_min = delta
                        best = (task, alliance, candidate, total)

            if best is None:
                raise AssumptionViolationError(f"no capable alliance for executable tasks {sorted(executable)}")

            task, alliance, plan, current = best
            executable.remove(task)
            assigned.add(task)
            logger.debug(f"Assigned t{task} to {alliance.label} (increment {delta_min:.3f}, J={current:.3f})")

            released = [t for t in blocked if all(p in assigned for p in instance.predecessors(t))]
            for t in released:
                blocked.remove(t)
                executable.append(t)

        if blocked:
            raise AssumptionViolationError(
                f"tasks {sorted(blocked)} never became executable; the precedence relation is cyclic"
            )

        plan = plan.closed()
        breakdown = self.evaluator.evaluate(augment(plan, precedence))
        logger.info(
            f"Constructed initial plan for {len(instance.tasks)} tasks: J={breakdown.total:.3f} "
            f"({self.evaluator.evaluations} evaluations)"
        )
        return plan, breakdown


def construct(instance: Instance, weights: Optional[ObjectiveWeights] = None) -> Tuple[MissionPlan, ObjectiveBreakdown]:
    return ConstructiveHeuristic(instance, weights).construct()
