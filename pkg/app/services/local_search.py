import itertools
import logging
import math
from typing import Dict, Iterator, List, Optional, Tuple

from app.models.instance_models import Alliance, Instance, ObjectiveWeights
from app.models.plan_models import (
    MissionPlan,
    ObjectiveBreakdown,
    RelocationStep,
    SearchConfig,
    SearchStats,
)
from app.services.feasibility import check_feasibility, topological_peel
from app.services.objective import ObjectiveEvaluator
from app.services.plan_graph import adjacency, augment, insert_task, remove_task, task_slots
from app.utils.errors import InfeasiblePlanError, PlanInputError

logger = logging.getLogger(__name__)

Move = Tuple[Alliance, Dict[int, int], MissionPlan]


def iter_relocations(plan: MissionPlan, task: int, instance: Instance) -> Iterator[Move]:
    """
    Relocate neighbourhood of one task.

    For every capable alliance (declaration order) and every combination of
    insertion indices over its members (lexicographic), yield the resulting
    plan. The move that puts the task back where it was is skipped. Candidates
    are not checked for feasibility here.
    """
    if task not in plan.assignment:
        raise PlanInputError(f"task {task} is not assigned in the plan")
    current_alliance = plan.assignment[task]
    current_positions = plan.task_positions(task)
    reduced = remove_task(plan, task)

    for alliance in instance.alliances:
        if not math.isfinite(instance.static_cost(task, alliance.id)):
            continue
        members = alliance.sorted_members
        slots = [range(1, task_slots(reduced.sequence(r)) + 1) for r in members]
        for indices in itertools.product(*slots):
            positions = dict(zip(members, indices))
            if alliance.id == current_alliance and positions == current_positions:
                continue
            yield alliance, positions, insert_task(reduced, task, alliance.id, positions)


def enumerate_relocations(plan: MissionPlan, task: int, instance: Instance) -> List[MissionPlan]:
    return [candidate for _, _, candidate in iter_relocations(plan, task, instance)]


class LocalSearch:
    """
    Steepest-descent local search over the relocate neighbourhood.

    Each sweep evaluates the whole neighbourhood of a snapshot of the incumbent:
    candidates whose augmented plan is cyclic are discarded before simulation,
    the best remaining candidate (first one on ties) replaces the incumbent if
    it lowers J by more than min_improvement. The search stops at a local
    optimum or after max_sweeps sweeps.
    """

    def __init__(
        self,
        instance: Instance,
        config: Optional[SearchConfig] = None,
        weights: Optional[ObjectiveWeights] = None,
    ):
        self.instance = instance
        self.config = config or SearchConfig()
        self.evaluator = ObjectiveEvaluator(instance, weights)

    def _sweep(self, incumbent: MissionPlan, incumbent_total: float, stats: SearchStats):
        precedence = self.instance.precedence
        best = None
        best_total = incumbent_total
        for task in incumbent.task_ids:
            for alliance, positions, candidate in iter_relocations(incumbent, task, self.instance):
                stats.candidates_evaluated += 1
                augmented = augment(candidate, precedence)
                peel = topological_peel(adjacency(augmented))
                if not peel.acyclic:
                    stats.candidates_infeasible += 1
                    continue
                breakdown = self.evaluator.evaluate(augmented, peel.order)
                if breakdown.total < best_total:
                    best_total = breakdown.total
                    best = (task, alliance, positions, candidate, breakdown)
        return best

    def improve(self, plan: MissionPlan) -> Tuple[MissionPlan, ObjectiveBreakdown, SearchStats]:
        verdict = check_feasibility(plan, self.instance)
        if not verdict.feasible:
            raise InfeasiblePlanError(f"local search needs a feasible start plan: {verdict.summary()}", verdict)

        incumbent = plan
        incumbent_breakdown = self.evaluator.evaluate(augment(plan, self.instance.precedence))
        stats = SearchStats(j_initial=incumbent_breakdown.total, j_final=incumbent_breakdown.total)
        max_sweeps = self.config.max_sweeps

        while max_sweeps is None or stats.sweeps < max_sweeps:
            stats.sweeps += 1
            best = self._sweep(incumbent, incumbent_breakdown.total, stats)
            if best is None:
                logger.debug(f"Sweep {stats.sweeps}: no improving relocation")
                break
            task, alliance, positions, candidate, breakdown = best
            gain = incumbent_breakdown.total - breakdown.total
            if gain <= self.config.min_improvement:
                logger.debug(f"Sweep {stats.sweeps}: best gain {gain:.6f} below threshold")
                break
            incumbent, incumbent_breakdown = candidate, breakdown
            stats.j_final = breakdown.total
            stats.trace.append(
                RelocationStep(sweep=stats.sweeps, task=task, alliance=alliance.id,
                               positions=positions, total=breakdown.total)
            )
            logger.debug(f"Sweep {stats.sweeps}: moved t{task} to {alliance.label}, J={breakdown.total:.3f}")

        logger.info(
            f"Local search finished after {stats.sweeps} sweep(s): J {stats.j_initial:.3f} -> "
            f"{stats.j_final:.3f} ({stats.improvement_percent:.2f}% better, "
            f"{stats.candidates_evaluated} candidates, {stats.candidates_infeasible} cyclic)"
        )
        return incumbent, incumbent_breakdown, stats


def improve(
    plan: MissionPlan,
    instance: Instance,
    config: Optional[SearchConfig] = None,
    weights: Optional[ObjectiveWeights] = None,
) -> Tuple[MissionPlan, ObjectiveBreakdown, SearchStats]:
    return LocalSearch(instance, config, weights).improve(plan)
