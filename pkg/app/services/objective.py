import logging
from typing import Optional, Sequence, Union

from app.models.instance_models import Instance, ObjectiveWeights
from app.models.plan_models import AugmentedPlan, MissionPlan, ObjectiveBreakdown, Schedule, Vertex
from app.services.schedule_simulator import ScheduleSimulator

logger = logging.getLogger(__name__)


def breakdown_from_schedule(schedule: Schedule, weights: ObjectiveWeights, robot_count: int) -> ObjectiveBreakdown:
    """J1 makespan, J2 average finishing time, J3 average distance, weighted total"""
    finishing = list(schedule.finishing_times().values())
    distances = [schedule.timelines[r].total_distance for r in schedule.robot_ids]
    j1 = max(finishing, default=0.0)
    j2 = sum(finishing) / robot_count if robot_count else 0.0
    j3 = sum(distances) / robot_count if robot_count else 0.0
    total = weights.w1 * j1 + weights.w2 * j2 + weights.w3 * j3
    return ObjectiveBreakdown(j1=j1, j2=j2, j3=j3, total=total)


class ObjectiveEvaluator:
    """Simulates plans of one instance and scores them with the weighted objective"""

    def __init__(self, instance: Instance, weights: Optional[ObjectiveWeights] = None):
        self.instance = instance
        self.weights = weights or instance.weights
        self.simulator = ScheduleSimulator(instance)
        self.robot_count = len(instance.robots)
        self.evaluations = 0

    def evaluate(
        self,
        plan: Union[AugmentedPlan, MissionPlan],
        order: Optional[Sequence[Vertex]] = None,
    ) -> ObjectiveBreakdown:
        schedule = self.simulator.simulate(plan, order)
        self.evaluations += 1
        return breakdown_from_schedule(schedule, self.weights, self.robot_count)

    def evaluate_with_schedule(self, plan: Union[AugmentedPlan, MissionPlan]):
        schedule = self.simulator.simulate(plan)
        self.evaluations += 1
        return breakdown_from_schedule(schedule, self.weights, self.robot_count), schedule


def evaluate(
    plan: Union[AugmentedPlan, MissionPlan],
    instance: Instance,
    weights: Optional[ObjectiveWeights] = None,
) -> ObjectiveBreakdown:
    """Run the simulation and aggregate J1/J2/J3; raises InfeasiblePlanError on infeasible plans"""
    return ObjectiveEvaluator(instance, weights).evaluate(plan)
