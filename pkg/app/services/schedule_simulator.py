import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial.distance import cdist

from app.models.instance_models import Instance, Position
from app.models.plan_models import (
    AugmentedPlan,
    MissionPlan,
    RobotTimeline,
    Schedule,
    Vertex,
    VertexKind,
    VertexTiming,
)
from app.services.feasibility import check_feasibility, topological_peel
from app.services.plan_graph import adjacency, augment
from app.utils.errors import InfeasiblePlanError, PlanInputError

logger = logging.getLogger(__name__)


def travel(origin: Position, destination: Position, speed: float) -> Tuple[float, float]:
    """Euclidean distance (m) and driving time (s) at constant speed"""
    if not speed > 0:
        raise PlanInputError(f"speed must be positive, got {speed}")
    distance = float(np.linalg.norm(np.subtract(destination, origin)))
    return distance, distance / speed


class ScheduleSimulator:
    """
    Forward temporal simulation of augmented mission plans for one instance.

    Distances between every pair of start, task and end positions are computed
    once; each simulation then sweeps the vertices of M+ in topological order.
    """

    def __init__(self, instance: Instance):
        self.instance = instance
        self.speeds = {r.id: r.speed for r in instance.robots}
        self.members = {a.id: a.sorted_members for a in instance.alliances}

        vertices: List[Vertex] = []
        points: List[Position] = []
        for r in instance.robots:
            vertices.append(Vertex.start(r.id))
            points.append(r.start_position)
        for t in instance.tasks:
            vertices.append(Vertex.task(t.id))
            points.append(t.position)
        for r in instance.robots:
            if r.end_position is not None:
                vertices.append(Vertex.end(r.id))
                points.append(r.end_position)
        self.index = {v: k for k, v in enumerate(vertices)}
        if points:
            self.distances = cdist(np.asarray(points, dtype=float), np.asarray(points, dtype=float)).tolist()
        else:
            self.distances = []
        logger.debug(f"Distance table built for {len(vertices)} positions")

    def distance(self, origin: Vertex, destination: Vertex) -> float:
        if destination.kind is VertexKind.END and destination not in self.index:
            return 0.0  # arbitrary end position
        return self.distances[self.index[origin]][self.index[destination]]

    def _fail(self, plan: AugmentedPlan, reason: str):
        verdict = check_feasibility(plan.base, self.instance, partial=True)
        raise InfeasiblePlanError(f"cannot simulate plan: {reason} ({verdict.summary()})", verdict)

    def simulate(self, plan: Union[AugmentedPlan, MissionPlan], order: Optional[Sequence[Vertex]] = None) -> Schedule:
        if isinstance(plan, MissionPlan):
            plan = augment(plan, self.instance.precedence)
        base = plan.base

        if order is None:
            peel = topological_peel(adjacency(plan))
            if not peel.acyclic:
                self._fail(plan, "augmented plan contains a cycle")
            order = peel.order

        previous: Dict[Tuple[int, Vertex], Vertex] = {}
        for robot, seq in base.sequences.items():
            for u, v in zip(seq, seq[1:]):
                previous[(robot, v)] = u
        ready: Dict[int, List[int]] = {}
        for i, j in plan.precedence_arcs:
            ready.setdefault(j, []).append(i)

        finish: Dict[Vertex, float] = {}
        timings: Dict[Tuple[int, Vertex], VertexTiming] = {}
        windows: Dict[int, Tuple[float, float]] = {}

        for v in order:
            if v.kind is VertexKind.START:
                finish[v] = 0.0
                timings[(v.ref, v)] = VertexTiming(v, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)

            elif v.kind is VertexKind.TASK:
                alliance_id = base.assignment[v.ref]
                duration = self.instance.static_cost(v.ref, alliance_id)
                if not math.isfinite(duration):
                    self._fail(plan, f"task {v.ref} assigned to incapable alliance {alliance_id}")
                legs = []
                for robot in self.members[alliance_id]:
                    p = previous[(robot, v)]
                    dist = self.distance(p, v)
                    driving = dist / self.speeds[robot]
                    legs.append((robot, finish[p] + driving, driving, dist))
                start = max(arrival for _, arrival, _, _ in legs)
                for pred in ready.get(v.ref, ()):
                    start = max(start, finish[Vertex.task(pred)])
                end = start + duration
                finish[v] = end
                windows[v.ref] = (start, end)
                for robot, arrival, driving, dist in legs:
                    timings[(robot, v)] = VertexTiming(v, arrival, start, end, start - arrival, driving, dist)

            else:
                robot = v.ref
                p = previous[(robot, v)]
                dist = self.distance(p, v)
                driving = dist / self.speeds[robot]
                arrival = finish[p] + driving
                finish[v] = arrival
                timings[(robot, v)] = VertexTiming(v, arrival, arrival, arrival, 0.0, driving, dist)

        timelines = {
            robot: RobotTimeline(robot, tuple(timings[(robot, v)] for v in seq))
            for robot, seq in base.sequences.items()
        }
        return Schedule(timelines, windows)


def simulate(plan: Union[AugmentedPlan, MissionPlan], instance: Instance) -> Schedule:
    return ScheduleSimulator(instance).simulate(plan)
