import logging
import math
from collections import deque
from dataclasses import dataclass
from typing import Any, Dict, Hashable, List, Mapping, Tuple, Union

import networkx as nx

from app.models.instance_models import Instance
from app.models.plan_models import (
    FeasibilityVerdict,
    MissionPlan,
    Vertex,
    VertexKind,
    Violation,
    ViolationKind,
)
from app.services.plan_graph import adjacency, augment
from app.utils.errors import PlanInputError

logger = logging.getLogger(__name__)

Graph = Union[nx.DiGraph, Mapping[Hashable, Any]]


@dataclass(frozen=True)
class AcyclicityResult:
    acyclic: bool
    order: Tuple[Hashable, ...]    # vertices in peeling order (a topological order when acyclic)
    witness: Tuple[Hashable, ...]  # residue left after peeling; every cycle lies within it

    def __bool__(self) -> bool:
        return self.acyclic


def _nodes_and_successors(g: Graph) -> Tuple[List[Hashable], Dict[Hashable, List[Hashable]]]:
    if isinstance(g, nx.Graph):
        nodes = list(g.nodes)
        succ: Dict[Hashable, List[Hashable]] = {n: [] for n in nodes}
        for u, v in g.edges():
            succ[u].append(v)
        return nodes, succ
    nodes = list(g)
    succ = {n: list(g[n]) for n in nodes}
    for targets in list(succ.values()):
        for v in targets:
            if v not in succ:
                nodes.append(v)
                succ[v] = []
    return nodes, succ


def topological_peel(g: Graph) -> AcyclicityResult:
    """Repeatedly remove vertices without incoming edges (Kahn), O(|V| + |E|)"""
    nodes, succ = _nodes_and_successors(g)
    in_degree = {n: 0 for n in nodes}
    for targets in succ.values():
        for v in targets:
            in_degree[v] += 1

    sources = deque(n for n in nodes if in_degree[n] == 0)
    order = []
    while sources:
        n = sources.popleft()
        order.append(n)
        for v in succ[n]:
            in_degree[v] -= 1
            if in_degree[v] == 0:
                sources.append(v)

    if len(order) == len(nodes):
        return AcyclicityResult(True, tuple(order), ())
    peeled = set(order)
    residue = tuple(n for n in nodes if n not in peeled)
    return AcyclicityResult(False, tuple(order), residue)


def is_acyclic(g: Graph) -> AcyclicityResult:
    """Acyclicity test; accepts a networkx digraph or a successor mapping.

    The result is truthy iff g has no directed cycle. When it is falsy the
    witness holds the vertices left over after exhaustive source removal.
    """
    return topological_peel(g)


def _check_structure(plan: MissionPlan, instance: Instance, partial: bool) -> None:
    for robot, seq in plan.sequences.items():
        if not instance.has_robot(robot):
            raise PlanInputError(f"plan references unknown robot {robot}")
        if not seq or seq[0] != Vertex.start(robot):
            raise PlanInputError(f"path graph of robot {robot} must begin with its start vertex")
        for position, v in enumerate(seq[1:], start=1):
            if v.kind is VertexKind.START:
                raise PlanInputError(f"start vertex {v.label} inside the path of robot {robot}")
            if v.kind is VertexKind.END and (v.ref != robot or position != len(seq) - 1):
                raise PlanInputError(f"misplaced end vertex {v.label} on the path of robot {robot}")
            if v.is_task and not instance.has_task(v.ref):
                raise PlanInputError(f"plan references unknown task {v.ref}")

    for task, alliance_id in plan.assignment.items():
        if not instance.has_task(task):
            raise PlanInputError(f"plan references unknown task {task}")
        members = instance.alliance(alliance_id).members
        target = Vertex.task(task)
        holders = set()
        for robot, seq in plan.sequences.items():
            count = seq.count(target)
            if count > 1:
                raise PlanInputError(f"task {task} appears {count} times on the path of robot {robot}")
            if count:
                holders.add(robot)
        if holders != set(members):
            raise PlanInputError(
                f"task {task} is on the paths of robots {sorted(holders)} "
                f"but assigned to alliance {alliance_id} {sorted(members)}"
            )

    listed = {t for r in plan.robot_ids for t in plan.robot_tasks(r)}
    unassigned = listed - set(plan.assignment)
    if unassigned:
        raise PlanInputError(f"tasks {sorted(unassigned)} appear on paths without an assignment")

    if not partial:
        missing_tasks = set(instance.task_ids) - set(plan.assignment)
        missing_robots = set(instance.robot_ids) - set(plan.sequences)
        if missing_tasks or missing_robots:
            raise PlanInputError(
                f"plan does not cover the instance (missing tasks {sorted(missing_tasks)}, "
                f"missing robots {sorted(missing_robots)})"
            )


def check_feasibility(plan: MissionPlan, instance: Instance, partial: bool = False) -> FeasibilityVerdict:
    """Feasible iff every assigned alliance is capable and M+ is acyclic.

    With partial=True only the assigned tasks and the precedence arcs between
    them are considered, as for the intermediate plans of the construction.
    """
    _check_structure(plan, instance, partial)

    violations = []
    for task in plan.task_ids:
        if not math.isfinite(instance.static_cost(task, plan.assignment[task])):
            violations.append(Violation(ViolationKind.INCAPABLE_ASSIGNMENT, task=task))

    result = topological_peel(adjacency(augment(plan, instance.precedence)))
    if not result.acyclic:
        violations.append(Violation(ViolationKind.CYCLE, witness=result.witness))

    verdict = FeasibilityVerdict(tuple(violations))
    if not verdict.feasible:
        logger.debug(f"Plan infeasible: {verdict.summary()}")
    return verdict
