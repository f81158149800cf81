import logging
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

import networkx as nx

from app.models.instance_models import Instance, PrecedenceSet
from app.models.plan_models import (
    AugmentedPlan,
    EdgeKind,
    IncomingEdge,
    MissionPlan,
    Vertex,
    VertexKind,
)
from app.utils.errors import PlanInputError

logger = logging.getLogger(__name__)

Adjacency = Dict[Vertex, List[Vertex]]


def augment(plan: MissionPlan, precedence: PrecedenceSet) -> AugmentedPlan:
    """Extend a plan by the precedence arcs whose endpoints are both in the plan"""
    return AugmentedPlan(plan, precedence.restricted_to(plan.assignment))


def incoming_edges(plan: AugmentedPlan, v: Vertex, include_precedence: bool = True) -> FrozenSet[IncomingEdge]:
    """E_in(v), or E_in+(v) when include_precedence is set"""
    base = plan.base
    if v.kind is VertexKind.TASK:
        if v.ref not in base.assignment:
            raise PlanInputError(f"vertex {v.label} is not part of the plan")
    elif v.ref not in base.sequences:
        raise PlanInputError(f"vertex {v.label} is not part of the plan")
    elif v.kind is VertexKind.END and base.sequences[v.ref][-1] != v:
        raise PlanInputError(f"vertex {v.label} is not part of the plan")

    edges = set()
    for robot in base.robot_ids:
        seq = base.sequences[robot]
        for u, w in zip(seq, seq[1:]):
            if w == v:
                edges.add(IncomingEdge(u, EdgeKind.PATH, robot))
    if include_precedence and v.is_task:
        for i, j in plan.precedence_arcs:
            if j == v.ref:
                edges.add(IncomingEdge(Vertex.task(i), EdgeKind.PRECEDENCE))
    return frozenset(edges)


def adjacency(plan: AugmentedPlan) -> Adjacency:
    """Successor lists of M+ (parallel edges kept) over the plan's vertices"""
    succ: Adjacency = {v: [] for v in plan.vertices()}
    for u, w, _ in plan.path_edges():
        succ[u].append(w)
    for u, w in plan.precedence_edges():
        succ[u].append(w)
    return succ


def as_digraph(plan: AugmentedPlan) -> nx.MultiDiGraph:
    """Materialise M+ with deterministic vertex order and typed edges"""
    graph = nx.MultiDiGraph()
    for v in plan.vertices():
        graph.add_node(v, kind=v.kind.value, label=v.label)
    for u, w, robot in plan.path_edges():
        graph.add_edge(u, w, kind=EdgeKind.PATH.value, robot=robot)
    for u, w in plan.precedence_edges():
        graph.add_edge(u, w, kind=EdgeKind.PRECEDENCE.value, robot=None)
    return graph


def remove_task(plan: MissionPlan, task: int) -> MissionPlan:
    if task not in plan.assignment:
        raise PlanInputError(f"task {task} is not assigned in the plan")
    target = Vertex.task(task)
    sequences = {
        r: tuple(v for v in seq if v != target) if target in seq else seq
        for r, seq in plan.sequences.items()
    }
    assignment = {t: a for t, a in plan.assignment.items() if t != task}
    return MissionPlan(sequences, assignment)


def task_slots(sequence: Tuple[Vertex, ...]) -> int:
    """Number of insertion slots: one more than the tasks on the path"""
    return sum(1 for v in sequence if v.is_task) + 1


def insert_task(plan: MissionPlan, task: int, alliance_id: int, positions: Mapping[int, int]) -> MissionPlan:
    """Insert an unassigned task at the given index of each listed robot's sequence"""
    if task in plan.assignment:
        raise PlanInputError(f"task {task} is already assigned")
    target = Vertex.task(task)
    sequences = dict(plan.sequences)
    for robot, index in positions.items():
        if robot not in sequences:
            raise PlanInputError(f"robot {robot} has no path graph in this plan")
        seq = sequences[robot]
        if not 1 <= index <= task_slots(seq):
            raise PlanInputError(
                f"insert index {index} out of range [1, {task_slots(seq)}] for robot {robot}"
            )
        sequences[robot] = seq[:index] + (target,) + seq[index:]
    assignment = dict(plan.assignment)
    assignment[task] = alliance_id
    return MissionPlan(sequences, assignment)


def append_task(plan: MissionPlan, task: int, alliance_id: int, members: Iterable[int]) -> MissionPlan:
    """Add the task as the new leaf of every member's path graph"""
    positions = {r: task_slots(plan.sequence(r)) for r in members}
    return insert_task(plan, task, alliance_id, positions)


def relocate(
    plan: MissionPlan,
    task: int,
    target_alliance: int,
    insert_positions: Mapping[int, int],
    instance: Optional[Instance] = None,
) -> MissionPlan:
    """Move one task out of its current path graphs into the target alliance's.

    The members of the target alliance are the keys of insert_positions; with an
    instance at hand the alliance must exist and the keys must match its members.
    Indices refer to the sequences after removal of the task.
    """
    if task not in plan.assignment:
        raise PlanInputError(f"task {task} is not assigned in the plan")
    if not insert_positions:
        raise PlanInputError("relocation needs at least one insertion position")
    if instance is not None:
        members = instance.alliance(target_alliance).members
        if set(insert_positions) != set(members):
            raise PlanInputError(
                f"insertion positions cover robots {sorted(insert_positions)}, "
                f"alliance {target_alliance} has members {sorted(members)}"
            )
    return insert_task(remove_task(plan, task), task, target_alliance, insert_positions)
