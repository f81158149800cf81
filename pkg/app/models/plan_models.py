from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from app.utils.errors import PlanInputError


class VertexKind(str, Enum):
    START = "start"
    TASK = "task"
    END = "end"


_KIND_RANK = {VertexKind.START: 0, VertexKind.TASK: 1, VertexKind.END: 2}
_KIND_PREFIX = {VertexKind.START: "s", VertexKind.TASK: "t", VertexKind.END: "e"}
_PREFIX_KIND = {v: k for k, v in _KIND_PREFIX.items()}


@dataclass(frozen=True)
class Vertex:
    """Start node of a robot, task node, or end node of a robot"""
    kind: VertexKind
    ref: int  # robot id for start/end, task id for task

    @classmethod
    def start(cls, robot_id: int) -> 'Vertex':
        return cls(VertexKind.START, robot_id)

    @classmethod
    def task(cls, task_id: int) -> 'Vertex':
        return cls(VertexKind.TASK, task_id)

    @classmethod
    def end(cls, robot_id: int) -> 'Vertex':
        return cls(VertexKind.END, robot_id)

    @classmethod
    def from_label(cls, label: str) -> 'Vertex':
        try:
            return cls(_PREFIX_KIND[label[0]], int(label[1:]))
        except (KeyError, IndexError, ValueError):
            raise PlanInputError(f"invalid vertex label '{label}'") from None

    @property
    def is_task(self) -> bool:
        return self.kind is VertexKind.TASK

    @property
    def label(self) -> str:
        return f"{_KIND_PREFIX[self.kind]}{self.ref}"

    @property
    def sort_key(self) -> Tuple[int, int]:
        return (_KIND_RANK[self.kind], self.ref)

    def __repr__(self) -> str:
        return self.label


@dataclass(frozen=True)
class MissionPlan:
    """Union of per-robot path graphs, stored as ordered vertex sequences.

    sequences maps robot id -> (start, task..., [end]); the end vertex is only
    present once the plan is closed. assignment maps task id -> alliance id.
    Treated as an immutable value; every operation returns a new plan.
    """
    sequences: Dict[int, Tuple[Vertex, ...]]
    assignment: Dict[int, int] = field(default_factory=dict)

    @classmethod
    def empty(cls, robot_ids) -> 'MissionPlan':
        return cls({r: (Vertex.start(r),) for r in sorted(robot_ids)}, {})

    @property
    def robot_ids(self) -> List[int]:
        return sorted(self.sequences)

    @property
    def task_ids(self) -> List[int]:
        return sorted(self.assignment)

    @property
    def is_closed(self) -> bool:
        return all(seq[-1].kind is VertexKind.END for seq in self.sequences.values())

    def sequence(self, robot_id: int) -> Tuple[Vertex, ...]:
        try:
            return self.sequences[robot_id]
        except KeyError:
            raise PlanInputError(f"robot {robot_id} has no path graph in this plan") from None

    def robot_tasks(self, robot_id: int) -> Tuple[int, ...]:
        return tuple(v.ref for v in self.sequence(robot_id) if v.is_task)

    def holders(self, task_id: int) -> Tuple[int, ...]:
        target = Vertex.task(task_id)
        return tuple(r for r in self.robot_ids if target in self.sequences[r])

    def vertices(self) -> List[Vertex]:
        """All vertices: starts by robot id, tasks by id, ends by robot id"""
        seen = {v for seq in self.sequences.values() for v in seq}
        return sorted(seen, key=lambda v: v.sort_key)

    def task_positions(self, task_id: int) -> Dict[int, int]:
        """Index of the task vertex in every sequence holding it"""
        target = Vertex.task(task_id)
        return {r: self.sequences[r].index(target) for r in self.holders(task_id)}

    def closed(self) -> 'MissionPlan':
        """Append every robot's end vertex (idempotent)"""
        sequences = {
            r: seq if seq[-1].kind is VertexKind.END else seq + (Vertex.end(r),)
            for r, seq in self.sequences.items()
        }
        return MissionPlan(sequences, dict(self.assignment))

    def describe(self) -> str:
        return "; ".join(
            f"r{r}: " + "->".join(v.label for v in self.sequences[r]) for r in self.robot_ids
        )


class EdgeKind(str, Enum):
    PATH = "path"
    PRECEDENCE = "precedence"


@dataclass(frozen=True)
class IncomingEdge:
    predecessor: Vertex
    kind: EdgeKind
    robot: Optional[int] = None  # robot traversing a path edge


@dataclass(frozen=True)
class AugmentedPlan:
    """Mission plan plus the precedence arcs between its tasks (M+)"""
    base: MissionPlan
    precedence_arcs: Tuple[Tuple[int, int], ...] = ()

    def vertices(self) -> List[Vertex]:
        return self.base.vertices()

    def path_edges(self) -> List[Tuple[Vertex, Vertex, int]]:
        edges = []
        for r in self.base.robot_ids:
            seq = self.base.sequences[r]
            edges.extend((u, v, r) for u, v in zip(seq, seq[1:]))
        return edges

    def precedence_edges(self) -> List[Tuple[Vertex, Vertex]]:
        return [(Vertex.task(i), Vertex.task(j)) for i, j in self.precedence_arcs]


class ViolationKind(str, Enum):
    INCAPABLE_ASSIGNMENT = "incapable_assignment"
    CYCLE = "cycle"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    task: Optional[int] = None
    witness: Tuple[Vertex, ...] = ()

    def __str__(self) -> str:
        if self.kind is ViolationKind.CYCLE:
            return "cycle through " + ", ".join(v.label for v in self.witness)
        return f"task t{self.task} assigned to an incapable alliance"


@dataclass(frozen=True)
class FeasibilityVerdict:
    violations: Tuple[Violation, ...] = ()

    @property
    def feasible(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.feasible

    def summary(self) -> str:
        if self.feasible:
            return "feasible"
        return "infeasible: " + "; ".join(str(v) for v in self.violations)


@dataclass(frozen=True)
class VertexTiming:
    vertex: Vertex
    arrival_time: float
    start_time: float
    finish_time: float
    wait_time: float
    travel_time: float
    travel_distance: float

    @property
    def duration(self) -> float:
        return self.finish_time - self.start_time


@dataclass(frozen=True)
class RobotTimeline:
    robot: int
    entries: Tuple[VertexTiming, ...]

    @property
    def finishing_time(self) -> float:
        return self.entries[-1].finish_time

    @property
    def total_distance(self) -> float:
        return sum(e.travel_distance for e in self.entries)

    @property
    def total_travel_time(self) -> float:
        return sum(e.travel_time for e in self.entries)

    @property
    def total_wait(self) -> float:
        return sum(e.wait_time for e in self.entries)

    @property
    def total_task_time(self) -> float:
        return sum(e.duration for e in self.entries)

    def timing(self, vertex: Vertex) -> VertexTiming:
        for entry in self.entries:
            if entry.vertex == vertex:
                return entry
        raise PlanInputError(f"vertex {vertex.label} not on the path of robot {self.robot}")


@dataclass(frozen=True)
class Schedule:
    timelines: Dict[int, RobotTimeline]
    task_windows: Dict[int, Tuple[float, float]]  # task id -> (start, finish)

    @property
    def robot_ids(self) -> List[int]:
        return sorted(self.timelines)

    def timeline(self, robot_id: int) -> RobotTimeline:
        try:
            return self.timelines[robot_id]
        except KeyError:
            raise PlanInputError(f"unknown robot id {robot_id}") from None

    def finishing_times(self) -> Dict[int, float]:
        return {r: self.timelines[r].finishing_time for r in self.robot_ids}


class ObjectiveBreakdown(BaseModel):
    model_config = ConfigDict(frozen=True)

    j1: float  # makespan (s)
    j2: float  # average finishing time (s)
    j3: float  # average driven distance (m)
    total: float


@dataclass(frozen=True)
class TaskPools:
    executable: Tuple[int, ...]
    blocked: Tuple[int, ...]


class SearchConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    max_sweeps: Optional[int] = Field(default=None, ge=1)  # None: unlimited
    min_improvement: float = Field(default=0.0, ge=0)


class RelocationStep(BaseModel):
    model_config = ConfigDict(frozen=True)

    sweep: int
    task: int
    alliance: int
    positions: Dict[int, int]
    total: float


class SearchStats(BaseModel):
    sweeps: int = 0
    candidates_evaluated: int = 0
    candidates_infeasible: int = 0
    j_initial: float = 0.0
    j_final: float = 0.0
    trace: List[RelocationStep] = Field(default_factory=list)

    @property
    def improvement_percent(self) -> float:
        if self.j_initial <= 0:
            return 0.0
        return 100.0 * (self.j_initial - self.j_final) / self.j_initial


@dataclass(frozen=True)
class OracleResult:
    best_plan: MissionPlan
    best_objective: ObjectiveBreakdown
    plans_enumerated: int
    feasible_plans: int = 0
