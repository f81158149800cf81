import math
import re
from typing import Any, Dict, FrozenSet, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator

from app.utils.errors import PlanInputError

Position = Tuple[float, float]

INCAPABLE = math.inf  # static cost of an alliance that cannot execute a task

PROBLEM_CLASS_CODE = re.compile(r'^\s*(\d+)A(\d+)BCD\s*$', re.IGNORECASE)


def check_finite(position: Optional[Position]) -> Optional[Position]:
    if position is not None and not all(math.isfinite(c) for c in position):
        raise ValueError(f"position must be finite, got {position}")
    return position


class Task(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int = Field(ge=1)
    type_label: str
    position: Position

    @field_validator('position')
    @classmethod
    def position_is_finite(cls, value):
        return check_finite(value)


class Robot(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int = Field(ge=1)
    start_position: Position
    end_position: Optional[Position] = None  # None: arbitrary end, no terminal travel
    speed: float = Field(gt=0)

    @field_validator('start_position', 'end_position')
    @classmethod
    def positions_are_finite(cls, value):
        return check_finite(value)


class Alliance(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int = Field(ge=1)
    members: FrozenSet[int] = Field(min_length=1)

    @property
    def sorted_members(self) -> Tuple[int, ...]:
        return tuple(sorted(self.members))

    @property
    def label(self) -> str:
        return "{" + ",".join(f"r{m}" for m in self.sorted_members) + "}"


class PrecedenceSet(BaseModel):
    """Ordered pairs (i, j): task i must finish before task j starts"""
    model_config = ConfigDict(frozen=True)

    pairs: Tuple[Tuple[int, int], ...] = ()

    def predecessors_of(self, task_id: int) -> Tuple[int, ...]:
        return tuple(i for i, j in self.pairs if j == task_id)

    def restricted_to(self, task_ids) -> Tuple[Tuple[int, int], ...]:
        keep = set(task_ids)
        return tuple((i, j) for i, j in self.pairs if i in keep and j in keep)


class StaticCostTable(BaseModel):
    """c_stat(task, alliance); a missing entry means the alliance is incapable"""
    model_config = ConfigDict(frozen=True)

    entries: Dict[Tuple[int, int], float] = Field(default_factory=dict)

    def cost(self, task_id: int, alliance_id: int) -> float:
        return self.entries.get((task_id, alliance_id), INCAPABLE)

    def is_capable(self, task_id: int, alliance_id: int) -> bool:
        return math.isfinite(self.cost(task_id, alliance_id))


class ObjectiveWeights(BaseModel):
    model_config = ConfigDict(frozen=True)

    w1: float = Field(ge=0)  # makespan
    w2: float = Field(ge=0)  # average finishing time
    w3: float = Field(ge=0)  # average driven distance

    @model_validator(mode='after')
    def at_least_one_positive(self):
        if not (self.w1 > 0 or self.w2 > 0 or self.w3 > 0):
            raise ValueError("at least one objective weight must be positive")
        return self

    @classmethod
    def from_tuple(cls, values) -> 'ObjectiveWeights':
        w1, w2, w3 = values
        return cls(w1=w1, w2=w2, w3=w3)

    @classmethod
    def parse(cls, text: str) -> 'ObjectiveWeights':
        """Parse the CLI form 'w1,w2,w3'"""
        parts = [p.strip() for p in text.split(',')]
        if len(parts) != 3:
            raise PlanInputError(f"expected three comma separated weights, got '{text}'")
        try:
            return cls.from_tuple([float(p) for p in parts])
        except ValueError as e:
            raise PlanInputError(f"invalid weights '{text}': {e}") from e

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.w1, self.w2, self.w3)


class ProblemClass(BaseModel):
    """Task mix: count_a tasks of type A and count_each_bcd of each of B, C, D"""
    model_config = ConfigDict(frozen=True)

    count_a: int = Field(ge=1)
    count_each_bcd: int = Field(ge=1)

    @classmethod
    def parse(cls, code: str) -> 'ProblemClass':
        match = PROBLEM_CLASS_CODE.match(code)
        if not match:
            raise PlanInputError(f"invalid problem class code '{code}' (expected e.g. 3A2BCD)")
        try:
            return cls(count_a=int(match.group(1)), count_each_bcd=int(match.group(2)))
        except ValueError as e:
            raise PlanInputError(f"invalid problem class code '{code}': {e}") from e

    @property
    def code(self) -> str:
        return f"{self.count_a}A{self.count_each_bcd}BCD"

    @property
    def total_tasks(self) -> int:
        return self.count_a + 3 * self.count_each_bcd


class InstanceMeta(BaseModel):
    model_config = ConfigDict(frozen=True)

    format_version: int = 1
    seed: Optional[int] = None
    problem_class: Optional[str] = None


class Instance(BaseModel):
    """Complete problem input: robots, tasks, alliances, c_stat, precedence, weights"""
    model_config = ConfigDict(frozen=True)

    meta: InstanceMeta = Field(default_factory=InstanceMeta)
    robots: Tuple[Robot, ...]
    tasks: Tuple[Task, ...] = ()
    alliances: Tuple[Alliance, ...]
    static_costs: StaticCostTable = Field(default_factory=StaticCostTable)
    precedence: PrecedenceSet = Field(default_factory=PrecedenceSet)
    weights: ObjectiveWeights

    _robot_index: Dict[int, Robot] = PrivateAttr(default_factory=dict)
    _task_index: Dict[int, Task] = PrivateAttr(default_factory=dict)
    _alliance_index: Dict[int, Alliance] = PrivateAttr(default_factory=dict)

    def model_post_init(self, __context: Any) -> None:
        self._robot_index = {r.id: r for r in self.robots}
        self._task_index = {t.id: t for t in self.tasks}
        self._alliance_index = {a.id: a for a in self.alliances}

    @property
    def robot_ids(self) -> List[int]:
        return sorted(self._robot_index)

    @property
    def task_ids(self) -> List[int]:
        return sorted(self._task_index)

    def robot(self, robot_id: int) -> Robot:
        try:
            return self._robot_index[robot_id]
        except KeyError:
            raise PlanInputError(f"unknown robot id {robot_id}") from None

    def task(self, task_id: int) -> Task:
        try:
            return self._task_index[task_id]
        except KeyError:
            raise PlanInputError(f"unknown task id {task_id}") from None

    def alliance(self, alliance_id: int) -> Alliance:
        try:
            return self._alliance_index[alliance_id]
        except KeyError:
            raise PlanInputError(f"unknown alliance id {alliance_id}") from None

    def has_task(self, task_id: int) -> bool:
        return task_id in self._task_index

    def has_robot(self, robot_id: int) -> bool:
        return robot_id in self._robot_index

    def static_cost(self, task_id: int, alliance_id: int) -> float:
        return self.static_costs.cost(task_id, alliance_id)

    def capable_alliances(self, task_id: int) -> List[Alliance]:
        """Alliances with finite static cost for the task, in declaration order"""
        return [a for a in self.alliances if self.static_costs.is_capable(task_id, a.id)]

    def predecessors(self, task_id: int) -> Tuple[int, ...]:
        return self.precedence.predecessors_of(task_id)

    def with_weights(self, weights: ObjectiveWeights) -> 'Instance':
        return self.model_copy(update={'weights': weights})


class GeneratorConfig(BaseModel):
    """Benchmark instance request: problem class, 64-bit seed and objective weights"""
    model_config = ConfigDict(frozen=True)

    problem_class: ProblemClass
    seed: int = Field(ge=0, lt=2 ** 64)
    weights: Optional[ObjectiveWeights] = None
