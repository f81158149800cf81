from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from app.models.plan_models import ObjectiveBreakdown


class InstanceReference(BaseModel):
    path: str  # relative to the plan file's directory
    sha256: str


class SolverInfo(BaseModel):
    algorithm: str  # construct, construct+relocate or exact
    sweeps: int = 0
    candidates_evaluated: int = 0
    j_initial: Optional[float] = None
    seed: Optional[int] = None
    max_sweeps: Optional[int] = None
    min_improvement: float = 0.0


class ScheduleEntry(BaseModel):
    vertex: str
    arrival: float
    start: float
    finish: float
    wait: float
    travel_time: float
    distance: float


class RobotSummary(BaseModel):
    finishing_time: float
    distance: float
    travel_time: float
    wait: float
    task_time: float


class WeightsDocument(BaseModel):
    w1: float
    w2: float
    w3: float


class PlanDocument(BaseModel):
    """Solved plan as written to disk; keys of the dicts are robot or task ids as strings"""
    format_version: int = 1
    instance: InstanceReference
    solver: SolverInfo
    weights: WeightsDocument
    sequences: Dict[str, List[str]]
    assignment: Dict[str, int]
    schedule: Dict[str, List[ScheduleEntry]]
    robots: Dict[str, RobotSummary] = Field(default_factory=dict)
    objective: ObjectiveBreakdown


class VerificationReport(BaseModel):
    ok: bool
    feasible: bool
    objective_matches: bool
    schedule_matches: bool
    checksum_matches: bool
    stored_total: float
    recomputed_total: Optional[float] = None
    problems: List[str] = Field(default_factory=list)
