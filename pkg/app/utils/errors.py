from dataclasses import dataclass
from typing import List, Optional


class MissionPlannerError(Exception):
    """Base class for every error raised by the planner"""


class PlanInputError(MissionPlannerError, ValueError):
    """Unknown ids, out-of-range indices or parameters"""


class InfeasiblePlanError(MissionPlannerError):
    """A plan violates the feasibility criterion where a feasible one is required"""

    def __init__(self, message: str, verdict=None):
        super().__init__(message)
        self.verdict = verdict


@dataclass(frozen=True)
class Diagnostic:
    section: str
    location: str
    code: str
    message: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.section} @ {self.location}: {self.message}"


class InstanceValidationError(MissionPlannerError):
    def __init__(self, diagnostics: List[Diagnostic], source: Optional[str] = None):
        self.diagnostics = list(diagnostics)
        self.source = source
        header = f"Instance {source} is invalid" if source else "Instance is invalid"
        lines = "\n".join(f"  {d}" for d in self.diagnostics)
        super().__init__(f"{header} ({len(self.diagnostics)} problem(s)):\n{lines}")

    @property
    def codes(self) -> List[str]:
        return [d.code for d in self.diagnostics]


class AssumptionViolationError(MissionPlannerError):
    """Construction found an executable task without any capable alliance"""


class OracleLimitError(MissionPlannerError):
    pass


class OracleInternalError(MissionPlannerError):
    pass


class PlanFileError(MissionPlannerError):
    """Plan file is inconsistent with its instance or with re-simulation"""


class BenchmarkAbortError(MissionPlannerError):
    def __init__(self, message: str, bundle_path: Optional[str] = None):
        super().__init__(message)
        self.bundle_path = bundle_path
