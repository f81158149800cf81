import logging
import math
from typing import List, Optional

import networkx as nx

from app.models.document_models import PlanDocument, VerificationReport
from app.models.instance_models import Instance, ObjectiveWeights
from app.models.plan_models import ViolationKind
from app.services.feasibility import check_feasibility
from app.services.objective import ObjectiveEvaluator
from app.services.plan_graph import as_digraph, augment
from app.utils.errors import InfeasiblePlanError, PlanInputError
from app.utils.file_handlers import file_sha256, plan_from_document
from config import config

logger = logging.getLogger(__name__)


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=config.REL_TOLERANCE, abs_tol=config.REL_TOLERANCE)


def verify_plan(document: PlanDocument, instance: Instance, instance_path: Optional[str] = None) -> VerificationReport:
    """
    Independently re-check a stored plan against its instance.

    Feasibility is decided twice (own peeling test and networkx), then the plan
    is re-simulated and the stored schedule and objective must match within the
    relative tolerance.
    """
    problems: List[str] = []

    checksum_matches = True
    if instance_path is not None:
        actual = file_sha256(instance_path)
        if actual != document.instance.sha256:
            checksum_matches = False
            problems.append(f"instance checksum {actual[:12]} differs from recorded {document.instance.sha256[:12]}")

    try:
        plan = plan_from_document(document)
        verdict = check_feasibility(plan, instance)
    except (PlanInputError, InfeasiblePlanError) as e:
        problems.append(f"plan structure invalid: {e}")
        return VerificationReport(ok=False, feasible=False, objective_matches=False, schedule_matches=False,
                                  checksum_matches=checksum_matches, stored_total=document.objective.total,
                                  problems=problems)

    augmented = augment(plan, instance.precedence)
    graph_acyclic = nx.is_directed_acyclic_graph(as_digraph(augmented))
    if graph_acyclic != all(v.kind is not ViolationKind.CYCLE for v in verdict.violations):
        problems.append("acyclicity checks disagree")
    feasible = verdict.feasible and graph_acyclic
    if not feasible:
        problems.append(verdict.summary())
        return VerificationReport(ok=False, feasible=False, objective_matches=False, schedule_matches=False,
                                  checksum_matches=checksum_matches, stored_total=document.objective.total,
                                  problems=problems)

    weights = ObjectiveWeights(w1=document.weights.w1, w2=document.weights.w2, w3=document.weights.w3)
    breakdown, schedule = ObjectiveEvaluator(instance, weights).evaluate_with_schedule(augmented)

    stored = document.objective
    objective_matches = all(
        _close(getattr(stored, name), getattr(breakdown, name)) for name in ('j1', 'j2', 'j3', 'total')
    )
    if not objective_matches:
        problems.append(f"stored objective {stored.total:.9g} differs from recomputed {breakdown.total:.9g}")

    schedule_matches = set(document.schedule) == {str(r) for r in schedule.robot_ids}
    for robot in schedule.robot_ids:
        stored_entries = document.schedule.get(str(robot), [])
        entries = schedule.timeline(robot).entries
        if len(stored_entries) != len(entries):
            schedule_matches = False
            continue
        for stored_entry, entry in zip(stored_entries, entries):
            same = (stored_entry.vertex == entry.vertex.label
                    and _close(stored_entry.arrival, entry.arrival_time)
                    and _close(stored_entry.start, entry.start_time)
                    and _close(stored_entry.finish, entry.finish_time)
                    and _close(stored_entry.wait, entry.wait_time))
            if not same:
                schedule_matches = False
                problems.append(f"schedule of robot {robot} differs at {entry.vertex.label}")
                break
    if not schedule_matches and not any(p.startswith("schedule") for p in problems):
        problems.append("stored schedule does not cover the plan's robots")

    ok = feasible and objective_matches and schedule_matches and checksum_matches
    logger.info(f"Verification {'passed' if ok else 'failed'}: J stored={stored.total:.6f} "
                f"recomputed={breakdown.total:.6f}")
    return VerificationReport(ok=ok, feasible=feasible, objective_matches=objective_matches,
                              schedule_matches=schedule_matches, checksum_matches=checksum_matches,
                              stored_total=stored.total, recomputed_total=breakdown.total, problems=problems)
