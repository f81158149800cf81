import logging
import math
from collections import Counter
from typing import List, Optional

from app.models.instance_models import Instance
from app.services.feasibility import is_acyclic
from app.utils.errors import Diagnostic, InstanceValidationError

logger = logging.getLogger(__name__)


def _duplicates(values) -> List:
    return sorted(v for v, n in Counter(values).items() if n > 1)


def validate_instance(instance: Instance) -> List[Diagnostic]:
    """Check ids, references, costs, task capability and acyclic precedence"""
    problems: List[Diagnostic] = []

    robot_ids = [r.id for r in instance.robots]
    for dup in _duplicates(robot_ids):
        problems.append(Diagnostic('robots', f'id {dup}', 'duplicate_id', f"robot id {dup} declared twice"))
    if not robot_ids:
        problems.append(Diagnostic('robots', 'robots', 'schema', "at least one robot is required"))

    task_ids = [t.id for t in instance.tasks]
    for dup in _duplicates(task_ids):
        problems.append(Diagnostic('tasks', f'id {dup}', 'duplicate_id', f"task id {dup} declared twice"))
    if sorted(set(task_ids)) != list(range(1, len(set(task_ids)) + 1)):
        problems.append(Diagnostic('tasks', 'ids', 'noncontiguous_ids',
                                   f"task ids must be contiguous from 1, got {sorted(set(task_ids))}"))

    known_robots = set(robot_ids)
    for dup in _duplicates(a.id for a in instance.alliances):
        problems.append(Diagnostic('alliances', f'id {dup}', 'duplicate_id', f"alliance id {dup} declared twice"))
    seen_members = {}
    for index, alliance in enumerate(instance.alliances):
        unknown = sorted(alliance.members - known_robots)
        if unknown:
            problems.append(Diagnostic('alliances', f'alliances[{index}]', 'unknown_id',
                                       f"alliance {alliance.id} references unknown robots {unknown}"))
        if alliance.members in seen_members:
            problems.append(Diagnostic('alliances', f'alliances[{index}]', 'duplicate_alliance',
                                       f"alliance {alliance.id} repeats the members of alliance "
                                       f"{seen_members[alliance.members]}"))
        seen_members.setdefault(alliance.members, alliance.id)

    known_tasks = set(task_ids)
    known_alliances = {a.id for a in instance.alliances}
    for (task, alliance), cost in sorted(instance.static_costs.entries.items()):
        where = f'task {task} / alliance {alliance}'
        if task not in known_tasks:
            problems.append(Diagnostic('static_costs', where, 'unknown_id', f"unknown task {task}"))
        if alliance not in known_alliances:
            problems.append(Diagnostic('static_costs', where, 'unknown_id', f"unknown alliance {alliance}"))
        if math.isnan(cost) or cost < 0:
            problems.append(Diagnostic('static_costs', where, 'negative_cost',
                                       f"static cost must be a nonnegative number or 'inf', got {cost}"))

    for task in sorted(known_tasks):
        if not instance.capable_alliances(task):
            problems.append(Diagnostic('static_costs', f'task {task}', 'no_capable_alliance',
                                       f"task {task} has no capable alliance (all static costs infinite)"))

    pairs = instance.precedence.pairs
    for index, (i, j) in enumerate(pairs):
        where = f'precedence[{index}]'
        if i == j:
            problems.append(Diagnostic('precedence', where, 'self_precedence', f"task {i} cannot precede itself"))
        for t in (i, j):
            if t not in known_tasks:
                problems.append(Diagnostic('precedence', where, 'unknown_id', f"unknown task {t}"))
    for dup in _duplicates(pairs):
        problems.append(Diagnostic('precedence', f'pair {dup}', 'duplicate_precedence',
                                   f"precedence pair {dup} listed twice"))

    successors = {t: [] for t in known_tasks}
    for i, j in pairs:
        if i in successors and j in successors:
            successors[i].append(j)
    result = is_acyclic(successors)
    if not result.acyclic:
        problems.append(Diagnostic('precedence', 'tasks ' + ", ".join(str(t) for t in result.witness),
                                   'cyclic_precedence',
                                   "precedence relation is cyclic; it must be acyclic"))
    return problems


def ensure_valid(instance: Instance, source: Optional[str] = None) -> Instance:
    problems = validate_instance(instance)
    if problems:
        logger.error(f"Instance {source or ''} failed validation with {len(problems)} problem(s)")
        raise InstanceValidationError(problems, source)
    return instance
