import hashlib
import json
import logging
import math
import os
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from app.models.document_models import (
    InstanceReference,
    PlanDocument,
    RobotSummary,
    ScheduleEntry,
    SolverInfo,
    WeightsDocument,
)
from app.models.instance_models import (
    Alliance,
    Instance,
    InstanceMeta,
    ObjectiveWeights,
    PrecedenceSet,
    Robot,
    StaticCostTable,
    Task,
)
from app.models.plan_models import MissionPlan, ObjectiveBreakdown, Schedule, SearchStats, Vertex
from app.services.instance_validation import validate_instance
from app.utils.errors import Diagnostic, InstanceValidationError, PlanFileError, PlanInputError
from config import config

logger = logging.getLogger(__name__)

INF_TOKEN = "inf"
SECTIONS = ('meta', 'robots', 'tasks', 'alliances', 'static_costs', 'precedence', 'weights')


def _dumps(document: Any) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def _point(value) -> Optional[List[float]]:
    return None if value is None else [float(value[0]), float(value[1])]


def _cost_token(value: float):
    return value if math.isfinite(value) else INF_TOKEN


def file_sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, 'rb') as handle:
        for block in iter(lambda: handle.read(65536), b''):
            digest.update(block)
    return digest.hexdigest()


def instance_to_document(instance: Instance) -> Dict[str, Any]:
    """Plain dict in file layout; every task lists every alliance, 'inf' where incapable"""
    return {
        'meta': {
            'format_version': instance.meta.format_version,
            'seed': instance.meta.seed,
            'class': instance.meta.problem_class,
        },
        'robots': [
            {'id': r.id, 'start': _point(r.start_position), 'end': _point(r.end_position), 'speed': r.speed}
            for r in instance.robots
        ],
        'tasks': [
            {'id': t.id, 'type': t.type_label, 'position': _point(t.position)}
            for t in instance.tasks
        ],
        'alliances': [
            {'id': a.id, 'members': list(a.sorted_members)}
            for a in instance.alliances
        ],
        'static_costs': [
            {'task': t.id, 'costs': {str(a.id): _cost_token(instance.static_cost(t.id, a.id))
                                     for a in instance.alliances}}
            for t in instance.tasks
        ],
        'precedence': [[i, j] for i, j in instance.precedence.pairs],
        'weights': {'w1': instance.weights.w1, 'w2': instance.weights.w2, 'w3': instance.weights.w3},
    }


def serialize_instance(instance: Instance) -> str:
    return _dumps(instance_to_document(instance))


class _DocumentReader:
    """Turns a decoded instance document into model objects, collecting every problem"""

    def __init__(self, source: Optional[str]):
        self.source = source
        self.problems: List[Diagnostic] = []

    def fail(self, section: str, location: str, code: str, message: str):
        self.problems.append(Diagnostic(section, location, code, message))

    def items(self, document: Dict[str, Any], section: str) -> List[Any]:
        value = document.get(section, [])
        if not isinstance(value, list):
            self.fail(section, section, 'schema', f"section '{section}' must be a list")
            return []
        return value

    def objects(self, document: Dict[str, Any], section: str):
        for k, item in enumerate(self.items(document, section)):
            if isinstance(item, dict):
                yield f"{section}[{k}]", item
            else:
                self.fail(section, f"{section}[{k}]", 'schema', "entry must be an object")

    def build(self, section: str, location: str, factory, code: str = 'schema', **fields):
        try:
            return factory(**fields)
        except ValidationError as e:
            for error in e.errors():
                where = ".".join(str(p) for p in error['loc'])
                self.fail(section, location + (f".{where}" if where else ''), code, error['msg'])
        except (TypeError, ValueError) as e:
            self.fail(section, location, code, str(e))
        return None

    def cost(self, value, where: str) -> Optional[float]:
        if isinstance(value, str) and value.strip().lower() == INF_TOKEN:
            return math.inf
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail('static_costs', where, 'schema', f"cost must be a number or '{INF_TOKEN}', got {value!r}")
            return None
        return float(value)

    def read(self, document: Any) -> Instance:
        if not isinstance(document, dict):
            self.fail('document', 'root', 'schema', "instance document must be an object")
            raise InstanceValidationError(self.problems, self.source)
        for section in SECTIONS:
            if section not in document:
                self.fail(section, section, 'schema', f"missing section '{section}'")

        meta_doc = document.get('meta')
        meta_doc = meta_doc if isinstance(meta_doc, dict) else {}
        meta = self.build('meta', 'meta', InstanceMeta,
                          format_version=meta_doc.get('format_version', config.FORMAT_VERSION),
                          seed=meta_doc.get('seed'), problem_class=meta_doc.get('class'))
        if meta is not None and meta.format_version != config.FORMAT_VERSION:
            self.fail('meta', 'meta.format_version', 'schema',
                      f"unsupported format version {meta.format_version} (expected {config.FORMAT_VERSION})")

        robots = [
            self.build('robots', where, Robot, id=item.get('id'), start_position=item.get('start'),
                       end_position=item.get('end'), speed=item.get('speed'))
            for where, item in self.objects(document, 'robots')
        ]
        tasks = [
            self.build('tasks', where, Task, id=item.get('id'), type_label=item.get('type', ''),
                       position=item.get('position'))
            for where, item in self.objects(document, 'tasks')
        ]
        alliances = [
            self.build('alliances', where, Alliance, id=item.get('id'), members=item.get('members'))
            for where, item in self.objects(document, 'alliances')
        ]

        entries = {}
        for where, item in self.objects(document, 'static_costs'):
            task_id = item.get('task')
            if not isinstance(task_id, int) or isinstance(task_id, bool) or not isinstance(item.get('costs'), dict):
                self.fail('static_costs', where, 'schema', "entry must be {task: id, costs: {alliance: cost}}")
                continue
            for alliance_key, value in item['costs'].items():
                try:
                    alliance_id = int(alliance_key)
                except ValueError:
                    self.fail('static_costs', where, 'schema', f"alliance key '{alliance_key}' is not an id")
                    continue
                cost = self.cost(value, f"{where}.costs.{alliance_key}")
                if cost is not None:
                    entries[(task_id, alliance_id)] = cost

        pairs = []
        for k, item in enumerate(self.items(document, 'precedence')):
            if (not isinstance(item, list) or len(item) != 2
                    or not all(isinstance(x, int) and not isinstance(x, bool) for x in item)):
                self.fail('precedence', f"precedence[{k}]", 'schema', "entry must be a pair [i, j] of task ids")
                continue
            pairs.append((item[0], item[1]))

        weights = None
        weights_doc = document.get('weights')
        if isinstance(weights_doc, dict):
            weights = self.build('weights', 'weights', ObjectiveWeights, code='invalid_weights',
                                 w1=weights_doc.get('w1'), w2=weights_doc.get('w2'), w3=weights_doc.get('w3'))
        elif 'weights' in document:
            self.fail('weights', 'weights', 'schema', "section 'weights' must be an object {w1, w2, w3}")

        if self.problems:
            raise InstanceValidationError(self.problems, self.source)

        instance = Instance(
            meta=meta,
            robots=tuple(robots),
            tasks=tuple(tasks),
            alliances=tuple(alliances),
            static_costs=StaticCostTable(entries=entries),
            precedence=PrecedenceSet(pairs=tuple(pairs)),
            weights=weights,
        )
        self.problems.extend(validate_instance(instance))
        if self.problems:
            raise InstanceValidationError(self.problems, self.source)
        return instance


def parse_instance_text(text: str, source: Optional[str] = None) -> Instance:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceValidationError(
            [Diagnostic('document', f"line {e.lineno}, column {e.colno}", 'malformed_document', e.msg)], source
        ) from e
    return _DocumentReader(source).read(document)


def _read_utf8(path: str) -> str:
    with open(path, 'rb') as handle:
        return handle.read().decode('utf-8')


def parse_instance(path: str) -> Instance:
    try:
        text = _read_utf8(path)
    except UnicodeDecodeError as e:
        raise InstanceValidationError(
            [Diagnostic('document', f"byte {e.start}", 'malformed_document', f"not valid UTF-8: {e.reason}")], path
        ) from e
    return parse_instance_text(text, source=path)


def build_plan_document(
    instance_path: str,
    plan_path: str,
    instance: Instance,
    plan: MissionPlan,
    schedule: Schedule,
    breakdown: ObjectiveBreakdown,
    weights: ObjectiveWeights,
    algorithm: str,
    stats: Optional[SearchStats] = None,
    max_sweeps: Optional[int] = None,
    min_improvement: float = 0.0,
) -> PlanDocument:
    plan_dir = os.path.dirname(os.path.abspath(plan_path))
    reference = InstanceReference(
        path=os.path.relpath(os.path.abspath(instance_path), plan_dir).replace(os.sep, '/'),
        sha256=file_sha256(instance_path),
    )
    solver = SolverInfo(
        algorithm=algorithm,
        sweeps=stats.sweeps if stats else 0,
        candidates_evaluated=stats.candidates_evaluated if stats else 0,
        j_initial=stats.j_initial if stats else None,
        seed=instance.meta.seed,
        max_sweeps=max_sweeps,
        min_improvement=min_improvement,
    )
    schedule_doc = {
        str(r): [
            ScheduleEntry(vertex=e.vertex.label, arrival=e.arrival_time, start=e.start_time, finish=e.finish_time,
                          wait=e.wait_time, travel_time=e.travel_time, distance=e.travel_distance)
            for e in schedule.timeline(r).entries
        ]
        for r in plan.robot_ids
    }
    robots_doc = {
        str(r): RobotSummary(finishing_time=tl.finishing_time, distance=tl.total_distance,
                             travel_time=tl.total_travel_time, wait=tl.total_wait, task_time=tl.total_task_time)
        for r, tl in ((r, schedule.timeline(r)) for r in plan.robot_ids)
    }
    return PlanDocument(
        format_version=config.FORMAT_VERSION,
        instance=reference,
        solver=solver,
        weights=WeightsDocument(w1=weights.w1, w2=weights.w2, w3=weights.w3),
        sequences={str(r): [v.label for v in plan.sequence(r)] for r in plan.robot_ids},
        assignment={str(t): plan.assignment[t] for t in plan.task_ids},
        schedule=schedule_doc,
        robots=robots_doc,
        objective=breakdown,
    )


def serialize_plan(document: PlanDocument) -> str:
    return _dumps(document.model_dump(mode='json'))


def parse_plan(path: str) -> PlanDocument:
    try:
        return PlanDocument.model_validate(json.loads(_read_utf8(path)))
    except UnicodeDecodeError as e:
        raise PlanFileError(f"{path}: plan document is not valid UTF-8 at byte {e.start}: {e.reason}") from e
    except json.JSONDecodeError as e:
        raise PlanFileError(f"{path}: malformed plan document at line {e.lineno}, column {e.colno}: {e.msg}") from e
    except ValidationError as e:
        raise PlanFileError(f"{path}: plan document does not match the schema: {e}") from e


def plan_from_document(document: PlanDocument) -> MissionPlan:
    try:
        sequences = {int(r): tuple(Vertex.from_label(label) for label in labels)
                     for r, labels in document.sequences.items()}
        assignment = {int(t): a for t, a in document.assignment.items()}
    except (ValueError, PlanInputError) as e:
        raise PlanFileError(f"plan document has invalid sequences or assignment: {e}") from e
    return MissionPlan(sequences, assignment)


def resolve_instance_path(plan_path: str, document: PlanDocument) -> str:
    return os.path.normpath(os.path.join(os.path.dirname(os.path.abspath(plan_path)), document.instance.path))


class FileHandler:
    """Reads and writes instance and plan files below one output folder"""

    def __init__(self, output_folder: str):
        self.output_folder = output_folder
        os.makedirs(output_folder, exist_ok=True)
        logger.debug(f"File handler initialized with output folder: {output_folder}")

    def path(self, filename: str) -> str:
        return os.path.join(self.output_folder, filename)

    def write_text(self, filename: str, text: str) -> str:
        file_path = self.path(filename)
        try:
            with open(file_path, 'w', encoding='utf-8', newline='\n') as handle:
                handle.write(text)
        except OSError as e:
            logger.error(f"Error writing {file_path}: {e}")
            raise
        logger.debug(f"File saved: {file_path}")
        return file_path

    def save_instance(self, instance: Instance, filename: str) -> str:
        return self.write_text(filename, serialize_instance(instance))

    def save_plan(self, document: PlanDocument, filename: str) -> str:
        return self.write_text(filename, serialize_plan(document))


def write_text(path: str, text: str) -> str:
    folder = os.path.dirname(os.path.abspath(path))
    return FileHandler(folder).write_text(os.path.basename(path), text)
