import logging
import math
from typing import List, Optional

import pandas as pd

from app.models.instance_models import Instance
from app.models.plan_models import MissionPlan, Schedule, Vertex, VertexKind
from app.services.plan_graph import augment
from app.utils.errors import PlanInputError
from config import config

logger = logging.getLogger(__name__)

ROBOT_PALETTE = ('#1f77b4', '#d62728', '#2ca02c', '#ff7f0e', '#9467bd', '#8c564b', '#e377c2', '#17becf')
PRECEDENCE_STYLE = 'color="black", style=dashed, penwidth=1.5'
GANTT_COLUMNS = ['robot', 'segment_kind', 'task', 't_start', 't_end']

_SHAPES = {VertexKind.START: 'pentagon', VertexKind.TASK: 'ellipse', VertexKind.END: 'triangle'}


def robot_color(robot_id: int) -> str:
    return ROBOT_PALETTE[(robot_id - 1) % len(ROBOT_PALETTE)]


def _node_label(v: Vertex, instance: Instance, schedule: Optional[Schedule]) -> str:
    if not v.is_task:
        return f'"{v.label}"'
    type_label = instance.task(v.ref).type_label
    label = f"t<SUB>{v.ref}</SUB><SUP>{type_label}</SUP>"
    if schedule is not None and v.ref in schedule.task_windows:
        start, finish = schedule.task_windows[v.ref]
        label += f"<BR/>[{start:.1f}, {finish:.1f}]"
    return f"<{label}>"


def export_dot(plan: MissionPlan, instance: Instance, schedule: Optional[Schedule] = None) -> str:
    """Graphviz text for M+: one colored path per robot, precedence arcs black and dashed"""
    augmented = augment(plan, instance.precedence)
    lines = [
        'digraph mission_plan {',
        '  rankdir=LR;',
        '  node [fontname="Helvetica"];',
    ]
    for v in augmented.vertices():
        lines.append(f'  "{v.label}" [shape={_SHAPES[v.kind]}, label={_node_label(v, instance, schedule)}];')
    for u, w, robot in augmented.path_edges():
        lines.append(f'  "{u.label}" -> "{w.label}" [color="{robot_color(robot)}", label="r{robot}"];')
    for u, w in augmented.precedence_edges():
        lines.append(f'  "{u.label}" -> "{w.label}" [{PRECEDENCE_STYLE}];')
    lines.append('}')
    return "\n".join(lines) + "\n"


def gantt_frame(schedule: Schedule) -> pd.DataFrame:
    """Travel, wait and task segments per robot, in path order"""
    rows: List[dict] = []
    for robot in schedule.robot_ids:
        clock = 0.0
        for entry in schedule.timeline(robot).entries:
            if entry.vertex.kind is VertexKind.START:
                continue
            task = entry.vertex.ref if entry.vertex.is_task else None
            if entry.travel_time > 0:
                rows.append({'robot': robot, 'segment_kind': 'travel', 'task': task,
                             't_start': clock, 't_end': entry.arrival_time})
            if entry.wait_time > 0:
                rows.append({'robot': robot, 'segment_kind': 'wait', 'task': task,
                             't_start': entry.arrival_time, 't_end': entry.start_time})
            if entry.vertex.is_task:
                rows.append({'robot': robot, 'segment_kind': 'task', 'task': task,
                             't_start': entry.start_time, 't_end': entry.finish_time})
            clock = entry.finish_time

    frame = pd.DataFrame(rows, columns=GANTT_COLUMNS)
    frame['task'] = frame['task'].astype('Int64')
    frame['robot'] = frame['robot'].astype('int64')
    return frame


def check_tiling(frame: pd.DataFrame, schedule: Schedule) -> None:
    """Segments of every robot must cover [0, finishing time] without gaps or overlaps"""
    tolerance = config.REL_TOLERANCE
    for robot in schedule.robot_ids:
        segments = frame[frame['robot'] == robot]
        clock = 0.0
        for t_start, t_end in zip(segments['t_start'], segments['t_end']):
            if not math.isclose(t_start, clock, rel_tol=tolerance, abs_tol=tolerance) or t_end < t_start:
                raise PlanInputError(f"Gantt segments of robot {robot} do not tile at t={clock:.6f}")
            clock = t_end
        finishing = schedule.timeline(robot).finishing_time
        if not math.isclose(clock, finishing, rel_tol=tolerance, abs_tol=tolerance):
            raise PlanInputError(f"Gantt segments of robot {robot} end at {clock:.6f}, expected {finishing:.6f}")


def export_gantt(schedule: Schedule) -> str:
    frame = gantt_frame(schedule)
    check_tiling(frame, schedule)
    logger.debug(f"Gantt export with {len(frame)} segments")
    return frame.to_csv(index=False, lineterminator='\n')
