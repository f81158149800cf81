import logging
import os
import time
from typing import List, Optional, Sequence

import networkx as nx
import pandas as pd
from joblib import Parallel, delayed

from app.models.instance_models import GeneratorConfig, ObjectiveWeights, ProblemClass
from app.models.plan_models import SearchConfig
from app.services.constructive_heuristic import ConstructiveHeuristic
from app.services.feasibility import check_feasibility
from app.services.instance_generator import generate
from app.services.local_search import LocalSearch
from app.services.objective import breakdown_from_schedule
from app.services.plan_graph import as_digraph, augment
from app.services.schedule_simulator import simulate
from app.utils.errors import BenchmarkAbortError
from app.utils.file_handlers import FileHandler, build_plan_document
from config import config

logger = logging.getLogger(__name__)

REPORT_COLUMNS = [
    'row_type', 'class', 'seed', 'j_init', 'j_final', 'improvement_percent', 'improvement_min',
    'improvement_max', 'construct_ms', 'improve_ms', 'sweeps', 'feasible_init', 'feasible_final',
]


def _feasible(plan, instance) -> bool:
    verdict = check_feasibility(plan, instance)
    return verdict.feasible and nx.is_directed_acyclic_graph(as_digraph(augment(plan, instance.precedence)))


def run_instance(problem_class: ProblemClass, seed: int, weights: Optional[ObjectiveWeights] = None,
                 search: Optional[SearchConfig] = None) -> dict:
    """generate -> construct -> improve -> verify for one seed; failing plans are returned for the bundle"""
    instance = generate(GeneratorConfig(problem_class=problem_class, seed=seed, weights=weights))

    started = time.perf_counter()
    initial, initial_breakdown = ConstructiveHeuristic(instance).construct()
    construct_ms = (time.perf_counter() - started) * 1000.0

    started = time.perf_counter()
    final, final_breakdown, stats = LocalSearch(instance, search).improve(initial)
    improve_ms = (time.perf_counter() - started) * 1000.0

    feasible_init = _feasible(initial, instance)
    feasible_final = _feasible(final, instance)
    row = {
        'row_type': 'instance',
        'class': problem_class.code,
        'seed': seed,
        'j_init': initial_breakdown.total,
        'j_final': final_breakdown.total,
        'improvement_percent': stats.improvement_percent,
        'construct_ms': construct_ms,
        'improve_ms': improve_ms,
        'sweeps': stats.sweeps,
        'feasible_init': feasible_init,
        'feasible_final': feasible_final,
    }
    failure = None
    if not (feasible_init and feasible_final):
        failure = (instance, initial if not feasible_init else final, stats)
    return {'row': row, 'failure': failure}


def write_bundle(output_path: str, failure) -> str:
    """Instance and offending plan next to the report, for reproduction"""
    instance, plan, stats = failure
    name = f"{instance.meta.problem_class}_seed{instance.meta.seed}"
    handler = FileHandler(os.path.join(os.path.dirname(os.path.abspath(output_path)), 'repro_' + name))
    instance_path = handler.save_instance(instance, 'instance.json')
    try:
        schedule = simulate(plan, instance)
        breakdown = breakdown_from_schedule(schedule, instance.weights, len(instance.robots))
        document = build_plan_document(instance_path, handler.path('plan.json'), instance, plan, schedule,
                                       breakdown, instance.weights, 'construct+relocate', stats)
        handler.save_plan(document, 'plan.json')
    except Exception as e:
        logger.error(f"Could not simulate offending plan, writing sequences only: {e}")
        handler.write_text('plan.txt', plan.describe() + "\n")
    return handler.output_folder


def summarize(frame: pd.DataFrame, classes: Sequence[str]) -> pd.DataFrame:
    rows = []
    for code in classes:
        part = frame[frame['class'] == code]
        rows.append({
            'row_type': 'summary',
            'class': code,
            'seed': None,
            'j_init': part['j_init'].mean(),
            'j_final': part['j_final'].mean(),
            'improvement_percent': part['improvement_percent'].mean(),
            'improvement_min': part['improvement_percent'].min(),
            'improvement_max': part['improvement_percent'].max(),
            'construct_ms': part['construct_ms'].mean(),
            'improve_ms': part['improve_ms'].mean(),
            'sweeps': part['sweeps'].mean(),
            'feasible_init': bool(part['feasible_init'].all()),
            'feasible_final': bool(part['feasible_final'].all()),
        })
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def run_benchmark(
    classes: Sequence[ProblemClass],
    instances_per_class: int,
    seed: int,
    output_path: Optional[str] = None,
    n_jobs: Optional[int] = None,
    record_timings: bool = True,
    weights: Optional[ObjectiveWeights] = None,
    search: Optional[SearchConfig] = None,
) -> pd.DataFrame:
    """
    Evaluation protocol over problem classes.

    Instance k of every class uses seed + k. Returns the report with one row per
    instance followed by one summary row per class and writes it as CSV when an
    output path is given.
    """
    jobs = config.N_JOBS if n_jobs is None else n_jobs
    tasks = [(pc, seed + k) for pc in classes for k in range(instances_per_class)]
    logger.info(f"🚀 Benchmark: {len(classes)} class(es) x {instances_per_class} instance(s), n_jobs={jobs}")

    results = Parallel(n_jobs=jobs)(delayed(run_instance)(pc, s, weights, search) for pc, s in tasks)

    for result in results:
        if result['failure'] is not None:
            row = result['row']
            bundle = write_bundle(output_path or os.path.join(os.getcwd(), 'benchmark.csv'), result['failure'])
            logger.error(f"❌ Infeasible plan for {row['class']} seed {row['seed']}; bundle written to {bundle}")
            raise BenchmarkAbortError(
                f"infeasible plan for class {row['class']} seed {row['seed']}", bundle_path=bundle
            )

    rows: List[dict] = [r['row'] for r in results]
    frame = pd.DataFrame(rows, columns=REPORT_COLUMNS)
    if not record_timings:
        frame['construct_ms'] = float('nan')
        frame['improve_ms'] = float('nan')
    report = pd.concat([frame, summarize(frame, [pc.code for pc in classes])], ignore_index=True)
    report['seed'] = report['seed'].astype('Int64')

    if output_path:
        report.to_csv(output_path, index=False, lineterminator='\n')
        logger.info(f"✅ Benchmark report written to {output_path}")
    return report
