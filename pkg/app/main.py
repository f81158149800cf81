import argparse
import logging
import sys
from typing import List, Optional

from app.models.instance_models import GeneratorConfig, ObjectiveWeights, ProblemClass
from app.models.plan_models import SearchConfig
from app.services.benchmark import run_benchmark
from app.services.constructive_heuristic import ConstructiveHeuristic
from app.services.exact_solver import solve_exact
from app.services.feasibility import check_feasibility
from app.services.instance_generator import generate
from app.services.local_search import LocalSearch
from app.services.objective import ObjectiveEvaluator
from app.services.plan_graph import augment
from app.services.verification import verify_plan
from app.utils.errors import BenchmarkAbortError, InfeasiblePlanError, MissionPlannerError, PlanInputError
from app.utils.exporters import export_dot, export_gantt
from app.utils.file_handlers import (
    FileHandler,
    build_plan_document,
    parse_instance,
    parse_plan,
    plan_from_document,
    resolve_instance_path,
    serialize_plan,
    write_text,
)
from config import config

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def problem_class_arg(text: str) -> ProblemClass:
    try:
        return ProblemClass.parse(text)
    except PlanInputError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def class_list_arg(text: str) -> List[ProblemClass]:
    return [problem_class_arg(code) for code in text.split(',') if code.strip()]


def weights_arg(text: str) -> ObjectiveWeights:
    try:
        return ObjectiveWeights.parse(text)
    except PlanInputError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def seed_arg(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got '{text}'") from None
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must lie in [0, 2^64), got {value}")
    return value


def nonnegative_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got '{text}'") from None
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {value}")
    return value


def cmd_generate(args) -> int:
    handler = FileHandler(args.out)
    for k in range(args.count):
        seed = args.seed + k
        instance = generate(GeneratorConfig(problem_class=args.problem_class, seed=seed, weights=args.weights))
        path = handler.save_instance(instance, f"{args.problem_class.code}_{seed}.json")
        print(path)
    logger.info(f"✅ Generated {args.count} {args.problem_class.code} instance(s) in {args.out}")
    return EXIT_OK


def cmd_solve(args) -> int:
    instance = parse_instance(args.instance)
    logger.info(f"📄 Loaded {args.instance}: {len(instance.tasks)} tasks, {len(instance.robots)} robots")
    weights = args.weights or instance.weights
    instance = instance.with_weights(weights)

    plan, breakdown = ConstructiveHeuristic(instance).construct()
    stats = None
    algorithm = 'construct'
    search = SearchConfig(max_sweeps=args.max_sweeps, min_improvement=args.min_improvement)
    if not args.no_improve:
        plan, breakdown, stats = LocalSearch(instance, search).improve(plan)
        algorithm = 'construct+relocate'

    breakdown, schedule = ObjectiveEvaluator(instance).evaluate_with_schedule(augment(plan, instance.precedence))
    document = build_plan_document(args.instance, args.out, instance, plan, schedule, breakdown, weights,
                                   algorithm, stats, search.max_sweeps, search.min_improvement)
    write_text(args.out, serialize_plan(document))
    print(f"J={breakdown.total:.6f} (J1={breakdown.j1:.3f}, J2={breakdown.j2:.3f}, J3={breakdown.j3:.3f})")
    print(plan.describe())
    logger.info(f"✅ Plan written to {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    document = parse_plan(args.plan)
    instance_path = args.instance or resolve_instance_path(args.plan, document)
    instance = parse_instance(instance_path)
    report = verify_plan(document, instance, instance_path)
    for problem in report.problems:
        print(f"  - {problem}")
    if not report.ok:
        logger.error(f"❌ Plan {args.plan} failed verification")
        print("FAILED")
        return EXIT_FAILURE
    print(f"OK J={report.recomputed_total:.6f}")
    return EXIT_OK


def cmd_export(args) -> int:
    document = parse_plan(args.plan)
    instance_path = args.instance or resolve_instance_path(args.plan, document)
    instance = parse_instance(instance_path)
    plan = plan_from_document(document)
    verdict = check_feasibility(plan, instance)
    if not verdict.feasible:
        raise InfeasiblePlanError(f"{args.plan}: cannot export plan, {verdict.summary()}", verdict)
    weights = ObjectiveWeights(w1=document.weights.w1, w2=document.weights.w2, w3=document.weights.w3)
    _, schedule = ObjectiveEvaluator(instance, weights).evaluate_with_schedule(plan)

    text = export_dot(plan, instance, schedule) if args.format == 'dot' else export_gantt(schedule)
    if args.out:
        write_text(args.out, text)
        logger.info(f"✅ {args.format} export written to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_exact(args) -> int:
    instance = parse_instance(args.instance)
    weights = args.weights or instance.weights
    instance = instance.with_weights(weights)
    result = solve_exact(instance, max_tasks=args.max_tasks)
    print(f"J*={result.best_objective.total:.6f} ({result.plans_enumerated} plans, "
          f"{result.feasible_plans} feasible)")
    print(result.best_plan.describe())
    if args.out:
        breakdown, schedule = ObjectiveEvaluator(instance).evaluate_with_schedule(result.best_plan)
        document = build_plan_document(args.instance, args.out, instance, result.best_plan, schedule,
                                       breakdown, weights, 'exact')
        write_text(args.out, serialize_plan(document))
    return EXIT_OK


def cmd_benchmark(args) -> int:
    search = SearchConfig(max_sweeps=args.max_sweeps)
    try:
        report = run_benchmark(args.classes, args.count, args.seed, args.out, n_jobs=args.n_jobs,
                               record_timings=not args.no_timings, weights=args.weights, search=search)
    except BenchmarkAbortError as e:
        print(f"benchmark aborted: {e}; reproduction bundle in {e.bundle_path}", file=sys.stderr)
        return EXIT_FAILURE
    summary = report[report['row_type'] == 'summary']
    for _, row in summary.iterrows():
        print(f"{row['class']}: mean improvement {row['improvement_percent']:.2f}% "
              f"(min {row['improvement_min']:.2f}%, max {row['improvement_max']:.2f}%)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='mission-planner',
        description='Multi-robot task allocation with coalitions and precedence constraints',
    )
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('generate', help='Generate benchmark instances')
    p.add_argument('--class', dest='problem_class', type=problem_class_arg, required=True,
                   help='Problem class code, e.g. 3A2BCD')
    p.add_argument('--count', type=positive_int, default=1)
    p.add_argument('--seed', type=seed_arg, default=config.DEFAULT_SEED)
    p.add_argument('--out', required=True, help='Output directory')
    p.add_argument('--weights', type=weights_arg, default=None, help='w1,w2,w3')
    p.set_defaults(handler=cmd_generate)

    p = sub.add_parser('solve', help='Construct and improve a mission plan')
    p.add_argument('instance')
    p.add_argument('--out', required=True, help='Plan file to write')
    p.add_argument('--no-improve', action='store_true', help='Skip the local search')
    p.add_argument('--weights', type=weights_arg, default=None, help='w1,w2,w3 (overrides the instance)')
    p.add_argument('--max-sweeps', type=positive_int, default=config.DEFAULT_MAX_SWEEPS)
    p.add_argument('--min-improvement', type=nonnegative_float, default=config.DEFAULT_MIN_IMPROVEMENT)
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser('verify', help='Re-check a plan file against its instance')
    p.add_argument('plan')
    p.add_argument('--instance', default=None, help='Instance file (default: the one referenced by the plan)')
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser('export', help='Export a plan as DOT graph or Gantt CSV')
    p.add_argument('plan')
    p.add_argument('--format', choices=['dot', 'gantt'], required=True)
    p.add_argument('--instance', default=None)
    p.add_argument('--out', default=None, help='Output file (default: stdout)')
    p.set_defaults(handler=cmd_export)

    p = sub.add_parser('exact', help='Brute-force optimum for tiny instances')
    p.add_argument('instance')
    p.add_argument('--weights', type=weights_arg, default=None)
    p.add_argument('--max-tasks', type=positive_int, default=config.ORACLE_MAX_TASKS)
    p.add_argument('--out', default=None, help='Optional plan file for the optimum')
    p.set_defaults(handler=cmd_exact)

    p = sub.add_parser('benchmark', help='Run the evaluation protocol and write a CSV report')
    p.add_argument('--classes', type=class_list_arg, required=True, help='Comma separated class codes')
    p.add_argument('--count', type=positive_int, default=config.DEFAULT_BENCHMARK_COUNT)
    p.add_argument('--seed', type=seed_arg, default=config.DEFAULT_SEED)
    p.add_argument('--out', required=True, help='CSV report path')
    p.add_argument('--n-jobs', type=int, default=config.N_JOBS)
    p.add_argument('--no-timings', action='store_true', help='Leave timing columns blank')
    p.add_argument('--weights', type=weights_arg, default=None)
    p.add_argument('--max-sweeps', type=positive_int, default=config.DEFAULT_MAX_SWEEPS)
    p.set_defaults(handler=cmd_benchmark)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except MissionPlannerError as e:
        logger.error(f"❌ {args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as e:
        logger.error(f"❌ {args.command} failed: {e}")
        print(f"error: {e.strerror or e}: {getattr(e, 'filename', '') or ''}", file=sys.stderr)
        return EXIT_USAGE
