"""
Command-line front end.

Exit codes: 0 when a stable configuration was found (or verified), 1 when
none was, 2 on usage or input errors.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from .baselines import DEFAULT_FULLSCAN_TIMEOUT, DEFAULT_SEARCH_TIMEOUT, SearchBudget, SearchStatus, oracle_enumerate
from .errors import BalancerError
from .experiment import DEFAULT_BASE_SEED, DEFAULT_RUNS, ExperimentPlan, render_report, run_experiment
from .model import (
    Scenario, is_stable, max_transformation_cost, overload, remaining_by_node, transformation_cost,
)
from .scenarios import (
    REFERENCE_LAYOUTS, builtin_scenario, parse_assignment, parse_scenario,
    random_scenario, serialize_assignment, serialize_scenario,
)
from .strategies import get_strategy, strategy_names
from .utils import __log__, format_vector, split_csv

EXIT_STABLE = 0
EXIT_UNSTABLE = 1
EXIT_INPUT_ERROR = 2

DEFAULT_SOLVE_STRATEGIES = 'ijiids08'
DEFAULT_PAPER_STRATEGIES = 'fullscan,ijiids08,greedy,balance'
AGENT_STRATEGIES = ('ijiids08', 'kesamsta07')


def strategy_list(value: str) -> List[str]:
    names = split_csv(value)
    if not names:
        raise argparse.ArgumentTypeError("expected at least one strategy name")
    for name in names:
        try:
            get_strategy(name)
        except BalancerError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return [name.lower() for name in names]


def positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {value!r}") from None
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value!r}")
    return number


def positive_float(value: str) -> float:
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number {value!r}") from None
    if not number > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {value!r}")
    return number


def read_scenario(path: str) -> Scenario:
    return parse_scenario(Path(path).read_text(encoding='utf-8'), name=Path(path).stem)


def resolve_seed(args: argparse.Namespace) -> int:
    if args.entropy:
        return int(np.random.SeedSequence().entropy % (2 ** 32))
    return int(args.seed)


def build_plan(args: argparse.Namespace, scenario: Scenario) -> ExperimentPlan:
    params: Dict[str, Dict[str, Any]] = {}
    if args.max_cycles is not None:
        params = {name: {'max_cycles': args.max_cycles} for name in AGENT_STRATEGIES}
    return ExperimentPlan(
        scenario=scenario,
        strategies=tuple(args.strategies),
        runs_per_stochastic_strategy=args.runs,
        base_seed=resolve_seed(args),
        budget=SearchBudget(timeout=args.timeout),
        fullscan_budget=SearchBudget(timeout=args.fullscan_timeout),
        strategy_params=params,
    )


def run_and_render(args: argparse.Namespace, scenario: Scenario) -> int:
    report = run_experiment(build_plan(args, scenario), concurrency=args.jobs)
    sys.stdout.write(render_report(report, args.format, include_timings=args.timings))
    return EXIT_STABLE if report.found_stable else EXIT_UNSTABLE


def cmd_solve(args: argparse.Namespace) -> int:
    return run_and_render(args, read_scenario(args.scenario))


def cmd_paper(args: argparse.Namespace) -> int:
    return run_and_render(args, builtin_scenario(args.test))


def cmd_verify(args: argparse.Namespace) -> int:
    scenario = read_scenario(args.scenario)
    space = scenario.space
    assignment = parse_assignment(Path(args.assignment).read_text(encoding='utf-8'), space)
    stable = is_stable(space, assignment)
    remaining = remaining_by_node(space, assignment)

    print(f"Verdict: {'stable' if stable else 'overloaded'}")
    width = max((len(node_id) for node_id in space.node_ids), default=0)
    for node_id in space.node_ids:
        marker = '  (overloaded)' if overload(remaining[node_id]) else ''
        print(f"{node_id:<{width}}  {format_vector(remaining[node_id], space.resource_names)}{marker}")
    cost = transformation_cost(scenario.initial, assignment, space)
    print(f"Transformation cost: {cost} (all tasks migrated: {max_transformation_cost(space)})")
    return EXIT_STABLE if stable else EXIT_UNSTABLE


def cmd_oracle(args: argparse.Namespace) -> int:
    scenario = read_scenario(args.scenario)
    result = oracle_enumerate(scenario)
    if args.format == 'json':
        data = {
            'scenario': scenario.name,
            'status': result.status.value,
            'cost': result.cost,
            'visited': result.visited,
            'assignment': dict(result.best.items()) if result.best is not None else None,
        }
        sys.stdout.write(json.dumps(data, indent=2) + '\n')
    else:
        # the output is itself a valid assignment file
        print(f"# {result.status.value}, cost {result.cost}, {result.visited} assignments checked")
        if result.best is not None:
            sys.stdout.write(serialize_assignment(result.best, scenario.space))
    return EXIT_STABLE if result.status is SearchStatus.OPTIMAL else EXIT_UNSTABLE


def cmd_generate(args: argparse.Namespace) -> int:
    scenario = random_scenario(
        args.seed,
        nodes=args.nodes,
        tasks=args.tasks,
        resources=args.resources,
        max_capacity=args.max_capacity,
        max_requirement=args.max_requirement,
        max_cost=args.max_cost,
    )
    sys.stdout.write(serialize_scenario(scenario))
    return EXIT_STABLE


def add_experiment_arguments(parser: argparse.ArgumentParser, default_strategies: str) -> None:
    parser.add_argument(
        '-s', '--strategy', '--strategies', dest='strategies', type=strategy_list,
        default=strategy_list(default_strategies),
        help=f"comma-separated strategies, any of: {', '.join(strategy_names())} "
             f"(default: {default_strategies})")
    parser.add_argument('--seed', type=int, default=DEFAULT_BASE_SEED,
                        help=f"base seed of stochastic strategies (default: {DEFAULT_BASE_SEED})")
    parser.add_argument('--entropy', action='store_true',
                        help="draw the base seed from OS entropy; it is printed in the report")
    parser.add_argument('--runs', type=positive_int, default=DEFAULT_RUNS,
                        help=f"runs per stochastic strategy (default: {DEFAULT_RUNS})")
    parser.add_argument('--timeout', type=positive_float, default=DEFAULT_SEARCH_TIMEOUT,
                        help=f"seconds per run (default: {DEFAULT_SEARCH_TIMEOUT:g})")
    parser.add_argument('--fullscan-timeout', type=positive_float, default=DEFAULT_FULLSCAN_TIMEOUT,
                        help=f"seconds for the exact search (default: {DEFAULT_FULLSCAN_TIMEOUT:g})")
    parser.add_argument('--max-cycles', type=positive_int, default=None,
                        help="cycle budget of agent strategies (default: unbounded)")
    parser.add_argument('--jobs', type=positive_int, default=1,
                        help="runs executed at the same time (default: 1)")
    parser.add_argument('--format', choices=('table', 'json'), default='table')
    parser.add_argument('--timings', action='store_true', help="include wall-clock timings in the report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='migration-balancer',
        description="Rebalance overloaded nodes by migrating tasks at minimal migration cost.")
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help="log progress to stderr (-v info, -vv debug)")
    subparsers = parser.add_subparsers(dest='command', required=True)

    solve = subparsers.add_parser('solve', help="run strategies on a scenario file")
    solve.add_argument('--scenario', required=True, help="scenario file")
    add_experiment_arguments(solve, DEFAULT_SOLVE_STRATEGIES)
    solve.set_defaults(handler=cmd_solve)

    paper = subparsers.add_parser('paper', help="run strategies on a built-in reference test")
    paper.add_argument('--test', type=int, required=True, choices=sorted(REFERENCE_LAYOUTS))
    add_experiment_arguments(paper, DEFAULT_PAPER_STRATEGIES)
    paper.set_defaults(handler=cmd_paper)

    verify = subparsers.add_parser('verify', help="check a final assignment against a scenario")
    verify.add_argument('--scenario', required=True)
    verify.add_argument('--assignment', required=True, help="file of 'assign <task> <node>' lines")
    verify.set_defaults(handler=cmd_verify)

    oracle = subparsers.add_parser('oracle', help="exhaustively enumerate every assignment")
    oracle.add_argument('--scenario', required=True)
    oracle.add_argument('--format', choices=('table', 'json'), default='table')
    oracle.set_defaults(handler=cmd_oracle)

    generate = subparsers.add_parser('generate', help="write a random scenario to stdout")
    generate.add_argument('--seed', type=int, default=DEFAULT_BASE_SEED)
    generate.add_argument('--nodes', type=positive_int, default=3)
    generate.add_argument('--tasks', type=positive_int, default=6)
    generate.add_argument('--resources', type=positive_int, default=2)
    generate.add_argument('--max-capacity', type=positive_int, default=30)
    generate.add_argument('--max-requirement', type=positive_int, default=15)
    generate.add_argument('--max-cost', type=positive_int, default=10)
    generate.set_defaults(handler=cmd_generate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code is None:
            return EXIT_STABLE
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT_ERROR

    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter('%(levelname)s %(name)s: %(message)s'))
    previous_level = __log__.level
    __log__.addHandler(handler)
    __log__.setLevel({0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG))

    command: Callable[[argparse.Namespace], int] = args.handler
    try:
        return command(args)
    except (BalancerError, OSError) as exc:
        print(f"migration-balancer {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    finally:
        __log__.removeHandler(handler)
        __log__.setLevel(previous_level)
