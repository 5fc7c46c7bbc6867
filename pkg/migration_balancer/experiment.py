"""
Experiment driver and reports.

An :class:`ExperimentPlan` runs a list of strategies on one scenario:
stochastic strategies several times with consecutive seeds, deterministic
ones once. Runs may execute concurrently on worker threads; the report
is always assembled in (strategy, run) declaration order, so concurrency
never changes its content.
"""
import asyncio
import copy
import json
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from typing_extensions import Literal

from .baselines import DEFAULT_FULLSCAN_TIMEOUT, SearchBudget, SearchStatus
from .errors import ConfigurationError, InputError
from .model import Scenario, max_transformation_cost, remaining_by_node
from .scenarios import reference_optimum
from .strategies import FullscanStrategy, OracleStrategy, RunRecord, Strategy, get_strategy
from .utils import Deadline, __log__

DEFAULT_RUNS = 5
DEFAULT_BASE_SEED = 42

ReportFormat = Literal['table', 'json']

MAX_COST_LABEL = 'Highest possible migration cost (all tasks migrated)'
KNOWN_OPTIMUM_LABEL = 'Known optimal cost'


@dataclass(frozen=True)
class ExperimentPlan:
    """What to run: strategies by registry name, in report order.

    :param strategy_params: per-strategy keyword parameters, keyed by
        strategy name, e.g. ``{'ijiids08': {'result_significance': 1.05}}``
    """
    scenario: Scenario
    strategies: Tuple[str, ...] = ()
    runs_per_stochastic_strategy: int = DEFAULT_RUNS
    base_seed: int = DEFAULT_BASE_SEED
    budget: SearchBudget = field(default_factory=SearchBudget)
    fullscan_budget: SearchBudget = field(default_factory=lambda: SearchBudget(timeout=DEFAULT_FULLSCAN_TIMEOUT))
    strategy_params: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, 'strategies', tuple(self.strategies))
        if self.runs_per_stochastic_strategy < 1:
            raise ConfigurationError("Error, runs_per_stochastic_strategy must be at least 1")
        for name in self.strategies:
            get_strategy(name)

    def build_strategies(self) -> List[Strategy]:
        strategies = []
        for name in self.strategies:
            strategy_cls = get_strategy(name)
            budget = self.fullscan_budget if issubclass(strategy_cls, FullscanStrategy) else self.budget
            strategies.append(strategy_cls(budget, **self.strategy_params.get(strategy_cls.name, {})))
        return strategies

    def seeds_for(self, strategy: Strategy) -> List[Optional[int]]:
        if strategy.deterministic:
            return [None]
        return [self.base_seed + k for k in range(self.runs_per_stochastic_strategy)]


@dataclass(frozen=True)
class NodeLayout:
    node: str
    tasks: Tuple[str, ...]
    overloaded: bool


@dataclass(frozen=True)
class StrategyReport:
    name: str
    label: str
    deterministic: bool
    runs: Tuple[RunRecord, ...]

    @property
    def best_cost(self) -> Optional[int]:
        costs = [run.cost for run in self.runs if run.stable and run.cost is not None]
        return min(costs) if costs else None


@dataclass(frozen=True)
class ExperimentReport:
    scenario: str
    resources: Tuple[str, ...]
    initial: Tuple[NodeLayout, ...]
    max_cost: int
    known_optimal: Optional[int]
    strategies: Tuple[StrategyReport, ...] = ()
    seed: Optional[int] = None
    elapsed: float = 0.0

    @property
    def found_stable(self) -> bool:
        return any(run.stable for entry in self.strategies for run in entry.runs)


def describe_initial(scenario: Scenario) -> Tuple[NodeLayout, ...]:
    space = scenario.space
    remaining = remaining_by_node(space, scenario.initial)
    return tuple(
        NodeLayout(node.id, tuple(scenario.initial.tasks_on(space, node.id)), min(remaining[node.id], default=0) < 0)
        for node in space.nodes
    )


def _known_optimal(scenario: Scenario, strategies: Tuple[StrategyReport, ...]) -> Optional[int]:
    for entry in strategies:
        if entry.name in (FullscanStrategy.name, OracleStrategy.name):
            for run in entry.runs:
                if run.status == SearchStatus.OPTIMAL.value:
                    return run.cost
    return reference_optimum(scenario)


async def _run_one(
    semaphore: asyncio.Semaphore, strategy: Strategy, scenario: Scenario, seed: Optional[int],
) -> RunRecord:
    async with semaphore:
        # every run gets its own copy of the scenario
        private = copy.deepcopy(scenario)
        try:
            return await asyncio.to_thread(strategy.solve, private, seed)
        except Exception as exc:
            __log__.warning("%s (seed %s) failed: %s", strategy.name, seed, exc)
            __log__.debug("traceback of the failed run", exc_info=True)
            return RunRecord.from_error(exc, seed)


async def aio_run_experiment(plan: ExperimentPlan, concurrency: int = 1) -> ExperimentReport:
    """Run every (strategy, seed) pair of ``plan``.

    :param concurrency: number of runs allowed to execute at the same time
    """
    if concurrency < 1:
        raise ConfigurationError("Error, concurrency must be at least 1")
    deadline = Deadline(None)
    semaphore = asyncio.Semaphore(concurrency)
    strategies = plan.build_strategies()
    seeds = [plan.seeds_for(strategy) for strategy in strategies]

    pending = [
        _run_one(semaphore, strategy, plan.scenario, seed)
        for strategy, strategy_seeds in zip(strategies, seeds)
        for seed in strategy_seeds
    ]
    records = iter(await asyncio.gather(*pending))

    entries = tuple(
        StrategyReport(
            name=strategy.name,
            label=strategy.label,
            deterministic=strategy.deterministic,
            runs=tuple(next(records) for _ in strategy_seeds),
        )
        for strategy, strategy_seeds in zip(strategies, seeds)
    )
    space = plan.scenario.space
    return ExperimentReport(
        scenario=plan.scenario.name,
        resources=tuple(space.resource_names),
        initial=describe_initial(plan.scenario),
        max_cost=max_transformation_cost(space),
        known_optimal=_known_optimal(plan.scenario, entries),
        strategies=entries,
        seed=plan.base_seed,
        elapsed=deadline.elapsed,
    )


def run_experiment(plan: ExperimentPlan, concurrency: int = 1) -> ExperimentReport:
    return asyncio.run(aio_run_experiment(plan, concurrency))


def _cell(run: RunRecord, include_timings: bool) -> str:
    if run.error is not None:
        text = 'error'
    elif run.status == SearchStatus.INFEASIBLE.value:
        text = 'infeasible'
    elif run.status == SearchStatus.TIMED_OUT.value:
        text = f'{run.cost}*' if run.cost is not None else 'timed out'
    elif run.cost is None:
        text = 'no solution'
    else:
        text = str(run.cost)
    if include_timings:
        text += f' ({run.elapsed:.2f}s)'
    return text


def _table(rows: List[Tuple[str, str]], header: Tuple[str, str]) -> List[str]:
    width = max(len(left) for left, _ in [header] + rows)
    return [f'{left:<{width}}  {right}'.rstrip() for left, right in [header] + rows]


def _render_table(report: ExperimentReport, include_timings: bool) -> str:
    lines = []
    if report.scenario:
        lines.append(f'Scenario: {report.scenario}')
    if report.seed is not None:
        lines.append(f'Base seed: {report.seed}')
    if len(lines):
        lines.append('')
    lines.append('Initial configuration')
    lines.extend(_table(
        [(('*' if layout.overloaded else '') + layout.node, ', '.join(layout.tasks) or '-')
         for layout in report.initial],
        ('Node name', 'Tasks'),
    ))
    lines.append('')

    rows = [(MAX_COST_LABEL, str(report.max_cost))]
    if report.known_optimal is not None:
        rows.append((KNOWN_OPTIMUM_LABEL, str(report.known_optimal)))
    rows.extend(
        (entry.label, ', '.join(_cell(run, include_timings) for run in entry.runs))
        for entry in report.strategies
    )
    lines.append('Experiment results')
    lines.extend(_table(rows, ('Strategy name', 'System transformation cost')))

    if any(run.status == SearchStatus.TIMED_OUT.value for entry in report.strategies for run in entry.runs):
        lines.append('* budget exhausted: best cost found, not proven optimal')

    if report.strategies:
        lines.append('')
        lines.append('Run statistics')
        lines.extend(_table(
            [(entry.label, ', '.join(f'{run.migrations}/{run.cycles}/{run.flickers}' for run in entry.runs))
             for entry in report.strategies],
            ('Strategy name', 'Migrations/cycles/flickers per run'),
        ))
    if include_timings:
        lines.append('')
        lines.append(f'Total time: {report.elapsed:.2f}s')
    return '\n'.join(lines) + '\n'


# Outcome fields of a run stopped by the wall clock depend on how far it got.
CLOCK_DEPENDENT_FIELDS = ('cost', 'stable', 'migrations', 'cycles', 'flickers')


def _run_to_json(run: RunRecord, include_timings: bool) -> Dict[str, Any]:
    data = asdict(run)
    if not include_timings:
        del data['elapsed']
        if run.budget_exhausted:
            for key in CLOCK_DEPENDENT_FIELDS:
                del data[key]
    return data


def _render_json(report: ExperimentReport, include_timings: bool) -> str:
    data: Dict[str, Any] = {
        'scenario': report.scenario,
        'resources': list(report.resources),
        'initial': [
            {'node': layout.node, 'tasks': list(layout.tasks), 'overloaded': layout.overloaded}
            for layout in report.initial
        ],
        'max_cost': report.max_cost,
        'known_optimal': report.known_optimal,
        'seed': report.seed,
        'strategies': [
            {
                'name': entry.name,
                'label': entry.label,
                'deterministic': entry.deterministic,
                'runs': [_run_to_json(run, include_timings) for run in entry.runs],
            }
            for entry in report.strategies
        ],
    }
    if include_timings:
        data['elapsed'] = report.elapsed
    return json.dumps(data, indent=2) + '\n'


def render_report(report: ExperimentReport, format: ReportFormat = 'table', include_timings: bool = False) -> str:
    """Render a report as a two-part text table or as JSON.

    Wall-clock timings are left out unless ``include_timings`` is set. The
    JSON rendering then also drops the cost and counters of runs stopped
    by the wall clock, keeping only their status and
    ``budget_exhausted`` flag, so re-running the same plan renders
    identical JSON.
    """
    if format == 'table':
        return _render_table(report, include_timings)
    if format == 'json':
        return _render_json(report, include_timings)
    raise InputError(f"Error, unknown report format {format!r}")


def load_report(text: str) -> ExperimentReport:
    """Rebuild an :class:`ExperimentReport` from its JSON rendering.

    Only a rendering made with ``include_timings=True`` restores the
    report exactly. Without timings every ``elapsed`` reads 0.0, and runs
    stopped by the wall clock come back with no cost, not stable and
    zero counters.
    """
    try:
        data = json.loads(text)
        return ExperimentReport(
            scenario=data['scenario'],
            resources=tuple(data['resources']),
            initial=tuple(
                NodeLayout(item['node'], tuple(item['tasks']), item['overloaded'])
                for item in data['initial']
            ),
            max_cost=data['max_cost'],
            known_optimal=data['known_optimal'],
            seed=data.get('seed'),
            strategies=tuple(
                StrategyReport(
                    name=entry['name'],
                    label=entry['label'],
                    deterministic=entry['deterministic'],
                    runs=tuple(RunRecord(**{'cost': None, 'stable': False, **run}) for run in entry['runs']),
                )
                for entry in data['strategies']
            ),
            elapsed=data.get('elapsed', 0.0),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"Error, malformed report: {exc}") from None
