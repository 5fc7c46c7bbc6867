"""
migration-balancer
==================

Multi-resource load balancing with migration costs. Tasks sit on nodes
that provide several kinds of resources; when a node is overloaded some
tasks must migrate, and every migrated task costs its fixed migration
cost. The package finds stable configurations that keep that total low:

* an agent-based stochastic strategy with exponential roulette selection,
* an exact branch-and-bound search and a brute-force enumeration oracle,
* greedy and balancing heuristics,
* built-in reference scenarios and an experiment runner.

Licensed under The MIT License (MIT)

"""
from importlib.metadata import version

from .agents import RunStatus, StrategyConfig, StrategyResult, Variant, run_strategy
from .baselines import (
    OptimalResult, SearchBudget, SearchStatus,
    balance_solve, fullscan, greedy_solve, oracle_enumerate,
)
from .errors import (
    BalancerError, ConfigurationError, InputError, InstanceTooLargeError,
    ScenarioParseError, ScenarioValidationError,
)
from .experiment import (
    ExperimentPlan, ExperimentReport, aio_run_experiment, load_report, render_report, run_experiment,
)
from .model import (
    Assignment, MigrationEvent, ProblemSpace, Scenario,
    is_stable, max_transformation_cost, remaining_resources, transformation_cost,
)
from .scenarios import builtin_scenario, parse_assignment, parse_scenario, random_scenario, serialize_scenario
from .strategies import Strategy, get_strategy, register_strategy

__version__ = version('migration-balancer')


__all__ = [
    'ProblemSpace',
    'Assignment',
    'Scenario',
    'MigrationEvent',
    'remaining_resources',
    'is_stable',
    'transformation_cost',
    'max_transformation_cost',
    'StrategyConfig',
    'StrategyResult',
    'RunStatus',
    'Variant',
    'run_strategy',
    'SearchBudget',
    'SearchStatus',
    'OptimalResult',
    'fullscan',
    'oracle_enumerate',
    'greedy_solve',
    'balance_solve',
    'builtin_scenario',
    'parse_scenario',
    'parse_assignment',
    'serialize_scenario',
    'random_scenario',
    'ExperimentPlan',
    'ExperimentReport',
    'run_experiment',
    'aio_run_experiment',
    'render_report',
    'load_report',
    'Strategy',
    'get_strategy',
    'register_strategy',
    'BalancerError',
    'InputError',
    'ConfigurationError',
    'ScenarioParseError',
    'ScenarioValidationError',
    'InstanceTooLargeError',
]
