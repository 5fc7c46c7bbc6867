import abc
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Type, Union

from typing_extensions import Self

from .agents import (
    DEFAULT_COST_WEIGHT, DEFAULT_OVERLOAD_WEIGHT, DEFAULT_RESULT_SIGNIFICANCE, DEFAULT_RETURN_BONUS,
    RunStatus, StrategyConfig, StrategyResult, Variant, run_strategy,
)
from .baselines import (
    DEFAULT_FULLSCAN_TIMEOUT, OptimalResult, SearchBudget,
    balance_solve, fullscan, greedy_solve, oracle_enumerate,
)
from .errors import InputError
from .model import Scenario


@dataclass(frozen=True)
class RunRecord:
    """One strategy run as it appears in an experiment report."""
    seed: Optional[int]
    status: str
    cost: Optional[int]
    stable: bool
    migrations: int = 0
    cycles: int = 0
    flickers: int = 0
    elapsed: float = 0.0
    error: Optional[str] = None
    budget_exhausted: bool = False

    @classmethod
    def from_strategy_result(cls, result: StrategyResult, seed: Optional[int]) -> Self:
        return cls(
            seed=seed,
            status=result.status.value,
            cost=result.cost if result.status is RunStatus.STABLE else None,
            stable=result.is_stable,
            migrations=result.migration_count,
            cycles=result.cycles_run,
            flickers=result.flickers,
            elapsed=result.elapsed,
            budget_exhausted=result.budget_exhausted,
        )

    @classmethod
    def from_optimal_result(cls, result: OptimalResult) -> Self:
        return cls(
            seed=None,
            status=result.status.value,
            cost=result.cost,
            stable=result.is_stable,
            cycles=result.visited,
            elapsed=result.elapsed,
            budget_exhausted=result.budget_exhausted,
        )

    @classmethod
    def from_error(cls, exc: BaseException, seed: Optional[int]) -> Self:
        return cls(seed=seed, status='error', cost=None, stable=False, error=f'{type(exc).__name__}: {exc}')


class Strategy(metaclass=abc.ABCMeta):
    """Load-balancing strategy as driven by the experiment harness.

    :param budget: wall-clock and search budget of a single run
    :param params: strategy specific parameters, merged over the
        defaults of :meth:`init_params_defaults`
    """

    name: str
    label: str
    deterministic = True

    def __init__(self, budget: Optional[SearchBudget] = None, **params: Any) -> None:
        self.budget = budget or SearchBudget()
        self.params: Dict[str, Any] = {}
        self.init_params_defaults()
        self.params.update(params)

    def init_params_defaults(self) -> None:
        pass

    @abc.abstractmethod
    def solve(self, scenario: Scenario, seed: Optional[int] = None) -> RunRecord:
        """Run the strategy once on ``scenario``."""
        ...


class AgentStrategy(Strategy):
    """Agent-based stochastic strategy with cost-aware agents."""

    name = Variant.IJIIDS08.value
    label = 'IJIIDS08 strategy'
    deterministic = False
    variant = Variant.IJIIDS08

    def init_params_defaults(self) -> None:
        self.params.update({
            "result_significance": DEFAULT_RESULT_SIGNIFICANCE,
            "overload_weight": DEFAULT_OVERLOAD_WEIGHT,
            "cost_weight": DEFAULT_COST_WEIGHT,
            "return_bonus": DEFAULT_RETURN_BONUS,
        })

    def config(self, seed: int) -> StrategyConfig:
        return StrategyConfig(timeout=self.budget.timeout, seed=seed, **self.params)

    def solve(self, scenario: Scenario, seed: Optional[int] = None) -> RunRecord:
        seed = 0 if seed is None else seed
        result = run_strategy(scenario, self.config(seed), self.variant)
        return RunRecord.from_strategy_result(result, seed)


class RequirementsAgentStrategy(AgentStrategy):
    """Older agent strategy ranking agents by requirements alone."""

    name = Variant.KESAMSTA07.value
    label = 'KESAMSTA07 strategy'
    variant = Variant.KESAMSTA07


class FullscanStrategy(Strategy):
    name = 'fullscan'
    label = 'FULLSCAN strategy (optimal cost)'

    def __init__(self, budget: Optional[SearchBudget] = None, **params: Any) -> None:
        super().__init__(budget or SearchBudget(timeout=DEFAULT_FULLSCAN_TIMEOUT), **params)

    def solve(self, scenario: Scenario, seed: Optional[int] = None) -> RunRecord:
        return RunRecord.from_optimal_result(fullscan(scenario, self.budget))


class OracleStrategy(Strategy):
    name = 'oracle'
    label = 'Exhaustive enumeration (optimal cost)'

    def solve(self, scenario: Scenario, seed: Optional[int] = None) -> RunRecord:
        return RunRecord.from_optimal_result(oracle_enumerate(scenario))


class GreedyStrategy(Strategy):
    name = 'greedy'
    label = 'GREEDY strategy'

    def solve(self, scenario: Scenario, seed: Optional[int] = None) -> RunRecord:
        return RunRecord.from_strategy_result(greedy_solve(scenario, self.budget), None)


class BalanceStrategy(Strategy):
    name = 'balance'
    label = 'BALANCE strategy'

    def solve(self, scenario: Scenario, seed: Optional[int] = None) -> RunRecord:
        return RunRecord.from_strategy_result(balance_solve(scenario, self.budget), None)


_registry: Dict[str, Type[Strategy]] = {}


def register_strategy(strategy_cls: Type[Strategy], *names: str) -> None:
    for name in names or (strategy_cls.name,):
        _registry[name.lower()] = strategy_cls


def strategy_names() -> List[str]:
    return list(_registry)


def get_strategy(name: Union[str, Type[Strategy]]) -> Type[Strategy]:
    if isinstance(name, type):
        return name
    try:
        return _registry[name.lower()]
    except KeyError:
        raise InputError(
            f"Error, unknown strategy {name!r}, expected one of: {', '.join(_registry)}") from None


register_strategy(FullscanStrategy)
register_strategy(AgentStrategy)
register_strategy(RequirementsAgentStrategy)
register_strategy(GreedyStrategy)
register_strategy(BalanceStrategy)
register_strategy(OracleStrategy)
