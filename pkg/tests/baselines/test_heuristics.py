from typing import Callable

import pytest

from migration_balancer.agents import RunStatus, StrategyResult
from migration_balancer.baselines import (
    balance_score, balance_solve, balanced_destination, first_fit_destination, greedy_solve,
)
from migration_balancer.model import Assignment, ProblemSpace, Scenario, is_stable, replay_migrations
from migration_balancer.scenarios import REFERENCE_OPTIMA, builtin_scenario
from tests.utils import stable_scenario, unsolvable_scenario

Solver = Callable[..., StrategyResult]

SOLVERS = [greedy_solve, balance_solve]


def test_greedy_reference_test_1(reference_scenario: Scenario) -> None:
    result = greedy_solve(reference_scenario)
    assert result.status is RunStatus.STABLE
    assert result.cost == 7
    assert [(event.task, event.to_node) for event in result.migrations] == [('J06', 'Node02'), ('J03', 'Node02')]
    assert result.cycles_run == 2


def test_balance_reference_test_1(reference_scenario: Scenario) -> None:
    result = balance_solve(reference_scenario)
    assert result.is_stable
    assert result.cost == 7


@pytest.mark.parametrize("solver", SOLVERS)
def test_heuristics_are_deterministic(solver: Solver, reference_scenario: Scenario) -> None:
    first, second = solver(reference_scenario), solver(reference_scenario)
    assert (first.status, first.migrations, first.final) == (second.status, second.migrations, second.final)


@pytest.mark.parametrize("solver", SOLVERS)
def test_heuristics_leave_stable_scenario(solver: Solver) -> None:
    scenario = stable_scenario()
    result = solver(scenario)
    assert result.is_stable
    assert result.final == scenario.initial
    assert result.migrations == ()


@pytest.mark.parametrize("solver", SOLVERS)
def test_heuristics_give_up_without_improving_move(solver: Solver) -> None:
    result = solver(unsolvable_scenario())
    assert result.status is RunStatus.NO_SOLUTION
    assert result.migrations == ()
    assert result.elapsed < 5


def test_greedy_reference_test_6() -> None:
    result = greedy_solve(builtin_scenario(6))
    assert result.status is RunStatus.STABLE
    assert result.cost == 65
    assert result.migration_count == 14
    # J22 does not fit anywhere, it only lowers the overload of Node04
    assert [(event.task, event.to_node) for event in result.migrations[-3:]] == [
        ('J22', 'Node05'), ('J07', 'Node04'), ('J28', 'Node05'),
    ]


@pytest.mark.parametrize("solver", SOLVERS)
def test_heuristics_fall_back_to_reducing_overload(solver: Solver) -> None:
    space = ProblemSpace.build(
        ['cpu'],
        nodes=[('N1', (10,)), ('N2', (10,)), ('N3', (10,))],
        tasks=[('A', (8,), 1), ('B', (4,), 2), ('C', (3,), 3), ('D', (4,), 4), ('E', (7,), 5)],
    )
    scenario = Scenario(space, Assignment({'A': 'N1', 'B': 'N1', 'C': 'N2', 'D': 'N2', 'E': 'N3'}))
    result = solver(scenario)
    assert result.status is RunStatus.STABLE
    assert [(event.task, event.from_node, event.to_node) for event in result.migrations] == [
        ('B', 'N1', 'N2'), ('C', 'N2', 'N3'),
    ]
    assert result.cost == 5


@pytest.mark.parametrize("solver", SOLVERS)
@pytest.mark.parametrize("number", [1, 2, 3, 4, 5, 6, 7])
def test_heuristic_results_are_consistent(solver: Solver, number: int) -> None:
    scenario = builtin_scenario(number)
    result = solver(scenario)
    assert replay_migrations(scenario.initial, result.migrations, scenario.space) == result.final
    if result.is_stable:
        assert is_stable(scenario.space, result.final)
        assert result.cost >= REFERENCE_OPTIMA.get(number, 0)


def test_balance_score() -> None:
    assert balance_score((40, 80), (20, 40)) == 0.5
    assert balance_score((40, 80), (30, 20)) == 0.25
    assert balance_score((0, 80), (0, 40)) == 0.5
    assert balance_score((0, 0), (0, 0)) == 0.0


def test_destination_rules() -> None:
    space = ProblemSpace.build(
        ['cpu', 'memory'],
        nodes=[('N1', (10, 10)), ('N2', (20, 20)), ('N3', (100, 100))],
        tasks=[('T1', (5, 5), 1)],
    )
    remaining = {'N1': [10, 10], 'N2': [20, 20], 'N3': [100, 100]}
    task = space.task('T1')
    assert first_fit_destination(task, ['N2', 'N3'], remaining, space) == 'N2'
    assert balanced_destination(task, ['N1', 'N2', 'N3'], remaining, space) == 'N3'
    # equal scores go to the first node
    assert balanced_destination(task, ['N1', 'N2'], {'N1': [10, 10], 'N2': [15, 15]}, space) == 'N1'
