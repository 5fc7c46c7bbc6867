import pytest

from migration_balancer.errors import InputError, ScenarioValidationError
from migration_balancer.model import (
    Assignment, MigrationEvent, ProblemSpace, Scenario,
    is_stable, max_transformation_cost, node_overload, overload, overloaded_nodes,
    remaining_by_node, remaining_resources, replay_migrations, transformation_cost,
)
from migration_balancer.scenarios import builtin_scenario
from tests.conftest import reference_tests_all
from tests.utils import moved


def test_remaining_resources_of_overloaded_node(reference_scenario: Scenario) -> None:
    space, initial = reference_scenario.space, reference_scenario.initial
    assert remaining_resources(space, initial, 'Node01') == (-26, 38)
    assert remaining_resources(space, initial, 'Node02') == (35, 17)
    assert remaining_by_node(space, initial) == {'Node01': (-26, 38), 'Node02': (35, 17)}


def test_remaining_resources_unknown_node(reference_scenario: Scenario) -> None:
    with pytest.raises(InputError):
        remaining_resources(reference_scenario.space, reference_scenario.initial, 'Node09')


def test_overload_helpers(reference_scenario: Scenario) -> None:
    space, initial = reference_scenario.space, reference_scenario.initial
    assert overload((-26, 38)) == 26
    assert overload((0, 3)) == 0
    assert node_overload(space, initial, 'Node01') == 26
    assert node_overload(space, initial, 'Node02') == 0
    assert overloaded_nodes(space, initial) == ['Node01']


def test_stability(reference_scenario: Scenario) -> None:
    space = reference_scenario.space
    assert is_stable(space, reference_scenario.initial) is False
    assert is_stable(space, moved(reference_scenario, 'J03', 'J06', to='Node02')) is True


def test_stability_rejects_partial_assignment(reference_scenario: Scenario) -> None:
    mapping = dict(reference_scenario.initial.mapping)
    del mapping['J03']
    with pytest.raises(ScenarioValidationError) as exc_info:
        is_stable(reference_scenario.space, Assignment(mapping))
    assert exc_info.value.ident == 'J03'


def test_transformation_cost(reference_scenario: Scenario) -> None:
    space, initial = reference_scenario.space, reference_scenario.initial
    assert transformation_cost(initial, initial, space) == 0
    assert transformation_cost(initial, moved(reference_scenario, 'J03', 'J06', to='Node02'), space) == 7

    swapped = Assignment({
        task_id: 'Node02' if node_id == 'Node01' else 'Node01'
        for task_id, node_id in initial.items()
    })
    assert transformation_cost(initial, swapped, space) == 45


def test_transformation_cost_ignores_destination() -> None:
    scenario = builtin_scenario(2)
    space, initial = scenario.space, scenario.initial
    to_node02 = initial.moved('J06', 'Node02')
    to_node03 = initial.moved('J06', 'Node03')
    assert transformation_cost(initial, to_node02, space) == transformation_cost(initial, to_node03, space) == 3


def test_transformation_cost_task_set_mismatch(reference_scenario: Scenario) -> None:
    mapping = dict(reference_scenario.initial.mapping)
    mapping.pop('J01')
    with pytest.raises(InputError):
        transformation_cost(reference_scenario.initial, Assignment(mapping), reference_scenario.space)


@pytest.mark.parametrize(
    "number,expected",
    [(1, 45), (2, 67), (3, 86), (4, 104), (5, 121), (6, 145), (7, 170)],
)
def test_max_transformation_cost(number: int, expected: int) -> None:
    assert max_transformation_cost(builtin_scenario(number).space) == expected


@reference_tests_all
def test_reference_scenarios_start_overloaded(reference_scenario: Scenario) -> None:
    assert overloaded_nodes(reference_scenario.space, reference_scenario.initial)


def test_problem_space_validation() -> None:
    with pytest.raises(ScenarioValidationError):
        ProblemSpace.build(['cpu'], nodes=[('N1', (1,)), ('N1', (2,))], tasks=[])
    with pytest.raises(ScenarioValidationError):
        ProblemSpace.build(['cpu', 'memory'], nodes=[('N1', (1,))], tasks=[])
    with pytest.raises(ScenarioValidationError):
        ProblemSpace.build(['cpu'], nodes=[('N1', (-1,))], tasks=[])
    with pytest.raises(ScenarioValidationError):
        ProblemSpace.build(['cpu'], nodes=[('N1', (1,))], tasks=[('T1', (1,), -3)])
    with pytest.raises(ScenarioValidationError):
        ProblemSpace.build(['cpu', 'cpu'], nodes=[], tasks=[])


def test_problem_space_lookups(reference_scenario: Scenario) -> None:
    space = reference_scenario.space
    assert space.dimension == 2
    assert space.resource_names == ['cpu', 'memory']
    assert space.node_ids == ['Node01', 'Node02']
    assert space.task('J06').requirements == (18, 6)
    assert space.task('J06').migration_cost == 3
    assert space.has_task('J05') and not space.has_task('J09')
    with pytest.raises(InputError):
        space.node('Node05')


def test_scenario_requires_total_assignment(reference_scenario: Scenario) -> None:
    mapping = dict(reference_scenario.initial.mapping)
    mapping['J01'] = 'Node07'
    with pytest.raises(ScenarioValidationError):
        Scenario(reference_scenario.space, Assignment(mapping))


def test_assignment_access(reference_scenario: Scenario) -> None:
    initial = reference_scenario.initial
    assert initial['J05'] == 'Node02'
    assert initial.tasks_on(reference_scenario.space, 'Node02') == ['J05', 'J08']
    assert len(initial) == 8
    assert hash(initial) == hash(Assignment(dict(initial.items())))
    with pytest.raises(InputError):
        initial['J30']


def test_migration_event_must_change_node() -> None:
    with pytest.raises(AssertionError):
        MigrationEvent(0, 'J01', 'Node01', 'Node01')


def test_replay_migrations(reference_scenario: Scenario) -> None:
    events = [
        MigrationEvent(0, 'J06', 'Node01', 'Node02'),
        MigrationEvent(1, 'J01', 'Node01', 'Node02'),
        MigrationEvent(2, 'J01', 'Node02', 'Node01'),
        MigrationEvent(2, 'J03', 'Node01', 'Node02'),
    ]
    final = replay_migrations(reference_scenario.initial, events, reference_scenario.space)
    assert final == moved(reference_scenario, 'J03', 'J06', to='Node02')


def test_replay_migrations_inconsistent_log(reference_scenario: Scenario) -> None:
    with pytest.raises(InputError):
        replay_migrations(reference_scenario.initial, [MigrationEvent(0, 'J05', 'Node01', 'Node02')])
    with pytest.raises(InputError):
        replay_migrations(reference_scenario.initial, [MigrationEvent(0, 'J77', 'Node01', 'Node02')])
    with pytest.raises(InputError):
        replay_migrations(
            reference_scenario.initial,
            [MigrationEvent(0, 'J01', 'Node01', 'Node05')],
            reference_scenario.space,
        )
