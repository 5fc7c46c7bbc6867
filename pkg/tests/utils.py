from pathlib import Path

from migration_balancer.model import Assignment, ProblemSpace, Scenario
from migration_balancer.scenarios import serialize_scenario

RESOURCES = ('cpu', 'memory')


def moved(scenario: Scenario, *task_ids: str, to: str) -> Assignment:
    assignment = scenario.initial
    for task_id in task_ids:
        assignment = assignment.moved(task_id, to)
    return assignment


def write_scenario(directory: Path, scenario: Scenario, name: str = 'scenario.txt') -> Path:
    path = directory / name
    path.write_text(serialize_scenario(scenario), encoding='utf-8')
    return path


def unsolvable_scenario() -> Scenario:
    """One task no node can ever host."""
    space = ProblemSpace.build(
        RESOURCES,
        nodes=[('Node01', (40, 80)), ('Node02', (60, 40))],
        tasks=[('J99', (999, 999), 5)],
    )
    return Scenario(space, Assignment({'J99': 'Node01'}), name='unsolvable')


def stable_scenario() -> Scenario:
    space = ProblemSpace.build(
        RESOURCES,
        nodes=[('Node01', (40, 80)), ('Node02', (60, 40))],
        tasks=[('J01', (4, 5), 4), ('J02', (14, 7), 5)],
    )
    return Scenario(space, Assignment({'J01': 'Node01', 'J02': 'Node02'}), name='stable')


def single_node_scenario() -> Scenario:
    space = ProblemSpace.build(
        RESOURCES,
        nodes=[('Node01', (10, 10))],
        tasks=[('J01', (8, 2), 1), ('J02', (8, 2), 1)],
    )
    return Scenario(space, Assignment({'J01': 'Node01', 'J02': 'Node01'}), name='single-node')
