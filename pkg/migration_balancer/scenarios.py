"""
Scenario files, reference scenarios and random instances.

Scenario file format (UTF-8, one directive per line, ``#`` starts a
comment, blank lines are ignored)::

    resources cpu memory
    node Node01 40 80
    task J01 4 5 4
    assign J01 Node01

``resources`` comes first and fixes vector positions; ``node`` lists
capacities; ``task`` lists requirements followed by the migration cost;
``assign`` places every task exactly once. Assignment files contain
``assign`` lines only.
"""
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InputError, ScenarioParseError, ScenarioValidationError
from .model import Assignment, NodeSpec, ProblemSpace, ResourceKind, Scenario, TaskSpec

REFERENCE_RESOURCES = ('cpu', 'memory')

REFERENCE_NODES: Tuple[Tuple[str, Tuple[int, int]], ...] = (
    ('Node01', (40, 80)),
    ('Node02', (60, 40)),
    ('Node03', (50, 80)),
    ('Node04', (20, 50)),
    ('Node05', (40, 20)),
    ('Node06', (40, 40)),
    ('Node07', (30, 50)),
    ('Node08', (40, 20)),
)

# id, (cpu, memory), migration cost
REFERENCE_TASKS: Tuple[Tuple[str, Tuple[int, int], int], ...] = (
    ('J01', (4, 5), 4), ('J02', (14, 7), 5), ('J03', (10, 3), 4), ('J04', (16, 6), 7),
    ('J05', (14, 14), 10), ('J06', (18, 6), 3), ('J07', (4, 15), 6), ('J08', (11, 9), 6),
    ('J09', (5, 15), 4), ('J10', (7, 11), 4), ('J11', (17, 12), 8), ('J12', (5, 3), 6),
    ('J13', (4, 20), 4), ('J14', (2, 18), 5), ('J15', (16, 15), 1), ('J16', (14, 20), 9),
    ('J17', (2, 4), 5), ('J18', (9, 4), 5), ('J19', (12, 2), 7), ('J20', (8, 20), 1),
    ('J21', (11, 2), 7), ('J22', (20, 6), 2), ('J23', (2, 12), 5), ('J24', (6, 6), 3),
    ('J25', (1, 9), 4), ('J26', (3, 9), 10), ('J27', (9, 10), 2), ('J28', (6, 6), 8),
    ('J29', (1, 20), 6), ('J30', (7, 4), 5), ('J31', (11, 18), 4), ('J32', (17, 17), 10),
)

# Initial layouts; nodes absent from a layout are unavailable in that test.
REFERENCE_LAYOUTS: Dict[int, Dict[str, Tuple[str, ...]]] = {
    1: {
        'Node01': ('J01', 'J02', 'J03', 'J04', 'J06', 'J07'),
        'Node02': ('J05', 'J08'),
    },
    2: {
        'Node01': ('J01', 'J03', 'J04', 'J06', 'J10', 'J11'),
        'Node02': ('J02', 'J08', 'J09'),
        'Node03': ('J05', 'J07', 'J12'),
    },
    3: {
        'Node01': ('J01', 'J04', 'J14', 'J16'),
        'Node02': ('J08', 'J11', 'J12', 'J15'),
        'Node03': ('J02', 'J03', 'J06', 'J07', 'J13'),
        'Node04': ('J05', 'J09', 'J10'),
    },
    4: {
        'Node01': ('J01', 'J03', 'J04', 'J05', 'J09', 'J10', 'J17', 'J18'),
        'Node02': ('J02', 'J06', 'J11'),
        'Node03': ('J08', 'J12', 'J14', 'J15'),
        'Node04': ('J07', 'J16'),
        'Node05': ('J13', 'J19', 'J20'),
    },
    5: {
        'Node01': ('J01', 'J03', 'J04', 'J06', 'J16', 'J20'),
        'Node02': ('J08', 'J09', 'J17', 'J18'),
        'Node03': ('J07', 'J14', 'J19', 'J22'),
        'Node04': ('J10', 'J11', 'J23', 'J24'),
        'Node05': ('J02', 'J13'),
        'Node06': ('J05', 'J12', 'J15', 'J21'),
    },
    6: {
        'Node01': ('J03', 'J06', 'J20', 'J26', 'J28'),
        'Node02': ('J04', 'J05'),
        'Node03': ('J01', 'J17', 'J21'),
        'Node04': ('J12', 'J16', 'J22', 'J24', 'J27'),
        'Node05': ('J02', 'J07', 'J10', 'J13', 'J14', 'J15', 'J18', 'J23', 'J25'),
        'Node06': ('J08', 'J11'),
        'Node07': ('J09', 'J19'),
    },
    7: {
        'Node01': ('J01', 'J04', 'J16'),
        'Node02': ('J11', 'J18', 'J27', 'J28'),
        'Node03': ('J02', 'J06', 'J07', 'J19'),
        'Node04': ('J05', 'J09', 'J10', 'J17', 'J24'),
        'Node05': ('J14', 'J31'),
        'Node06': ('J08', 'J12', 'J15', 'J21', 'J25', 'J30'),
        'Node07': ('J03', 'J13', 'J20', 'J22', 'J26', 'J29'),
        'Node08': ('J23', 'J32'),
    },
}

# Proven optimal transformation costs, where known.
REFERENCE_OPTIMA: Dict[int, int] = {1: 7, 2: 10, 3: 12, 4: 20}


def reference_name(test_number: int) -> str:
    return f'reference-{test_number}'


def builtin_scenario(test_number: int) -> Scenario:
    """Reference scenario ``test_number`` (1..7): the two-resource nodes
    and tasks shared by all reference tests, restricted to the nodes
    available in that test and the tasks it places."""
    layout = REFERENCE_LAYOUTS.get(test_number)
    if layout is None:
        raise InputError(f"Error, reference test must be in 1..{len(REFERENCE_LAYOUTS)}, got {test_number!r}")

    placed = {task_id: node_id for node_id, task_ids in layout.items() for task_id in task_ids}
    space = ProblemSpace.build(
        REFERENCE_RESOURCES,
        nodes=[(node_id, capacities) for node_id, capacities in REFERENCE_NODES if node_id in layout],
        tasks=[(task_id, requirements, cost) for task_id, requirements, cost in REFERENCE_TASKS
               if task_id in placed],
    )
    initial = Assignment({task.id: placed[task.id] for task in space.tasks})
    return Scenario(space, initial, name=reference_name(test_number))


def reference_optimum(scenario: Scenario) -> Optional[int]:
    for number, optimum in REFERENCE_OPTIMA.items():
        if scenario.name == reference_name(number):
            return optimum
    return None


def _parse_int(token: str, lineno: int, what: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ScenarioParseError(lineno, f"expected an integer {what}, got {token!r}") from None
    if value < 0:
        raise ScenarioParseError(lineno, f"{what} must not be negative, got {value}")
    return value


def _directives(text: str) -> List[Tuple[int, List[str]]]:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split('#', 1)[0].split()
        if tokens:
            lines.append((lineno, tokens))
    return lines


def _parse_assign(
    lineno: int,
    args: Sequence[str],
    tasks: Dict[str, TaskSpec],
    nodes: Dict[str, NodeSpec],
    mapping: Dict[str, str],
) -> None:
    if len(args) != 2:
        raise ScenarioParseError(lineno, "assign expects <task-id> <node-id>")
    task_id, node_id = args
    if task_id not in tasks:
        raise ScenarioParseError(lineno, f"unknown task {task_id!r}")
    if node_id not in nodes:
        raise ScenarioParseError(lineno, f"unknown node {node_id!r}")
    if task_id in mapping:
        raise ScenarioParseError(lineno, f"task {task_id!r} is assigned more than once")
    mapping[task_id] = node_id


def parse_scenario(text: str, name: str = '') -> Scenario:
    """Parse and validate a scenario document."""
    resources: Optional[List[str]] = None
    nodes: Dict[str, NodeSpec] = {}
    tasks: Dict[str, TaskSpec] = {}
    mapping: Dict[str, str] = {}

    for lineno, (keyword, *args) in _directives(text):
        if keyword == 'resources':
            if resources is not None:
                raise ScenarioParseError(lineno, "resources declared more than once")
            if not args:
                raise ScenarioParseError(lineno, "resources expects at least one name")
            if len(set(args)) != len(args):
                raise ScenarioParseError(lineno, "resource names must be unique")
            resources = list(args)
            continue

        if resources is None:
            raise ScenarioParseError(lineno, f"{keyword!r} before resources declaration")
        dimension = len(resources)

        if keyword == 'node':
            if len(args) != 1 + dimension:
                raise ScenarioParseError(lineno, f"node expects an id and {dimension} capacities")
            ident = args[0]
            if ident in nodes:
                raise ScenarioParseError(lineno, f"duplicate node id {ident!r}")
            capacities = tuple(_parse_int(token, lineno, 'capacity') for token in args[1:])
            nodes[ident] = NodeSpec(ident, capacities)
        elif keyword == 'task':
            if len(args) != 2 + dimension:
                raise ScenarioParseError(
                    lineno, f"task expects an id, {dimension} requirements and a migration cost")
            ident = args[0]
            if ident in tasks:
                raise ScenarioParseError(lineno, f"duplicate task id {ident!r}")
            requirements = tuple(_parse_int(token, lineno, 'requirement') for token in args[1:-1])
            tasks[ident] = TaskSpec(ident, requirements, _parse_int(args[-1], lineno, 'migration cost'))
        elif keyword == 'assign':
            _parse_assign(lineno, args, tasks, nodes, mapping)
        else:
            raise ScenarioParseError(lineno, f"unknown directive {keyword!r}")

    if resources is None:
        raise ScenarioValidationError("Error, no resources declared")
    for task_id in tasks:
        if task_id not in mapping:
            raise ScenarioValidationError(f"Error, task {task_id!r} is not assigned", task_id)

    space = ProblemSpace(
        resources=tuple(ResourceKind(index, resource) for index, resource in enumerate(resources)),
        nodes=tuple(nodes.values()),
        tasks=tuple(tasks.values()),
    )
    return Scenario(space, Assignment(mapping), name=name)


def parse_assignment(text: str, space: ProblemSpace) -> Assignment:
    """Parse an assignment file; it must place every task of ``space``."""
    nodes = {node.id: node for node in space.nodes}
    tasks = {task.id: task for task in space.tasks}
    mapping: Dict[str, str] = {}
    for lineno, (keyword, *args) in _directives(text):
        if keyword != 'assign':
            raise ScenarioParseError(lineno, f"only assign lines are allowed, got {keyword!r}")
        _parse_assign(lineno, args, tasks, nodes, mapping)
    for task in space.tasks:
        if task.id not in mapping:
            raise ScenarioValidationError(f"Error, task {task.id!r} is not assigned", task.id)
    return Assignment(mapping)


def serialize_assignment(assignment: Assignment, space: ProblemSpace) -> str:
    return ''.join(f'assign {task.id} {assignment[task.id]}\n' for task in space.tasks)


def serialize_scenario(scenario: Scenario) -> str:
    space = scenario.space
    lines = []
    if scenario.name:
        lines.append(f'# {scenario.name}')
    lines.append('resources ' + ' '.join(space.resource_names))
    lines.extend(f'node {node.id} ' + ' '.join(map(str, node.capacities)) for node in space.nodes)
    lines.extend(
        f'task {task.id} ' + ' '.join(map(str, task.requirements)) + f' {task.migration_cost}'
        for task in space.tasks
    )
    return '\n'.join(lines) + '\n' + serialize_assignment(scenario.initial, space)


def random_scenario(
    seed: int,
    nodes: int = 3,
    tasks: int = 6,
    resources: int = 2,
    max_capacity: int = 30,
    max_requirement: int = 15,
    max_cost: int = 10,
) -> Scenario:
    """Seeded random instance with a uniformly random initial assignment.

    Migration costs are drawn from ``1..max_cost``; capacities and
    requirements from ``0..max_capacity`` and ``0..max_requirement``.
    """
    if nodes < 1 or tasks < 0 or resources < 1:
        raise InputError("Error, a random scenario needs at least one node and one resource")
    rng = np.random.default_rng(seed)
    names = [f'r{index}' for index in range(resources)]
    node_ids = [f'N{index + 1:02d}' for index in range(nodes)]
    space = ProblemSpace.build(
        names,
        nodes=[(ident, rng.integers(0, max_capacity, size=resources, endpoint=True).tolist())
               for ident in node_ids],
        tasks=[(f'T{index + 1:02d}',
                rng.integers(0, max_requirement, size=resources, endpoint=True).tolist(),
                int(rng.integers(1, max_cost, endpoint=True)))
               for index in range(tasks)],
    )
    placement = rng.integers(0, nodes, size=tasks)
    initial = Assignment({task.id: node_ids[int(node)] for task, node in zip(space.tasks, placement)})
    return Scenario(space, initial, name=f'random-{seed}')
