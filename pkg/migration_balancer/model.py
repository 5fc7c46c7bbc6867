"""
Problem space, task assignments and the formulas defined over them:
remaining resources, stability and the system transformation cost.

All quantities are exact integers; remaining resources may be negative,
the magnitude of a negative entry is the overload on that resource.
"""
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import InputError, ScenarioValidationError
from .utils import ResourceVector


@dataclass(frozen=True)
class ResourceKind:
    index: int
    name: str


@dataclass(frozen=True)
class NodeSpec:
    id: str
    capacities: ResourceVector

    def __post_init__(self) -> None:
        object.__setattr__(self, 'capacities', tuple(self.capacities))
        if any(value < 0 for value in self.capacities):
            raise ScenarioValidationError(
                f"Error, node {self.id!r} has a negative capacity", self.id)


@dataclass(frozen=True)
class TaskSpec:
    id: str
    requirements: ResourceVector
    migration_cost: int

    def __post_init__(self) -> None:
        object.__setattr__(self, 'requirements', tuple(self.requirements))
        if any(value < 0 for value in self.requirements):
            raise ScenarioValidationError(
                f"Error, task {self.id!r} has a negative requirement", self.id)
        if self.migration_cost < 0:
            raise ScenarioValidationError(
                f"Error, task {self.id!r} has a negative migration cost", self.id)


@dataclass(frozen=True)
class ProblemSpace:
    """Resource kinds, nodes with their capacities and tasks with their
    requirements and migration costs.

    Example::

        space = ProblemSpace.build(
            ['cpu', 'memory'],
            nodes=[('Node01', (40, 80)), ('Node02', (60, 40))],
            tasks=[('J01', (4, 5), 4), ('J02', (14, 7), 5)],
        )
    """
    resources: Tuple[ResourceKind, ...]
    nodes: Tuple[NodeSpec, ...]
    tasks: Tuple[TaskSpec, ...]

    _node_index: Dict[str, int] = field(init=False, repr=False, compare=False)
    _task_index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, 'resources', tuple(self.resources))
        object.__setattr__(self, 'nodes', tuple(self.nodes))
        object.__setattr__(self, 'tasks', tuple(self.tasks))

        names = set()
        for position, kind in enumerate(self.resources):
            if kind.index != position:
                raise ScenarioValidationError(
                    f"Error, resource {kind.name!r} has index {kind.index}, expected {position}", kind.name)
            if not kind.name or kind.name in names:
                raise ScenarioValidationError(
                    f"Error, resource name {kind.name!r} is empty or duplicated", kind.name)
            names.add(kind.name)

        dimension = len(self.resources)
        node_index: Dict[str, int] = {}
        for position, node in enumerate(self.nodes):
            if node.id in node_index:
                raise ScenarioValidationError(f"Error, duplicate node id {node.id!r}", node.id)
            if len(node.capacities) != dimension:
                raise ScenarioValidationError(
                    f"Error, node {node.id!r} declares {len(node.capacities)} capacities "
                    f"for {dimension} resources", node.id)
            node_index[node.id] = position

        task_index: Dict[str, int] = {}
        for position, task in enumerate(self.tasks):
            if task.id in task_index:
                raise ScenarioValidationError(f"Error, duplicate task id {task.id!r}", task.id)
            if len(task.requirements) != dimension:
                raise ScenarioValidationError(
                    f"Error, task {task.id!r} declares {len(task.requirements)} requirements "
                    f"for {dimension} resources", task.id)
            task_index[task.id] = position

        object.__setattr__(self, '_node_index', node_index)
        object.__setattr__(self, '_task_index', task_index)

    @classmethod
    def build(
        cls,
        resources: Sequence[str],
        nodes: Iterable[Tuple[str, Sequence[int]]],
        tasks: Iterable[Tuple[str, Sequence[int], int]],
    ) -> 'ProblemSpace':
        return cls(
            resources=tuple(ResourceKind(index, name) for index, name in enumerate(resources)),
            nodes=tuple(NodeSpec(ident, tuple(capacities)) for ident, capacities in nodes),
            tasks=tuple(TaskSpec(ident, tuple(requirements), cost) for ident, requirements, cost in tasks),
        )

    @property
    def dimension(self) -> int:
        return len(self.resources)

    @property
    def resource_names(self) -> List[str]:
        return [kind.name for kind in self.resources]

    @property
    def node_ids(self) -> List[str]:
        return [node.id for node in self.nodes]

    @property
    def task_ids(self) -> List[str]:
        return [task.id for task in self.tasks]

    def has_node(self, node_id: str) -> bool:
        return node_id in self._node_index

    def has_task(self, task_id: str) -> bool:
        return task_id in self._task_index

    def node_index(self, node_id: str) -> int:
        try:
            return self._node_index[node_id]
        except KeyError:
            raise InputError(f"Error, unknown node id {node_id!r}") from None

    def task_index(self, task_id: str) -> int:
        try:
            return self._task_index[task_id]
        except KeyError:
            raise InputError(f"Error, unknown task id {task_id!r}") from None

    def node(self, node_id: str) -> NodeSpec:
        return self.nodes[self.node_index(node_id)]

    def task(self, task_id: str) -> TaskSpec:
        return self.tasks[self.task_index(task_id)]


@dataclass(frozen=True)
class Assignment:
    """Total mapping of task ids to node ids."""
    mapping: Dict[str, str]

    def __post_init__(self) -> None:
        object.__setattr__(self, 'mapping', dict(self.mapping))

    def __hash__(self) -> int:
        return hash(frozenset(self.mapping.items()))

    def __getitem__(self, task_id: str) -> str:
        try:
            return self.mapping[task_id]
        except KeyError:
            raise InputError(f"Error, task {task_id!r} is not assigned") from None

    def __iter__(self) -> Iterator[str]:
        return iter(self.mapping)

    def __len__(self) -> int:
        return len(self.mapping)

    def items(self) -> Iterable[Tuple[str, str]]:
        return self.mapping.items()

    def moved(self, task_id: str, node_id: str) -> 'Assignment':
        mapping = dict(self.mapping)
        mapping[task_id] = node_id
        return Assignment(mapping)

    def tasks_on(self, space: ProblemSpace, node_id: str) -> List[str]:
        """Tasks hosted by a node, in task declaration order."""
        return [task.id for task in space.tasks if self.mapping.get(task.id) == node_id]

    def validate(self, space: ProblemSpace) -> None:
        for task_id, node_id in self.mapping.items():
            if not space.has_task(task_id):
                raise ScenarioValidationError(f"Error, assignment names unknown task {task_id!r}", task_id)
            if not space.has_node(node_id):
                raise ScenarioValidationError(
                    f"Error, task {task_id!r} is assigned to unknown node {node_id!r}", node_id)
        for task in space.tasks:
            if task.id not in self.mapping:
                raise ScenarioValidationError(f"Error, task {task.id!r} is not assigned", task.id)


@dataclass(frozen=True)
class Scenario:
    space: ProblemSpace
    initial: Assignment
    name: str = field(default='', compare=False)

    def __post_init__(self) -> None:
        self.initial.validate(self.space)


@dataclass(frozen=True)
class MigrationEvent:
    cycle: int
    task: str
    from_node: str
    to_node: str

    def __post_init__(self) -> None:
        assert self.from_node != self.to_node, "Migration must change the node"


def remaining_resources(space: ProblemSpace, assignment: Assignment, node: str) -> ResourceVector:
    """Capacity of ``node`` minus the summed requirements of its tasks."""
    spec = space.node(node)
    remaining = list(spec.capacities)
    for task in space.tasks:
        if assignment.mapping.get(task.id) == node:
            for i, required in enumerate(task.requirements):
                remaining[i] -= required
    return tuple(remaining)


def remaining_by_node(space: ProblemSpace, assignment: Assignment) -> Dict[str, ResourceVector]:
    remaining = {node.id: list(node.capacities) for node in space.nodes}
    for task in space.tasks:
        row = remaining[assignment[task.id]]
        for i, required in enumerate(task.requirements):
            row[i] -= required
    return {node_id: tuple(row) for node_id, row in remaining.items()}


def overload(remaining: Sequence[int]) -> int:
    return -sum(value for value in remaining if value < 0)


def node_overload(space: ProblemSpace, assignment: Assignment, node: str) -> int:
    return overload(remaining_resources(space, assignment, node))


def overloaded_nodes(space: ProblemSpace, assignment: Assignment) -> List[str]:
    remaining = remaining_by_node(space, assignment)
    return [node.id for node in space.nodes if min(remaining[node.id], default=0) < 0]


def is_stable(space: ProblemSpace, assignment: Assignment) -> bool:
    assignment.validate(space)
    return not overloaded_nodes(space, assignment)


def transformation_cost(initial: Assignment, final: Assignment, space: ProblemSpace) -> int:
    """Summed migration cost of the tasks whose node differs between
    ``initial`` and ``final``.
    """
    if set(initial.mapping) != set(final.mapping):
        raise InputError("Error, assignments cover different task sets")
    return sum(
        task.migration_cost
        for task in space.tasks
        if initial[task.id] != final[task.id]
    )


def max_transformation_cost(space: ProblemSpace) -> int:
    return sum(task.migration_cost for task in space.tasks)


def replay_migrations(
    initial: Assignment,
    events: Iterable[MigrationEvent],
    space: Optional[ProblemSpace] = None,
) -> Assignment:
    mapping = dict(initial.mapping)
    for event in events:
        current = mapping.get(event.task)
        if current is None:
            raise InputError(f"Error, migration log names unknown task {event.task!r}")
        if current != event.from_node:
            raise InputError(
                f"Error, task {event.task!r} is on {current!r}, "
                f"not on {event.from_node!r} at cycle {event.cycle}")
        if space is not None and not space.has_node(event.to_node):
            raise InputError(f"Error, migration log names unknown node {event.to_node!r}")
        mapping[event.task] = event.to_node
    return Assignment(mapping)
