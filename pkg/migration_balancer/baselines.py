"""
Reference strategies: exact search and deterministic heuristics.

* :func:`fullscan` -- depth-first branch and bound over task placements,
  returns the globally cheapest stable assignment.
* :func:`oracle_enumerate` -- unpruned enumeration of every assignment,
  used to cross-check :func:`fullscan` on small instances.
* :func:`greedy_solve` / :func:`balance_solve` -- single-pass
  rebalancing heuristics, run once per scenario.
"""
import enum
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .agents import RunStatus, StrategyResult
from .errors import ConfigurationError, InstanceTooLargeError
from .model import (
    Assignment, MigrationEvent, ProblemSpace, Scenario, TaskSpec,
    overload, remaining_by_node, transformation_cost,
)
from .utils import Deadline, __log__

DEFAULT_SEARCH_TIMEOUT = 300.0
DEFAULT_FULLSCAN_TIMEOUT = 600.0
CLOCK_CHECK_INTERVAL = 4096
ORACLE_LIMIT = 10 ** 7
ORACLE_CHUNK = 1 << 16


class SearchStatus(str, enum.Enum):
    OPTIMAL = 'optimal'
    INFEASIBLE = 'infeasible'
    TIMED_OUT = 'timed-out'


@dataclass(frozen=True)
class SearchBudget:
    timeout: Optional[float] = DEFAULT_SEARCH_TIMEOUT
    node_visit_limit: Optional[int] = None

    def __post_init__(self) -> None:
        if self.timeout is not None and self.timeout <= 0:
            raise ConfigurationError("Error, search timeout must be positive")
        if self.node_visit_limit is not None and self.node_visit_limit < 1:
            raise ConfigurationError("Error, node_visit_limit must be a positive integer")


@dataclass(frozen=True)
class OptimalResult:
    """Outcome of an exact search.

    A timed-out search still reports its best stable assignment so far
    in ``best``/``cost``, without a proof of optimality.
    ``budget_exhausted`` is set when the wall clock, rather than the
    node visit limit, ended the search.
    """
    status: SearchStatus
    best: Optional[Assignment]
    cost: Optional[int]
    visited: int
    elapsed: float = 0.0
    budget_exhausted: bool = False

    @property
    def is_stable(self) -> bool:
        return self.best is not None


class _BudgetExhausted(Exception):
    pass


def fullscan(scenario: Scenario, budget: Optional[SearchBudget] = None) -> OptimalResult:
    """Exact minimum-cost stable assignment by branch and bound.

    Tasks are placed in order of decreasing migration cost, each trying
    its initial node first, so a cheap incumbent is found early. A branch
    is cut when its cost so far reaches the incumbent or when a placement
    exceeds a node's capacity (requirements are non-negative, so an
    exceeded node stays exceeded further down the branch).

    The depth-first walk keeps its own stack, so the number of tasks is
    not bounded by the interpreter's recursion limit.
    """
    budget = budget or SearchBudget(timeout=DEFAULT_FULLSCAN_TIMEOUT)
    space = scenario.space
    dimension = space.dimension
    order = sorted(range(len(space.tasks)), key=lambda k: (-space.tasks[k].migration_cost, k))
    tasks = [space.tasks[k] for k in order]
    n_tasks = len(tasks)
    homes = [space.node_index(scenario.initial[task.id]) for task in tasks]
    choices = [[home] + [j for j in range(len(space.nodes)) if j != home] for home in homes]
    remaining = [list(node.capacities) for node in space.nodes]
    placement = [0] * n_tasks
    # costs[d]: cost of the partial placement of the first d tasks
    costs = [0] * (n_tasks + 1)
    cursor = [0] * (n_tasks + 1)
    deadline = Deadline(budget.timeout)
    visit_limit = budget.node_visit_limit

    best_cost: Optional[int] = None
    best_placement: Optional[List[int]] = None
    visited = 0
    clock_stop = False

    def release(depth: int) -> None:
        row = remaining[placement[depth]]
        for i in range(dimension):
            row[i] += tasks[depth].requirements[i]

    status = SearchStatus.INFEASIBLE
    depth = 0
    entered = True
    try:
        while depth >= 0:
            if entered:
                visited += 1
                if visit_limit is not None and visited > visit_limit:
                    raise _BudgetExhausted
                if visited % CLOCK_CHECK_INTERVAL == 0:
                    __log__.debug("fullscan: %d nodes visited, incumbent %s", visited, best_cost)
                    if deadline.expired:
                        clock_stop = True
                        raise _BudgetExhausted
                if depth == n_tasks:
                    best_cost = costs[depth]
                    best_placement = list(placement)
                    depth -= 1
                    if depth >= 0:
                        release(depth)
                    entered = False
                    continue
                cursor[depth] = 0
                entered = False

            task = tasks[depth]
            requirements = task.requirements
            while cursor[depth] < len(choices[depth]):
                j = choices[depth][cursor[depth]]
                cursor[depth] += 1
                step = 0 if j == homes[depth] else task.migration_cost
                if best_cost is not None and costs[depth] + step >= best_cost:
                    continue
                row = remaining[j]
                if any(row[i] < requirements[i] for i in range(dimension)):
                    continue
                for i in range(dimension):
                    row[i] -= requirements[i]
                placement[depth] = j
                costs[depth + 1] = costs[depth] + step
                depth += 1
                entered = True
                break
            else:
                depth -= 1
                if depth >= 0:
                    release(depth)
    except _BudgetExhausted:
        status = SearchStatus.TIMED_OUT
    else:
        if best_placement is not None:
            status = SearchStatus.OPTIMAL

    best = None
    if best_placement is not None:
        best = Assignment({
            task.id: space.nodes[node].id for task, node in zip(tasks, best_placement)
        })
    result = OptimalResult(status, best, best_cost, visited, deadline.elapsed, budget_exhausted=clock_stop)
    __log__.info(
        "fullscan: %s, cost %s after %d visited nodes (%.3fs)",
        status.value, best_cost, visited, result.elapsed,
    )
    return result


def oracle_enumerate(scenario: Scenario) -> OptimalResult:
    """Check every assignment for stability and keep the cheapest.

    Assignments are enumerated as mixed-radix codes and evaluated in
    vectorised chunks. No pruning of any kind.
    """
    space = scenario.space
    n_nodes, n_tasks = len(space.nodes), len(space.tasks)
    total = n_nodes ** n_tasks
    if total > ORACLE_LIMIT:
        raise InstanceTooLargeError(
            f"Error, {n_nodes}^{n_tasks} assignments exceed the enumeration limit of {ORACLE_LIMIT}")

    deadline = Deadline(None)
    requirements = np.array([task.requirements for task in space.tasks], dtype=np.int64)
    requirements = requirements.reshape(n_tasks, space.dimension)
    capacities = np.array([node.capacities for node in space.nodes], dtype=np.int64)
    capacities = capacities.reshape(n_nodes, space.dimension)
    costs = np.array([task.migration_cost for task in space.tasks], dtype=np.int64)
    homes = np.array([space.node_index(scenario.initial[task.id]) for task in space.tasks], dtype=np.int64)
    powers = np.array([n_nodes ** p for p in range(n_tasks - 1, -1, -1)], dtype=np.int64)

    best_cost: Optional[int] = None
    best_row: Optional[np.ndarray] = None
    for start in range(0, total, ORACLE_CHUNK):
        codes = np.arange(start, min(total, start + ORACLE_CHUNK), dtype=np.int64)
        rows = (codes[:, None] // powers) % max(n_nodes, 1)
        feasible = np.ones(len(codes), dtype=bool)
        for j in range(n_nodes):
            load = (rows == j).astype(np.int64) @ requirements
            feasible &= np.all(load <= capacities[j], axis=1)
        if not feasible.any():
            continue
        chunk_costs = (rows != homes).astype(np.int64) @ costs
        candidates = np.flatnonzero(feasible)
        pick = candidates[np.argmin(chunk_costs[candidates])]
        if best_cost is None or int(chunk_costs[pick]) < best_cost:
            best_cost = int(chunk_costs[pick])
            best_row = rows[pick]

    if best_row is None:
        return OptimalResult(SearchStatus.INFEASIBLE, None, None, total, deadline.elapsed)
    best = Assignment({
        task.id: space.nodes[int(node)].id for task, node in zip(space.tasks, best_row)
    })
    return OptimalResult(SearchStatus.OPTIMAL, best, best_cost, total, deadline.elapsed)


DestinationRule = Callable[[TaskSpec, Sequence[str], Dict[str, List[int]], ProblemSpace], str]


def first_fit_destination(
    task: TaskSpec, fitting: Sequence[str], remaining: Dict[str, List[int]], space: ProblemSpace,
) -> str:
    return fitting[0]


def balance_score(capacities: Sequence[int], remaining_after: Sequence[int]) -> float:
    """Smallest remaining fraction over the resources the node provides."""
    return min(
        (left / capacity for left, capacity in zip(remaining_after, capacities) if capacity > 0),
        default=0.0,
    )


def balanced_destination(
    task: TaskSpec, fitting: Sequence[str], remaining: Dict[str, List[int]], space: ProblemSpace,
) -> str:
    best_node, best_score = fitting[0], None
    for node_id in fitting:
        after = [left - required for left, required in zip(remaining[node_id], task.requirements)]
        score = balance_score(space.node(node_id).capacities, after)
        if best_score is None or score > best_score:
            best_node, best_score = node_id, score
    return best_node


def _relief(task: TaskSpec, node_remaining: Sequence[int]) -> int:
    return sum(min(required, -left) for required, left in zip(task.requirements, node_remaining) if left < 0)


def _next_move(
    space: ProblemSpace,
    mapping: Dict[str, str],
    remaining: Dict[str, List[int]],
    destination: DestinationRule,
) -> Optional[Tuple[str, str]]:
    overloaded = [node.id for node in space.nodes if min(remaining[node.id], default=0) < 0]
    overloaded.sort(key=lambda node_id: (-overload(remaining[node_id]), space.node_index(node_id)))

    for node_id in overloaded:
        hosted = [
            (task.migration_cost, -_relief(task, remaining[node_id]), position, task)
            for position, task in enumerate(space.tasks)
            if mapping[task.id] == node_id and _relief(task, remaining[node_id]) > 0
        ]
        for _, _, _, task in sorted(hosted, key=lambda item: item[:3]):
            fitting = [
                other.id for other in space.nodes
                if other.id != node_id
                and all(required <= left for required, left in zip(task.requirements, remaining[other.id]))
            ]
            if fitting:
                return task.id, destination(task, fitting, remaining, space)
    return None


def _fallback_move(
    space: ProblemSpace,
    mapping: Dict[str, str],
    remaining: Dict[str, List[int]],
    destination: DestinationRule,
) -> Optional[Tuple[str, str]]:
    """Move that most reduces the total overload when no task fits
    anywhere. Ties go to the cheaper task, then to declaration order; the
    destination rule picks among the equally good nodes. ``None`` when no
    move reduces the total overload."""
    best: Optional[Tuple[Tuple[int, int, int], TaskSpec, List[str]]] = None
    for position, task in enumerate(space.tasks):
        source = mapping[task.id]
        if _relief(task, remaining[source]) <= 0:
            continue
        freed = [left + required for left, required in zip(remaining[source], task.requirements)]
        relieved = overload(remaining[source]) - overload(freed)
        gains: Dict[str, int] = {}
        for node in space.nodes:
            if node.id == source:
                continue
            row = remaining[node.id]
            taken = [left - required for left, required in zip(row, task.requirements)]
            gains[node.id] = relieved - (overload(taken) - overload(row))
        top = max(gains.values(), default=0)
        if top <= 0:
            continue
        key = (-top, task.migration_cost, position)
        if best is None or key < best[0]:
            best = (key, task, [node_id for node_id, gain in gains.items() if gain == top])
    if best is None:
        return None
    _, task, targets = best
    return task.id, destination(task, targets, remaining, space)


def _rebalance(
    scenario: Scenario,
    budget: Optional[SearchBudget],
    destination: DestinationRule,
    name: str,
) -> StrategyResult:
    budget = budget or SearchBudget()
    space = scenario.space
    mapping = dict(scenario.initial.mapping)
    remaining = {node_id: list(row) for node_id, row in remaining_by_node(space, scenario.initial).items()}
    deadline = Deadline(budget.timeout)
    migrations: List[MigrationEvent] = []
    status = RunStatus.NO_SOLUTION

    while True:
        if all(min(row, default=0) >= 0 for row in remaining.values()):
            status = RunStatus.STABLE
            break
        if deadline.expired:
            break
        move = _next_move(space, mapping, remaining, destination)
        if move is None:
            move = _fallback_move(space, mapping, remaining, destination)
            if move is None:
                __log__.info("%s: no move reduces the overload any further", name)
                break
            __log__.debug("%s: no task fits, moving %s to reduce the overload", name, move[0])
        task_id, target = move
        source = mapping[task_id]
        for i, required in enumerate(space.task(task_id).requirements):
            remaining[source][i] += required
            remaining[target][i] -= required
        mapping[task_id] = target
        migrations.append(MigrationEvent(len(migrations), task_id, source, target))
        __log__.debug("%s: %s migrates %s -> %s", name, task_id, source, target)

    final = Assignment(mapping)
    result = StrategyResult(
        status=status,
        final=final,
        cost=transformation_cost(scenario.initial, final, space),
        migrations=tuple(migrations),
        cycles_run=len(migrations),
        elapsed=deadline.elapsed,
    )
    __log__.info("%s: %s, cost %d after %d migrations", name, status.value, result.cost, len(migrations))
    return result


def greedy_solve(scenario: Scenario, budget: Optional[SearchBudget] = None) -> StrategyResult:
    """Relieve the most overloaded node first, moving its cheapest task
    that fits entirely on another node to the first such node.

    When no task on any overloaded node fits anywhere, the move that most
    reduces the total overload is taken instead. ``NO_SOLUTION`` once not
    even such a move exists. Every move lowers the total overload, so the
    run always ends.
    """
    return _rebalance(scenario, budget, first_fit_destination, 'greedy')


def balance_solve(scenario: Scenario, budget: Optional[SearchBudget] = None) -> StrategyResult:
    """Like :func:`greedy_solve`, but the destination is the fitting node
    left with the highest smallest remaining fraction of capacity; ties
    go to the lower node index."""
    return _rebalance(scenario, budget, balanced_destination, 'balance')
