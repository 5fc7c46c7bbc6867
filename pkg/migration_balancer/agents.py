"""
Agent-based stochastic load balancing.

Every task is represented by an agent. Each simulation cycle, every
overloaded node asks its agents how willing they are to leave, draws one
candidate with a roulette wheel over exponentially weighted evaluations,
and the candidate draws its destination the same way over per-node
points. Cycles repeat until the system is stable or the budget runs out.

Two variants share the pipeline:

* ``ijiids08`` -- agents weigh relief of overloaded resources against
  their migration cost, previously migrated agents are eager to move
  again, and the home node is favoured when choosing a destination.
* ``kesamsta07`` -- the older variant: agents are ranked by their
  requirements on overloaded resources only, with no home bias.
"""
import enum
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigurationError, NoTargetNodeError
from .model import (
    Assignment, MigrationEvent, ProblemSpace, Scenario, TaskSpec,
    remaining_by_node, transformation_cost,
)
from .selection import roulette_select, selection_percentages
from .utils import Deadline, ResourceVector, __log__

DEFAULT_RESULT_SIGNIFICANCE = 1.02
DEFAULT_OVERLOAD_WEIGHT = 1.0
DEFAULT_COST_WEIGHT = 1.0
DEFAULT_RETURN_BONUS = 10.0
DEFAULT_TIMEOUT = 300.0
DEFAULT_SEED = 42


class Variant(str, enum.Enum):
    IJIIDS08 = 'ijiids08'
    KESAMSTA07 = 'kesamsta07'


class RunStatus(str, enum.Enum):
    STABLE = 'stable'
    NO_SOLUTION = 'no-solution'


@dataclass
class AgentState:
    task: str
    current_node: str
    home_node: str
    migrated_before: bool = False
    # node left on the most recent migration, for flicker accounting
    left_node: Optional[str] = None


@dataclass(frozen=True)
class StrategyConfig:
    """Tunables of the agent strategy.

    :param result_significance: base of the exponential weight transform;
        higher values make selection greedier, values close to 1 make it
        close to uniform
    :param overload_weight: weight of the relief an agent brings to
        overloaded resources of its node
    :param cost_weight: weight of the agent's migration cost (reluctance)
    :param return_bonus: willingness bonus of agents that already migrated
    :param timeout: wall-clock budget in seconds, ``None`` for unbounded
    :param max_cycles: cycle budget, ``None`` for unbounded
    :param seed: seed of the run's random stream
    """
    result_significance: float = DEFAULT_RESULT_SIGNIFICANCE
    overload_weight: float = DEFAULT_OVERLOAD_WEIGHT
    cost_weight: float = DEFAULT_COST_WEIGHT
    return_bonus: float = DEFAULT_RETURN_BONUS
    timeout: Optional[float] = DEFAULT_TIMEOUT
    max_cycles: Optional[int] = None
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        if not self.result_significance > 1:
            raise ConfigurationError(
                f"Error, result_significance must be greater than 1, got {self.result_significance!r}")
        for name in ('overload_weight', 'cost_weight', 'return_bonus'):
            if getattr(self, name) < 0:
                raise ConfigurationError(f"Error, {name} must not be negative")
        if self.timeout is not None and self.timeout <= 0:
            raise ConfigurationError("Error, timeout must be positive")
        if self.max_cycles is not None and self.max_cycles < 1:
            raise ConfigurationError("Error, max_cycles must be a positive integer")


@dataclass(frozen=True)
class StrategyResult:
    status: RunStatus
    final: Assignment
    cost: int
    migrations: Tuple[MigrationEvent, ...] = ()
    cycles_run: int = 0
    elapsed: float = 0.0
    flickers: int = 0
    budget_exhausted: bool = False

    @property
    def is_stable(self) -> bool:
        return self.status is RunStatus.STABLE

    @property
    def migration_count(self) -> int:
        return len(self.migrations)


class Simulation:
    """Mutable state of one strategy run: where every agent is and what
    each node has left."""

    def __init__(self, scenario: Scenario) -> None:
        self.scenario = scenario
        self.space = scenario.space
        self.cycle = 0
        self.flickers = 0
        self.migrations: List[MigrationEvent] = []
        self.agents: Dict[str, AgentState] = {
            task.id: AgentState(task.id, scenario.initial[task.id], scenario.initial[task.id])
            for task in self.space.tasks
        }
        self._remaining: Dict[str, List[int]] = {
            node_id: list(vector)
            for node_id, vector in remaining_by_node(self.space, scenario.initial).items()
        }

    def remaining(self, node_id: str) -> ResourceVector:
        return tuple(self._remaining[node_id])

    def remaining_map(self) -> Dict[str, ResourceVector]:
        return {node_id: tuple(row) for node_id, row in self._remaining.items()}

    def overloaded_nodes(self) -> List[str]:
        return [node.id for node in self.space.nodes if min(self._remaining[node.id], default=0) < 0]

    def is_stable(self) -> bool:
        return not self.overloaded_nodes()

    def agents_on(self, node_id: str) -> List[AgentState]:
        return [self.agents[task.id] for task in self.space.tasks
                if self.agents[task.id].current_node == node_id]

    def assignment(self) -> Assignment:
        return Assignment({task_id: agent.current_node for task_id, agent in self.agents.items()})

    def migrate(self, task_id: str, to_node: str) -> MigrationEvent:
        agent = self.agents[task_id]
        requirements = self.space.task(task_id).requirements
        source = self._remaining[agent.current_node]
        target = self._remaining[to_node]
        for i, required in enumerate(requirements):
            source[i] += required
            target[i] -= required

        event = MigrationEvent(self.cycle, task_id, agent.current_node, to_node)
        if agent.left_node == to_node:
            self.flickers += 1
        agent.left_node = agent.current_node
        agent.current_node = to_node
        agent.migrated_before = True
        self.migrations.append(event)
        __log__.debug("cycle %d: %s migrates %s -> %s", event.cycle, task_id, event.from_node, to_node)
        return event


def agent_evaluation(
    agent: AgentState,
    node_remaining: Sequence[int],
    space: ProblemSpace,
    config: StrategyConfig,
) -> float:
    """Willingness of an agent to leave its overloaded node; higher means
    more willing.

    Relief of every overloaded resource (capped at the overload) counts
    for the move, the migration cost counts against it, and an agent that
    already migrated gets a bonus.
    """
    task = space.task(agent.task)
    relief = sum(
        min(required, -left)
        for required, left in zip(task.requirements, node_remaining)
        if left < 0
    )
    score = config.overload_weight * relief - config.cost_weight * task.migration_cost
    if agent.migrated_before:
        score += config.return_bonus
    return float(score)


def kesamsta07_evaluation(agent: AgentState, node_remaining: Sequence[int], space: ProblemSpace) -> float:
    task = space.task(agent.task)
    return float(sum(required for required, left in zip(task.requirements, node_remaining) if left < 0))


def select_candidate(
    agents: Sequence[AgentState],
    evaluations: Mapping[str, float],
    config: StrategyConfig,
    rng: np.random.Generator,
) -> AgentState:
    """Draw the agent to migrate. Agents missing from ``evaluations``
    count as 0."""
    assert agents, "An overloaded node must host at least one agent"
    scores = [evaluations.get(agent.task, 0.0) for agent in agents]
    percentages = selection_percentages(scores, config.result_significance)
    return agents[roulette_select(percentages, rng)]


def kesamsta07_candidate(
    agents: Sequence[AgentState],
    node_remaining: Sequence[int],
    space: ProblemSpace,
    config: StrategyConfig,
    rng: np.random.Generator,
) -> AgentState:
    evaluations = {agent.task: kesamsta07_evaluation(agent, node_remaining, space) for agent in agents}
    return select_candidate(agents, evaluations, config, rng)


def node_points(
    task: TaskSpec,
    candidate_node: str,
    remaining: Sequence[int],
    home_node: str,
    migrated_before: bool,
    *,
    current_node: Optional[str] = None,
    home_bias: bool = True,
) -> float:
    """Attractiveness of ``candidate_node`` for ``task``: the dot product
    of its requirements with the node's remaining resources, multiplied
    by the migration cost when the node is the home of an agent that has
    already moved."""
    assert candidate_node != current_node, "The agent's current node is not a migration target"
    points = sum(required * left for required, left in zip(task.requirements, remaining))
    if home_bias and migrated_before and candidate_node == home_node:
        points *= max(task.migration_cost, 1)
    return float(points)


def select_target_node(
    task: TaskSpec,
    agent: AgentState,
    space: ProblemSpace,
    assignment: Optional[Assignment],
    config: StrategyConfig,
    rng: np.random.Generator,
    *,
    remaining: Optional[Mapping[str, Sequence[int]]] = None,
    home_bias: bool = True,
) -> str:
    """Draw the destination of a migrating agent among all nodes but its
    current one.

    ``remaining`` may carry precomputed remaining resources per node, in
    which case ``assignment`` may be ``None``; otherwise they are derived
    from ``assignment``.
    """
    candidates = [node.id for node in space.nodes if node.id != agent.current_node]
    if not candidates:
        raise NoTargetNodeError(f"Error, no node other than {agent.current_node!r} to migrate {task.id!r} to")
    if remaining is None:
        assert assignment is not None, "Either an assignment or the remaining resources are required"
        remaining = remaining_by_node(space, assignment)
    points = [
        node_points(
            task, node_id, remaining[node_id], agent.home_node, agent.migrated_before,
            current_node=agent.current_node, home_bias=home_bias,
        )
        for node_id in candidates
    ]
    percentages = selection_percentages(points, config.result_significance)
    return candidates[roulette_select(percentages, rng)]


def run_cycle(
    state: Simulation,
    config: StrategyConfig,
    rng: np.random.Generator,
    variant: Variant = Variant.IJIIDS08,
) -> List[MigrationEvent]:
    """Run one synchronous round and return its migrations.

    Nodes overloaded at the start of the round act in ascending index
    order, each dispatching one candidate, and see the effects of the
    migrations made before them in the same round. A stable state is
    left untouched.
    """
    overloaded = state.overloaded_nodes()
    if not overloaded:
        return []

    events = []
    for node_id in overloaded:
        agents = state.agents_on(node_id)
        node_remaining = state.remaining(node_id)
        if variant is Variant.KESAMSTA07:
            candidate = kesamsta07_candidate(agents, node_remaining, state.space, config, rng)
        else:
            evaluations = {
                agent.task: agent_evaluation(agent, node_remaining, state.space, config)
                for agent in agents
            }
            candidate = select_candidate(agents, evaluations, config, rng)
        target = select_target_node(
            state.space.task(candidate.task), candidate, state.space, None, config, rng,
            remaining=state.remaining_map(), home_bias=variant is Variant.IJIIDS08,
        )
        events.append(state.migrate(candidate.task, target))

    state.cycle += 1
    return events


def run_strategy(
    scenario: Scenario,
    config: Optional[StrategyConfig] = None,
    variant: Variant = Variant.IJIIDS08,
) -> StrategyResult:
    """Run cycles until the system is stable or the time/cycle budget is
    spent. Identical ``(scenario, config, variant)`` give identical
    migration logs whenever the run ends within the budget.
    """
    config = config or StrategyConfig()
    rng = np.random.default_rng(config.seed)
    state = Simulation(scenario)
    deadline = Deadline(config.timeout)
    status = RunStatus.NO_SOLUTION
    budget_exhausted = False

    try:
        while True:
            if state.is_stable():
                status = RunStatus.STABLE
                break
            if config.max_cycles is not None and state.cycle >= config.max_cycles:
                break
            if deadline.expired:
                budget_exhausted = True
                break
            run_cycle(state, config, rng, variant)
    except NoTargetNodeError as exc:
        __log__.info("%s: %s", variant.value, exc)

    final = state.assignment()
    result = StrategyResult(
        status=status,
        final=final,
        cost=transformation_cost(scenario.initial, final, scenario.space),
        migrations=tuple(state.migrations),
        cycles_run=state.cycle,
        elapsed=deadline.elapsed,
        flickers=state.flickers,
        budget_exhausted=budget_exhausted,
    )
    __log__.info(
        "%s seed=%d: %s, cost %d after %d cycles, %d migrations (%.3fs)",
        variant.value, config.seed, status.value, result.cost, result.cycles_run,
        result.migration_count, result.elapsed,
    )
    return result
