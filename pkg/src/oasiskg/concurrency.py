"""Interleaving analysis for lock-protocol runs.

A protocol run is one agent's ordered request / modify / release steps
against shared resources.  Schedules are run-index sequences.
Enumeration is exhaustive up to a step bound: a run whose next step
would block (requesting a held lock) simply cannot move until the lock
frees; if nothing can move and work remains the partial schedule is
flagged as a deadlock.

Race semantics on replay:

* Modify while another agent holds the lock, or while unlocked after a
  different agent touched the resource: UnlockedModify.
* Release of a lock held by someone else: DoubleLock.
* A lone agent cannot race with itself; its unlocked accesses pass.

Race steps still take effect, so one schedule can surface several
hazards.  Reports are deduplicated on (kind, resource, agent pair);
the first schedule that exhibits a hazard wins.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum

from .builder import plan_tasks
from .core import KnowledgeBase
from .engine import procedure_order, state_chain
from .terms import Iri, ModelError
from .vocab import (
    IS_DESCRIBED_BY,
    LayerTag,
    PERFORMS_PLAN_EXECUTION,
    PROCESS,
    REFERS_AS_NEW_TO,
    REFERS_EXACTLY_TO,
    term,
)

DEFAULT_BOUND = 12


class StepKind(Enum):
    REQUEST = "Request"
    MODIFY = "Modify"
    RELEASE = "Release"


class RaceKind(Enum):
    UNLOCKED_MODIFY = "UnlockedModify"
    DOUBLE_LOCK = "DoubleLock"


@dataclass(frozen=True)
class Step:
    kind: StepKind
    resource: Iri


@dataclass(frozen=True)
class ProtocolRun:
    agent: Iri
    steps: tuple[Step, ...]


@dataclass(frozen=True)
class ResourceState:
    holder: Iri | None = None
    modified_by: tuple[Iri, ...] = ()


@dataclass(frozen=True)
class StepOutcome:
    state: ResourceState
    blocked: bool = False
    race: RaceKind | None = None
    other: Iri | None = None


@dataclass(frozen=True)
class Schedule:
    indices: tuple[int, ...]
    status: str  # complete, deadlock or truncated

    @property
    def complete(self) -> bool:
        return self.status == "complete"


@dataclass(frozen=True)
class Conflict:
    resource: Iri
    agent_a: Iri
    agent_b: Iri
    step_index: int


@dataclass(frozen=True)
class RaceReport:
    schedule: tuple[int, ...]
    conflict: Conflict
    kind: RaceKind

    def json_line(self) -> str:
        return json.dumps(
            {
                "schedule": list(self.schedule),
                "conflict": {
                    "resource": self.conflict.resource.value,
                    "agentA": self.conflict.agent_a.value,
                    "agentB": self.conflict.agent_b.value,
                    "stepIndex": self.conflict.step_index,
                },
                "kind": self.kind.value,
            },
            separators=(",", ":"),
        )


class UnknownStepKind(ModelError):
    def __init__(self, task: Iri, local: str) -> None:
        super().__init__(
            f"cannot map operator action {local!r} of {task} to a step kind"
        )
        self.task = task
        self.local = local


class UnknownHandle(ModelError):
    def __init__(self, iri: Iri) -> None:
        super().__init__(f"not an execution-layer process root: {iri}")
        self.iri = iri


class MixedAgents(ModelError):
    def __init__(self, handle: Iri) -> None:
        super().__init__(
            f"handle {handle} has states performed by different agents"
        )
        self.handle = handle


class IllegalSchedule(ModelError):
    def __init__(self, position: int) -> None:
        super().__init__(f"schedule takes a blocked step at position {position}")
        self.position = position


# ---------------------------------------------------------------------------
# Step semantics
# ---------------------------------------------------------------------------


def interpret_step(state: ResourceState, agent: Iri, kind: StepKind) -> StepOutcome:
    """Outcome of one step against one resource's lock state."""
    if kind is StepKind.REQUEST:
        if state.holder is None:
            return StepOutcome(replace(state, holder=agent))
        return StepOutcome(state, blocked=True)
    if kind is StepKind.MODIFY:
        touched = replace(state, modified_by=state.modified_by + (agent,))
        if state.holder == agent:
            return StepOutcome(touched)
        if state.holder is not None:
            return StepOutcome(
                touched, race=RaceKind.UNLOCKED_MODIFY, other=state.holder
            )
        others = [m for m in reversed(state.modified_by) if m != agent]
        if others:
            return StepOutcome(
                touched, race=RaceKind.UNLOCKED_MODIFY, other=others[0]
            )
        return StepOutcome(touched)
    # release
    if state.holder == agent:
        return StepOutcome(replace(state, holder=None))
    if state.holder is None:
        return StepOutcome(state)
    return StepOutcome(state, race=RaceKind.DOUBLE_LOCK, other=state.holder)


# ---------------------------------------------------------------------------
# Enumeration and replay
# ---------------------------------------------------------------------------


def enumerate_schedules(
    runs: list[ProtocolRun], bound: int = DEFAULT_BOUND
) -> list[Schedule]:
    """Every interleaving of the runs' steps, depth-first with the lowest
    run index explored first.  Blocked runs cannot move; when no run can
    move and steps remain, the partial schedule is kept as a deadlock."""
    schedules: list[Schedule] = []

    def walk(
        positions: tuple[int, ...],
        resources: dict[Iri, ResourceState],
        prefix: tuple[int, ...],
    ) -> None:
        if all(positions[i] >= len(r.steps) for i, r in enumerate(runs)):
            schedules.append(Schedule(prefix, "complete"))
            return
        if len(prefix) >= bound:
            schedules.append(Schedule(prefix, "truncated"))
            return
        moved = False
        for i, run in enumerate(runs):
            if positions[i] >= len(run.steps):
                continue
            step = run.steps[positions[i]]
            state = resources.get(step.resource, ResourceState())
            outcome = interpret_step(state, run.agent, step.kind)
            if outcome.blocked:
                continue
            moved = True
            nxt = dict(resources)
            nxt[step.resource] = outcome.state
            walk(
                positions[:i] + (positions[i] + 1,) + positions[i + 1 :],
                nxt,
                prefix + (i,),
            )
        if not moved:
            schedules.append(Schedule(prefix, "deadlock"))

    walk(tuple(0 for _ in runs), {}, ())
    return schedules


@dataclass(frozen=True)
class _Hazard:
    step_index: int
    kind: RaceKind
    resource: Iri
    actor: Iri
    other: Iri


def replay_schedule(
    runs: list[ProtocolRun], indices: tuple[int, ...]
) -> list[_Hazard]:
    """Replay one schedule and report every hazard along the way."""
    positions = [0 for _ in runs]
    resources: dict[Iri, ResourceState] = {}
    hazards: list[_Hazard] = []
    for at, i in enumerate(indices):
        run = runs[i]
        step = run.steps[positions[i]]
        state = resources.get(step.resource, ResourceState())
        outcome = interpret_step(state, run.agent, step.kind)
        if outcome.blocked:
            raise IllegalSchedule(at)
        resources[step.resource] = outcome.state
        positions[i] += 1
        if outcome.race is not None and outcome.other is not None:
            hazards.append(
                _Hazard(at, outcome.race, step.resource, run.agent, outcome.other)
            )
    return hazards


def detect_races(
    runs: list[ProtocolRun], bound: int = DEFAULT_BOUND
) -> list[RaceReport]:
    """Race reports over every schedule within the bound, deduplicated
    by (kind, resource, acting agent, other agent)."""
    seen: set[tuple[RaceKind, Iri, Iri, Iri]] = set()
    reports: list[RaceReport] = []
    for schedule in enumerate_schedules(runs, bound):
        for hazard in replay_schedule(runs, schedule.indices):
            key = (hazard.kind, hazard.resource, hazard.actor, hazard.other)
            if key in seen:
                continue
            seen.add(key)
            reports.append(
                RaceReport(
                    schedule=schedule.indices,
                    conflict=Conflict(
                        resource=hazard.resource,
                        agent_a=hazard.actor,
                        agent_b=hazard.other,
                        step_index=hazard.step_index,
                    ),
                    kind=hazard.kind,
                )
            )
    return reports


# ---------------------------------------------------------------------------
# Extraction from realized processes
# ---------------------------------------------------------------------------

DEFAULT_OP_MAP: dict[str, StepKind] = {
    "request": StepKind.REQUEST,
    "modify": StepKind.MODIFY,
    "release": StepKind.RELEASE,
}

_HAS_TASK_OPERATOR = term("hasTaskOperator")
_RESOURCE_BEARING = (
    term("hasTaskObject"),
    term("hasTaskOutputParameter"),
    term("hasTaskInputParameter"),
)


def _refs(kb: KnowledgeBase, node: Iri) -> list[Iri]:
    out = []
    for pred in (REFERS_EXACTLY_TO, REFERS_AS_NEW_TO):
        out.extend(o for o in kb.objects(node, pred) if isinstance(o, Iri))
    return out


def _step_kind(kb: KnowledgeBase, task: Iri, op_map: dict[str, StepKind]) -> StepKind:
    targets: list[Iri] = []
    for operator in kb.objects(task, _HAS_TASK_OPERATOR):
        if isinstance(operator, Iri):
            targets.extend(_refs(kb, operator))
    local = targets[0].local.lower() if targets else ""
    if local in op_map:
        return op_map[local]
    matches = sorted({kind.value for key, kind in op_map.items() if key in local})
    if len(matches) == 1:
        return StepKind(matches[0])
    raise UnknownStepKind(task, local)


def _step_resource(kb: KnowledgeBase, task: Iri, fallback: Iri) -> Iri:
    """The resource a task contends on: the first referenced individual
    typed by a class named Resource, else the first referenced
    individual, else the fallback."""
    candidates: list[Iri] = []
    for pred in _RESOURCE_BEARING:
        for node in kb.objects(task, pred):
            if isinstance(node, Iri):
                candidates.extend(_refs(kb, node))
    for candidate in candidates:
        rec = kb.entity(candidate)
        if rec and any(cls.local == "Resource" for cls in rec.memberships):
            return candidate
    return candidates[0] if candidates else fallback


def extract_runs(
    kb: KnowledgeBase,
    handles: list[Iri],
    op_map: dict[str, StepKind] | None = None,
) -> list[ProtocolRun]:
    """Rebuild protocol runs from realized process roots.

    Each handle contributes one run: its states in chain order, one step
    per task of each state's plan execution.  Step kinds come from the
    operator's referenced action name through ``op_map``.
    """
    mapping = dict(DEFAULT_OP_MAP)
    if op_map:
        mapping.update({k.lower(): v for k, v in op_map.items()})
    runs: list[ProtocolRun] = []
    for handle in handles:
        rec = kb.entity(handle)
        if (
            rec is None
            or PROCESS not in rec.memberships
            or rec.layer is not LayerTag.EXECUTION
        ):
            raise UnknownHandle(handle)
        agent: Iri | None = None
        steps: list[Step] = []
        for proc in procedure_order(kb, handle):
            for state in state_chain(kb, proc):
                plans = [
                    o
                    for o in kb.objects(state, IS_DESCRIBED_BY)
                    if isinstance(o, Iri)
                ]
                if not plans:
                    continue
                plan_exec = plans[0]
                performers = sorted(
                    kb.subjects(PERFORMS_PLAN_EXECUTION, plan_exec)
                )
                if performers:
                    if agent is None:
                        agent = performers[0]
                    elif agent != performers[0]:
                        raise MixedAgents(handle)
                for task in plan_tasks(kb, plan_exec):
                    steps.append(
                        Step(
                            kind=_step_kind(kb, task, mapping),
                            resource=_step_resource(kb, task, plan_exec),
                        )
                    )
        if agent is None:
            raise UnknownHandle(handle)
        runs.append(ProtocolRun(agent=agent, steps=tuple(steps)))
    return runs
