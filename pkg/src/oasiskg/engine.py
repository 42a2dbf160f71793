"""Realizing processes into the execution layer and stepping through them.

``realize_process`` gates on a clean validation pass and on every
assigned agent being capable of the behaviour it is given (own
behaviour, or one provided by a live role).  It then clones the process,
its procedures, states and plans into the execution layer and
cross-links everything: processDrawnBy / procedureDrawnBy at the roots,
one hasExecution-family edge per plan-tree node, planExecutionDrawnBy
from each plan execution to the behaviour it draws on, and
performsPlanExecution from the agent.

``ProcessHandle.step`` walks the realized states in chain order, firing
(cloning) the events foreseen on the planning states.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .builder import (
    check_capability,
    clone_tree,
    deprecated_role_providing,
    tree_class,
)
from .core import KnowledgeBase
from .terms import Iri, ModelError
from .validator import Violation, validate
from .vocab import (
    CLASS_TO_HAS_EXECUTION,
    CONSISTS_OF_PROCEDURE,
    EVENT_DESCRIBED_BY_ACTION,
    FINAL_STATE,
    HAS_EVENT_DURATION,
    HAS_EVENT_KIND,
    HAS_EVENT_WINDOW,
    HAS_FINAL_STATE,
    HAS_NEXT,
    HAS_NEXT_NON_TERMINATING,
    HAS_NEXT_PROCEDURE,
    INITIAL_STATE,
    IS_DESCRIBED_BY,
    LAYER_CLASSES,
    LayerTag,
    PERFORMS_PLAN_EXECUTION,
    PLAN_EXECUTION_DRAWN_BY,
    PROC_CONSISTS_FINAL,
    PROC_CONSISTS_INITIAL,
    PROC_CONSISTS_NON_TERMINATING,
    PROCEDURE_DRAWN_BY,
    PROCESS,
    PROCESS_DRAWN_BY,
    TRIGGERS_EVENT,
)


class ValidationFailed(ModelError):
    def __init__(self, violations: list[Violation]) -> None:
        super().__init__(
            f"knowledge base has {len(violations)} validation finding(s)"
        )
        self.violations = violations


class NotAProcess(ModelError):
    def __init__(self, iri: Iri) -> None:
        super().__init__(f"not a planning-layer process: {iri}")
        self.iri = iri


class AssignmentIncomplete(ModelError):
    def __init__(self, missing: list[Iri]) -> None:
        names = ", ".join(str(m) for m in missing)
        super().__init__(f"states without an assignment: {names}")
        self.missing = missing


class PerformerLacksCapability(ModelError):
    code = "PERFORMER_LACKS_CAPABILITY"

    def __init__(self, state: Iri, agent: Iri, behaviour: Iri) -> None:
        super().__init__(
            f"{self.code}: {agent} cannot perform {behaviour} (state {state})"
        )
        self.state = state
        self.agent = agent
        self.behaviour = behaviour


class RoleDeprecatedUse(ModelError):
    code = "ROLE_DEPRECATED_USE"

    def __init__(self, state: Iri, agent: Iri, role: Iri) -> None:
        super().__init__(
            f"{self.code}: {agent} only qualifies through deprecated role "
            f"{role} (state {state})"
        )
        self.state = state
        self.agent = agent
        self.role = role


class CursorCompleted(ModelError):
    def __init__(self) -> None:
        super().__init__("the process run is already complete")


#: per procedure-state assignment: state -> (agent, behaviour)
Assignment = dict[Iri, tuple[Iri, Iri]]


@dataclass(frozen=True)
class StateRecord:
    index: int
    planning_state: Iri
    exec_state: Iri
    plan_exec: Iri
    agent: Iri
    behaviour: Iri


@dataclass(frozen=True)
class StepRecord:
    state: Iri
    plan_exec: Iri
    agent: Iri
    events: tuple[Iri, ...]
    index: int

    def trace_line(self) -> str:
        return json.dumps(
            {
                "state": self.state.value,
                "planExec": self.plan_exec.value,
                "agent": self.agent.value,
                "events": [e.value for e in self.events],
                "index": self.index,
            },
            separators=(",", ":"),
        )


@dataclass
class ProcessHandle:
    kb: KnowledgeBase
    process: Iri
    exec_process: Iri
    records: list[StateRecord]
    cursor: int = 0
    _steps: list[StepRecord] = field(default_factory=list)

    @property
    def completed(self) -> bool:
        return self.cursor >= len(self.records)

    def step(self) -> StepRecord:
        """Advance one state: fire its foreseen events, move the cursor."""
        if self.completed:
            raise CursorCompleted()
        rec = self.records[self.cursor]
        events = tuple(
            _fire_event(self.kb, rec.exec_state, ev)
            for ev in self.kb.objects(rec.planning_state, TRIGGERS_EVENT)
            if isinstance(ev, Iri)
        )
        step = StepRecord(
            state=rec.exec_state,
            plan_exec=rec.plan_exec,
            agent=rec.agent,
            events=events,
            index=rec.index,
        )
        self._steps.append(step)
        self.cursor += 1
        return step

    def run_to_completion(self) -> list[StepRecord]:
        while not self.completed:
            self.step()
        return list(self._steps)


# ---------------------------------------------------------------------------
# Ordering helpers
# ---------------------------------------------------------------------------


def procedure_order(kb: KnowledgeBase, process: Iri) -> list[Iri]:
    """Procedures of a process in hasNextProcedure chain order; falls
    back to assertion order when the chain is absent or broken."""
    members = [
        o for o in kb.objects(process, CONSISTS_OF_PROCEDURE) if isinstance(o, Iri)
    ]
    if len(members) <= 1:
        return members
    member_set = set(members)
    succ: dict[Iri, Iri] = {}
    has_pred: set[Iri] = set()
    for proc in members:
        for nxt in kb.objects(proc, HAS_NEXT_PROCEDURE):
            if isinstance(nxt, Iri) and nxt in member_set:
                succ[proc] = nxt
                has_pred.add(nxt)
                break
    heads = [m for m in members if m not in has_pred]
    if len(heads) != 1:
        return members
    chain = [heads[0]]
    seen = {heads[0]}
    while chain[-1] in succ and succ[chain[-1]] not in seen:
        chain.append(succ[chain[-1]])
        seen.add(chain[-1])
    return chain if len(chain) == len(members) else members


def state_chain(kb: KnowledgeBase, procedure: Iri) -> list[Iri]:
    """States of a procedure from its initial state along successor edges."""
    initials = [
        o for o in kb.objects(procedure, PROC_CONSISTS_INITIAL) if isinstance(o, Iri)
    ]
    if not initials:
        return []
    chain = [initials[0]]
    seen = {initials[0]}
    while True:
        nexts = [
            o
            for o in kb.objects(chain[-1], HAS_NEXT, entail=True)
            if isinstance(o, Iri) and o not in seen
        ]
        if not nexts:
            return chain
        chain.append(nexts[0])
        seen.add(nexts[0])


# ---------------------------------------------------------------------------
# Realization
# ---------------------------------------------------------------------------


def _layer_clone(kb: KnowledgeBase, source: Iri) -> Iri:
    clone = Iri(
        f"{source.value}__{LayerTag.EXECUTION.value}__{kb.next_clone_index()}"
    )
    kb.assert_membership(clone, LayerTag.EXECUTION.class_iri)
    rec = kb.entity(source)
    if rec is not None:
        for cls in rec.memberships:
            if cls not in LAYER_CLASSES:
                kb.assert_membership(clone, cls)
    return clone


def realize_process(
    kb: KnowledgeBase, process: Iri, assignment: Assignment
) -> ProcessHandle:
    """Clone a validated planning process into the execution layer.

    ``assignment`` must cover every procedure state; each pair is gated
    through check_capability before anything is emitted.
    """
    violations = validate(kb)
    if violations:
        raise ValidationFailed(violations)
    rec = kb.entity(process)
    if (
        rec is None
        or PROCESS not in rec.memberships
        or rec.layer is not LayerTag.PLANNING
    ):
        raise NotAProcess(process)

    procedures = procedure_order(kb, process)
    chains = {proc: state_chain(kb, proc) for proc in procedures}
    all_states = [s for proc in procedures for s in chains[proc]]
    missing = [s for s in all_states if s not in assignment]
    if missing:
        raise AssignmentIncomplete(missing)
    for state in all_states:
        agent, behaviour = assignment[state]
        if check_capability(kb, agent, behaviour) is None:
            stale = deprecated_role_providing(kb, agent, behaviour)
            if stale is not None:
                raise RoleDeprecatedUse(state, agent, stale)
            raise PerformerLacksCapability(state, agent, behaviour)

    exec_process = _layer_clone(kb, process)
    kb.assert_property(exec_process, PROCESS_DRAWN_BY, process)
    records: list[StateRecord] = []
    previous_proc: Iri | None = None
    for proc in procedures:
        exec_proc = _layer_clone(kb, proc)
        kb.assert_property(exec_process, CONSISTS_OF_PROCEDURE, exec_proc)
        kb.assert_property(exec_proc, PROCEDURE_DRAWN_BY, proc)
        if previous_proc is not None:
            kb.assert_property(previous_proc, HAS_NEXT_PROCEDURE, exec_proc)
        previous_proc = exec_proc

        exec_states: list[Iri] = []
        for state in chains[proc]:
            exec_state = _layer_clone(kb, state)
            if kb.has_class(state, INITIAL_STATE):
                kb.assert_property(exec_proc, PROC_CONSISTS_INITIAL, exec_state)
            if kb.has_class(state, FINAL_STATE):
                kb.assert_property(exec_proc, PROC_CONSISTS_FINAL, exec_state)
            if not kb.has_class(state, INITIAL_STATE) and not kb.has_class(
                state, FINAL_STATE
            ):
                kb.assert_property(
                    exec_proc, PROC_CONSISTS_NON_TERMINATING, exec_state
                )
            exec_states.append(exec_state)
        for left, right in zip(exec_states, exec_states[1:]):
            if kb.has_class(right, FINAL_STATE):
                kb.assert_property(left, HAS_FINAL_STATE, right)
            else:
                kb.assert_property(left, HAS_NEXT_NON_TERMINATING, right)

        for state, exec_state in zip(chains[proc], exec_states):
            agent, behaviour = assignment[state]
            plans = [
                o for o in kb.objects(state, IS_DESCRIBED_BY) if isinstance(o, Iri)
            ]
            plan = plans[0]
            mapping = clone_tree(kb, plan, LayerTag.EXECUTION)
            for source, clone in mapping.items():
                cls = tree_class(kb, source)
                if cls is not None:
                    kb.assert_property(source, CLASS_TO_HAS_EXECUTION[cls], clone)
            plan_exec = mapping[plan]
            kb.assert_property(plan_exec, PLAN_EXECUTION_DRAWN_BY, behaviour)
            kb.assert_property(exec_state, IS_DESCRIBED_BY, plan_exec)
            kb.assert_property(agent, PERFORMS_PLAN_EXECUTION, plan_exec)
            records.append(
                StateRecord(
                    index=len(records),
                    planning_state=state,
                    exec_state=exec_state,
                    plan_exec=plan_exec,
                    agent=agent,
                    behaviour=behaviour,
                )
            )
    return ProcessHandle(kb=kb, process=process, exec_process=exec_process, records=records)


def _fire_event(kb: KnowledgeBase, exec_state: Iri, event: Iri) -> Iri:
    """Clone a foreseen event (and its action) into the execution layer
    and hang it off the realized state."""
    exec_event = _layer_clone(kb, event)
    for pred in (HAS_EVENT_KIND, HAS_EVENT_DURATION, HAS_EVENT_WINDOW):
        for value in kb.objects(event, pred):
            kb.assert_property(exec_event, pred, value)
    for action in kb.objects(event, EVENT_DESCRIBED_BY_ACTION):
        if not isinstance(action, Iri):
            continue
        mapping = clone_tree(kb, action, LayerTag.EXECUTION)
        for source, clone in mapping.items():
            cls = tree_class(kb, source)
            if cls is not None:
                kb.assert_property(source, CLASS_TO_HAS_EXECUTION[cls], clone)
        kb.assert_property(exec_event, EVENT_DESCRIBED_BY_ACTION, mapping[action])
    kb.assert_property(exec_state, TRIGGERS_EVENT, exec_event)
    return exec_event
