"""Graph construction: templates, behaviours, plans, processes, roles.

Naming conventions (all deterministic):

* task elements are minted under the task name: ``<task>_operator``,
  ``<task>_operator_argument``, ``<task>_object``, ``<task>_input``,
  ``<task>_output``; second and later parameters are numbered from 2
  (``<task>_input_2``); in the template layer object and parameter nodes
  additionally carry a ``_template`` suffix;
* layer clones append ``__<layer>__<n>`` to the source IRI, where ``n``
  comes from the knowledge base's clone counter;
* role individuals append ``__role__<n>`` to the role type IRI.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum

from .core import KnowledgeBase
from .specs import (
    BehaviourSpec,
    EventSpec,
    ProcessSpec,
    Ref,
    RefMode,
    SpecInvalid,
    TaskSpec,
)
from .terms import Assertion, Iri, ModelError
from .vocab import (
    ACTION,
    AGENT,
    BEHAVIOUR,
    CHILD_PREDICATES,
    CLASS_TO_OVERLOAD,
    CLASS_TO_SUBMITTED,
    CLASSES,
    CONSISTS_OF_PROCEDURE,
    DEPENDS_ON,
    DEPRECATED_THING,
    EVENT,
    EVENT_DESCRIBED_BY_ACTION,
    FINAL_STATE,
    HAS_BEHAVIOUR,
    HAS_EVENT_DURATION,
    HAS_EVENT_KIND,
    HAS_EVENT_WINDOW,
    HAS_FINAL_STATE,
    HAS_NEXT_NON_TERMINATING,
    HAS_NEXT_PROCEDURE,
    INITIAL_STATE,
    IS_DESCRIBED_BY,
    LAYER_CLASSES,
    LayerTag,
    NON_TERMINATING_STATE,
    PLAY_ROLE,
    PROC_CONSISTS_FINAL,
    PROC_CONSISTS_INITIAL,
    PROC_CONSISTS_NON_TERMINATING,
    PROCEDURE,
    PROCEDURE_STATE_CLASSES,
    PROCESS,
    PROVIDES_BEHAVIOUR,
    REFERS_AS_INSTANCE_OF,
    REFERS_AS_NEW_TO,
    REFERS_EXACTLY_TO,
    REFERS_PREDICATES,
    ROLE,
    ROLE_TYPE,
    TREE_NODE_CLASSES,
    TRIGGERS_EVENT,
    term,
)


class NotATemplate(ModelError):
    def __init__(self, iri: Iri) -> None:
        super().__init__(f"not a template behaviour root: {iri}")
        self.iri = iri


class MissingAgent(ModelError):
    def __init__(self, iri: Iri) -> None:
        super().__init__(f"agent not present in the knowledge base: {iri}")
        self.iri = iri


class LayerError(ModelError):
    def __init__(self, iri: Iri, expected: str) -> None:
        super().__init__(f"{iri} is not a {expected}")
        self.iri = iri
        self.expected = expected


class StructureMismatch(ModelError):
    def __init__(self, left: Iri, right: Iri, detail: str) -> None:
        super().__init__(f"{left} vs {right}: {detail}")
        self.left = left
        self.right = right
        self.detail = detail


class NotARole(ModelError):
    def __init__(self, iri: Iri) -> None:
        super().__init__(f"not a role individual: {iri}")
        self.iri = iri


class NotAProcedureState(ModelError):
    def __init__(self, iri: Iri) -> None:
        super().__init__(f"not a procedure state: {iri}")
        self.iri = iri


def declare_agent(kb: KnowledgeBase, iri: Iri) -> Iri:
    kb.assert_membership(iri, AGENT)
    return iri


# ---------------------------------------------------------------------------
# Spec checking
# ---------------------------------------------------------------------------


def _check_depends(
    names: list[str], deps: dict[str, tuple[str, ...]], path: str
) -> None:
    known = set(names)
    if len(known) != len(names):
        raise SpecInvalid(path, "duplicate names")
    for name, wanted in deps.items():
        for dep in wanted:
            if dep not in known:
                raise SpecInvalid(path, f"{name} depends on unknown name {dep!r}")
    # cycle check over the dependency edges
    state: dict[str, int] = {}

    def visit(name: str) -> None:
        if state.get(name) == 1:
            raise SpecInvalid(path, f"dependency cycle through {name!r}")
        if state.get(name) == 2:
            return
        state[name] = 1
        for dep in deps.get(name, ()):
            visit(dep)
        state[name] = 2

    for name in names:
        visit(name)


def _check_behaviour_spec(spec: BehaviourSpec) -> None:
    if not spec.goals:
        raise SpecInvalid(spec.name, "a behaviour needs at least one goal")
    _check_depends(
        [g.name for g in spec.goals],
        {g.name: g.depends_on for g in spec.goals},
        f"{spec.name}.goals",
    )
    for goal in spec.goals:
        if not goal.tasks:
            raise SpecInvalid(
                f"{spec.name}.{goal.name}", "a goal needs at least one task"
            )
        _check_depends(
            [t.name for t in goal.tasks],
            {t.name: t.depends_on for t in goal.tasks},
            f"{spec.name}.{goal.name}.tasks",
        )


# ---------------------------------------------------------------------------
# Tree emission
# ---------------------------------------------------------------------------


def _emit_ref(
    kb: KnowledgeBase,
    node: Iri,
    ref: Ref,
    layer_cls: Iri | None,
    *,
    as_action: bool = False,
) -> None:
    target = kb.resolve(ref.target)
    kb.ensure_entity(target)
    if as_action:
        kb.assert_membership(target, ACTION)
    if ref.mode is RefMode.EXACT:
        kb.assert_property(node, REFERS_EXACTLY_TO, target)
        return
    # a new individual is introduced in the layer under construction
    if layer_cls is not None:
        kb.assert_membership(target, layer_cls)
    kb.assert_property(node, REFERS_AS_NEW_TO, target)
    for name in ref.instance_of:
        cls = kb.resolve(name)
        kb.declare_class(cls)
        kb.assert_membership(target, cls)
        kb.assert_property(target, REFERS_AS_INSTANCE_OF, cls)


def _emit_task(
    kb: KnowledgeBase,
    spec: TaskSpec,
    layer_cls: Iri | None,
    prefix: str,
    *,
    template_names: bool,
) -> Iri:
    def typed(node: Iri, cls: Iri) -> None:
        kb.assert_membership(node, cls)
        if layer_cls is not None:
            kb.assert_membership(node, layer_cls)

    suffix = "_template" if template_names else ""
    task = kb.mint_iri(prefix, spec.name)
    typed(task, CLASSES["TaskDescription"])

    operator = kb.mint_iri(prefix, f"{spec.name}_operator")
    typed(operator, CLASSES["TaskOperator"])
    kb.assert_property(task, term("hasTaskOperator"), operator)
    _emit_ref(kb, operator, spec.operator_action, layer_cls, as_action=True)

    if spec.operator_argument is not None:
        argument = kb.mint_iri(prefix, f"{spec.name}_operator_argument")
        typed(argument, CLASSES["TaskOperatorArgument"])
        kb.assert_property(task, term("hasTaskOperatorArgument"), argument)
        _emit_ref(kb, argument, spec.operator_argument, layer_cls)

    if spec.obj is not None:
        obj = kb.mint_iri(prefix, f"{spec.name}_object{suffix}")
        typed(obj, CLASSES["TaskObject"])
        kb.assert_property(task, term("hasTaskObject"), obj)
        _emit_ref(kb, obj, spec.obj, layer_cls)

    for kind, cls, pred, refs in (
        ("input", CLASSES["TaskInputParameter"], term("hasTaskInputParameter"), spec.inputs),
        ("output", CLASSES["TaskOutputParameter"], term("hasTaskOutputParameter"), spec.outputs),
    ):
        for i, ref in enumerate(refs, start=1):
            nth = "" if i == 1 else f"_{i}"
            param = kb.mint_iri(prefix, f"{spec.name}_{kind}{nth}{suffix}")
            typed(param, cls)
            kb.assert_property(task, pred, param)
            _emit_ref(kb, param, ref, layer_cls)
    return task


def _emit_behaviour(
    kb: KnowledgeBase, spec: BehaviourSpec, layer: LayerTag, prefix: str
) -> Iri:
    _check_behaviour_spec(spec)
    layer_cls = layer.class_iri
    template_names = layer is LayerTag.TEMPLATE
    root = kb.mint_iri(prefix, spec.name)
    kb.assert_membership(root, BEHAVIOUR)
    kb.assert_membership(root, layer_cls)
    goal_nodes: dict[str, Iri] = {}
    task_nodes: dict[str, dict[str, Iri]] = {}
    for goal in spec.goals:
        node = kb.mint_iri(prefix, goal.name)
        kb.assert_membership(node, CLASSES["GoalDescription"])
        kb.assert_membership(node, layer_cls)
        kb.assert_property(root, term("consistsOfGoalDescription"), node)
        goal_nodes[goal.name] = node
        task_nodes[goal.name] = {}
        for task_spec in goal.tasks:
            task = _emit_task(
                kb, task_spec, layer_cls, prefix, template_names=template_names
            )
            kb.assert_property(node, term("consistsOfTaskDescription"), task)
            task_nodes[goal.name][task_spec.name] = task
    # dependency edges once every node exists
    for goal in spec.goals:
        for dep in goal.depends_on:
            kb.assert_property(goal_nodes[goal.name], DEPENDS_ON, goal_nodes[dep])
        for task_spec in goal.tasks:
            for dep in task_spec.depends_on:
                kb.assert_property(
                    task_nodes[goal.name][task_spec.name],
                    DEPENDS_ON,
                    task_nodes[goal.name][dep],
                )
    return root


def build_template(
    kb: KnowledgeBase, spec: BehaviourSpec, prefix: str = "ex"
) -> Iri:
    """Emit a behaviour template (everything tagged as template layer)."""
    return _emit_behaviour(kb, spec, LayerTag.TEMPLATE, prefix)


def build_plan(kb: KnowledgeBase, spec: BehaviourSpec, prefix: str = "ex") -> Iri:
    """Emit a plan: behaviour-shaped, tagged as planning layer."""
    return _emit_behaviour(kb, spec, LayerTag.PLANNING, prefix)


# ---------------------------------------------------------------------------
# Tree walking and cloning
# ---------------------------------------------------------------------------


def walk_tree(kb: KnowledgeBase, root: Iri) -> list[Iri]:
    """Nodes of a behaviour-shaped tree, breadth-first in assertion order."""
    nodes = [root]
    seen = {root}
    i = 0
    while i < len(nodes):
        current = nodes[i]
        i += 1
        for pred in CHILD_PREDICATES:
            for child in kb.objects(current, pred):
                if isinstance(child, Iri) and child not in seen:
                    seen.add(child)
                    nodes.append(child)
    return nodes


def tree_class(kb: KnowledgeBase, node: Iri) -> Iri | None:
    """The tree-node class of ``node`` (behaviour, goal, task, element)."""
    rec = kb.entity(node)
    if rec is None:
        return None
    for cls in TREE_NODE_CLASSES:
        if cls in rec.memberships:
            return cls
    return None


def clone_tree(
    kb: KnowledgeBase, root: Iri, layer: LayerTag
) -> dict[Iri, Iri]:
    """Copy a behaviour-shaped tree into ``layer``.

    Returns the source-to-clone map.  Intra-tree edges (child predicates
    and dependsOn) are re-emitted between clones; reference edges keep
    pointing at the shared targets; nothing else is copied.
    """
    sources = walk_tree(kb, root)
    mapping: dict[Iri, Iri] = {}
    for node in sources:
        clone = Iri(f"{node.value}__{layer.value}__{kb.next_clone_index()}")
        mapping[node] = clone
        kb.assert_membership(clone, layer.class_iri)
        rec = kb.entity(node)
        if rec is not None:
            for cls in rec.memberships:
                if cls not in LAYER_CLASSES:
                    kb.assert_membership(clone, cls)
    for node in sources:
        for pred in CHILD_PREDICATES + (DEPENDS_ON,):
            for child in kb.objects(node, pred):
                if isinstance(child, Iri) and child in mapping:
                    kb.assert_property(mapping[node], pred, mapping[child])
        for pred in REFERS_PREDICATES:
            for target in kb.objects(node, pred):
                kb.assert_property(mapping[node], pred, target)
    return mapping


def derive_behaviour(kb: KnowledgeBase, template_root: Iri, agent: Iri) -> Iri:
    """Clone a template into the behaviour layer and hand it to an agent.

    Every clone overloads its source through the subproperty matching its
    class, and the agent is linked with hasBehaviour.
    """
    rec = kb.entity(template_root)
    if (
        rec is None
        or BEHAVIOUR not in rec.memberships
        or rec.layer is not LayerTag.TEMPLATE
    ):
        raise NotATemplate(template_root)
    agent_rec = kb.entity(agent)
    if agent_rec is None or AGENT not in agent_rec.memberships:
        raise MissingAgent(agent)
    mapping = clone_tree(kb, template_root, LayerTag.BEHAVIOUR)
    for source, clone in mapping.items():
        cls = tree_class(kb, source)
        if cls is not None:
            kb.assert_property(clone, CLASS_TO_OVERLOAD[cls], source)
    kb.assert_property(agent, HAS_BEHAVIOUR, mapping[template_root])
    return mapping[template_root]


def plan_tasks(kb: KnowledgeBase, root: Iri) -> list[Iri]:
    """Tasks of a behaviour-shaped tree in run order: goals in assertion
    order, tasks within each goal topologically sorted by dependsOn with
    assertion order breaking ties."""
    out: list[Iri] = []
    for goal in kb.objects(root, term("consistsOfGoalDescription")):
        if not isinstance(goal, Iri):
            continue
        tasks = [
            t
            for t in kb.objects(goal, term("consistsOfTaskDescription"))
            if isinstance(t, Iri)
        ]
        task_set = set(tasks)
        placed: dict[Iri, None] = {}
        while len(placed) < len(tasks):
            ready = None
            for task in tasks:
                if task in placed:
                    continue
                deps = [
                    d
                    for d in kb.objects(task, DEPENDS_ON)
                    if isinstance(d, Iri) and d in task_set
                ]
                if all(d in placed for d in deps):
                    ready = task
                    break
            if ready is None:
                # dependency cycle: keep remaining tasks in assertion order
                for task in tasks:
                    placed.setdefault(task, None)
            else:
                placed[ready] = None
        out.extend(placed)
    return out


def pair_trees(
    kb: KnowledgeBase, left_root: Iri, right_root: Iri
) -> dict[Iri, Iri]:
    """Positional pairing of two behaviour-shaped trees.

    Children are matched index by index within each child-predicate
    group; any shape difference raises StructureMismatch.
    """
    pairs: dict[Iri, Iri] = {}
    queue: deque[tuple[Iri, Iri]] = deque([(left_root, right_root)])
    while queue:
        left, right = queue.popleft()
        if tree_class(kb, left) != tree_class(kb, right):
            raise StructureMismatch(left, right, "node classes differ")
        pairs[left] = right
        for pred in CHILD_PREDICATES:
            lc = [o for o in kb.objects(left, pred) if isinstance(o, Iri)]
            rc = [o for o in kb.objects(right, pred) if isinstance(o, Iri)]
            if len(lc) != len(rc):
                raise StructureMismatch(
                    left,
                    right,
                    f"{pred.local} fan-out differs ({len(lc)} vs {len(rc)})",
                )
            queue.extend(zip(lc, rc))
    return pairs


def submit_plan(kb: KnowledgeBase, plan_root: Iri, behaviour_root: Iri) -> None:
    """Submit a plan to a structurally matching behaviour.

    Emits one submittedTo-family edge per paired node.
    """
    plan_rec = kb.entity(plan_root)
    if (
        plan_rec is None
        or BEHAVIOUR not in plan_rec.memberships
        or plan_rec.layer is not LayerTag.PLANNING
    ):
        raise LayerError(plan_root, "planning-layer behaviour root")
    beh_rec = kb.entity(behaviour_root)
    if (
        beh_rec is None
        or BEHAVIOUR not in beh_rec.memberships
        or beh_rec.layer is not LayerTag.BEHAVIOUR
    ):
        raise LayerError(behaviour_root, "behaviour-layer behaviour root")
    pairs = pair_trees(kb, plan_root, behaviour_root)
    for plan_node, beh_node in pairs.items():
        cls = tree_class(kb, plan_node)
        if cls is not None:
            kb.assert_property(plan_node, CLASS_TO_SUBMITTED[cls], beh_node)


# ---------------------------------------------------------------------------
# Processes and events
# ---------------------------------------------------------------------------


def build_process(kb: KnowledgeBase, spec: ProcessSpec, prefix: str = "ex") -> Iri:
    """Emit a process: ordered procedures, each a chain of states whose
    plans are built inline and wired up with isDescribedBy."""
    if not spec.procedures:
        raise SpecInvalid(spec.name, "a process needs at least one procedure")
    root = kb.mint_iri(prefix, spec.name)
    kb.assert_membership(root, PROCESS)
    kb.assert_membership(root, LayerTag.PLANNING.class_iri)
    previous_proc: Iri | None = None
    for proc_spec in spec.procedures:
        if not proc_spec.states:
            raise SpecInvalid(
                f"{spec.name}.{proc_spec.name}", "a procedure needs at least one state"
            )
        proc = kb.mint_iri(prefix, proc_spec.name)
        kb.assert_membership(proc, PROCEDURE)
        kb.assert_membership(proc, LayerTag.PLANNING.class_iri)
        kb.assert_property(root, CONSISTS_OF_PROCEDURE, proc)
        if previous_proc is not None:
            kb.assert_property(previous_proc, HAS_NEXT_PROCEDURE, proc)
        previous_proc = proc

        last = len(proc_spec.states) - 1
        states: list[Iri] = []
        for i, state_spec in enumerate(proc_spec.states):
            state = kb.mint_iri(prefix, state_spec.name)
            if i == 0:
                kb.assert_membership(state, INITIAL_STATE)
                kb.assert_property(proc, PROC_CONSISTS_INITIAL, state)
            if i == last:
                kb.assert_membership(state, FINAL_STATE)
                kb.assert_property(proc, PROC_CONSISTS_FINAL, state)
            if 0 < i < last:
                kb.assert_membership(state, NON_TERMINATING_STATE)
                kb.assert_property(proc, PROC_CONSISTS_NON_TERMINATING, state)
            kb.assert_membership(state, LayerTag.PLANNING.class_iri)
            states.append(state)
        for left, right in zip(states, states[1:]):
            if kb.has_class(right, FINAL_STATE):
                kb.assert_property(left, HAS_FINAL_STATE, right)
            else:
                kb.assert_property(left, HAS_NEXT_NON_TERMINATING, right)
        for state, state_spec in zip(states, proc_spec.states):
            plan_root = build_plan(kb, state_spec.plan, prefix)
            kb.assert_property(state, IS_DESCRIBED_BY, plan_root)
            for event_spec in state_spec.events:
                attach_event(kb, state, event_spec, prefix)
    return root


def attach_event(
    kb: KnowledgeBase, state: Iri, spec: EventSpec, prefix: str = "ex"
) -> Iri:
    """Attach an event (with its task-shaped action) to a procedure state.

    The event inherits the state's layer tag.
    """
    rec = kb.entity(state)
    if rec is None or not PROCEDURE_STATE_CLASSES.intersection(rec.memberships):
        raise NotAProcedureState(state)
    layer = rec.layer
    event = kb.mint_iri(prefix, spec.name)
    kb.assert_membership(event, EVENT)
    layer_cls = layer.class_iri if layer is not None else None
    if layer_cls is not None:
        kb.assert_membership(event, layer_cls)
    action = _emit_task(kb, spec.action, layer_cls, prefix, template_names=False)
    kb.assert_property(state, TRIGGERS_EVENT, event)
    kb.assert_property(event, EVENT_DESCRIBED_BY_ACTION, action)
    if spec.kind is not None:
        kb.assert_property(event, HAS_EVENT_KIND, spec.kind)
    if spec.duration is not None:
        kb.assert_property(event, HAS_EVENT_DURATION, spec.duration)
    if spec.window is not None:
        kb.assert_property(event, HAS_EVENT_WINDOW, spec.window)
    return event


# ---------------------------------------------------------------------------
# Roles
# ---------------------------------------------------------------------------


def grant_role(
    kb: KnowledgeBase,
    agent: Iri,
    role_type: Iri,
    behaviours: list[Iri],
) -> Iri:
    """Mint a fresh role of ``role_type``, played by ``agent`` and
    providing each behaviour.

    The role type doubles as a class for the role individual and as an
    individual typed RoleType.
    """
    for behaviour in behaviours:
        rec = kb.entity(behaviour)
        if (
            rec is None
            or BEHAVIOUR not in rec.memberships
            or rec.layer is not LayerTag.BEHAVIOUR
        ):
            raise LayerError(behaviour, "behaviour-layer behaviour root")
    agent_rec = kb.entity(agent)
    if agent_rec is None or AGENT not in agent_rec.memberships:
        raise MissingAgent(agent)
    kb.declare_class(role_type)
    kb.assert_membership(role_type, ROLE_TYPE)
    role = Iri(f"{role_type.value}__role__{kb.next_clone_index()}")
    kb.assert_membership(role, ROLE)
    kb.assert_membership(role, role_type)
    kb.assert_property(agent, PLAY_ROLE, role)
    for behaviour in behaviours:
        kb.assert_property(role, PROVIDES_BEHAVIOUR, behaviour)
    return role


def deprecate_role(kb: KnowledgeBase, role: Iri) -> None:
    """Mark a role deprecated.  Idempotent; never removed."""
    rec = kb.entity(role)
    if rec is None or ROLE not in rec.memberships:
        raise NotARole(role)
    kb.assert_membership(role, DEPRECATED_THING)


class CapabilityKind(Enum):
    INTRINSIC = "intrinsic"
    VIA_ROLE = "viaRole"


@dataclass(frozen=True)
class CapabilitySource:
    kind: CapabilityKind
    role: Iri | None = None


def check_capability(
    kb: KnowledgeBase, agent: Iri, behaviour: Iri
) -> CapabilitySource | None:
    """How the agent may perform the behaviour, or ``None``.

    Own behaviours (hasBehaviour) win over role-provided ones; among
    live roles providing the behaviour the lowest IRI is picked.
    Deprecated roles grant nothing.
    """
    if Assertion(agent, HAS_BEHAVIOUR, behaviour) in kb:
        return CapabilitySource(CapabilityKind.INTRINSIC)
    candidates = []
    for role in kb.objects(agent, PLAY_ROLE):
        if not isinstance(role, Iri):
            continue
        rec = kb.entity(role)
        if rec is None or rec.deprecated:
            continue
        if Assertion(role, PROVIDES_BEHAVIOUR, behaviour) in kb:
            candidates.append(role)
    if candidates:
        return CapabilitySource(CapabilityKind.VIA_ROLE, min(candidates))
    return None


def deprecated_role_providing(
    kb: KnowledgeBase, agent: Iri, behaviour: Iri
) -> Iri | None:
    """Lowest deprecated role of the agent that would have provided the
    behaviour; used to tell stale grants from plain missing capability."""
    candidates = []
    for role in kb.objects(agent, PLAY_ROLE):
        if not isinstance(role, Iri):
            continue
        rec = kb.entity(role)
        if rec is None or not rec.deprecated:
            continue
        if Assertion(role, PROVIDES_BEHAVIOUR, behaviour) in kb:
            candidates.append(role)
    return min(candidates) if candidates else None
