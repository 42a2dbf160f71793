from __future__ import annotations

import random

import networkx as nx
import pytest
from networkx.algorithms import isomorphism

from oasiskg import (
    Assertion,
    BehaviourSpec,
    CapabilityKind,
    EventSpec,
    GoalSpec,
    Iri,
    KnowledgeBase,
    LayerTag,
    ProcedureSpec,
    ProcessSpec,
    Ref,
    StateSpec,
    TaskSpec,
    attach_event,
    build_plan,
    build_process,
    build_template,
    check_capability,
    declare_agent,
    deprecate_role,
    derive_behaviour,
    grant_role,
    submit_plan,
)
from oasiskg.builder import (
    LayerError,
    MissingAgent,
    NotAProcedureState,
    NotARole,
    NotATemplate,
    StructureMismatch,
    clone_tree,
    deprecated_role_providing,
    pair_trees,
    plan_tasks,
    tree_class,
    walk_tree,
)
from oasiskg.specs import SpecInvalid
from oasiskg import vocab

from conftest import random_behaviour_spec


EX = "http://example.org/"


def ex(local: str) -> Iri:
    return Iri(EX + local)


def simple_spec(name: str, tasks_per_goal=(1,)) -> BehaviourSpec:
    goals = []
    for gi, n_tasks in enumerate(tasks_per_goal):
        tasks = tuple(
            TaskSpec(
                name=f"{name}_g{gi}_t{ti}",
                operator_action=Ref.exact("act"),
            )
            for ti in range(n_tasks)
        )
        goals.append(GoalSpec(name=f"{name}_g{gi}", tasks=tasks))
    return BehaviourSpec(name=name, goals=tuple(goals))


# ---------------------------------------------------------------------------
# Templates and plans
# ---------------------------------------------------------------------------


def test_template_tree_has_the_expected_nodes(kb, fig_template_spec):
    root = build_template(kb, fig_template_spec)
    assert root == ex("request_lock_behaviour_template")
    assert [n.value for n in walk_tree(kb, root)] == [
        EX + "request_lock_behaviour_template",
        EX + "request_lock_goal_template",
        EX + "request_lock_task",
        EX + "request_lock_task_operator",
        EX + "request_lock_task_operator_argument",
        EX + "request_lock_task_object_template",
        EX + "request_lock_task_output_template",
    ]
    for node in walk_tree(kb, root):
        assert kb.layer_of(node) is LayerTag.TEMPLATE


def test_template_reference_edges(kb, fig_template_spec):
    build_template(kb, fig_template_spec)
    op = ex("request_lock_task_operator")
    assert kb.objects(op, vocab.REFERS_EXACTLY_TO) == [ex("request")]
    # exact operator targets are typed as actions, nothing else
    assert kb.has_class(ex("request"), vocab.ACTION)
    assert kb.layer_of(ex("request")) is None
    # fresh outputs join the tree's layer and carry their declared class
    out = ex("request_lock_task_output_template")
    assert kb.objects(out, vocab.REFERS_AS_NEW_TO) == [ex("lock")]
    assert kb.layer_of(ex("lock")) is LayerTag.TEMPLATE
    assert kb.has_class(ex("lock"), ex("Lock"))
    assert kb.objects(ex("lock"), vocab.REFERS_AS_INSTANCE_OF) == [ex("Lock")]
    assert ex("Lock") in kb.user_classes


def test_plan_is_template_shaped_but_planning_tagged(kb, fig_template_spec):
    root = build_plan(kb, fig_template_spec)
    for node in walk_tree(kb, root):
        assert kb.layer_of(node) is LayerTag.PLANNING
    # the object node drops the template-only suffix
    assert ex("request_lock_task_object") in walk_tree(kb, root)


def test_tree_class_identifies_each_node(kb, fig_template_spec):
    root = build_template(kb, fig_template_spec)
    classes = [tree_class(kb, n) for n in walk_tree(kb, root)]
    assert classes == [
        vocab.BEHAVIOUR,
        vocab.GOAL_DESCRIPTION,
        vocab.TASK_DESCRIPTION,
        vocab.TASK_OPERATOR,
        vocab.TASK_OPERATOR_ARGUMENT,
        vocab.TASK_OBJECT,
        vocab.TASK_OUTPUT_PARAMETER,
    ]


def test_multiple_inputs_get_numbered_names(kb):
    spec = BehaviourSpec(
        name="multi",
        goals=(
            GoalSpec(
                name="multi_g",
                tasks=(
                    TaskSpec(
                        name="multi_t",
                        operator_action=Ref.exact("act"),
                        inputs=(Ref.exact("x"), Ref.exact("y"), Ref.exact("z")),
                    ),
                ),
            ),
        ),
    )
    root = build_plan(kb, spec)
    nodes = {n.value.rsplit("/", 1)[-1] for n in walk_tree(kb, root)}
    assert {"multi_t_input", "multi_t_input_2", "multi_t_input_3"} <= nodes


def test_depends_on_edges_are_emitted(kb):
    spec = BehaviourSpec(
        name="dep",
        goals=(
            GoalSpec(
                name="dep_g",
                tasks=(
                    TaskSpec(name="dep_t1", operator_action=Ref.exact("act")),
                    TaskSpec(
                        name="dep_t2",
                        operator_action=Ref.exact("act"),
                        depends_on=("dep_t1",),
                    ),
                ),
            ),
        ),
    )
    build_plan(kb, spec)
    assert Assertion(ex("dep_t2"), vocab.DEPENDS_ON, ex("dep_t1")) in kb


# ---------------------------------------------------------------------------
# Spec sanity checks
# ---------------------------------------------------------------------------


def test_behaviour_spec_needs_goals_and_tasks(kb):
    with pytest.raises(SpecInvalid):
        build_template(kb, BehaviourSpec(name="empty", goals=()))
    with pytest.raises(SpecInvalid):
        build_template(
            kb, BehaviourSpec(name="bare", goals=(GoalSpec(name="g", tasks=()),))
        )


def test_duplicate_task_names_are_rejected(kb):
    spec = BehaviourSpec(
        name="dup",
        goals=(
            GoalSpec(
                name="dup_g",
                tasks=(
                    TaskSpec(name="same", operator_action=Ref.exact("act")),
                    TaskSpec(name="same", operator_action=Ref.exact("act")),
                ),
            ),
        ),
    )
    with pytest.raises(SpecInvalid):
        build_template(kb, spec)


def test_unknown_dependency_is_rejected(kb):
    spec = BehaviourSpec(
        name="ghost",
        goals=(
            GoalSpec(
                name="ghost_g",
                tasks=(
                    TaskSpec(
                        name="t",
                        operator_action=Ref.exact("act"),
                        depends_on=("nowhere",),
                    ),
                ),
            ),
        ),
    )
    with pytest.raises(SpecInvalid):
        build_template(kb, spec)


def test_dependency_cycles_are_rejected(kb):
    spec = BehaviourSpec(
        name="loop",
        goals=(
            GoalSpec(
                name="loop_g",
                tasks=(
                    TaskSpec(
                        name="t1", operator_action=Ref.exact("act"), depends_on=("t2",)
                    ),
                    TaskSpec(
                        name="t2", operator_action=Ref.exact("act"), depends_on=("t1",)
                    ),
                ),
            ),
        ),
    )
    with pytest.raises(SpecInvalid):
        build_template(kb, spec)


# ---------------------------------------------------------------------------
# Cloning and derivation
# ---------------------------------------------------------------------------


def tree_digraph(kb: KnowledgeBase, root: Iri) -> nx.DiGraph:
    """Independent picture of a behaviour tree for the isomorphism check."""
    g = nx.DiGraph()
    for node in walk_tree(kb, root):
        cls = tree_class(kb, node)
        g.add_node(node.value, cls=cls.value if cls else "")
    for node in walk_tree(kb, root):
        for pred in vocab.CHILD_PREDICATES:
            for child in kb.objects(node, pred):
                g.add_edge(node.value, child.value, pred=pred.value)
    return g


def assert_isomorphic(kb: KnowledgeBase, left: Iri, right: Iri) -> None:
    matcher = isomorphism.DiGraphMatcher(
        tree_digraph(kb, left),
        tree_digraph(kb, right),
        node_match=lambda a, b: a["cls"] == b["cls"],
        edge_match=lambda a, b: a["pred"] == b["pred"],
    )
    assert matcher.is_isomorphic()


def test_clone_tree_copies_structure_and_shares_references(kb, fig_template_spec):
    root = build_template(kb, fig_template_spec)
    mapping = clone_tree(kb, root, LayerTag.PLANNING)
    assert set(mapping) == set(walk_tree(kb, root))
    clone_root = mapping[root]
    assert clone_root.value.startswith(root.value + "__planning__")
    assert_isomorphic(kb, root, clone_root)
    for source, clone in mapping.items():
        assert kb.layer_of(clone) is LayerTag.PLANNING
        assert tree_class(kb, clone) == tree_class(kb, source)
    # reference targets are shared, not cloned
    op_clone = mapping[ex("request_lock_task_operator")]
    assert kb.objects(op_clone, vocab.REFERS_EXACTLY_TO) == [ex("request")]


def test_derive_behaviour_builds_an_isomorphic_copy(kb, fig_template_spec):
    template = build_template(kb, fig_template_spec)
    agent = declare_agent(kb, ex("alice"))
    behaviour = derive_behaviour(kb, template, agent)
    assert_isomorphic(kb, template, behaviour)
    for node in walk_tree(kb, behaviour):
        assert kb.layer_of(node) is LayerTag.BEHAVIOUR
    assert Assertion(agent, vocab.HAS_BEHAVIOUR, behaviour) in kb


def test_derive_behaviour_links_every_node_to_its_template(kb, fig_template_spec):
    template = build_template(kb, fig_template_spec)
    agent = declare_agent(kb, ex("alice"))
    behaviour = derive_behaviour(kb, template, agent)
    overload_edges = kb.query(predicate=vocab.OVERLOADS, entail=True)
    assert len(overload_edges) == 7  # one per tree node
    sources = {a.subject for a in overload_edges}
    targets = {a.object for a in overload_edges}
    assert sources == set(walk_tree(kb, behaviour))
    assert targets == set(walk_tree(kb, template))
    # each edge uses the member matching its endpoint class
    for edge in overload_edges:
        cls = tree_class(kb, edge.subject)
        assert edge.predicate == vocab.CLASS_TO_OVERLOAD[cls]


def test_derive_behaviour_rejects_non_templates(kb, fig_template_spec):
    agent = declare_agent(kb, ex("alice"))
    plan = build_plan(kb, fig_template_spec)
    with pytest.raises(NotATemplate):
        derive_behaviour(kb, plan, agent)
    with pytest.raises(NotATemplate):
        derive_behaviour(kb, ex("nothing"), agent)


def test_derive_behaviour_requires_a_declared_agent(kb, fig_template_spec):
    template = build_template(kb, fig_template_spec)
    with pytest.raises(MissingAgent):
        derive_behaviour(kb, template, ex("stranger"))


def test_derivation_is_isomorphic_for_random_specs(kb):
    rng = random.Random(411)
    for i in range(10):
        spec = random_behaviour_spec(rng, f"r{i}")
        spec = BehaviourSpec(name=spec.name + "_template", goals=spec.goals)
        template = build_template(kb, spec)
        agent = declare_agent(kb, ex(f"agent{i}"))
        behaviour = derive_behaviour(kb, template, agent)
        assert_isomorphic(kb, template, behaviour)
        n = len(walk_tree(kb, template))
        edges = [
            a
            for a in kb.query(predicate=vocab.OVERLOADS, entail=True)
            if a.subject in set(walk_tree(kb, behaviour))
        ]
        assert len(edges) == n


# ---------------------------------------------------------------------------
# Task ordering
# ---------------------------------------------------------------------------


def test_plan_tasks_respects_dependencies_with_stable_ties(kb):
    spec = BehaviourSpec(
        name="order",
        goals=(
            GoalSpec(
                name="order_g",
                tasks=(
                    TaskSpec(
                        name="t_b",
                        operator_action=Ref.exact("act"),
                        depends_on=("t_a",),
                    ),
                    TaskSpec(name="t_a", operator_action=Ref.exact("act")),
                    TaskSpec(name="t_c", operator_action=Ref.exact("act")),
                ),
            ),
        ),
    )
    root = build_plan(kb, spec)
    names = [t.local for t in plan_tasks(kb, root)]
    assert names == ["t_a", "t_b", "t_c"]


def test_plan_tasks_walks_goals_in_order(kb):
    root = build_plan(kb, simple_spec("two", tasks_per_goal=(1, 2)))
    names = [t.local for t in plan_tasks(kb, root)]
    assert names == ["two_g0_t0", "two_g1_t0", "two_g1_t1"]


# ---------------------------------------------------------------------------
# Submission
# ---------------------------------------------------------------------------


def submit_scenario(kb, fig_template_spec):
    template = build_template(kb, fig_template_spec)
    agent = declare_agent(kb, ex("alice"))
    behaviour = derive_behaviour(kb, template, agent)
    task = fig_template_spec.goals[0].tasks[0]
    plan_spec = BehaviourSpec(
        name="request_lock_plan",
        goals=(
            GoalSpec(
                name="request_lock_plan_goal",
                tasks=(
                    TaskSpec(
                        name="request_lock_plan_task",
                        operator_action=task.operator_action,
                        operator_argument=task.operator_argument,
                        obj=task.obj,
                        outputs=(Ref.exact("lock"),),
                    ),
                ),
            ),
        ),
    )
    plan = build_plan(kb, plan_spec)
    return template, agent, behaviour, plan


def test_submit_plan_mirrors_every_node(kb, fig_template_spec):
    _, _, behaviour, plan = submit_scenario(kb, fig_template_spec)
    submit_plan(kb, plan, behaviour)
    edges = kb.query(predicate=vocab.SUBMITTED_TO, entail=True)
    assert len(edges) == 7
    assert {a.subject for a in edges} == set(walk_tree(kb, plan))
    assert {a.object for a in edges} == set(walk_tree(kb, behaviour))
    for edge in edges:
        cls = tree_class(kb, edge.subject)
        assert edge.predicate == vocab.CLASS_TO_SUBMITTED[cls]


def test_submit_plan_checks_layers(kb, fig_template_spec):
    template, _, behaviour, plan = submit_scenario(kb, fig_template_spec)
    with pytest.raises(LayerError):
        submit_plan(kb, behaviour, behaviour)
    with pytest.raises(LayerError):
        submit_plan(kb, plan, template)


def test_submit_plan_rejects_shape_mismatches(kb, fig_template_spec):
    _, _, behaviour, _ = submit_scenario(kb, fig_template_spec)
    other = build_plan(kb, simple_spec("small"))
    with pytest.raises(StructureMismatch):
        submit_plan(kb, other, behaviour)


def test_pair_trees_matches_nodes_positionally(kb, fig_template_spec):
    template = build_template(kb, fig_template_spec)
    mapping = clone_tree(kb, template, LayerTag.PLANNING)
    pairs = pair_trees(kb, mapping[template], template)
    assert dict(pairs) == {clone: src for src, clone in mapping.items()}


# ---------------------------------------------------------------------------
# Processes, procedures, states, events
# ---------------------------------------------------------------------------


def three_state_process(name: str) -> ProcessSpec:
    return ProcessSpec(
        name=name,
        procedures=(
            ProcedureSpec(
                name=f"{name}_proc",
                states=tuple(
                    StateSpec(
                        name=f"{name}_s{i}",
                        plan=simple_spec(f"{name}_plan{i}"),
                    )
                    for i in (1, 2, 3)
                ),
            ),
        ),
    )


def test_build_process_types_and_chains_states(kb):
    root = build_process(kb, three_state_process("p"))
    assert kb.has_class(root, vocab.PROCESS)
    assert kb.layer_of(root) is LayerTag.PLANNING
    proc = kb.objects(root, vocab.CONSISTS_OF_PROCEDURE)[0]
    assert kb.has_class(proc, vocab.PROCEDURE)
    s1, s2, s3 = (ex(f"p_s{i}") for i in (1, 2, 3))
    assert kb.has_class(s1, vocab.INITIAL_STATE)
    assert kb.has_class(s2, vocab.NON_TERMINATING_STATE)
    assert kb.has_class(s3, vocab.FINAL_STATE)
    assert kb.objects(proc, vocab.PROC_CONSISTS_INITIAL) == [s1]
    assert kb.objects(proc, vocab.PROC_CONSISTS_NON_TERMINATING) == [s2]
    assert kb.objects(proc, vocab.PROC_CONSISTS_FINAL) == [s3]
    assert kb.entails(proc, vocab.PROC_CONSISTS_STATE, s2)
    assert kb.objects(s1, vocab.HAS_NEXT_NON_TERMINATING) == [s2]
    assert kb.objects(s2, vocab.HAS_FINAL_STATE) == [s3]
    # every state is described by a planning-layer plan
    for state in (s1, s2, s3):
        plans = kb.objects(state, vocab.IS_DESCRIBED_BY)
        assert len(plans) == 1
        assert kb.layer_of(plans[0]) is LayerTag.PLANNING


def test_single_state_procedure_is_both_initial_and_final(kb):
    spec = ProcessSpec(
        name="solo",
        procedures=(
            ProcedureSpec(
                name="solo_proc",
                states=(StateSpec(name="solo_s", plan=simple_spec("solo_plan")),),
            ),
        ),
    )
    build_process(kb, spec)
    s = ex("solo_s")
    assert kb.has_class(s, vocab.INITIAL_STATE)
    assert kb.has_class(s, vocab.FINAL_STATE)
    proc = ex("solo_proc")
    assert kb.objects(proc, vocab.PROC_CONSISTS_INITIAL) == [s]
    assert kb.objects(proc, vocab.PROC_CONSISTS_FINAL) == [s]
    assert kb.query(s, vocab.HAS_NEXT, entail=True) == []


def test_multiple_procedures_are_chained(kb):
    spec = ProcessSpec(
        name="duo",
        procedures=(
            ProcedureSpec(
                name="duo_p1",
                states=(StateSpec(name="duo_p1_s", plan=simple_spec("dp1")),),
            ),
            ProcedureSpec(
                name="duo_p2",
                states=(StateSpec(name="duo_p2_s", plan=simple_spec("dp2")),),
            ),
        ),
    )
    root = build_process(kb, spec)
    assert kb.objects(root, vocab.CONSISTS_OF_PROCEDURE) == [
        ex("duo_p1"),
        ex("duo_p2"),
    ]
    assert kb.objects(ex("duo_p1"), vocab.HAS_NEXT_PROCEDURE) == [ex("duo_p2")]


def test_event_specs_attach_to_their_state(kb):
    spec = ProcessSpec(
        name="ev",
        procedures=(
            ProcedureSpec(
                name="ev_proc",
                states=(
                    StateSpec(
                        name="ev_s",
                        plan=simple_spec("ev_plan"),
                        events=(
                            EventSpec(
                                name="ping",
                                action=TaskSpec(
                                    name="ping_task",
                                    operator_action=Ref.exact("notify"),
                                ),
                                kind="signal",
                                duration="PT1S",
                                window="PT10S",
                            ),
                        ),
                    ),
                ),
            ),
        ),
    )
    build_process(kb, spec)
    state, event = ex("ev_s"), ex("ping")
    assert kb.objects(state, vocab.TRIGGERS_EVENT) == [event]
    assert kb.has_class(event, vocab.EVENT)
    assert kb.layer_of(event) is LayerTag.PLANNING
    actions = kb.objects(event, vocab.EVENT_DESCRIBED_BY_ACTION)
    assert actions == [ex("ping_task")]
    assert kb.objects(event, vocab.HAS_EVENT_KIND) == ["signal"]
    assert kb.objects(event, vocab.HAS_EVENT_DURATION) == ["PT1S"]
    assert kb.objects(event, vocab.HAS_EVENT_WINDOW) == ["PT10S"]


def test_attach_event_rejects_non_states(kb):
    build_process(kb, three_state_process("q"))
    event = EventSpec(
        name="stray",
        action=TaskSpec(name="stray_task", operator_action=Ref.exact("notify")),
    )
    with pytest.raises(NotAProcedureState):
        attach_event(kb, ex("q"), event)  # the process root is not a state


# ---------------------------------------------------------------------------
# Roles and capabilities
# ---------------------------------------------------------------------------


def role_scenario(kb, fig_template_spec):
    template = build_template(kb, fig_template_spec)
    owner = declare_agent(kb, ex("owner"))
    behaviour = derive_behaviour(kb, template, owner)
    other = declare_agent(kb, ex("other"))
    return owner, other, behaviour


def test_grant_role_mints_a_typed_role(kb, fig_template_spec):
    owner, other, behaviour = role_scenario(kb, fig_template_spec)
    role = grant_role(kb, other, ex("Consumer"), [behaviour])
    assert role.value.startswith(ex("Consumer").value + "__role__")
    assert kb.has_class(role, vocab.ROLE)
    assert kb.has_class(role, ex("Consumer"))
    # the role type is both a class and an individual
    assert ex("Consumer") in kb.user_classes
    assert kb.has_class(ex("Consumer"), vocab.ROLE_TYPE)
    assert Assertion(other, vocab.PLAY_ROLE, role) in kb
    assert Assertion(role, vocab.PROVIDES_BEHAVIOUR, behaviour) in kb


def test_grant_role_validates_inputs(kb, fig_template_spec):
    owner, other, behaviour = role_scenario(kb, fig_template_spec)
    template = ex("request_lock_behaviour_template")
    with pytest.raises(LayerError):
        grant_role(kb, other, ex("Consumer"), [template])
    with pytest.raises(MissingAgent):
        grant_role(kb, ex("stranger"), ex("Consumer"), [behaviour])


def test_check_capability_prefers_own_behaviours(kb, fig_template_spec):
    owner, other, behaviour = role_scenario(kb, fig_template_spec)
    role = grant_role(kb, owner, ex("Consumer"), [behaviour])
    source = check_capability(kb, owner, behaviour)
    assert source.kind is CapabilityKind.INTRINSIC
    assert source.role is None
    via = check_capability(kb, other, behaviour)
    assert via is None
    role2 = grant_role(kb, other, ex("Consumer"), [behaviour])
    via = check_capability(kb, other, behaviour)
    assert via.kind is CapabilityKind.VIA_ROLE
    assert via.role == role2


def test_check_capability_picks_the_lowest_live_role(kb, fig_template_spec):
    _, other, behaviour = role_scenario(kb, fig_template_spec)
    first = grant_role(kb, other, ex("Consumer"), [behaviour])
    second = grant_role(kb, other, ex("Consumer"), [behaviour])
    lowest = min(first, second)
    assert check_capability(kb, other, behaviour).role == lowest
    deprecate_role(kb, lowest)
    assert check_capability(kb, other, behaviour).role == max(first, second)


def test_deprecation_is_idempotent_and_final(kb, fig_template_spec):
    _, other, behaviour = role_scenario(kb, fig_template_spec)
    role = grant_role(kb, other, ex("Consumer"), [behaviour])
    deprecate_role(kb, role)
    deprecate_role(kb, role)
    assert kb.entity(role).deprecated
    assert check_capability(kb, other, behaviour) is None
    assert deprecated_role_providing(kb, other, behaviour) == role


def test_deprecate_role_rejects_non_roles(kb):
    with pytest.raises(NotARole):
        deprecate_role(kb, ex("nothing"))
    declare_agent(kb, ex("alice"))
    with pytest.raises(NotARole):
        deprecate_role(kb, ex("alice"))
