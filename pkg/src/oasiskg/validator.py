"""Whole-graph consistency checks.

``validate`` never raises on graph content; it returns a sorted list of
violations.  ``check_mirror`` verifies that a linked tree retraces its
source tree edge by edge through the right family subproperties.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from . import vocab
from .builder import (
    check_capability,
    deprecated_role_providing,
    tree_class,
    walk_tree,
)
from .core import KnowledgeBase
from .terms import Assertion, Iri, ModelError
from .vocab import RDF_TYPE


class Code(Enum):
    LAYER_MIX = "LAYER_MIX"
    UNKNOWN_PREDICATE = "UNKNOWN_PREDICATE"
    LAYER_CONSTRAINT = "LAYER_CONSTRAINT"
    OVERLOAD_CROSS_LAYER = "OVERLOAD_CROSS_LAYER"
    SUBMIT_CROSS_LAYER = "SUBMIT_CROSS_LAYER"
    DRAWNBY_CROSS_LAYER = "DRAWNBY_CROSS_LAYER"
    STRUCTURE_MISMATCH = "STRUCTURE_MISMATCH"
    CHAIN_NO_INITIAL = "CHAIN_NO_INITIAL"
    CHAIN_NO_FINAL = "CHAIN_NO_FINAL"
    CHAIN_MULTIPLE_INITIAL = "CHAIN_MULTIPLE_INITIAL"
    CHAIN_MULTIPLE_FINAL = "CHAIN_MULTIPLE_FINAL"
    CHAIN_CYCLE = "CHAIN_CYCLE"
    CHAIN_UNREACHABLE_STATE = "CHAIN_UNREACHABLE_STATE"
    STATE_WITHOUT_PLAN = "STATE_WITHOUT_PLAN"
    EXEC_WITHOUT_BEHAVIOUR = "EXEC_WITHOUT_BEHAVIOUR"
    PERFORMER_LACKS_CAPABILITY = "PERFORMER_LACKS_CAPABILITY"
    ROLE_DEPRECATED_USE = "ROLE_DEPRECATED_USE"
    EVENT_WITHOUT_ACTION = "EVENT_WITHOUT_ACTION"
    DANGLING_REFERENCE = "DANGLING_REFERENCE"


@dataclass(frozen=True)
class Violation:
    code: Code
    subjects: tuple[Iri, ...]
    message: str

    def render(self) -> str:
        subs = ",".join(s.value for s in self.subjects)
        return f"{self.code.value}\t{subs}\t{self.message}"

    def sort_key(self) -> tuple[str, tuple[str, ...], str]:
        return (self.code.value, tuple(s.value for s in self.subjects), self.message)


class DanglingRoot(ModelError):
    def __init__(self, iri: Iri) -> None:
        super().__init__(f"tree root not present in the knowledge base: {iri}")
        self.iri = iri


# ---------------------------------------------------------------------------
# Mirror checking
# ---------------------------------------------------------------------------


def check_mirror(
    kb: KnowledgeBase, source_root: Iri, target_root: Iri, family: Iri
) -> list[Violation]:
    """Verify that the tree under ``source_root`` is linked node by node
    into the tree under ``target_root`` through ``family`` subproperties
    matching each node's class, and that every child edge is mirrored."""
    if kb.entity(source_root) is None:
        raise DanglingRoot(source_root)
    if kb.entity(target_root) is None:
        raise DanglingRoot(target_root)
    class_map = vocab.FAMILY_ROOTS[family]
    out: list[Violation] = []
    source_nodes = walk_tree(kb, source_root)
    target_nodes = set(walk_tree(kb, target_root))
    counterpart: dict[Iri, Iri] = {}
    for node in source_nodes:
        linked = [
            o
            for o in kb.objects(node, family, entail=True)
            if isinstance(o, Iri) and o in target_nodes
        ]
        if not linked:
            out.append(
                Violation(
                    Code.STRUCTURE_MISMATCH,
                    (node,),
                    f"no {family.local} counterpart under {target_root}",
                )
            )
            continue
        if len(set(linked)) > 1:
            out.append(
                Violation(
                    Code.STRUCTURE_MISMATCH,
                    (node, *sorted(set(linked))),
                    f"ambiguous {family.local} counterparts under {target_root}",
                )
            )
            continue
        other = linked[0]
        counterpart[node] = other
        cls = tree_class(kb, node)
        expected = class_map.get(cls) if cls is not None else None
        if expected is None:
            out.append(
                Violation(
                    Code.STRUCTURE_MISMATCH,
                    (node,),
                    "node carries no tree class",
                )
            )
        elif Assertion(node, expected, other) not in kb:
            out.append(
                Violation(
                    Code.STRUCTURE_MISMATCH,
                    (node, other),
                    f"linked through the wrong member of {family.local}, "
                    f"expected {expected.local}",
                )
            )
    if counterpart.get(source_root) not in (None, target_root):
        out.append(
            Violation(
                Code.STRUCTURE_MISMATCH,
                (source_root, target_root),
                "roots are not linked to each other",
            )
        )
    for node in source_nodes:
        mine = counterpart.get(node)
        if mine is None:
            continue
        for pred in vocab.CHILD_PREDICATES:
            for child in kb.objects(node, pred):
                if not isinstance(child, Iri):
                    continue
                theirs = counterpart.get(child)
                if theirs is None:
                    continue
                if Assertion(mine, pred, theirs) not in kb:
                    out.append(
                        Violation(
                            Code.STRUCTURE_MISMATCH,
                            (node, child),
                            f"{pred.local} edge has no mirrored edge "
                            f"between the counterparts",
                        )
                    )
    out.sort(key=Violation.sort_key)
    return out


# ---------------------------------------------------------------------------
# Whole-graph validation
# ---------------------------------------------------------------------------

_MIRROR_SWEEPS: tuple[tuple[Iri, Iri], ...] = (
    (vocab.term("overloadsBehaviour"), vocab.OVERLOADS),
    (vocab.term("planDescriptionSubmittedTo"), vocab.SUBMITTED_TO),
    (vocab.HAS_PLAN_EXECUTION, vocab.HAS_EXECUTION),
)

#: predicates whose endpoints must be typed individuals
_STRUCTURAL_EXEMPT = frozenset(vocab.REFERS_PREDICATES)


def validate(kb: KnowledgeBase) -> list[Violation]:
    out: list[Violation] = []
    out.extend(_layer_mix(kb))
    out.extend(_unknown_predicates(kb))
    out.extend(_endpoint_constraints(kb))
    out.extend(_mirrors(kb))
    out.extend(_chains(kb))
    out.extend(_states_and_events(kb))
    out.extend(_executions(kb))
    out.extend(_performers(kb))
    out.extend(_dangling(kb))
    out.sort(key=Violation.sort_key)
    return out


def _layer_mix(kb: KnowledgeBase) -> list[Violation]:
    out = []
    for rec in kb.entities.values():
        if rec.mixed_layers:
            names = ", ".join(sorted(c.local for c in rec.layer_classes))
            out.append(
                Violation(
                    Code.LAYER_MIX,
                    (rec.iri,),
                    f"entity carries several layer classes: {names}",
                )
            )
    return out


def _unknown_predicates(kb: KnowledgeBase) -> list[Violation]:
    seen: dict[Iri, None] = {}
    for a in kb.assertions:
        if a.predicate != RDF_TYPE and a.predicate not in vocab.PROPERTIES:
            seen[a.predicate] = None
    return [
        Violation(
            Code.UNKNOWN_PREDICATE,
            (pred,),
            "assertions use a predicate that is not declared",
        )
        for pred in seen
    ]


_FAMILY_CODES: tuple[tuple[Iri, Code], ...] = (
    (vocab.OVERLOADS, Code.OVERLOAD_CROSS_LAYER),
    (vocab.SUBMITTED_TO, Code.SUBMIT_CROSS_LAYER),
    (vocab.DRAWN_BY, Code.DRAWNBY_CROSS_LAYER),
)


def _endpoint_constraints(kb: KnowledgeBase) -> list[Violation]:
    out = []
    for a in kb.assertions:
        if a.predicate == RDF_TYPE:
            continue
        spec = vocab.PROPERTIES.get(a.predicate)
        if spec is None:
            continue
        problem = kb.constraint_problem(spec, a.subject, a.object)
        if problem is None:
            continue
        code = Code.LAYER_CONSTRAINT
        for family, family_code in _FAMILY_CODES:
            if a.predicate in vocab.SUB_CLOSURE[family]:
                code = family_code
                break
        subjects: tuple[Iri, ...]
        if isinstance(a.object, Iri):
            subjects = (a.subject, a.object)
        else:
            subjects = (a.subject,)
        out.append(
            Violation(code, subjects, f"{a.predicate.local}: {problem}")
        )
    return out


def _mirrors(kb: KnowledgeBase) -> list[Violation]:
    out = []
    for root_pred, family in _MIRROR_SWEEPS:
        for a in kb.query(predicate=root_pred):
            if isinstance(a.object, Iri):
                out.extend(check_mirror(kb, a.subject, a.object, family))
    return out


def _chains(kb: KnowledgeBase) -> list[Violation]:
    out = []
    for proc in kb.instances_of(vocab.PROCEDURE):
        members: dict[Iri, None] = {}
        for o in kb.objects(proc, vocab.PROC_CONSISTS_STATE, entail=True):
            if isinstance(o, Iri):
                members[o] = None
        initials = sorted(
            {
                o
                for o in kb.objects(proc, vocab.PROC_CONSISTS_INITIAL)
                if isinstance(o, Iri)
            }
        )
        finals = sorted(
            {
                o
                for o in kb.objects(proc, vocab.PROC_CONSISTS_FINAL)
                if isinstance(o, Iri)
            }
        )
        if not initials:
            out.append(
                Violation(Code.CHAIN_NO_INITIAL, (proc,), "procedure has no initial state")
            )
        elif len(initials) > 1:
            out.append(
                Violation(
                    Code.CHAIN_MULTIPLE_INITIAL,
                    (proc, *initials),
                    "procedure has several initial states",
                )
            )
        if not finals:
            out.append(
                Violation(Code.CHAIN_NO_FINAL, (proc,), "procedure has no final state")
            )
        elif len(finals) > 1:
            out.append(
                Violation(
                    Code.CHAIN_MULTIPLE_FINAL,
                    (proc, *finals),
                    "procedure has several final states",
                )
            )
        if len(initials) != 1:
            continue
        # reachability and cycle detection over the successor edges
        reachable: dict[Iri, None] = {}
        stack = [initials[0]]
        while stack:
            state = stack.pop()
            if state in reachable:
                continue
            reachable[state] = None
            for nxt in kb.objects(state, vocab.HAS_NEXT, entail=True):
                if isinstance(nxt, Iri):
                    stack.append(nxt)
        if _has_cycle(kb, initials[0]):
            out.append(
                Violation(
                    Code.CHAIN_CYCLE,
                    (proc,),
                    "successor edges loop back on the chain",
                )
            )
        for state in members:
            if state not in reachable:
                out.append(
                    Violation(
                        Code.CHAIN_UNREACHABLE_STATE,
                        (proc, state),
                        "state cannot be reached from the initial state",
                    )
                )
    return out


def _has_cycle(kb: KnowledgeBase, start: Iri) -> bool:
    colors: dict[Iri, int] = {}

    def visit(state: Iri) -> bool:
        colors[state] = 1
        for nxt in kb.objects(state, vocab.HAS_NEXT, entail=True):
            if not isinstance(nxt, Iri):
                continue
            mark = colors.get(nxt)
            if mark == 1:
                return True
            if mark is None and visit(nxt):
                return True
        colors[state] = 2
        return False

    return visit(start)


def _states_and_events(kb: KnowledgeBase) -> list[Violation]:
    out = []
    for state in kb.instances_of(*vocab.PROCEDURE_STATE_CLASSES):
        if not kb.objects(state, vocab.IS_DESCRIBED_BY):
            out.append(
                Violation(
                    Code.STATE_WITHOUT_PLAN,
                    (state,),
                    "procedure state has no describing plan",
                )
            )
    for event in kb.instances_of(vocab.EVENT):
        if not kb.objects(event, vocab.EVENT_DESCRIBED_BY_ACTION):
            out.append(
                Violation(
                    Code.EVENT_WITHOUT_ACTION,
                    (event,),
                    "event has no describing action",
                )
            )
    return out


def _executions(kb: KnowledgeBase) -> list[Violation]:
    out = []
    for rec in kb.entities.values():
        if (
            vocab.BEHAVIOUR in rec.memberships
            and rec.layer is vocab.LayerTag.EXECUTION
            and not kb.objects(rec.iri, vocab.EXECUTION_DRAWN_BY, entail=True)
        ):
            out.append(
                Violation(
                    Code.EXEC_WITHOUT_BEHAVIOUR,
                    (rec.iri,),
                    "plan execution is not drawn by any behaviour",
                )
            )
    return out


def _performers(kb: KnowledgeBase) -> list[Violation]:
    out = []
    for a in kb.query(predicate=vocab.PERFORMS_PLAN_EXECUTION):
        if not isinstance(a.object, Iri):
            continue
        agent, exec_root = a.subject, a.object
        for b in kb.objects(exec_root, vocab.EXECUTION_DRAWN_BY, entail=True):
            if not isinstance(b, Iri):
                continue
            if check_capability(kb, agent, b) is not None:
                continue
            stale = deprecated_role_providing(kb, agent, b)
            if stale is not None:
                out.append(
                    Violation(
                        Code.ROLE_DEPRECATED_USE,
                        (agent, stale),
                        f"capability for {b} comes only from a deprecated role",
                    )
                )
            else:
                out.append(
                    Violation(
                        Code.PERFORMER_LACKS_CAPABILITY,
                        (agent, b),
                        "performer has no behaviour and no live role providing it",
                    )
                )
    return out


def _dangling(kb: KnowledgeBase) -> list[Violation]:
    flagged: dict[Iri, Iri] = {}
    for a in kb.assertions:
        if a.predicate == RDF_TYPE or a.predicate in _STRUCTURAL_EXEMPT:
            continue
        spec = vocab.PROPERTIES.get(a.predicate)
        if spec is None or spec.literal_object:
            continue
        for endpoint in (a.subject, a.object):
            if not isinstance(endpoint, Iri) or endpoint in flagged:
                continue
            rec = kb.entity(endpoint)
            if rec is None or not rec.memberships:
                flagged[endpoint] = a.predicate
    return [
        Violation(
            Code.DANGLING_REFERENCE,
            (iri,),
            f"untyped entity on a {pred.local} edge",
        )
        for iri, pred in flagged.items()
    ]
