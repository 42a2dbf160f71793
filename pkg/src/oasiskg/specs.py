"""Input descriptions the builder turns into graph structure.

These are plain dataclasses plus JSON converters.  JSON field names are
part of the CLI contract (camelCase: ``operatorAction``, ``dependsOn``,
``instanceOf``); the dataclass attributes follow Python convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any

from .terms import ModelError


class SpecInvalid(ModelError):
    """A spec value is structurally wrong (bad reference, cycle, dup name)."""

    def __init__(self, path: str, detail: str) -> None:
        super().__init__(f"{path}: {detail}")
        self.path = path
        self.detail = detail


class RefMode(Enum):
    EXACT = "exact"
    NEW = "new"


@dataclass(frozen=True)
class Ref:
    """Reference from a task element to a domain individual.

    ``exact`` points at something that already exists; ``new`` introduces
    the individual, optionally typed by the classes in ``instance_of``.
    """

    target: str
    mode: RefMode = RefMode.EXACT
    instance_of: tuple[str, ...] = ()

    @classmethod
    def exact(cls, target: str) -> "Ref":
        return cls(target, RefMode.EXACT)

    @classmethod
    def new(cls, target: str, instance_of: tuple[str, ...] = ()) -> "Ref":
        return cls(target, RefMode.NEW, tuple(instance_of))


@dataclass(frozen=True)
class TaskSpec:
    name: str
    operator_action: Ref
    operator_argument: Ref | None = None
    obj: Ref | None = None
    inputs: tuple[Ref, ...] = ()
    outputs: tuple[Ref, ...] = ()
    depends_on: tuple[str, ...] = ()


@dataclass(frozen=True)
class GoalSpec:
    name: str
    tasks: tuple[TaskSpec, ...]
    depends_on: tuple[str, ...] = ()


@dataclass(frozen=True)
class BehaviourSpec:
    name: str
    goals: tuple[GoalSpec, ...]


@dataclass(frozen=True)
class EventSpec:
    name: str
    action: TaskSpec
    kind: str | None = None
    duration: str | None = None
    window: str | None = None


@dataclass(frozen=True)
class StateSpec:
    name: str
    plan: BehaviourSpec
    events: tuple[EventSpec, ...] = ()


@dataclass(frozen=True)
class ProcedureSpec:
    name: str
    states: tuple[StateSpec, ...]


@dataclass(frozen=True)
class ProcessSpec:
    name: str
    procedures: tuple[ProcedureSpec, ...]


# ---------------------------------------------------------------------------
# JSON converters
# ---------------------------------------------------------------------------


def ref_from_json(doc: Any, path: str) -> Ref:
    if isinstance(doc, str):
        return Ref.exact(doc)
    if not isinstance(doc, dict) or "iri" not in doc:
        raise SpecInvalid(path, "expected an IRI string or {iri, mode, instanceOf}")
    mode = RefMode(doc.get("mode", "exact"))
    instance_of = tuple(doc.get("instanceOf", ()))
    if instance_of and mode is not RefMode.NEW:
        raise SpecInvalid(path, "instanceOf only applies to mode new")
    return Ref(doc["iri"], mode, instance_of)


def task_from_json(doc: dict[str, Any], path: str) -> TaskSpec:
    inputs = tuple(
        ref_from_json(r, f"{path}.inputs[{i}]")
        for i, r in enumerate(doc.get("inputs", ()))
    )
    outputs = tuple(
        ref_from_json(r, f"{path}.outputs[{i}]")
        for i, r in enumerate(doc.get("outputs", ()))
    )
    return TaskSpec(
        name=doc["name"],
        operator_action=ref_from_json(doc["operatorAction"], f"{path}.operatorAction"),
        operator_argument=(
            ref_from_json(doc["operatorArgument"], f"{path}.operatorArgument")
            if "operatorArgument" in doc
            else None
        ),
        obj=ref_from_json(doc["object"], f"{path}.object") if "object" in doc else None,
        inputs=inputs,
        outputs=outputs,
        depends_on=tuple(doc.get("dependsOn", ())),
    )


def behaviour_from_json(doc: dict[str, Any], path: str) -> BehaviourSpec:
    goals = tuple(
        GoalSpec(
            name=g["name"],
            tasks=tuple(
                task_from_json(t, f"{path}.goals[{i}].tasks[{j}]")
                for j, t in enumerate(g.get("tasks", ()))
            ),
            depends_on=tuple(g.get("dependsOn", ())),
        )
        for i, g in enumerate(doc.get("goals", ()))
    )
    return BehaviourSpec(name=doc["name"], goals=goals)


def event_from_json(doc: dict[str, Any], path: str) -> EventSpec:
    return EventSpec(
        name=doc["name"],
        action=task_from_json(doc["action"], f"{path}.action"),
        kind=doc.get("kind"),
        duration=doc.get("duration"),
        window=doc.get("window"),
    )


def process_from_json(doc: dict[str, Any], path: str) -> ProcessSpec:
    procedures = []
    for i, proc in enumerate(doc.get("procedures", ())):
        states = tuple(
            StateSpec(
                name=s["name"],
                plan=behaviour_from_json(s["plan"], f"{path}.procedures[{i}].states[{j}].plan"),
                events=tuple(
                    event_from_json(e, f"{path}.procedures[{i}].states[{j}].events[{k}]")
                    for k, e in enumerate(s.get("events", ()))
                ),
            )
            for j, s in enumerate(proc.get("states", ()))
        )
        procedures.append(ProcedureSpec(name=proc["name"], states=states))
    return ProcessSpec(name=doc["name"], procedures=tuple(procedures))
