"""Layered agent-behaviour knowledge graphs.

Build templates, behaviours, plans, processes and roles; validate the
layer discipline; realize processes into the execution layer and step
through them; analyse lock-protocol interleavings for races.
"""

from .builder import (
    CapabilityKind,
    CapabilitySource,
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
from .concurrency import (
    ProtocolRun,
    RaceReport,
    Schedule,
    Step,
    StepKind,
    detect_races,
    enumerate_schedules,
    extract_runs,
    interpret_step,
)
from .core import EntityRecord, KnowledgeBase
from .engine import ProcessHandle, StepRecord, realize_process
from .rdfio import export_canonical, graph_hash, import_turtle, read_graph, write_graph
from .specs import (
    BehaviourSpec,
    EventSpec,
    GoalSpec,
    ProcedureSpec,
    ProcessSpec,
    Ref,
    RefMode,
    StateSpec,
    TaskSpec,
)
from .terms import Assertion, Iri, ModelError
from .validator import Code, Violation, check_mirror, validate
from .vocab import LayerTag

__all__ = [
    "Assertion",
    "BehaviourSpec",
    "CapabilityKind",
    "CapabilitySource",
    "Code",
    "EntityRecord",
    "EventSpec",
    "GoalSpec",
    "Iri",
    "KnowledgeBase",
    "LayerTag",
    "ModelError",
    "ProcedureSpec",
    "ProcessHandle",
    "ProcessSpec",
    "ProtocolRun",
    "RaceReport",
    "Ref",
    "RefMode",
    "Schedule",
    "StateSpec",
    "Step",
    "StepKind",
    "StepRecord",
    "TaskSpec",
    "Violation",
    "attach_event",
    "build_plan",
    "build_process",
    "build_template",
    "check_capability",
    "check_mirror",
    "declare_agent",
    "deprecate_role",
    "derive_behaviour",
    "detect_races",
    "enumerate_schedules",
    "export_canonical",
    "extract_runs",
    "grant_role",
    "graph_hash",
    "import_turtle",
    "interpret_step",
    "read_graph",
    "realize_process",
    "submit_plan",
    "validate",
    "write_graph",
]
