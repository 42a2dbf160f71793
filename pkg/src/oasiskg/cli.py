"""Command line interface.

Exit codes: 0 success, 1 operational error, 2 validation findings
(including realize-time capability failures), 3 races found, 4 parse
error in an input file.

The environment variable OASIS_PREFIX_MAP may name a JSON file of
additional prefix bindings ({"pfx": "http://..."}) applied to every
command.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources

import jsonschema

from . import builder, engine, rdfio
from .concurrency import StepKind, detect_races, extract_runs
from .core import KnowledgeBase
from .specs import behaviour_from_json, event_from_json, process_from_json
from .terms import Iri, ModelError
from .validator import validate

OK = 0
OPERATIONAL = 1
FINDINGS = 2
RACES = 3
PARSE = 4


def _fail(message: str, code: int) -> int:
    print(message, file=sys.stderr)
    return code


def _apply_env_prefixes(kb: KnowledgeBase) -> None:
    path = os.environ.get("OASIS_PREFIX_MAP")
    if not path:
        return
    with open(path, "r", encoding="utf-8") as fh:
        table = json.load(fh)
    for prefix, base in table.items():
        kb.register_prefix(prefix, base)


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _schema() -> dict:
    text = (
        resources.files("oasiskg")
        .joinpath("schema/build-spec.schema.json")
        .read_text(encoding="utf-8")
    )
    return json.loads(text)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_build(args: argparse.Namespace) -> int:
    try:
        doc = _load_json(args.spec)
    except OSError as err:
        return _fail(f"cannot read {args.spec}: {err}", OPERATIONAL)
    except json.JSONDecodeError as err:
        return _fail(f"{args.spec}: {err}", PARSE)
    try:
        jsonschema.validate(doc, _schema())
    except jsonschema.ValidationError as err:
        where = "/".join(str(p) for p in err.absolute_path) or "document"
        return _fail(f"{args.spec}: {where}: {err.message}", OPERATIONAL)

    kb = KnowledgeBase()
    _apply_env_prefixes(kb)
    for prefix, base in doc.get("prefixes", {}).items():
        kb.register_prefix(prefix, base)

    symbols: dict[str, Iri] = {}

    def ref(name: str) -> Iri:
        return symbols.get(name) or kb.resolve(name)

    roots: list[Iri] = []
    try:
        for name in doc.get("classes", ()):
            kb.declare_class(kb.resolve(name))
        for name in doc.get("agents", ()):
            builder.declare_agent(kb, kb.resolve(name))
        for spec_doc in doc.get("templates", ()):
            spec = behaviour_from_json(spec_doc, "templates")
            root = builder.build_template(kb, spec)
            symbols[spec.name] = root
            roots.append(root)
        for spec_doc in doc.get("plans", ()):
            spec = behaviour_from_json(spec_doc, "plans")
            root = builder.build_plan(kb, spec)
            symbols[spec.name] = root
            roots.append(root)
        for entry in doc.get("behaviours", ()):
            root = builder.derive_behaviour(
                kb, ref(entry["template"]), ref(entry["agent"])
            )
            symbols[entry["id"]] = root
            roots.append(root)
        for entry in doc.get("submissions", ()):
            builder.submit_plan(kb, ref(entry["plan"]), ref(entry["behaviour"]))
        for spec_doc in doc.get("processes", ()):
            spec = process_from_json(spec_doc, "processes")
            root = builder.build_process(kb, spec)
            symbols[spec.name] = root
            roots.append(root)
        for entry in doc.get("roles", ()):
            role = builder.grant_role(
                kb,
                ref(entry["agent"]),
                kb.resolve(entry["roleType"]),
                [ref(b) for b in entry["behaviours"]],
            )
            if "id" in entry:
                symbols[entry["id"]] = role
            roots.append(role)
        for entry in doc.get("events", ()):
            spec = event_from_json(entry["event"], "events")
            roots.append(builder.attach_event(kb, ref(entry["state"]), spec))
    except ModelError as err:
        return _fail(str(err), OPERATIONAL)

    if args.out:
        rdfio.write_graph(kb, args.out)
    for root in roots:
        print(root.value)
    return OK


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        kb = rdfio.read_graph(args.path)
    except OSError as err:
        return _fail(f"cannot read {args.path}: {err}", OPERATIONAL)
    except rdfio.ParseError as err:
        return _fail(f"{args.path}: {err}", PARSE)
    _apply_env_prefixes(kb)
    violations = validate(kb)
    for violation in violations:
        print(violation.render())
    return FINDINGS if violations else OK


def cmd_run(args: argparse.Namespace) -> int:
    try:
        kb = rdfio.read_graph(args.kb)
    except OSError as err:
        return _fail(f"cannot read {args.kb}: {err}", OPERATIONAL)
    except rdfio.ParseError as err:
        return _fail(f"{args.kb}: {err}", PARSE)
    _apply_env_prefixes(kb)
    try:
        table = _load_json(args.assign)
    except OSError as err:
        return _fail(f"cannot read {args.assign}: {err}", OPERATIONAL)
    except json.JSONDecodeError as err:
        return _fail(f"{args.assign}: {err}", PARSE)
    try:
        assignment = {
            kb.resolve(state): (
                kb.resolve(entry["agent"]),
                kb.resolve(entry["behaviour"]),
            )
            for state, entry in table.items()
        }
    except (KeyError, TypeError):
        return _fail(
            f"{args.assign}: every entry needs agent and behaviour", OPERATIONAL
        )

    try:
        handle = engine.realize_process(kb, kb.resolve(args.process), assignment)
    except engine.ValidationFailed as err:
        for violation in err.violations:
            print(violation.render())
        return FINDINGS
    except (engine.PerformerLacksCapability, engine.RoleDeprecatedUse) as err:
        return _fail(str(err), FINDINGS)
    except ModelError as err:
        return _fail(str(err), OPERATIONAL)

    steps = handle.run_to_completion()
    lines = [step.trace_line() for step in steps]
    if args.trace:
        with open(args.trace, "w", encoding="utf-8", newline="\n") as fh:
            for line in lines:
                fh.write(line + "\n")
    if args.out:
        rdfio.write_graph(kb, args.out)
    for line in lines:
        print(line)
    return OK


def cmd_races(args: argparse.Namespace) -> int:
    try:
        kb = rdfio.read_graph(args.kb)
    except OSError as err:
        return _fail(f"cannot read {args.kb}: {err}", OPERATIONAL)
    except rdfio.ParseError as err:
        return _fail(f"{args.kb}: {err}", PARSE)
    _apply_env_prefixes(kb)
    op_map: dict[str, StepKind] = {}
    for item in args.op_map or ():
        name, _, kind = item.partition("=")
        try:
            op_map[name] = StepKind(kind)
        except ValueError:
            return _fail(
                f"--op-map {item!r}: kind must be one of "
                f"{', '.join(k.value for k in StepKind)}",
                OPERATIONAL,
            )
    try:
        runs = extract_runs(kb, [kb.resolve(h) for h in args.handles], op_map)
    except ModelError as err:
        return _fail(str(err), OPERATIONAL)
    reports = detect_races(runs, args.bound)
    for report in reports:
        print(report.json_line())
    return RACES if reports else OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oasiskg",
        description="Build, validate, realize and analyse layered "
        "agent-behaviour knowledge graphs.",
        epilog="exit codes: 0 ok, 1 operational error, 2 validation "
        "findings, 3 races found, 4 parse error",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="build a graph from a JSON document")
    build.add_argument("--spec", required=True, help="build document (JSON)")
    build.add_argument("--out", help="write the graph here (canonical N-Triples)")
    build.set_defaults(func=cmd_build)

    val = sub.add_parser("validate", help="report consistency findings")
    val.add_argument("path", help="graph file (Turtle subset or N-Triples)")
    val.set_defaults(func=cmd_validate)

    run = sub.add_parser("run", help="realize a process and step through it")
    run.add_argument("--kb", required=True, help="graph file")
    run.add_argument("--process", required=True, help="process root IRI")
    run.add_argument(
        "--assign",
        required=True,
        help='JSON file: {"state": {"agent": IRI, "behaviour": IRI}, ...}',
    )
    run.add_argument("--trace", help="write the step trace here (JSON lines)")
    run.add_argument("--out", help="write the resulting graph here")
    run.set_defaults(func=cmd_run)

    races = sub.add_parser("races", help="enumerate schedules and report races")
    races.add_argument("--kb", required=True, help="graph file")
    races.add_argument(
        "--handles", required=True, nargs="+", help="realized process root IRIs"
    )
    races.add_argument("--bound", type=int, default=12, help="step bound (default 12)")
    races.add_argument(
        "--op-map",
        action="append",
        metavar="NAME=KIND",
        help="map an operator action name to Request, Modify or Release",
    )
    races.set_defaults(func=cmd_races)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
