"""Typed triple store with layer discipline and subproperty entailment.

The store keeps one canonical assertion set (``rdf:type`` triples
included) plus subject/predicate/object indexes.  Class memberships are
mirrored into per-entity records so layer tags can be derived cheaply;
they are never stored on their own.

Two modes:

* lax (default): everything is recorded, problems are left for the
  validator to report;
* strict: layer mixing, undeclared predicates and endpoint constraint
  violations raise at assertion time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import vocab
from .terms import (
    Assertion,
    InvalidLocalName,
    Iri,
    LOCAL_NAME,
    ModelError,
    Obj,
    UnknownPrefix,
)
from .vocab import RDF_TYPE, LayerTag, PropertySpec


class LayerMix(ModelError):
    def __init__(self, iri: Iri, have: Iri, new: Iri) -> None:
        super().__init__(
            f"{iri} already carries layer class {have.local}, "
            f"cannot also carry {new.local}"
        )
        self.iri = iri


class UnknownPredicate(ModelError):
    def __init__(self, predicate: Iri) -> None:
        super().__init__(f"predicate not declared: {predicate}")
        self.predicate = predicate


class LayerConstraintViolated(ModelError):
    def __init__(self, assertion: Assertion, detail: str) -> None:
        super().__init__(
            f"{assertion.predicate.local}({assertion.subject}, "
            f"{assertion.object}): {detail}"
        )
        self.assertion = assertion
        self.detail = detail


@dataclass(slots=True)
class EntityRecord:
    """Per-IRI bookkeeping: memberships in insertion order."""

    iri: Iri
    memberships: dict[Iri, None] = field(default_factory=dict)

    @property
    def layer_classes(self) -> list[Iri]:
        return [m for m in self.memberships if m in vocab.LAYER_CLASSES]

    @property
    def layer(self) -> LayerTag | None:
        """Derived layer tag; ``None`` when absent or mixed."""
        tags = self.layer_classes
        if len(tags) == 1:
            return vocab.LAYER_TAG_OF_CLASS[tags[0]]
        return None

    @property
    def mixed_layers(self) -> bool:
        return len(self.layer_classes) > 1

    @property
    def deprecated(self) -> bool:
        return vocab.DEPRECATED_THING in self.memberships

    def has_class(self, cls: Iri) -> bool:
        return cls in self.memberships


_Index = dict[Iri, dict[Assertion, None]]


class KnowledgeBase:
    """Assertion store, prefix table and clone counter."""

    def __init__(self, *, strict: bool = False) -> None:
        self.strict = strict
        self.prefixes: dict[str, str] = dict(vocab.DEFAULT_PREFIXES)
        self.entities: dict[Iri, EntityRecord] = {}
        self.assertions: dict[Assertion, None] = {}
        self.user_classes: dict[Iri, None] = {}
        self.undeclared_predicates: dict[Iri, None] = {}
        self._by_s: _Index = {}
        self._by_p: _Index = {}
        self._by_o: dict[Obj, dict[Assertion, None]] = {}
        self._clone_counter = 0

    # -- prefixes and minting -------------------------------------------------

    def register_prefix(self, prefix: str, base: str) -> None:
        if not prefix or not base:
            raise UnknownPrefix(prefix)
        self.prefixes[prefix] = base

    def mint_iri(self, prefix: str, local: str) -> Iri:
        if prefix not in self.prefixes:
            raise UnknownPrefix(prefix)
        if not LOCAL_NAME.match(local):
            raise InvalidLocalName(local)
        return Iri(self.prefixes[prefix] + local)

    def resolve(self, name: str) -> Iri:
        """Full IRI as-is, ``pfx:local`` via the prefix table, bare local
        name under the ``ex:`` prefix."""
        if "://" in name:
            return Iri(name)
        if ":" in name:
            prefix, local = name.split(":", 1)
            if prefix not in self.prefixes:
                raise UnknownPrefix(prefix)
            return Iri(self.prefixes[prefix] + local)
        return self.mint_iri("ex", name)

    def compact(self, iri: Iri) -> str:
        best: tuple[int, str] | None = None
        for prefix, base in self.prefixes.items():
            if iri.value.startswith(base) and (best is None or len(base) > best[0]):
                best = (len(base), prefix)
        if best is None:
            return iri.value
        return f"{best[1]}:{iri.value[best[0]:]}"

    def next_clone_index(self) -> int:
        self._clone_counter += 1
        return self._clone_counter

    # -- entities ---------------------------------------------------------------

    def entity(self, iri: Iri) -> EntityRecord | None:
        return self.entities.get(iri)

    def ensure_entity(self, iri: Iri) -> EntityRecord:
        rec = self.entities.get(iri)
        if rec is None:
            rec = EntityRecord(iri)
            self.entities[iri] = rec
        return rec

    def layer_of(self, iri: Iri) -> LayerTag | None:
        rec = self.entities.get(iri)
        return rec.layer if rec else None

    def has_class(self, iri: Iri, cls: Iri) -> bool:
        rec = self.entities.get(iri)
        return rec.has_class(cls) if rec else False

    def instances_of(self, *classes: Iri) -> list[Iri]:
        """Entities carrying any of the classes, in first-seen order."""
        wanted = set(classes)
        return [
            rec.iri
            for rec in self.entities.values()
            if wanted.intersection(rec.memberships)
        ]

    def declare_class(self, cls: Iri) -> None:
        """Register a user domain class (vocabulary classes are implicit)."""
        if cls not in vocab.CLASSES.values():
            self.user_classes[cls] = None
        self.ensure_entity(cls)

    # -- assertions ---------------------------------------------------------------

    def assert_membership(self, iri: Iri, cls: Iri) -> None:
        rec = self.ensure_entity(iri)
        if cls in rec.memberships:
            return
        if self.strict and cls in vocab.LAYER_CLASSES:
            for have in rec.layer_classes:
                if have != cls:
                    raise LayerMix(iri, have, cls)
        self.declare_class(cls)
        rec.memberships[cls] = None
        self._store(Assertion(iri, RDF_TYPE, cls))

    def assert_property(self, subject: Iri, predicate: Iri, obj: Obj) -> None:
        if predicate == RDF_TYPE:
            if not isinstance(obj, Iri):
                raise LayerConstraintViolated(
                    Assertion(subject, predicate, obj), "class must be an IRI"
                )
            self.assert_membership(subject, obj)
            return
        spec = vocab.PROPERTIES.get(predicate)
        if spec is None:
            if self.strict:
                raise UnknownPredicate(predicate)
            self.undeclared_predicates[predicate] = None
        elif self.strict:
            problem = self.constraint_problem(spec, subject, obj)
            if problem is not None:
                raise LayerConstraintViolated(
                    Assertion(subject, predicate, obj), problem
                )
        self.ensure_entity(subject)
        if isinstance(obj, Iri):
            self.ensure_entity(obj)
        self._store(Assertion(subject, predicate, obj))

    def constraint_problem(
        self, spec: PropertySpec, subject: Iri, obj: Obj
    ) -> str | None:
        """First endpoint-constraint violation for the edge, or ``None``."""
        if spec.literal_object != isinstance(obj, str):
            return (
                "object must be a literal"
                if spec.literal_object
                else "object must be an IRI"
            )
        s_rec = self.entities.get(subject)
        if spec.subject_layer is not None and not (s_rec and s_rec.mixed_layers):
            # mixed endpoints are reported on their own, not per edge
            if s_rec is None or s_rec.layer != spec.subject_layer:
                return f"subject must be in the {spec.subject_layer.value} layer"
        if spec.subject_classes is not None:
            if s_rec is None or not spec.subject_classes.intersection(
                s_rec.memberships
            ):
                names = "/".join(sorted(c.local for c in spec.subject_classes))
                return f"subject must be a {names}"
        if isinstance(obj, Iri):
            o_rec = self.entities.get(obj)
            if spec.object_layer is not None and not (o_rec and o_rec.mixed_layers):
                if o_rec is None or o_rec.layer != spec.object_layer:
                    return f"object must be in the {spec.object_layer.value} layer"
            if spec.object_classes is not None:
                if o_rec is None or not spec.object_classes.intersection(
                    o_rec.memberships
                ):
                    names = "/".join(sorted(c.local for c in spec.object_classes))
                    return f"object must be a {names}"
        return None

    def _store(self, assertion: Assertion) -> None:
        if assertion in self.assertions:
            return
        self.assertions[assertion] = None
        self._by_s.setdefault(assertion.subject, {})[assertion] = None
        self._by_p.setdefault(assertion.predicate, {})[assertion] = None
        self._by_o.setdefault(assertion.object, {})[assertion] = None

    def remove(self, assertion: Assertion) -> None:
        """Retract one assertion (memberships included).  No-op if absent."""
        if assertion not in self.assertions:
            return
        del self.assertions[assertion]
        del self._by_s[assertion.subject][assertion]
        del self._by_p[assertion.predicate][assertion]
        del self._by_o[assertion.object][assertion]
        if assertion.predicate == RDF_TYPE and isinstance(assertion.object, Iri):
            rec = self.entities.get(assertion.subject)
            if rec is not None:
                rec.memberships.pop(assertion.object, None)

    # -- queries -----------------------------------------------------------------

    def entails(self, subject: Iri, predicate: Iri, obj: Obj) -> bool:
        """True when the triple is asserted directly or via a declared
        subproperty of ``predicate``."""
        group = self._by_s.get(subject)
        if not group:
            return False
        preds = vocab.SUB_CLOSURE.get(predicate, frozenset((predicate,)))
        for p in preds:
            if Assertion(subject, p, obj) in group:
                return True
        return False

    def query(
        self,
        subject: Iri | None = None,
        predicate: Iri | None = None,
        obj: Obj | None = None,
        *,
        entail: bool = False,
    ) -> list[Assertion]:
        """Pattern match; ``None`` is a wildcard.  With ``entail`` the
        predicate position also matches declared subproperties.  Results
        come back in canonical sorted order."""
        preds: frozenset[Iri] | None = None
        if predicate is not None:
            if entail:
                preds = vocab.SUB_CLOSURE.get(predicate, frozenset((predicate,)))
            else:
                preds = frozenset((predicate,))
        pool: dict[Assertion, None] | list[Assertion]
        if subject is not None:
            pool = self._by_s.get(subject, {})
        elif obj is not None:
            pool = self._by_o.get(obj, {})
        elif preds is not None and len(preds) == 1:
            pool = self._by_p.get(next(iter(preds)), {})
        else:
            pool = self.assertions
        out = [
            a
            for a in pool
            if (subject is None or a.subject == subject)
            and (preds is None or a.predicate in preds)
            and (obj is None or a.object == obj)
        ]
        out.sort(key=Assertion.sort_key)
        return out

    def objects(self, subject: Iri, predicate: Iri, *, entail: bool = False) -> list[Obj]:
        """Objects of ``(subject, predicate, ?)`` in assertion order."""
        preds = (
            vocab.SUB_CLOSURE.get(predicate, frozenset((predicate,)))
            if entail
            else frozenset((predicate,))
        )
        return [
            a.object
            for a in self._by_s.get(subject, {})
            if a.predicate in preds
        ]

    def subjects(self, predicate: Iri, obj: Obj, *, entail: bool = False) -> list[Iri]:
        """Subjects of ``(?, predicate, obj)`` in assertion order."""
        preds = (
            vocab.SUB_CLOSURE.get(predicate, frozenset((predicate,)))
            if entail
            else frozenset((predicate,))
        )
        return [
            a.subject
            for a in self._by_o.get(obj, {})
            if a.predicate in preds
        ]

    def __len__(self) -> int:
        return len(self.assertions)

    def __contains__(self, assertion: Assertion) -> bool:
        return assertion in self.assertions

    def copy(self) -> "KnowledgeBase":
        """Independent replica: same assertions, prefixes and counter."""
        twin = KnowledgeBase(strict=False)
        twin.prefixes = dict(self.prefixes)
        for cls in self.user_classes:
            twin.declare_class(cls)
        for iri in self.entities:
            twin.ensure_entity(iri)
        for a in self.assertions:
            if a.predicate == RDF_TYPE and isinstance(a.object, Iri):
                twin.assert_membership(a.subject, a.object)
            else:
                twin.assert_property(a.subject, a.predicate, a.object)
        twin.undeclared_predicates = dict(self.undeclared_predicates)
        twin._clone_counter = self._clone_counter
        twin.strict = self.strict
        return twin
