"""Collaborative format registry: vocabulary definitions with a draft/final
lifecycle, discussion comments, and instance validation.

Finalized definitions are frozen; comments are kept beside the definition so
discussion stays open without breaking immutability. Definitions are also
mirrored as triples into the ``urn:agrihub:graph:wikinormia`` system graph so
services can query vocabulary and data uniformly.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Optional, Union

from . import vocab
from .errors import (
    ConflictError,
    JournalCorruptError,
    NotFoundError,
    PreconditionError,
    ValidationError,
)
from .model import Datatype, Iri, Literal, NamedGraph, Triple


class Cardinality(str, Enum):
    REQUIRED_ONE = "required-one"
    OPTIONAL_ONE = "optional-one"
    MANY = "many"


Range = Union[Datatype, Iri]  # literal datatype or class IRI


@dataclass(frozen=True)
class PropertyDef:
    property_iri: Iri
    label: str
    range: Range
    cardinality: Cardinality = Cardinality.OPTIONAL_ONE
    csv_column: Optional[str] = None


@dataclass(frozen=True)
class ConceptClass:
    class_iri: Iri
    label: str
    properties: tuple[PropertyDef, ...] = ()
    parent_class: Optional[Iri] = None

    def __post_init__(self):
        object.__setattr__(self, "properties", tuple(self.properties))
        columns = [p.csv_column for p in self.properties if p.csv_column]
        if len(columns) != len(set(columns)):
            raise ValidationError(
                f"duplicate csv column in class {self.class_iri}")


@dataclass(frozen=True)
class Comment:
    author: str
    timestamp: str  # dateTime lexical form
    body: str

    def __post_init__(self):
        if not self.body:
            raise ValidationError("comment body must be non-empty")
        Literal(self.timestamp, Datatype.DATETIME)


@dataclass(frozen=True)
class FormatDefinition:
    format_iri: Iri
    label: str
    version: int = 1
    status: str = "draft"  # draft | final
    classes: tuple[ConceptClass, ...] = ()
    comments: tuple[Comment, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        object.__setattr__(self, "comments", tuple(self.comments))
        if self.version < 1:
            raise ValidationError("version must be a positive integer")
        if self.status not in ("draft", "final"):
            raise ValidationError(f"unknown status {self.status!r}")
        class_iris = [c.class_iri for c in self.classes]
        if len(class_iris) != len(set(class_iris)):
            raise ValidationError("class IRIs must be unique within a format")
        prop_iris = [p.property_iri for c in self.classes for p in c.properties]
        if len(prop_iris) != len(set(prop_iris)):
            raise ValidationError("property IRIs must be unique within a format")

    def find_class(self, class_iri: Iri) -> Optional[ConceptClass]:
        for c in self.classes:
            if c.class_iri == class_iri:
                return c
        return None


# -- JSON interchange ---------------------------------------------------------

_DATATYPE_NAMES = {dt.value for dt in Datatype}


def range_to_str(r: Range) -> str:
    return r.value if isinstance(r, Datatype) else r.value


def range_from_str(s: str) -> Range:
    if s in _DATATYPE_NAMES:
        return Datatype(s)
    return Iri(s)


def definition_to_json(d: FormatDefinition) -> dict:
    return {
        "formatIri": d.format_iri.value,
        "label": d.label,
        "version": d.version,
        "status": d.status,
        "classes": [
            {
                "classIri": c.class_iri.value,
                "label": c.label,
                "parentClass": c.parent_class.value if c.parent_class else None,
                "properties": [
                    {
                        "propertyIri": p.property_iri.value,
                        "label": p.label,
                        "range": range_to_str(p.range),
                        "cardinality": p.cardinality.value,
                        "csvColumn": p.csv_column,
                    }
                    for p in c.properties
                ],
            }
            for c in d.classes
        ],
        "comments": [
            {"author": c.author, "timestamp": c.timestamp, "body": c.body}
            for c in d.comments
        ],
    }


def definition_from_json(obj: dict) -> FormatDefinition:
    try:
        classes = tuple(
            ConceptClass(
                class_iri=Iri(c["classIri"]),
                label=c.get("label", ""),
                parent_class=Iri(c["parentClass"]) if c.get("parentClass") else None,
                properties=tuple(
                    PropertyDef(
                        property_iri=Iri(p["propertyIri"]),
                        label=p.get("label", ""),
                        range=range_from_str(p["range"]),
                        cardinality=Cardinality(p.get("cardinality", "optional-one")),
                        csv_column=p.get("csvColumn"),
                    )
                    for p in c.get("properties", [])
                ),
            )
            for c in obj.get("classes", [])
        )
        return FormatDefinition(
            format_iri=Iri(obj["formatIri"]),
            label=obj.get("label", ""),
            version=int(obj.get("version", 1)),
            status=obj.get("status", "draft"),
            classes=classes,
            comments=tuple(
                Comment(c["author"], c["timestamp"], c["body"])
                for c in obj.get("comments", [])
            ),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed format definition: {exc}")


def canonical_definition_text(d: FormatDefinition) -> str:
    """Byte-stable serialization of the frozen part (comments excluded)."""
    obj = definition_to_json(d)
    obj.pop("comments")
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# -- validation report --------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    instance: Iri
    property_iri: Optional[Iri]
    kind: str  # missing-required | cardinality | datatype
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def conformant(self) -> bool:
        return not self.violations


class FormatRegistry:
    """Draft/final registry; concurrent readers, serialized mutations."""

    def __init__(self, stores=None, journal_path: Optional[Path] = None):
        self._lock = threading.RLock()
        self._drafts: dict[Iri, FormatDefinition] = {}
        self._finals: dict[Iri, dict[int, FormatDefinition]] = {}
        self._comments: dict[Iri, list[Comment]] = {}
        self._stores = stores
        self._journal_path = Path(journal_path) if journal_path else None
        self._replaying = False

    # -- lifecycle -------------------------------------------------------------

    def create_draft(self, definition: FormatDefinition) -> Iri:
        with self._lock:
            if definition.status != "draft":
                raise PreconditionError("create_draft requires a draft definition")
            iri = definition.format_iri
            if iri in self._drafts:
                raise ConflictError(f"draft already registered for {iri}")
            prior = max(self._finals.get(iri, {}), default=0)
            definition = replace(definition, version=prior + 1, comments=())
            self._drafts[iri] = definition
            self._comments.setdefault(iri, [])
            self._emit_declarations(definition)
            self._journal({"event": "draft",
                           "def": definition_to_json(definition)})
            return iri

    def finalize(self, format_iri: Iri) -> int:
        with self._lock:
            draft = self._drafts.get(format_iri)
            if draft is None:
                raise NotFoundError(f"no draft under {format_iri}")
            if not draft.classes:
                raise ValidationError("a format needs at least one class")
            dangling = self._dangling_references(draft)
            if dangling:
                raise ValidationError(
                    "unresolved references: " + ", ".join(sorted(dangling)))
            version = max(self._finals.get(format_iri, {}), default=0) + 1
            final = replace(draft, status="final", version=version)
            self._finals.setdefault(format_iri, {})[version] = final
            del self._drafts[format_iri]
            self._emit_final_marker(final)
            self._journal({"event": "finalize", "formatIri": format_iri.value})
            return version

    def _dangling_references(self, definition: FormatDefinition) -> set[str]:
        local = {c.class_iri for c in definition.classes}

        def resolves(class_iri: Iri) -> bool:
            if class_iri in local:
                return True
            return any(versions[max(versions)].find_class(class_iri)
                       for versions in self._finals.values())

        dangling = set()
        for cls in definition.classes:
            if cls.parent_class and not resolves(cls.parent_class):
                dangling.add(cls.parent_class.value)
            for prop in cls.properties:
                if isinstance(prop.range, Iri) and not resolves(prop.range):
                    dangling.add(prop.range.value)
        return dangling

    # -- retrieval ---------------------------------------------------------------

    def get_format(self, format_iri: Iri,
                   version: Optional[int] = None) -> FormatDefinition:
        with self._lock:
            finals = self._finals.get(format_iri, {})
            if version is not None:
                if version not in finals:
                    raise NotFoundError(f"no version {version} of {format_iri}")
                definition = finals[version]
            elif finals:
                definition = finals[max(finals)]
            elif format_iri in self._drafts:
                definition = self._drafts[format_iri]
            else:
                raise NotFoundError(f"unknown format {format_iri}")
            comments = tuple(self._comments.get(format_iri, ()))
            return replace(definition, comments=comments)

    def get_draft(self, format_iri: Iri) -> FormatDefinition:
        with self._lock:
            draft = self._drafts.get(format_iri)
            if draft is None:
                raise NotFoundError(f"no draft under {format_iri}")
            return replace(draft,
                           comments=tuple(self._comments.get(format_iri, ())))

    def list_formats(self, status: Optional[str] = None) -> list[tuple]:
        """(formatIri, label, status, version) rows, ordered by IRI then status."""
        with self._lock:
            rows = []
            for iri, versions in self._finals.items():
                latest = versions[max(versions)]
                rows.append((iri, latest.label, "final", latest.version))
            for iri, draft in self._drafts.items():
                rows.append((iri, draft.label, "draft", draft.version))
            if status is not None:
                rows = [r for r in rows if r[2] == status]
            return sorted(rows, key=lambda r: (r[0].value, r[2]))

    # -- discussion ----------------------------------------------------------------

    def add_comment(self, format_iri: Iri, comment: Comment) -> int:
        with self._lock:
            if format_iri not in self._drafts and format_iri not in self._finals:
                raise NotFoundError(f"unknown format {format_iri}")
            comments = self._comments.setdefault(format_iri, [])
            comments.append(comment)
            comments.sort(key=lambda c: c.timestamp)
            self._journal({"event": "comment", "formatIri": format_iri.value,
                           "comment": {"author": comment.author,
                                       "timestamp": comment.timestamp,
                                       "body": comment.body}})
            return len(comments)

    # -- instance validation -----------------------------------------------------

    def validate_instances(self, graph: NamedGraph, format_iri: Iri,
                           version: Optional[int] = None) -> ValidationReport:
        definition = self.get_format(format_iri, version)
        if definition.status != "final":
            raise PreconditionError(
                f"validation requires a final format, {format_iri} is draft")
        by_class = {c.class_iri: c for c in definition.classes}
        typed: dict[Iri, list[ConceptClass]] = {}
        for t in graph.triples:
            if t.predicate == vocab.TYPE and isinstance(t.object, Iri):
                cls = by_class.get(t.object)
                if cls is not None:
                    typed.setdefault(t.subject, []).append(cls)

        violations = []
        for instance in sorted(typed, key=lambda i: i.value):
            for cls in sorted(typed[instance], key=lambda c: c.class_iri.value):
                violations.extend(
                    self._check_instance(graph, instance, cls, by_class))
        return ValidationReport(tuple(violations))

    def _effective_properties(self, cls: ConceptClass, by_class) -> list[PropertyDef]:
        props = list(cls.properties)
        # direct parent lookup only, no transitive inference
        if cls.parent_class:
            parent = by_class.get(cls.parent_class) or self._find_final_class(
                cls.parent_class)
            if parent is not None:
                seen = {p.property_iri for p in props}
                props.extend(p for p in parent.properties
                             if p.property_iri not in seen)
        return props

    def _find_final_class(self, class_iri: Iri) -> Optional[ConceptClass]:
        for versions in self._finals.values():
            cls = versions[max(versions)].find_class(class_iri)
            if cls is not None:
                return cls
        return None

    def _check_instance(self, graph, instance, cls, by_class):
        values: dict[Iri, list] = {}
        for t in graph.triples:
            if t.subject == instance:
                values.setdefault(t.predicate, []).append(t.object)
        for prop in self._effective_properties(cls, by_class):
            objects = values.get(prop.property_iri, [])
            if prop.cardinality is Cardinality.REQUIRED_ONE and not objects:
                yield Violation(instance, prop.property_iri, "missing-required",
                                f"{instance} misses required {prop.property_iri}")
            if prop.cardinality is not Cardinality.MANY and len(objects) > 1:
                yield Violation(instance, prop.property_iri, "cardinality",
                                f"{instance} has {len(objects)} values for "
                                f"{prop.property_iri}")
            for obj in objects:
                if isinstance(prop.range, Datatype):
                    if not isinstance(obj, Literal) or obj.datatype != prop.range:
                        yield Violation(
                            instance, prop.property_iri, "datatype",
                            f"{instance} value for {prop.property_iri} is not "
                            f"a {prop.range.value} literal")
                elif not isinstance(obj, Iri):
                    yield Violation(
                        instance, prop.property_iri, "datatype",
                        f"{instance} value for {prop.property_iri} must be an IRI")

    # -- triple mirror ------------------------------------------------------------

    def _emit_declarations(self, definition: FormatDefinition) -> None:
        if self._stores is None:
            return
        triples = [
            Triple(definition.format_iri, vocab.TYPE, vocab.FORMAT_CLASS),
            Triple(definition.format_iri, vocab.LABEL, Literal(definition.label)),
        ]
        for cls in definition.classes:
            triples.append(Triple(cls.class_iri, vocab.TYPE, vocab.CONCEPT_CLASS))
            triples.append(Triple(cls.class_iri, vocab.LABEL, Literal(cls.label)))
            triples.append(Triple(definition.format_iri, vocab.HAS_CLASS,
                                  cls.class_iri))
            if cls.parent_class:
                triples.append(Triple(cls.class_iri, vocab.PARENT_CLASS,
                                      cls.parent_class))
            for prop in cls.properties:
                triples.append(Triple(prop.property_iri, vocab.TYPE,
                                      vocab.PROPERTY_CLASS))
                triples.append(Triple(cls.class_iri, vocab.HAS_PROPERTY,
                                      prop.property_iri))
                if isinstance(prop.range, Iri):
                    triples.append(Triple(prop.property_iri, vocab.PROPERTY_RANGE,
                                          prop.range))
                else:
                    triples.append(Triple(prop.property_iri, vocab.PROPERTY_RANGE,
                                          Literal(prop.range.value)))
                triples.append(Triple(prop.property_iri, vocab.CARDINALITY,
                                      Literal(prop.cardinality.value)))
        self._stores.graph_insert(vocab.WIKINORMIA_GRAPH, triples)

    def _emit_final_marker(self, definition: FormatDefinition) -> None:
        if self._stores is None:
            return
        self._stores.graph_insert(vocab.WIKINORMIA_GRAPH, [
            Triple(definition.format_iri, vocab.STATUS, Literal("final")),
            Triple(definition.format_iri, vocab.VERSION,
                   Literal(str(definition.version), Datatype.INTEGER)),
        ])

    # -- built-ins and persistence --------------------------------------------------

    def install_builtin(self, definition: FormatDefinition) -> None:
        """Register a code-shipped final definition without journaling."""
        with self._lock:
            final = replace(definition, status="final", comments=())
            self._finals.setdefault(final.format_iri, {})[final.version] = final
            self._emit_declarations(final)
            self._emit_final_marker(final)

    def _journal(self, event: dict) -> None:
        if self._journal_path is None or self._replaying:
            return
        with open(self._journal_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")

    def replay_journal(self) -> None:
        if self._journal_path is None or not self._journal_path.exists():
            return
        self._replaying = True
        try:
            with open(self._journal_path, encoding="utf-8") as fh:
                for line_no, line in enumerate(fh, start=1):
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        event = json.loads(line)
                        kind = event["event"]
                        if kind == "draft":
                            self.create_draft(
                                definition_from_json(event["def"]))
                        elif kind == "finalize":
                            self.finalize(Iri(event["formatIri"]))
                        elif kind == "comment":
                            c = event["comment"]
                            self.add_comment(
                                Iri(event["formatIri"]),
                                Comment(c["author"], c["timestamp"], c["body"]))
                        else:
                            raise ValueError(f"unknown event {kind!r}")
                    except Exception:
                        raise JournalCorruptError(self._journal_path, line_no)
        finally:
            self._replaying = False
