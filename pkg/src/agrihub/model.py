"""Core semantic model: IRIs, typed literals, triples and named graphs.

Values are immutable and hashable; all operations here are pure, so they are
safe to share between threads. The canonical text serialization is a line
per triple (``<s> <p> <o> .``), UTF-8, LF, sorted, which makes equal graphs
byte-identical on disk.
"""

from __future__ import annotations

import re
import urllib.parse
from dataclasses import dataclass, field
from datetime import datetime, timezone
from decimal import Decimal
from enum import Enum
from typing import Union

from .errors import MalformedIriError, ParseError, ValidationError

_ALLOWED_SCHEMES = ("https", "urn")
_CONTROL = re.compile(r"[\x00-\x1f\x7f]")
_INTEGER = re.compile(r"^[+-]?[0-9]+$")
_DECIMAL = re.compile(r"^[+-]?([0-9]+(\.[0-9]+)?|\.[0-9]+)$")
_DATETIME = re.compile(r"^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}\.\d{3}Z$")


class Datatype(str, Enum):
    """The closed set of literal datatypes understood by the platform."""

    STRING = "string"
    INTEGER = "integer"
    DECIMAL = "decimal"
    BOOLEAN = "boolean"
    DATETIME = "datetime"
    GEOMETRY = "geometry"

    @property
    def iri_text(self) -> str:
        return f"urn:agrihub:datatype:{self.value}"


_DATATYPE_BY_IRI = {dt.iri_text: dt for dt in Datatype}


@dataclass(frozen=True, order=True)
class Iri:
    """An absolute IRI under the ``https`` or ``urn`` scheme."""

    value: str

    def __post_init__(self):
        v = self.value
        if not v:
            raise MalformedIriError("empty IRI")
        if _CONTROL.search(v) or any(c in v for c in ' \t\n\r<>"'):
            raise MalformedIriError(f"IRI contains forbidden characters: {v!r}")
        scheme, sep, rest = v.partition(":")
        if not sep or not scheme or not rest:
            raise MalformedIriError(f"IRI has no scheme: {v!r}")
        if scheme not in _ALLOWED_SCHEMES:
            raise MalformedIriError(f"unsupported IRI scheme {scheme!r} in {v!r}")

    def __str__(self) -> str:
        return self.value


def _validate_lexical(lexical: str, datatype: Datatype) -> None:
    if datatype is Datatype.STRING:
        return
    if datatype is Datatype.INTEGER:
        if not _INTEGER.match(lexical):
            raise ValidationError(f"not an integer literal: {lexical!r}")
    elif datatype is Datatype.DECIMAL:
        if not _DECIMAL.match(lexical):
            raise ValidationError(f"not a decimal literal: {lexical!r}")
    elif datatype is Datatype.BOOLEAN:
        if lexical not in ("true", "false"):
            raise ValidationError(f"not a boolean literal: {lexical!r}")
    elif datatype is Datatype.DATETIME:
        if not _DATETIME.match(lexical):
            raise ValidationError(
                f"dateTime literal must be UTC with millisecond precision: {lexical!r}"
            )
        try:
            datetime.strptime(lexical, "%Y-%m-%dT%H:%M:%S.%fZ")
        except ValueError as exc:
            raise ValidationError(f"invalid dateTime literal {lexical!r}: {exc}")
    elif datatype is Datatype.GEOMETRY:
        # Geometry literals carry only a feature IRI; coordinates live in the
        # spatial store.
        try:
            Iri(lexical)
        except MalformedIriError as exc:
            raise ValidationError(f"geometry literal must hold a feature IRI: {exc}")


@dataclass(frozen=True, order=True)
class Literal:
    lexical: str
    datatype: Datatype = Datatype.STRING

    def __post_init__(self):
        _validate_lexical(self.lexical, self.datatype)

    def as_python(self):
        """Native value for the lexical form (str, int, Decimal, bool, ...)."""
        if self.datatype is Datatype.INTEGER:
            return int(self.lexical)
        if self.datatype is Datatype.DECIMAL:
            return Decimal(self.lexical)
        if self.datatype is Datatype.BOOLEAN:
            return self.lexical == "true"
        if self.datatype is Datatype.DATETIME:
            return datetime.strptime(self.lexical, "%Y-%m-%dT%H:%M:%S.%fZ").replace(
                tzinfo=timezone.utc
            )
        return self.lexical


Term = Union[Iri, Literal]


@dataclass(frozen=True)
class Triple:
    subject: Iri
    predicate: Iri
    object: Term

    def __post_init__(self):
        if not isinstance(self.subject, Iri) or not isinstance(self.predicate, Iri):
            raise ValidationError("triple subject and predicate must be IRIs")
        if not isinstance(self.object, (Iri, Literal)):
            raise ValidationError("triple object must be an IRI or a literal")


@dataclass(frozen=True)
class NamedGraph:
    graph: Iri
    triples: frozenset[Triple] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "triples", frozenset(self.triples))


# -- IRI minting -------------------------------------------------------------

def mint_iri(namespace: Iri, local_name: str) -> Iri:
    """Append a percent-encoded local name to a namespace IRI.

    Deterministic, and injective over ``local_name`` for a fixed namespace
    because percent-encoding is injective.
    """
    if not isinstance(namespace, Iri):
        raise MalformedIriError("namespace must be an Iri")
    if not local_name:
        raise ValidationError("local name must be non-empty")
    return Iri(namespace.value + urllib.parse.quote(local_name, safe=""))


# -- canonical line serialization --------------------------------------------

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}
_UNESCAPES = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}


def _escape(text: str) -> str:
    return "".join(_ESCAPES.get(c, c) for c in text)


def term_text(term: Term) -> str:
    """Canonical single-token text for a term, also used as its sort key."""
    if isinstance(term, Iri):
        return f"<{term.value}>"
    return f'"{_escape(term.lexical)}"^^<{term.datatype.iri_text}>'


def triple_line(t: Triple) -> str:
    return f"{term_text(t.subject)} {term_text(t.predicate)} {term_text(t.object)} ."


def serialize_triples(graph: NamedGraph) -> str:
    """One sorted line per triple; empty graph gives empty text."""
    lines = sorted(triple_line(t) for t in graph.triples)
    return "".join(line + "\n" for line in lines)


def _parse_iri_token(line: str, pos: int, line_no: int) -> tuple[Iri, int]:
    if pos >= len(line) or line[pos] != "<":
        raise ParseError(f"expected '<' at column {pos + 1}", line=line_no)
    end = line.find(">", pos)
    if end < 0:
        raise ParseError(f"unterminated IRI at column {pos + 1}", line=line_no)
    try:
        return Iri(line[pos + 1 : end]), end + 1
    except MalformedIriError as exc:
        raise ParseError(str(exc), line=line_no)


def _parse_literal_token(line: str, pos: int, line_no: int) -> tuple[Literal, int]:
    chars = []
    i = pos + 1
    while i < len(line):
        c = line[i]
        if c == "\\":
            if i + 1 >= len(line) or line[i + 1] not in _UNESCAPES:
                raise ParseError(f"bad escape at column {i + 1}", line=line_no)
            chars.append(_UNESCAPES[line[i + 1]])
            i += 2
        elif c == '"':
            break
        else:
            chars.append(c)
            i += 1
    else:
        raise ParseError(f"unterminated literal at column {pos + 1}", line=line_no)
    if line[i + 1 : i + 3] != "^^":
        raise ParseError("literal missing ^^<datatype>", line=line_no)
    dt_iri, end = _parse_iri_token(line, i + 3, line_no)
    datatype = _DATATYPE_BY_IRI.get(dt_iri.value)
    if datatype is None:
        raise ParseError(f"unknown datatype {dt_iri.value}", line=line_no)
    try:
        return Literal("".join(chars), datatype), end
    except ValidationError as exc:
        raise ParseError(str(exc), line=line_no)


def _expect_space(line: str, pos: int, line_no: int) -> int:
    if pos >= len(line) or line[pos] != " ":
        raise ParseError(f"expected space at column {pos + 1}", line=line_no)
    return pos + 1


def parse_triple_line(line: str, line_no: int = 1) -> Triple:
    subject, pos = _parse_iri_token(line, 0, line_no)
    pos = _expect_space(line, pos, line_no)
    predicate, pos = _parse_iri_token(line, pos, line_no)
    pos = _expect_space(line, pos, line_no)
    if pos < len(line) and line[pos] == '"':
        obj, pos = _parse_literal_token(line, pos, line_no)
    else:
        obj, pos = _parse_iri_token(line, pos, line_no)
    if line[pos:] != " .":
        raise ParseError('line must end with " ."', line=line_no)
    return Triple(subject, predicate, obj)


def parse_triples(text: str) -> set[Triple]:
    """Inverse of :func:`serialize_triples` on its image; duplicates collapse."""
    triples: set[Triple] = set()
    for line_no, line in enumerate(text.split("\n"), start=1):
        if not line:
            continue
        triples.add(parse_triple_line(line, line_no))
    return triples


def datetime_literal(ms_since_epoch: int) -> Literal:
    """UTC dateTime literal at millisecond precision from Unix epoch ms."""
    seconds, ms = divmod(int(ms_since_epoch), 1000)
    dt = datetime.fromtimestamp(seconds, tz=timezone.utc)
    return Literal(dt.strftime("%Y-%m-%dT%H:%M:%S.") + f"{ms:03d}Z", Datatype.DATETIME)


def decimal_literal(value) -> Literal:
    return Literal(str(Decimal(value)), Datatype.DECIMAL)
