"""Parser output container and the format-detection registry."""

from __future__ import annotations

import fnmatch
from dataclasses import dataclass, field
from typing import Callable

from ..errors import (
    AmbiguousFormatError,
    ConflictError,
    PreconditionError,
    UnknownFormatError,
    ValidationError,
)
from ..model import Iri, Triple
from ..stores.geometry import FeatureGeometry
from ..stores.timeseries import SeriesRow

# parser callables receive the raw bytes plus the instance namespace the
# ingest assigns for this file, so instances from different uploads get
# distinct IRIs
ParserFn = Callable[[bytes, Iri], "ParseOutput"]


@dataclass
class ParseOutput:
    triples: set[Triple] = field(default_factory=set)
    geometries: list[FeatureGeometry] = field(default_factory=list)
    series: list[tuple[Iri, list[SeriesRow]]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    row_errors: list[str] = field(default_factory=list)

    def check_referential_closure(self) -> None:
        """Every geometry / series IRI must be a subject somewhere in triples."""
        subjects = {t.subject for t in self.triples}
        for g in self.geometries:
            if g.instance_iri not in subjects:
                raise ValidationError(
                    f"geometry instance {g.instance_iri} lacks a typing triple")
        for series_iri, _ in self.series:
            if series_iri not in subjects:
                raise ValidationError(
                    f"series {series_iri} lacks a typing triple")

    def counts(self) -> dict:
        return {
            "triples": len(self.triples),
            "geometries": len(self.geometries),
            "seriesRows": sum(len(rows) for _, rows in self.series),
        }


@dataclass(frozen=True)
class ParserRegistration:
    format_iri: Iri
    globs: tuple[str, ...]
    magic: Callable[[bytes], bool]
    parser: ParserFn

    def accepts(self, data: bytes, filename_hint: str) -> bool:
        # filename glob first, magic bytes second
        name = (filename_hint or "").rsplit("/", 1)[-1]
        for pattern in self.globs:
            if fnmatch.fnmatch(name.lower(), pattern.lower()):
                return True
        try:
            return bool(self.magic(data))
        except Exception:
            return False


class ParserRegistry:
    """Dispatch table mapping detected formats to parser callables."""

    def __init__(self, format_registry=None):
        self._formats = format_registry
        self._registrations: dict[Iri, ParserRegistration] = {}

    def register(self, registration: ParserRegistration) -> None:
        iri = registration.format_iri
        if iri in self._registrations:
            raise ConflictError(f"parser already registered for {iri}")
        if self._formats is not None:
            definition = self._formats.get_format(iri)  # raises NotFound
            if definition.status != "final":
                raise PreconditionError(
                    f"format {iri} must be finalized before a parser is attached")
        self._registrations[iri] = registration

    def registered_formats(self) -> list[Iri]:
        return sorted(self._registrations, key=lambda i: i.value)

    def detect_format(self, data: bytes, filename_hint: str) -> Iri:
        if not self._registrations:
            raise PreconditionError("no parsers registered")
        matches = [iri for iri, reg in self._registrations.items()
                   if reg.accepts(data, filename_hint)]
        if not matches:
            raise UnknownFormatError(
                f"no registered format matches {filename_hint!r}")
        if len(matches) > 1:
            raise AmbiguousFormatError([m.value for m in matches])
        return matches[0]

    def parse(self, format_iri: Iri, data: bytes, namespace: Iri) -> ParseOutput:
        reg = self._registrations.get(format_iri)
        if reg is None:
            raise UnknownFormatError(f"no parser registered for {format_iri}")
        output = reg.parser(data, namespace)
        output.check_referential_closure()
        return output
