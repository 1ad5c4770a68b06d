"""Append-only time-series store with sparse columns.

Rows carry only the columns they actually have; absent cells are never
materialized. Appends are atomic: the whole batch is validated against the
series' current maximum timestamp before anything is written.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Optional

from ..errors import NotFoundError, ValidationError
from ..model import Iri


@dataclass(frozen=True)
class SeriesRow:
    timestamp: int  # Unix epoch milliseconds, UTC
    position: Optional[tuple[float, float]] = None  # (lon, lat)
    values: dict[Iri, Decimal] = field(default_factory=dict)

    def project(self, columns: Optional[list[Iri]]) -> "SeriesRow":
        if columns is None:
            return self
        kept = {c: self.values[c] for c in columns if c in self.values}
        return SeriesRow(self.timestamp, self.position, kept)


class _Series:
    __slots__ = ("rows", "timestamps")

    def __init__(self):
        self.rows: list[SeriesRow] = []
        self.timestamps: list[int] = []


class TimeSeriesStore:
    def __init__(self):
        self._series: dict[Iri, _Series] = {}

    def series_iris(self) -> list[Iri]:
        return sorted(self._series, key=lambda s: s.value)

    def exists(self, series_iri: Iri) -> bool:
        return series_iri in self._series

    def append(self, series_iri: Iri, rows: list[SeriesRow]) -> int:
        """Append rows; rejects the whole batch on any timestamp violation."""
        if not rows:
            return 0
        series = self._series.get(series_iri)
        floor = series.timestamps[-1] if series and series.timestamps else None
        prev = floor
        for row in rows:
            if prev is not None and row.timestamp <= prev:
                raise ValidationError(
                    f"timestamps must be strictly increasing: {row.timestamp} "
                    f"follows {prev} in series {series_iri}")
            prev = row.timestamp
        if series is None:
            series = self._series.setdefault(series_iri, _Series())
        series.rows.extend(rows)
        series.timestamps.extend(r.timestamp for r in rows)
        return len(rows)

    def replace(self, series_iri: Iri, rows: list[SeriesRow]) -> int:
        """Overwrite a series wholesale (used for derived-series reruns)."""
        self._series.pop(series_iri, None)
        return self.append(series_iri, rows)

    def range(self, series_iri: Iri, from_ms: int, to_ms: int,
              columns: Optional[list[Iri]] = None) -> list[SeriesRow]:
        """Rows with from_ms <= timestamp <= to_ms, projected to columns."""
        if from_ms > to_ms:
            raise ValidationError("range start must not exceed range end")
        series = self._series.get(series_iri)
        if series is None:
            raise NotFoundError(f"unknown series {series_iri}")
        lo = bisect_left(series.timestamps, from_ms)
        hi = bisect_right(series.timestamps, to_ms)
        return [row.project(columns) for row in series.rows[lo:hi]]

    def full_range(self, series_iri: Iri) -> list[SeriesRow]:
        series = self._series.get(series_iri)
        if series is None:
            raise NotFoundError(f"unknown series {series_iri}")
        return list(series.rows)

    def length(self, series_iri: Iri) -> int:
        series = self._series.get(series_iri)
        if series is None:
            raise NotFoundError(f"unknown series {series_iri}")
        return len(series.rows)
