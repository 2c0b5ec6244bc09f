"""Versioned-resource registry and datetime-based annotation resolution.

A registry maps an original resource URI to its archived versions
(mementos). Selection picks the memento closest in time to the requested
datetime, breaking ties toward the earlier one. Resolution applies the
annotation's temporal class to pick the right version of each involved
resource.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Optional

from .model import (
    Annotation,
    ConstrainedTarget,
    Timeless,
    Uniform,
    Varied,
    body_node,
    classify_temporal,
)
from .rdf import Iri, format_datetime, parse_datetime

NOT_ARCHIVED = "NotArchived"


class TemporalError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


@dataclass(frozen=True, slots=True)
class Memento:
    original: Iri
    memento_uri: Iri
    datetime: datetime

    def __post_init__(self) -> None:
        if self.memento_uri == self.original:
            raise ValueError("memento URI must differ from the original")


class TimeGateRegistry:
    """One writer, many readers: lookups see a consistent snapshot."""

    def __init__(self) -> None:
        self._by_original: dict[Iri, tuple[Memento, ...]] = {}
        self._lock = threading.Lock()

    def register(self, m: Memento) -> None:
        with self._lock:
            current = list(self._by_original.get(m.original, ()))
            if any(x.datetime == m.datetime for x in current):
                raise TemporalError(
                    "DuplicateDatetime",
                    f"{m.original.value} already has a memento at "
                    f"{format_datetime(m.datetime)}",
                )
            current.append(m)
            current.sort(key=lambda x: x.datetime)
            updated = dict(self._by_original)
            updated[m.original] = tuple(current)
            self._by_original = updated

    def mementos(self, original: Iri) -> tuple[Memento, ...]:
        return self._by_original.get(original, ())

    def originals(self) -> list[Iri]:
        return sorted(self._by_original, key=lambda i: i.value)

    def __contains__(self, original: Iri) -> bool:
        return original in self._by_original

    def select(self, original: Iri, at: datetime) -> Memento:
        """The memento minimizing |datetime - at|; ties go to the earlier one."""
        mementos = self._by_original.get(original)
        if not mementos:
            raise TemporalError("UnknownOriginal", f"no mementos for {original.value}")
        best = mementos[0]
        best_delta = abs(best.datetime - at)
        for m in mementos[1:]:
            delta = abs(m.datetime - at)
            if delta < best_delta:
                best, best_delta = m, delta
        return best

    # --- fixture snapshot format: `original mementoUri datetime` per line ---

    def dump(self) -> str:
        lines = []
        for original in self.originals():
            for m in self.mementos(original):
                lines.append(
                    f"{original.value} {m.memento_uri.value} {format_datetime(m.datetime)}"
                )
        return "\n".join(lines) + ("\n" if lines else "")

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dump(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "TimeGateRegistry":
        registry = cls()
        for lineno, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), start=1
        ):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected 3 fields, got {len(parts)}")
            registry.register(
                Memento(Iri(parts[0]), Iri(parts[1]), parse_datetime(parts[2]))
            )
        return registry


def select_memento(r: TimeGateRegistry, original: Iri, at: datetime) -> Memento:
    return r.select(original, at)


def register_memento(r: TimeGateRegistry, m: Memento) -> TimeGateRegistry:
    r.register(m)
    return r


@dataclass(frozen=True, slots=True)
class Resolution:
    requested: Optional[datetime]
    chosen: Iri
    note: Optional[str] = None


@dataclass(frozen=True, slots=True)
class ResolvedAnnotation:
    annotation_uri: Iri
    body_resolution: Resolution
    target_resolutions: tuple[Resolution, ...]

    def as_dict(self) -> dict:
        def one(r: Resolution) -> dict:
            d: dict = {"chosen": r.chosen.value}
            if r.requested is not None:
                d["requested"] = format_datetime(r.requested)
            if r.note is not None:
                d["note"] = r.note
            return d

        return {
            "annotation": self.annotation_uri.value,
            "body": one(self.body_resolution),
            "targets": [one(r) for r in self.target_resolutions],
        }


def resolve_annotation(a: Annotation, r: TimeGateRegistry) -> ResolvedAnnotation:
    """Pick the time-appropriate version of the body and each target.

    Timeless annotations resolve to identity. Uniform ones resolve every
    resource at the annotation's `when`. Varied ones resolve each resource
    at its own time constraint, falling back to the annotation's `created`
    for unconstrained resources. Unarchived resources keep their original
    URI and carry a NotArchived note.
    """
    cls = classify_temporal(a)

    def resolve_one(original: Iri, requested: Optional[datetime]) -> Resolution:
        if requested is None:
            return Resolution(None, original)
        if original not in r:
            return Resolution(requested, original, note=NOT_ARCHIVED)
        return Resolution(requested, r.select(original, requested).memento_uri)

    body_original = body_node(a.body)
    originals = [
        t.constrains if isinstance(t, ConstrainedTarget) else t.uri for t in a.targets
    ]

    if isinstance(cls, Timeless):
        body_req: Optional[datetime] = None
        target_reqs: list[Optional[datetime]] = [None] * len(a.targets)
    elif isinstance(cls, Uniform):
        body_req = cls.when
        target_reqs = [cls.when] * len(a.targets)
    else:
        body_req = cls.body_when if cls.body_when is not None else a.created
        target_reqs = [
            when if when is not None else a.created for when in cls.target_whens
        ]

    return ResolvedAnnotation(
        annotation_uri=a.uri,
        body_resolution=resolve_one(body_original, body_req),
        target_resolutions=tuple(
            resolve_one(orig, req) for orig, req in zip(originals, target_reqs)
        ),
    )
