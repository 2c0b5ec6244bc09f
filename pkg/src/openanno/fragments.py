"""Media fragment parsing/serialization (the `#key=value` suffix of a URI).

Recognized dimensions: `t` (npt seconds), `xywh` (pixel or percent),
`track`, `id`, and the by-reference `ptr` key whose value is a URI pointing
at a resource that describes the region. Unknown keys are ignored but
reported in `MediaFragment.warnings`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional
from urllib.parse import quote, unquote

from .rdf import Iri

PIXEL = "pixel"
PERCENT = "percent"

_KEY_ORDER = ("t", "xywh", "track", "id", "ptr")


class FragmentError(ValueError):
    """Raised for malformed or duplicated fragment dimensions."""

    def __init__(self, code: str, key: str, message: str):
        super().__init__(f"{code} ({key}): {message}")
        self.code = code
        self.key = key


def _malformed(key: str, message: str) -> FragmentError:
    return FragmentError("MalformedDimension", key, message)


@dataclass(frozen=True, slots=True)
class TemporalSegment:
    start: float
    end: Optional[float] = None

    def __post_init__(self) -> None:
        if self.start < 0:
            raise ValueError("temporal start must be >= 0")
        if self.end is not None and self.end <= self.start:
            raise ValueError("temporal end must be > start")


@dataclass(frozen=True, slots=True)
class SpatialRegion:
    unit: str
    x: float
    y: float
    w: float
    h: float

    def __post_init__(self) -> None:
        if self.unit not in (PIXEL, PERCENT):
            raise ValueError(f"unknown spatial unit: {self.unit!r}")
        values = (self.x, self.y, self.w, self.h)
        if any(v < 0 for v in values):
            raise ValueError("spatial values must be non-negative")
        if self.unit == PERCENT and any(v > 100 for v in values):
            raise ValueError("percent values must be <= 100")


@dataclass(frozen=True, slots=True)
class MediaFragment:
    temporal: Optional[TemporalSegment] = None
    spatial: Optional[SpatialRegion] = None
    track: Optional[str] = None
    id: Optional[str] = None
    ptr: Optional[Iri] = None
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __bool__(self) -> bool:
        return any(
            v is not None
            for v in (self.temporal, self.spatial, self.track, self.id, self.ptr)
        )


def _parse_number(key: str, text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise _malformed(key, f"not a number: {text!r}")
    if value != value or value in (float("inf"), float("-inf")):
        raise _malformed(key, f"not a finite number: {text!r}")
    return value


def _parse_temporal(value: str) -> TemporalSegment:
    if value.startswith("npt:"):
        value = value[len("npt:"):]
    if not value:
        raise _malformed("t", "empty time value")
    parts = value.split(",")
    if len(parts) > 2 or not parts[0]:
        raise _malformed("t", f"bad npt range: {value!r}")
    start = _parse_number("t", parts[0])
    end = _parse_number("t", parts[1]) if len(parts) == 2 and parts[1] else None
    try:
        return TemporalSegment(start, end)
    except ValueError as exc:
        raise _malformed("t", str(exc))


def _parse_spatial(value: str) -> SpatialRegion:
    unit = PIXEL
    if value.startswith("pixel:"):
        value = value[len("pixel:"):]
    elif value.startswith("percent:"):
        unit = PERCENT
        value = value[len("percent:"):]
    parts = value.split(",")
    if len(parts) != 4:
        raise _malformed("xywh", f"expected x,y,w,h: {value!r}")
    x, y, w, h = (_parse_number("xywh", p) for p in parts)
    try:
        return SpatialRegion(unit, x, y, w, h)
    except ValueError as exc:
        raise _malformed("xywh", str(exc))


def _parse_ptr(value: str) -> Iri:
    try:
        return Iri(value)
    except ValueError as exc:
        raise _malformed("ptr", str(exc))


def parse_media_fragment(fragment: str) -> MediaFragment:
    """Parse the part after `#` (``&``-separated ``key=value`` pairs)."""
    temporal: Optional[TemporalSegment] = None
    spatial: Optional[SpatialRegion] = None
    track: Optional[str] = None
    frag_id: Optional[str] = None
    ptr: Optional[Iri] = None
    warnings: list[str] = []
    seen: set[str] = set()

    if fragment.startswith("#"):
        fragment = fragment[1:]
    if not fragment:
        return MediaFragment()

    for pair in fragment.split("&"):
        if "=" not in pair:
            raise _malformed(pair, "missing '='")
        key, _, raw = pair.partition("=")
        value = unquote(raw)
        if key in _KEY_ORDER:
            if key in seen:
                raise FragmentError("DuplicateKey", key, "dimension given twice")
            seen.add(key)
        if key == "t":
            temporal = _parse_temporal(value)
        elif key == "xywh":
            spatial = _parse_spatial(value)
        elif key == "track":
            track = value
        elif key == "id":
            frag_id = value
        elif key == "ptr":
            ptr = _parse_ptr(value)
        else:
            warnings.append(f"unknown key ignored: {key!r}")

    return MediaFragment(temporal, spatial, track, frag_id, ptr, tuple(warnings))


def _format_number(value: float) -> str:
    if value == int(value):
        return str(int(value))
    return repr(value)


def serialize_media_fragment(fragment: MediaFragment) -> str:
    """Deterministic key order t, xywh, track, id, ptr; inverse of parse."""
    parts: list[str] = []
    if fragment.temporal is not None:
        t = fragment.temporal
        text = _format_number(t.start)
        if t.end is not None:
            text += f",{_format_number(t.end)}"
        parts.append(f"t={text}")
    if fragment.spatial is not None:
        s = fragment.spatial
        prefix = "percent:" if s.unit == PERCENT else ""
        coords = ",".join(_format_number(v) for v in (s.x, s.y, s.w, s.h))
        parts.append(f"xywh={prefix}{coords}")
    if fragment.track is not None:
        parts.append(f"track={quote(fragment.track, safe='')}")
    if fragment.id is not None:
        parts.append(f"id={quote(fragment.id, safe='')}")
    if fragment.ptr is not None:
        parts.append(f"ptr={quote(fragment.ptr.value, safe='')}")
    return "&".join(parts)
