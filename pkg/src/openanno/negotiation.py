"""HTTP content negotiation: media type by q-value, plus the datetime
dimension carried by the Accept-Datetime header."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from email.utils import format_datetime as _format_rfc1123
from email.utils import parsedate_to_datetime
from typing import Optional

from . import rdf

SUPPORTED_MEDIA_TYPES = (rdf.MEDIA_TYPES[rdf.TURTLE], rdf.MEDIA_TYPES[rdf.NTRIPLES])
DEFAULT_MEDIA_TYPE = rdf.MEDIA_TYPES[rdf.TURTLE]


class NegotiationError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


@dataclass(frozen=True, slots=True)
class NegotiationResult:
    media_type: str
    datetime: Optional[datetime] = None


def _parse_accept(header: str) -> list[tuple[str, float]]:
    """(media-range, q) pairs; unparseable items are skipped."""
    out: list[tuple[str, float]] = []
    for item in header.split(","):
        parts = [p.strip() for p in item.split(";")]
        media = parts[0].lower()
        if "/" not in media:
            continue
        q = 1.0
        for param in parts[1:]:
            if param.startswith("q="):
                try:
                    q = float(param[2:])
                except ValueError:
                    q = 0.0
        out.append((media, max(0.0, min(q, 1.0))))
    return out


def _match_quality(supported: str, media_range: str) -> int:
    """2 exact, 1 for type/*, 0 for */*, -1 for no match."""
    if media_range == supported:
        return 2
    stype = supported.split("/", 1)[0]
    if media_range == f"{stype}/*":
        return 1
    if media_range == "*/*":
        return 0
    return -1


def negotiate(
    accept_header: Optional[str], accept_datetime_header: Optional[str] = None
) -> NegotiationResult:
    """Choose a response media type and optional datetime dimension.

    Missing or wildcard-only Accept headers fall back to text/turtle. Ties
    on q-value and specificity go to the server preference order (turtle
    before n-triples).
    """
    chosen_dt = (
        parse_http_datetime(accept_datetime_header)
        if accept_datetime_header is not None
        else None
    )

    if accept_header is None or not accept_header.strip():
        return NegotiationResult(DEFAULT_MEDIA_TYPE, chosen_dt)

    ranges = _parse_accept(accept_header)
    if not ranges:
        raise NegotiationError("NotAcceptable", f"unusable Accept header: {accept_header!r}")

    best: Optional[tuple[float, int, int]] = None
    best_type: Optional[str] = None
    for preference, supported in enumerate(SUPPORTED_MEDIA_TYPES):
        for media_range, q in ranges:
            specificity = _match_quality(supported, media_range)
            if specificity < 0 or q <= 0:
                continue
            rank = (q, specificity, -preference)
            if best is None or rank > best:
                best = rank
                best_type = supported
    if best_type is None:
        raise NegotiationError(
            "NotAcceptable", f"no supported media type in {accept_header!r}"
        )
    return NegotiationResult(best_type, chosen_dt)


def parse_http_datetime(text: str) -> datetime:
    """Parse an RFC 1123 HTTP-date (e.g. `Thu, 01 Apr 2010 00:00:00 GMT`)."""
    try:
        dt = parsedate_to_datetime(text)
    except (TypeError, ValueError):
        raise NegotiationError("MalformedDatetime", f"bad HTTP date: {text!r}")
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def format_http_datetime(dt: datetime) -> str:
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return _format_rfc1123(dt.astimezone(timezone.utc), usegmt=True)
