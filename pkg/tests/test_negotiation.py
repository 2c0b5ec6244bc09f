from __future__ import annotations

from datetime import datetime, timezone

import pytest

from openanno.negotiation import (
    NegotiationError,
    format_http_datetime,
    negotiate,
    parse_http_datetime,
)

NT = "application/n-triples"
TTL = "text/turtle"


class TestMediaType:
    def test_exact_ntriples(self):
        assert negotiate(NT).media_type == NT

    def test_wildcard_defaults_to_turtle(self):
        assert negotiate("*/*").media_type == TTL

    def test_absent_header_defaults_to_turtle(self):
        assert negotiate(None).media_type == TTL

    def test_q_values_respected(self):
        header = "text/turtle;q=0.3, application/n-triples;q=0.9"
        assert negotiate(header).media_type == NT

    def test_type_wildcard(self):
        assert negotiate("application/*").media_type == NT
        assert negotiate("text/*").media_type == TTL

    def test_not_acceptable(self):
        with pytest.raises(NegotiationError) as exc:
            negotiate("application/pdf")
        assert exc.value.code == "NotAcceptable"

    def test_q_zero_excludes(self):
        with pytest.raises(NegotiationError):
            negotiate("text/turtle;q=0")

    def test_tie_prefers_turtle(self):
        assert negotiate("application/n-triples, text/turtle").media_type == TTL

    def test_specificity_beats_wildcard(self):
        assert negotiate("*/*;q=1, application/n-triples;q=1").media_type == NT


class TestDatetime:
    def test_http_date_parsed(self):
        got = negotiate("*/*", "Thu, 01 Apr 2010 00:00:00 GMT")
        assert got.datetime == datetime(2010, 4, 1, tzinfo=timezone.utc)

    def test_absent_means_no_dimension(self):
        assert negotiate("*/*").datetime is None

    def test_malformed_datetime(self):
        with pytest.raises(NegotiationError) as exc:
            negotiate("*/*", "yesterday-ish")
        assert exc.value.code == "MalformedDatetime"

    def test_format_round_trip(self):
        dt = datetime(2010, 4, 1, 12, 30, 5, tzinfo=timezone.utc)
        assert parse_http_datetime(format_http_datetime(dt)) == dt
