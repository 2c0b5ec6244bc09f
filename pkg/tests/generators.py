"""Seeded random generators used by module tests and the acceptance suite."""

from __future__ import annotations

from datetime import datetime, timezone
from random import Random
from typing import Optional

from openanno.model import (
    Annotation,
    ConstrainedTarget,
    DirectTarget,
    ExternalBody,
    GenericConstraint,
    InlineBody,
    Label,
    SemanticTag,
    SvgConstraint,
    Target,
    TimeConstraint,
)
from openanno.rdf import Graph, Iri, Literal, Triple
from openanno.shapes import Circle, Ellipse, Polygon, Rect, shape_to_svg

WORDS = ["front", "page", "cartoon", "map", "vienna", "rim", "Wien", "café", "CNN"]


def make_datetime(rng: Random) -> datetime:
    return datetime(
        rng.randint(2005, 2015),
        rng.randint(1, 12),
        rng.randint(1, 28),
        rng.randint(0, 23),
        rng.randint(0, 59),
        rng.randint(0, 59),
        tzinfo=timezone.utc,
    )


def make_urn(rng: Random) -> Iri:
    return Iri(f"urn:uuid:{rng.getrandbits(64):016x}")


def make_http(rng: Random, path: str = "r") -> Iri:
    return Iri(f"http://example.org/{path}/{rng.getrandbits(32):08x}")


def make_svg_source(rng: Random) -> str:
    kind = rng.randrange(4)
    if kind == 0:
        shape = Rect(rng.randint(0, 400), rng.randint(0, 400), rng.randint(1, 200), rng.randint(1, 200))
    elif kind == 1:
        shape = Circle(rng.randint(10, 400), rng.randint(10, 400), rng.randint(1, 50))
    elif kind == 2:
        shape = Ellipse(rng.randint(10, 400), rng.randint(10, 400), rng.randint(1, 50), rng.randint(1, 50))
    else:
        shape = Polygon(
            tuple(
                (float(rng.randint(0, 500)), float(rng.randint(0, 500)))
                for _ in range(rng.randint(3, 6))
            )
        )
    return shape_to_svg(shape)


def make_time_constraint(rng: Random) -> TimeConstraint:
    return TimeConstraint(make_datetime(rng), id=make_urn(rng))


def make_constraint(rng: Random):
    if rng.random() < 0.7:
        return SvgConstraint(make_svg_source(rng), id=make_urn(rng))
    return GenericConstraint(
        Iri("http://example.org/ns/RegionNote"),
        frozenset({(Iri("http://example.org/ns/note"), Literal(rng.choice(WORDS)))}),
        id=make_urn(rng),
    )


def make_body(rng: Random, with_tc: bool):
    tc = make_time_constraint(rng) if with_tc else None
    if rng.random() < 0.5:
        return ExternalBody(make_http(rng, "bodies"), time_constraint=tc)
    chars = " ".join(rng.choices(WORDS, k=rng.randint(1, 6)))
    return InlineBody(make_urn(rng), chars, time_constraint=tc)


def make_target(
    rng: Random,
    with_tc: bool,
    thread_uris: tuple[Iri, ...] = (),
    used: set[Iri] | None = None,
) -> Target:
    used = set() if used is None else used
    tc = make_time_constraint(rng) if with_tc else None
    fresh_threads = [u for u in thread_uris if u not in used]
    if fresh_threads and rng.random() < 0.3:
        uri = rng.choice(fresh_threads)
        used.add(uri)
        return DirectTarget(uri, time_constraint=tc)
    if rng.random() < 0.5:
        uri = make_http(rng, "images")
        while uri in used:
            uri = make_http(rng, "images")
        used.add(uri)
        return DirectTarget(uri, time_constraint=tc)
    return ConstrainedTarget(
        id=make_urn(rng),
        constrains=make_http(rng, "images"),
        constraint=make_constraint(rng),
        time_constraint=tc,
    )


def make_annotation(
    rng: Random,
    uri: Optional[Iri] = None,
    thread_uris: tuple[Iri, ...] = (),
) -> Annotation:
    uri = uri or make_urn(rng)
    mode = rng.choice(["timeless", "uniform", "varied"])

    def tc_flag() -> bool:
        return mode == "varied" and rng.random() < 0.5

    body = make_body(rng, tc_flag())
    used: set[Iri] = set()
    targets = tuple(
        make_target(rng, tc_flag(), thread_uris, used) for _ in range(rng.randint(1, 3))
    )
    if mode == "varied" and body.time_constraint is None and all(
        t.time_constraint is None for t in targets
    ):
        body = make_body(rng, True)

    tags = ()
    if rng.random() < 0.3:
        tags = (
            SemanticTag(
                make_http(rng, "concepts"),
                (Label("Wien", "de"), Label("Vienna", "en")),
            ),
        )

    extra = Graph()
    if rng.random() < 0.2:
        extra = Graph(
            [Triple(uri, Iri("http://purl.org/dc/terms/title"), Literal(rng.choice(WORDS)))]
        )

    return Annotation(
        uri=uri,
        body=body,
        targets=targets,
        creator=rng.choice([None, "alice", "bob"]),
        created=make_datetime(rng) if rng.random() < 0.7 else None,
        when=make_datetime(rng) if mode == "uniform" else None,
        semantic_tags=tags,
        extra=extra,
    )
