"""Minimal RDF core: terms, graphs, and N-Triples / Turtle round-tripping."""

from __future__ import annotations

from . import ntriples, turtle
from .namespaces import (
    CNT,
    DCTERMS,
    OAC,
    OWL,
    OWL_SAME_AS,
    RDF,
    RDF_TYPE,
    RDFS,
    RDFS_LABEL,
    XSD,
    NamespaceTable,
    default_namespaces,
)
from .terms import (
    BlankNode,
    Graph,
    Iri,
    Literal,
    ParseError,
    Subject,
    Term,
    Triple,
    datetime_literal,
    format_datetime,
    literal_datetime,
    parse_datetime,
    render_term,
    render_triple,
)

NTRIPLES = "ntriples"
TURTLE = "turtle"

MEDIA_TYPES = {
    NTRIPLES: ntriples.MEDIA_TYPE,
    TURTLE: turtle.MEDIA_TYPE,
}
FORMAT_BY_MEDIA_TYPE = {v: k for k, v in MEDIA_TYPES.items()}


def parse(text: str, format: str = NTRIPLES) -> Graph:
    if format == NTRIPLES:
        return ntriples.parse(text)
    if format == TURTLE:
        return turtle.parse(text)
    raise ValueError(f"unknown RDF format: {format!r}")


def serialize(
    graph: Graph, format: str = NTRIPLES, namespaces: NamespaceTable | None = None
) -> str:
    if format == NTRIPLES:
        return ntriples.serialize(graph)
    if format == TURTLE:
        return turtle.serialize(graph, namespaces)
    raise ValueError(f"unknown RDF format: {format!r}")


__all__ = [
    "BlankNode",
    "Graph",
    "Iri",
    "Literal",
    "ParseError",
    "Subject",
    "Term",
    "Triple",
    "NamespaceTable",
    "default_namespaces",
    "datetime_literal",
    "format_datetime",
    "literal_datetime",
    "parse_datetime",
    "render_term",
    "render_triple",
    "parse",
    "serialize",
    "NTRIPLES",
    "TURTLE",
    "MEDIA_TYPES",
    "FORMAT_BY_MEDIA_TYPE",
    "OAC",
    "CNT",
    "DCTERMS",
    "RDF",
    "RDFS",
    "XSD",
    "OWL",
    "RDF_TYPE",
    "OWL_SAME_AS",
    "RDFS_LABEL",
]
