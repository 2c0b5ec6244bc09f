"""Namespace prefix table used by the annotation vocabulary."""

from __future__ import annotations

from typing import Iterator, Optional

from .terms import Iri

OAC = "http://www.openannotation.org/ns/"
CNT = "http://www.w3.org/2008/content#"
DCTERMS = "http://purl.org/dc/terms/"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
XSD = "http://www.w3.org/2001/XMLSchema#"
OWL = "http://www.w3.org/2002/07/owl#"

_DEFAULT_BINDINGS = {
    "oac": OAC,
    "cnt": CNT,
    "dcterms": DCTERMS,
    "rdf": RDF,
    "rdfs": RDFS,
    "xsd": XSD,
    "owl": OWL,
}

RDF_TYPE = Iri(RDF + "type")
OWL_SAME_AS = Iri(OWL + "sameAs")
RDFS_LABEL = Iri(RDFS + "label")


class NamespaceTable:
    """Bidirectional prefix <-> namespace IRI map."""

    def __init__(self, bindings: Optional[dict[str, str]] = None):
        self._by_prefix: dict[str, str] = dict(
            _DEFAULT_BINDINGS if bindings is None else bindings
        )

    def bind(self, prefix: str, namespace: str) -> None:
        self._by_prefix[prefix] = namespace

    def expand(self, prefix: str, local: str) -> Iri:
        if prefix not in self._by_prefix:
            raise KeyError(prefix)
        return Iri(self._by_prefix[prefix] + local)

    def namespace(self, prefix: str) -> Optional[str]:
        return self._by_prefix.get(prefix)

    def shrink(self, iri: Iri) -> Optional[tuple[str, str]]:
        """Longest-namespace (prefix, local) split of `iri`, or None."""
        best: Optional[tuple[str, str]] = None
        for prefix, ns in self._by_prefix.items():
            if iri.value.startswith(ns) and len(ns) < len(iri.value):
                if best is None or len(ns) > len(self._by_prefix[best[0]]):
                    best = (prefix, iri.value[len(ns):])
        return best

    def items(self) -> Iterator[tuple[str, str]]:
        return iter(sorted(self._by_prefix.items()))

    def __contains__(self, prefix: str) -> bool:
        return prefix in self._by_prefix


def default_namespaces() -> NamespaceTable:
    return NamespaceTable()
