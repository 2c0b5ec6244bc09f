"""Core RDF data model: IRIs, literals, blank nodes, triples and graphs.

Graphs are immutable value objects with set semantics. Everything here is
hashable so graphs can be compared, used as dict keys and shared between
threads without locking.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from itertools import permutations
from typing import Iterable, Iterator, Optional, Union

_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.-]*:")
_BLANK_LABEL_RE = re.compile(r"^[A-Za-z0-9]+$")

XSD_DATETIME_IRI = "http://www.w3.org/2001/XMLSchema#dateTime"
DATETIME_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


class ParseError(ValueError):
    """Syntax error in an RDF document, with 1-based line/column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


@dataclass(frozen=True, slots=True)
class Iri:
    """An absolute IRI. Relative references are rejected at construction."""

    value: str

    def __post_init__(self) -> None:
        if not _SCHEME_RE.match(self.value):
            raise ValueError(f"not an absolute IRI (missing scheme): {self.value!r}")

    @property
    def scheme(self) -> str:
        return self.value.split(":", 1)[0].lower()

    @property
    def is_dereferenceable(self) -> bool:
        return self.scheme in ("http", "https")

    @property
    def is_urn(self) -> bool:
        return self.scheme == "urn"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class Literal:
    """An RDF literal. Carries at most one of datatype/lang."""

    lexical: str
    datatype: Optional[Iri] = None
    lang: Optional[str] = None

    def __post_init__(self) -> None:
        if self.datatype is not None and self.lang is not None:
            raise ValueError("literal cannot carry both a datatype and a language tag")


@dataclass(frozen=True, slots=True)
class BlankNode:
    label: str

    def __post_init__(self) -> None:
        if not _BLANK_LABEL_RE.match(self.label):
            raise ValueError(f"blank node label must match [A-Za-z0-9]+: {self.label!r}")


Term = Union[Iri, Literal, BlankNode]
Subject = Union[Iri, BlankNode]


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Subject
    predicate: Iri
    object: Term

    def __post_init__(self) -> None:
        if isinstance(self.subject, Literal):
            raise ValueError("triple subject cannot be a literal")
        if not isinstance(self.predicate, Iri):
            raise ValueError("triple predicate must be an IRI")


def datetime_literal(dt: datetime) -> Literal:
    """UTC xsd:dateTime literal at whole-second precision."""
    return Literal(format_datetime(dt), datatype=Iri(XSD_DATETIME_IRI))


def format_datetime(dt: datetime) -> str:
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    dt = dt.astimezone(timezone.utc).replace(microsecond=0)
    return dt.strftime(DATETIME_FORMAT)


def parse_datetime(text: str) -> datetime:
    dt = datetime.strptime(text, DATETIME_FORMAT)
    return dt.replace(tzinfo=timezone.utc)


def literal_datetime(lit: Literal) -> datetime:
    if lit.datatype is None or lit.datatype.value != XSD_DATETIME_IRI:
        raise ValueError(f"not an xsd:dateTime literal: {lit!r}")
    return parse_datetime(lit.lexical)


# --- N-Triples term rendering (shared by the serializers and Graph sorting) ---

_LITERAL_ESCAPES = {'"': '\\"', "\\": "\\\\", "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _escape_codepoint(ch: str) -> str:
    cp = ord(ch)
    return f"\\u{cp:04X}" if cp <= 0xFFFF else f"\\U{cp:08X}"


def escape_literal_text(text: str) -> str:
    out = []
    for ch in text:
        if ch in _LITERAL_ESCAPES:
            out.append(_LITERAL_ESCAPES[ch])
        elif 0x20 <= ord(ch) <= 0x7E:
            out.append(ch)
        else:
            out.append(_escape_codepoint(ch))
    return "".join(out)


def escape_iri_text(text: str) -> str:
    out = []
    for ch in text:
        if 0x21 <= ord(ch) <= 0x7E and ch not in '<>"{}|^`\\':
            out.append(ch)
        else:
            out.append(_escape_codepoint(ch))
    return "".join(out)


def render_term(term: Term) -> str:
    """Render a term in N-Triples syntax (pure ASCII)."""
    if isinstance(term, Iri):
        return f"<{escape_iri_text(term.value)}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    if isinstance(term, Literal):
        base = f'"{escape_literal_text(term.lexical)}"'
        if term.lang is not None:
            return f"{base}@{term.lang}"
        if term.datatype is not None:
            return f"{base}^^<{escape_iri_text(term.datatype.value)}>"
        return base
    raise TypeError(f"not an RDF term: {term!r}")


def render_triple(triple: Triple) -> str:
    return (
        f"{render_term(triple.subject)} {render_term(triple.predicate)} "
        f"{render_term(triple.object)} ."
    )


@dataclass(frozen=True)
class Graph:
    """An immutable set of triples."""

    triples: frozenset[Triple] = field(default_factory=frozenset)

    def __init__(self, triples: Iterable[Triple] = ()):
        object.__setattr__(self, "triples", frozenset(triples))

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.triples)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self.triples

    def __or__(self, other: "Graph") -> "Graph":
        return Graph(self.triples | other.triples)

    def match(
        self,
        subject: Optional[Subject] = None,
        predicate: Optional[Iri] = None,
        object: Optional[Term] = None,
    ) -> Iterator[Triple]:
        """Iterate triples matching the pattern; None is a wildcard."""
        for t in self.triples:
            if subject is not None and t.subject != subject:
                continue
            if predicate is not None and t.predicate != predicate:
                continue
            if object is not None and t.object != object:
                continue
            yield t

    def objects(self, subject: Subject, predicate: Iri) -> list[Term]:
        return sorted(
            (t.object for t in self.match(subject, predicate)), key=render_term
        )

    def subjects(self, predicate: Iri, object: Term) -> list[Subject]:
        return sorted(
            (t.subject for t in self.match(None, predicate, object)), key=render_term
        )

    def value(self, subject: Subject, predicate: Iri) -> Optional[Term]:
        """The single object of (subject, predicate), or None if absent."""
        objs = self.objects(subject, predicate)
        if not objs:
            return None
        if len(objs) > 1:
            raise ValueError(
                f"multiple values for {render_term(subject)} {render_term(predicate)}"
            )
        return objs[0]

    def isomorphic(self, other: "Graph") -> bool:
        """True iff a blank-node bijection maps this graph onto `other`."""
        if len(self) != len(other):
            return False
        mine_ground = {t for t in self if _is_ground(t)}
        theirs_ground = {t for t in other if _is_ground(t)}
        if mine_ground != theirs_ground:
            return False
        mine = self.triples - mine_ground
        theirs = other.triples - theirs_ground
        return _blank_bijection_exists(mine, theirs)


def _is_ground(t: Triple) -> bool:
    return not isinstance(t.subject, BlankNode) and not isinstance(t.object, BlankNode)


def _blank_signatures(triples: frozenset[Triple], rounds: int = 4) -> dict[str, str]:
    """Iteratively refined structural signatures for blank node labels."""
    labels = {
        n.label
        for t in triples
        for n in (t.subject, t.object)
        if isinstance(n, BlankNode)
    }
    sig = {lb: "" for lb in labels}
    for _ in range(rounds):
        nxt: dict[str, list[str]] = {lb: [] for lb in labels}
        for t in triples:
            s_blank = isinstance(t.subject, BlankNode)
            o_blank = isinstance(t.object, BlankNode)
            p = t.predicate.value
            if s_blank:
                other = f"~{sig[t.object.label]}" if o_blank else render_term(t.object)
                nxt[t.subject.label].append(f"S {p} {other}")
            if o_blank:
                other = f"~{sig[t.subject.label]}" if s_blank else render_term(t.subject)
                nxt[t.object.label].append(f"O {p} {other}")
        sig = {lb: "|".join(sorted(parts)) for lb, parts in nxt.items()}
    return sig


def _blank_bijection_exists(
    mine: frozenset[Triple], theirs: frozenset[Triple], max_group: int = 8
) -> bool:
    sig_a = _blank_signatures(mine)
    sig_b = _blank_signatures(theirs)
    groups_a: dict[str, list[str]] = {}
    groups_b: dict[str, list[str]] = {}
    for lb, s in sig_a.items():
        groups_a.setdefault(s, []).append(lb)
    for lb, s in sig_b.items():
        groups_b.setdefault(s, []).append(lb)
    if set(groups_a) != set(groups_b):
        return False
    if any(len(groups_a[s]) != len(groups_b[s]) for s in groups_a):
        return False

    def check(mapping: dict[str, str]) -> bool:
        mapped = set()
        for t in mine:
            s = BlankNode(mapping[t.subject.label]) if isinstance(t.subject, BlankNode) else t.subject
            o = BlankNode(mapping[t.object.label]) if isinstance(t.object, BlankNode) else t.object
            mapped.add(Triple(s, t.predicate, o))
        return mapped == theirs

    # Signatures usually pin every node; permute only within ambiguous groups.
    fixed: dict[str, str] = {}
    ambiguous: list[tuple[list[str], list[str]]] = []
    for s in groups_a:
        a, b = sorted(groups_a[s]), sorted(groups_b[s])
        if len(a) == 1:
            fixed[a[0]] = b[0]
        else:
            if len(a) > max_group:
                return False
            ambiguous.append((a, b))

    def backtrack(i: int, mapping: dict[str, str]) -> bool:
        if i == len(ambiguous):
            return check(mapping)
        a, b = ambiguous[i]
        for perm in permutations(b):
            trial = dict(mapping)
            trial.update(zip(a, perm))
            if backtrack(i + 1, trial):
                return True
        return False

    return backtrack(0, fixed)
