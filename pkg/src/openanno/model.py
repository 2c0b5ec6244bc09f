"""The annotation domain model and its graph mapping.

An annotation associates exactly one body with one or more targets. Bodies
are external resources or inline text; targets are whole resources or
segments carved out by a constraint node. Temporal context is carried either
by an annotation-level `when` or by per-resource time constraints —
never both (see `classify_temporal`).

All model values are immutable. Target and tag tuples are normalized to a
canonical order at construction so that equality is order-insensitive, which
is what graph round-tripping can guarantee.
"""

from __future__ import annotations

import logging
import uuid
from dataclasses import dataclass, field, replace
from datetime import datetime
from typing import Callable, Iterable, Mapping, Optional, Union

from . import shapes
from .rdf import (
    OWL_SAME_AS,
    RDF_TYPE,
    RDFS_LABEL,
    BlankNode,
    Graph,
    Iri,
    Literal,
    Term,
    Triple,
    datetime_literal,
    literal_datetime,
)
from .vocab import DEFAULT_VOCAB, Vocabulary

logger = logging.getLogger(__name__)


class ModelError(ValueError):
    """A structurally invalid annotation graph; `code` is stable."""

    def __init__(self, code: str, node: Optional[Term], message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.node = node


@dataclass(frozen=True, slots=True)
class Violation:
    code: str
    node: Optional[Term]
    message: str


def mint_urn() -> Iri:
    return Iri(f"urn:uuid:{uuid.uuid4()}")


# --- constraints ---


@dataclass(frozen=True, slots=True)
class TimeConstraint:
    when: datetime
    id: Iri = field(default_factory=mint_urn)


@dataclass(frozen=True, slots=True)
class SvgConstraint:
    svg_source: str
    id: Iri = field(default_factory=mint_urn)

    def shape(self) -> shapes.SvgShape:
        return shapes.parse_svg_constraint(self.svg_source)


@dataclass(frozen=True)
class GenericConstraint:
    type: Iri
    properties: frozenset[tuple[Iri, Term]] = frozenset()
    id: Iri = field(default_factory=mint_urn)

    def __post_init__(self) -> None:
        if isinstance(self.properties, Mapping):
            object.__setattr__(
                self, "properties", frozenset(self.properties.items())
            )
        else:
            object.__setattr__(self, "properties", frozenset(self.properties))


Constraint = Union[SvgConstraint, TimeConstraint, GenericConstraint]


# --- bodies and targets ---


@dataclass(frozen=True, slots=True)
class ExternalBody:
    uri: Iri
    time_constraint: Optional[TimeConstraint] = None


@dataclass(frozen=True, slots=True)
class InlineBody:
    id: Iri
    chars: str
    encoding: str = "utf-8"
    time_constraint: Optional[TimeConstraint] = None


Body = Union[ExternalBody, InlineBody]


@dataclass(frozen=True, slots=True)
class DirectTarget:
    uri: Iri
    time_constraint: Optional[TimeConstraint] = None


@dataclass(frozen=True, slots=True)
class ConstrainedTarget:
    id: Iri
    constrains: Iri
    constraint: Constraint
    time_constraint: Optional[TimeConstraint] = None


Target = Union[DirectTarget, ConstrainedTarget]


@dataclass(frozen=True, slots=True)
class Label:
    text: str
    lang: Optional[str] = None


@dataclass(frozen=True)
class SemanticTag:
    resource: Iri
    labels: tuple[Label, ...] = ()

    def __post_init__(self) -> None:
        normalized = tuple(
            sorted(set(self.labels), key=lambda l: (l.text, l.lang or ""))
        )
        object.__setattr__(self, "labels", normalized)


TagResolver = Callable[[Iri], Iterable[Label]]


def no_labels(_resource: Iri) -> tuple[Label, ...]:
    """The no-op tag resolver."""
    return ()


@dataclass(frozen=True)
class Annotation:
    uri: Iri
    body: Body
    targets: tuple[Target, ...]
    creator: Optional[str] = None
    created: Optional[datetime] = None
    when: Optional[datetime] = None
    semantic_tags: tuple[SemanticTag, ...] = ()
    extra: Graph = Graph()

    def __post_init__(self) -> None:
        # Set semantics, as in the graph form: order is canonical and exact
        # duplicates collapse.
        object.__setattr__(self, "targets", tuple(sorted(set(self.targets), key=repr)))
        object.__setattr__(
            self,
            "semantic_tags",
            tuple(sorted(set(self.semantic_tags), key=lambda t: t.resource.value)),
        )


def body_node(body: Body) -> Iri:
    return body.uri if isinstance(body, ExternalBody) else body.id


def target_uris(annotation: Annotation) -> set[Iri]:
    """Resource URIs this annotation is about (direct and constrained)."""
    uris: set[Iri] = set()
    for t in annotation.targets:
        uris.add(t.uri if isinstance(t, DirectTarget) else t.constrains)
    return uris


# --- temporal classes ---


@dataclass(frozen=True, slots=True)
class Timeless:
    pass


@dataclass(frozen=True, slots=True)
class Uniform:
    when: datetime


@dataclass(frozen=True, slots=True)
class Varied:
    body_when: Optional[datetime]
    target_whens: tuple[Optional[datetime], ...]


TemporalClass = Union[Timeless, Uniform, Varied]


def _has_time_constraints(a: Annotation) -> bool:
    if a.body.time_constraint is not None:
        return True
    return any(t.time_constraint is not None for t in a.targets)


def classify_temporal(a: Annotation) -> TemporalClass:
    """Timeless / Uniform / Varied, by where the datetime attaches."""
    constrained = _has_time_constraints(a)
    if a.when is not None and constrained:
        raise ModelError(
            "AmbiguousTemporalClass",
            a.uri,
            "annotation-level when combined with time constraints",
        )
    if a.when is not None:
        return Uniform(a.when)
    if constrained:
        body_when = (
            a.body.time_constraint.when if a.body.time_constraint else None
        )
        target_whens = tuple(
            t.time_constraint.when if t.time_constraint else None for t in a.targets
        )
        return Varied(body_when, target_whens)
    return Timeless()


# --- validation ---


def validate(a: Annotation) -> list[Violation]:
    """Empty list iff the annotation satisfies every model invariant."""
    violations: list[Violation] = []
    if not a.targets:
        violations.append(Violation("NoTargets", a.uri, "annotation has no targets"))
    if isinstance(a.body, InlineBody):
        if not a.body.chars:
            violations.append(
                Violation("EmptyInlineBody", a.body.id, "inline body has empty chars")
            )
        if not a.body.encoding:
            violations.append(
                Violation("MissingEncoding", a.body.id, "inline body has no encoding")
            )
        # Clients mint URNs; servers may have resolved them to HTTP URIs.
        if not (a.body.id.is_urn or a.body.id.is_dereferenceable):
            violations.append(
                Violation(
                    "InlineBodyNotUrn",
                    a.body.id,
                    "inline body id must be a URN or a resolved http(s) URI",
                )
            )
    if a.when is not None and _has_time_constraints(a):
        violations.append(
            Violation(
                "AmbiguousTemporalClass",
                a.uri,
                "annotation-level when combined with time constraints",
            )
        )
    for t in a.targets:
        if isinstance(t, ConstrainedTarget) and isinstance(t.constraint, SvgConstraint):
            try:
                t.constraint.shape()
            except shapes.SvgError as exc:
                violations.append(
                    Violation("MalformedConstraint", t.constraint.id, str(exc))
                )
    return violations


# --- graph mapping ---


def annotation_to_graph(
    a: Annotation,
    vocab: Vocabulary = DEFAULT_VOCAB,
    equivalences: Optional["EquivalenceMap"] = None,
) -> Graph:
    """Emit the typed annotation graph (inverse of annotation_from_graph)."""
    triples: list[Triple] = []

    def emit(s: Iri, p: Iri, o: Term) -> None:
        triples.append(Triple(s, p, o))

    def emit_constraint(owner: Iri, c: Constraint) -> None:
        emit(owner, vocab.constrained_by, c.id)
        if isinstance(c, TimeConstraint):
            emit(c.id, RDF_TYPE, vocab.time_constraint)
            emit(c.id, vocab.when, datetime_literal(c.when))
        elif isinstance(c, SvgConstraint):
            emit(c.id, RDF_TYPE, vocab.svg_constraint)
            emit(c.id, RDF_TYPE, vocab.content_as_text)
            emit(c.id, vocab.chars, Literal(c.svg_source))
        else:
            emit(c.id, RDF_TYPE, c.type)
            for p, o in sorted(c.properties, key=repr):
                emit(c.id, p, o)

    emit(a.uri, RDF_TYPE, vocab.annotation)

    bnode = body_node(a.body)
    emit(a.uri, vocab.has_body, bnode)
    emit(bnode, RDF_TYPE, vocab.body)
    if isinstance(a.body, InlineBody):
        emit(bnode, RDF_TYPE, vocab.content_as_text)
        emit(bnode, vocab.chars, Literal(a.body.chars))
        emit(bnode, vocab.character_encoding, Literal(a.body.encoding))
    if a.body.time_constraint is not None:
        emit_constraint(bnode, a.body.time_constraint)

    for t in a.targets:
        if isinstance(t, DirectTarget):
            emit(a.uri, vocab.has_target, t.uri)
            emit(t.uri, RDF_TYPE, vocab.target)
            if t.time_constraint is not None:
                emit_constraint(t.uri, t.time_constraint)
        else:
            emit(a.uri, vocab.has_target, t.id)
            emit(t.id, RDF_TYPE, vocab.constraint_target)
            emit(t.id, vocab.constrains, t.constrains)
            emit_constraint(t.id, t.constraint)
            if t.time_constraint is not None:
                emit_constraint(t.id, t.time_constraint)

    if a.when is not None:
        emit(a.uri, vocab.when, datetime_literal(a.when))
    if a.creator is not None:
        emit(a.uri, vocab.creator, Literal(a.creator))
    if a.created is not None:
        emit(a.uri, vocab.created, datetime_literal(a.created))

    for tag in a.semantic_tags:
        emit(bnode, vocab.references, tag.resource)
        for label in tag.labels:
            emit(tag.resource, RDFS_LABEL, Literal(label.text, lang=label.lang))

    graph = Graph(triples) | a.extra

    if equivalences is not None:
        ids = _node_ids(a)
        same_as = [
            Triple(urn, OWL_SAME_AS, http)
            for urn, http in equivalences.bindings
            if urn in ids or http in ids
        ]
        if same_as:
            graph = graph | Graph(same_as)
    return graph


def _node_ids(a: Annotation) -> set[Iri]:
    ids = {a.uri, body_node(a.body)}
    if a.body.time_constraint is not None:
        ids.add(a.body.time_constraint.id)
    for t in a.targets:
        if isinstance(t, DirectTarget):
            ids.add(t.uri)
        else:
            ids.update((t.id, t.constraint.id))
        if t.time_constraint is not None:
            ids.add(t.time_constraint.id)
    return ids


def _require_iri(node: Term, code: str, what: str) -> Iri:
    if not isinstance(node, Iri):
        raise ModelError(code, node, f"{what} must be identified by an IRI")
    return node


def _read_datetime(term: Term, node: Term, what: str) -> datetime:
    if not isinstance(term, Literal):
        raise ModelError("MalformedAnnotation", node, f"{what} must be a literal")
    try:
        return literal_datetime(term)
    except ValueError as exc:
        raise ModelError("MalformedAnnotation", node, f"bad {what}: {exc}")


def _read_constraint(g: Graph, node: Term, vocab: Vocabulary) -> Constraint:
    cid = _require_iri(node, "MalformedConstraint", "constraint")
    types = set(g.objects(cid, RDF_TYPE))
    try:
        if vocab.time_constraint in types:
            when_term = g.value(cid, vocab.when)
            if when_term is None:
                raise ModelError("MalformedConstraint", cid, "time constraint without when")
            return TimeConstraint(_read_datetime(when_term, cid, "when"), id=cid)
        if vocab.svg_constraint in types:
            chars = g.value(cid, vocab.chars)
            if not isinstance(chars, Literal):
                raise ModelError("MalformedConstraint", cid, "svg constraint without chars")
            return SvgConstraint(chars.lexical, id=cid)
    except ModelError:
        raise
    except ValueError as exc:
        raise ModelError("MalformedConstraint", cid, str(exc))
    explicit = sorted(
        (t for t in types if t not in (vocab.content_as_text, vocab.constraint)),
        key=lambda i: i.value,
    )
    if not explicit:
        raise ModelError("MalformedConstraint", cid, "constraint node has no type")
    props = frozenset(
        (t.predicate, t.object)
        for t in g.match(subject=cid)
        if t.predicate != RDF_TYPE
    )
    return GenericConstraint(explicit[0], props, id=cid)


def _read_time_constraint_of(
    g: Graph, node: Iri, vocab: Vocabulary
) -> Optional[TimeConstraint]:
    """The single TimeConstraint linked from a body or direct-target node."""
    links = g.objects(node, vocab.constrained_by)
    if not links:
        return None
    if len(links) > 1:
        raise ModelError(
            "MalformedConstraint", node, "more than one constraint on this node"
        )
    c = _read_constraint(g, links[0], vocab)
    if not isinstance(c, TimeConstraint):
        raise ModelError(
            "MalformedConstraint", node, "only time constraints may attach here"
        )
    return c


def _read_constrained_target(
    g: Graph, node: Iri, vocab: Vocabulary
) -> ConstrainedTarget:
    constrains_term = g.value(node, vocab.constrains)
    if constrains_term is None:
        raise ModelError("MalformedConstraint", node, "constraint target without constrains")
    constrains = _require_iri(constrains_term, "MalformedConstraint", "constrains value")
    links = g.objects(node, vocab.constrained_by)
    if not links:
        raise ModelError("MalformedConstraint", node, "constraint target without constraint")
    constraints = [_read_constraint(g, link, vocab) for link in links]
    if len(constraints) == 1:
        return ConstrainedTarget(node, constrains, constraints[0])
    if len(constraints) == 2:
        times = [c for c in constraints if isinstance(c, TimeConstraint)]
        others = [c for c in constraints if not isinstance(c, TimeConstraint)]
        if len(times) == 1 and len(others) == 1:
            return ConstrainedTarget(node, constrains, others[0], times[0])
    raise ModelError(
        "MalformedConstraint", node, "ambiguous set of constraints on target"
    )


def annotation_from_graph(
    g: Graph, uri: Iri, vocab: Vocabulary = DEFAULT_VOCAB
) -> Annotation:
    """Rebuild the typed annotation rooted at `uri`.

    Unknown triples whose subject is the annotation node are preserved in
    `Annotation.extra` and re-emitted by annotation_to_graph.
    """
    if Triple(uri, RDF_TYPE, vocab.annotation) not in g:
        raise ModelError("NotAnAnnotation", uri, "node is not typed as an annotation")

    body_nodes = g.objects(uri, vocab.has_body)
    if not body_nodes:
        raise ModelError("MissingBody", uri, "annotation has no body")
    if len(body_nodes) > 1:
        raise ModelError("MultipleBodies", uri, f"{len(body_nodes)} bodies found")
    bnode = _require_iri(body_nodes[0], "MalformedBody", "body")

    try:
        chars = g.value(bnode, vocab.chars)
        encoding = g.value(bnode, vocab.character_encoding)
    except ValueError as exc:
        raise ModelError("MalformedBody", bnode, str(exc))
    body: Body
    if chars is not None:
        if not isinstance(chars, Literal):
            raise ModelError("MalformedBody", bnode, "chars must be a literal")
        enc = encoding.lexical if isinstance(encoding, Literal) else "utf-8"
        body = InlineBody(bnode, chars.lexical, enc)
    else:
        body = ExternalBody(bnode)
    btc = _read_time_constraint_of(g, bnode, vocab)
    if btc is not None:
        body = replace(body, time_constraint=btc)

    target_nodes = g.objects(uri, vocab.has_target)
    if not target_nodes:
        raise ModelError("NoTargets", uri, "annotation has no targets")
    targets: list[Target] = []
    for node in target_nodes:
        tnode = _require_iri(node, "MalformedTarget", "target")
        is_constrained = (
            Triple(tnode, RDF_TYPE, vocab.constraint_target) in g
            or g.value(tnode, vocab.constrains) is not None
        )
        if is_constrained:
            targets.append(_read_constrained_target(g, tnode, vocab))
        else:
            targets.append(
                DirectTarget(tnode, _read_time_constraint_of(g, tnode, vocab))
            )

    try:
        when_term = g.value(uri, vocab.when)
        creator_term = g.value(uri, vocab.creator)
        created_term = g.value(uri, vocab.created)
    except ValueError as exc:
        raise ModelError("MalformedAnnotation", uri, str(exc))
    when = _read_datetime(when_term, uri, "when") if when_term is not None else None
    created = (
        _read_datetime(created_term, uri, "created") if created_term is not None else None
    )
    creator: Optional[str] = None
    if isinstance(creator_term, Literal):
        creator = creator_term.lexical
    elif isinstance(creator_term, Iri):
        creator = creator_term.value

    tags: list[SemanticTag] = []
    for resource in g.objects(bnode, vocab.references):
        rnode = _require_iri(resource, "MalformedTag", "tag resource")
        labels = tuple(
            Label(t.object.lexical, t.object.lang)
            for t in g.match(rnode, RDFS_LABEL)
            if isinstance(t.object, Literal)
        )
        tags.append(SemanticTag(rnode, labels))

    consumed = {
        vocab.has_body,
        vocab.has_target,
        vocab.when,
        vocab.creator,
        vocab.created,
    }
    extra = Graph(
        t
        for t in g.match(subject=uri)
        if t.predicate not in consumed
        and not (t.predicate == RDF_TYPE and t.object == vocab.annotation)
    )

    return Annotation(
        uri=uri,
        body=body,
        targets=tuple(targets),
        creator=creator,
        created=created,
        when=when,
        semantic_tags=tuple(tags),
        extra=extra,
    )


def find_annotation_uris(g: Graph, vocab: Vocabulary = DEFAULT_VOCAB) -> list[Iri]:
    """All subjects typed as annotations, sorted."""
    return sorted(
        (s for s in g.subjects(RDF_TYPE, vocab.annotation) if isinstance(s, Iri)),
        key=lambda i: i.value,
    )


# --- URN <-> HTTP equivalence ---


class EquivalenceError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


@dataclass(frozen=True)
class EquivalenceMap:
    bindings: tuple[tuple[Iri, Iri], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "bindings", tuple(sorted(self.bindings, key=lambda b: b[0].value))
        )

    def lookup(self, iri: Iri) -> Optional[Iri]:
        for urn, http in self.bindings:
            if urn == iri:
                return http
        return None


def register_equivalence(m: EquivalenceMap, urn: Iri, http_uri: Iri) -> EquivalenceMap:
    if not urn.is_urn:
        raise EquivalenceError("NotAUrn", f"{urn.value} is not a URN")
    if not http_uri.is_dereferenceable:
        raise EquivalenceError(
            "NotDereferenceable", f"{http_uri.value} is not an http(s) IRI"
        )
    existing = m.lookup(urn)
    if existing is not None:
        if existing == http_uri:
            return m
        raise EquivalenceError(
            "ConflictingBinding", f"{urn.value} already bound to {existing.value}"
        )
    return EquivalenceMap(m.bindings + ((urn, http_uri),))


def resolve_references(a: Annotation, m: EquivalenceMap) -> Annotation:
    """Rewrite bound URN ids to their HTTP equivalents. Idempotent."""

    def res(iri: Iri) -> Iri:
        return m.lookup(iri) or iri

    def res_tc(tc: Optional[TimeConstraint]) -> Optional[TimeConstraint]:
        return replace(tc, id=res(tc.id)) if tc is not None else None

    body: Body
    if isinstance(a.body, ExternalBody):
        body = ExternalBody(res(a.body.uri), res_tc(a.body.time_constraint))
    else:
        body = replace(a.body, id=res(a.body.id), time_constraint=res_tc(a.body.time_constraint))

    targets: list[Target] = []
    for t in a.targets:
        if isinstance(t, DirectTarget):
            targets.append(DirectTarget(res(t.uri), res_tc(t.time_constraint)))
        else:
            targets.append(
                ConstrainedTarget(
                    id=res(t.id),
                    constrains=t.constrains,
                    constraint=replace(t.constraint, id=res(t.constraint.id)),
                    time_constraint=res_tc(t.time_constraint),
                )
            )
    return replace(a, body=body, targets=tuple(targets))


def attach_semantic_tag(
    a: Annotation, resource: Iri, resolver: TagResolver = no_labels
) -> Annotation:
    """Attach a linked-data tag to the body, caching resolver labels.

    Attaching an already-present resource is a no-op. A failing resolver is
    logged and the tag is attached with an empty label cache.
    """
    if any(tag.resource == resource for tag in a.semantic_tags):
        return a
    try:
        labels = tuple(resolver(resource))
    except Exception as exc:
        logger.warning("tag resolver failed for %s: %s", resource.value, exc)
        labels = ()
    tag = SemanticTag(resource, labels)
    return replace(a, semantic_tags=a.semantic_tags + (tag,))
