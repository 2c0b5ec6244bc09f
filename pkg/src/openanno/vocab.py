"""Wire vocabulary for annotation graphs.

Every class and property IRI the model emits lives in this one table so the
whole wire format can be re-pointed from a single file (see
``Vocabulary.load``). The default table is the normative vocabulary of this
implementation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .rdf import CNT, DCTERMS, OAC, Iri


@dataclass(frozen=True, slots=True)
class Vocabulary:
    # classes
    annotation: Iri = Iri(OAC + "Annotation")
    body: Iri = Iri(OAC + "Body")
    target: Iri = Iri(OAC + "Target")
    constraint_target: Iri = Iri(OAC + "ConstraintTarget")
    constraint: Iri = Iri(OAC + "Constraint")
    svg_constraint: Iri = Iri(OAC + "SvgConstraint")
    time_constraint: Iri = Iri(OAC + "TimeConstraint")
    content_as_text: Iri = Iri(CNT + "ContentAsText")
    # properties
    has_body: Iri = Iri(OAC + "hasBody")
    has_target: Iri = Iri(OAC + "hasTarget")
    constrains: Iri = Iri(OAC + "constrains")
    constrained_by: Iri = Iri(OAC + "constrainedBy")
    when: Iri = Iri(OAC + "when")
    chars: Iri = Iri(CNT + "chars")
    character_encoding: Iri = Iri(CNT + "characterEncoding")
    creator: Iri = Iri(DCTERMS + "creator")
    created: Iri = Iri(DCTERMS + "created")
    references: Iri = Iri(DCTERMS + "references")

    @staticmethod
    def load(path: str | Path) -> "Vocabulary":
        """Override individual terms from a JSON file of {field: iri}."""
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f.name for f in fields(Vocabulary)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown vocabulary terms: {sorted(unknown)}")
        return replace(DEFAULT_VOCAB, **{k: Iri(v) for k, v in data.items()})


DEFAULT_VOCAB = Vocabulary()
