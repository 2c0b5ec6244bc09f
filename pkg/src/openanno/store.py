"""Disk-backed annotation store with target/date/text/region search.

On-disk layout under the store root:

    annotations/<key>.nt         canonical N-Triples document
    annotations/<key>.meta.json  ingestion metadata (uri, time, source feed)
    index.json                   rebuildable search index

`<key>` is a hash of the annotation URI. The index is derived entirely from
the `.nt` files, so `reindex()` after a crash or manual edit reproduces
identical search results.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from . import rdf, shapes
from .model import (
    Annotation,
    ConstrainedTarget,
    InlineBody,
    SvgConstraint,
    annotation_from_graph,
    annotation_to_graph,
    target_uris,
    validate,
)
from .rdf import Graph, Iri, format_datetime, parse_datetime
from .shapes import Rect
from .vocab import DEFAULT_VOCAB, Vocabulary


class StoreError(ValueError):
    def __init__(self, code: str, message: str, violations=None):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.violations = violations or []


@dataclass(frozen=True, slots=True)
class StoreRecord:
    annotation: Annotation
    raw_graph: Graph
    ingested_at: datetime
    source_uri: Optional[Iri] = None

    def canonical(self) -> str:
        return rdf.serialize(self.raw_graph, rdf.NTRIPLES)


@dataclass(frozen=True, slots=True)
class SearchQuery:
    target_uri: Optional[Iri] = None
    created_from: Optional[datetime] = None
    created_to: Optional[datetime] = None
    text: Optional[str] = None
    region: Optional[Rect] = None

    def is_empty(self) -> bool:
        return all(
            v is None
            for v in (
                self.target_uri,
                self.created_from,
                self.created_to,
                self.text,
                self.region,
            )
        )


@dataclass(frozen=True)
class ThreadNode:
    uri: Iri
    children: tuple["ThreadNode", ...] = ()

    def flatten(self) -> list[Iri]:
        out = [self.uri]
        for child in self.children:
            out.extend(child.flatten())
        return out


def _record_key(uri: Iri) -> str:
    return hashlib.sha256(uri.value.encode("utf-8")).hexdigest()[:24]


def _region_boxes(a: Annotation) -> dict[str, list[tuple[float, float, float, float]]]:
    """Bounding boxes of SVG-constrained regions, grouped by constrained URI."""
    boxes: dict[str, list[tuple[float, float, float, float]]] = {}
    for t in a.targets:
        if isinstance(t, ConstrainedTarget) and isinstance(t.constraint, SvgConstraint):
            try:
                box = shapes.bounding_box(t.constraint.shape())
            except shapes.SvgError:
                continue
            boxes.setdefault(t.constrains.value, []).append(
                (box.x, box.y, box.w, box.h)
            )
    return boxes


def _boxes_intersect(
    a: tuple[float, float, float, float], b: tuple[float, float, float, float]
) -> bool:
    # Touching edges count as intersecting.
    return (
        a[0] <= b[0] + b[2]
        and b[0] <= a[0] + a[2]
        and a[1] <= b[1] + b[3]
        and b[1] <= a[1] + a[3]
    )


class AnnotationStore:
    """Many concurrent readers, serialized writers."""

    def __init__(self, root: str | Path, vocab: Vocabulary = DEFAULT_VOCAB):
        self.root = Path(root)
        self.vocab = vocab
        self._dir = self.root / "annotations"
        self._dir.mkdir(parents=True, exist_ok=True)
        self._write_lock = threading.Lock()
        self._records: dict[Iri, StoreRecord] = {}
        self._load()

    # --- persistence ---

    def _load(self) -> None:
        records: dict[Iri, StoreRecord] = {}
        for nt_path in sorted(self._dir.glob("*.nt")):
            meta_path = nt_path.with_suffix("").with_suffix(".meta.json")
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
            uri = Iri(meta["uri"])
            graph = rdf.parse(nt_path.read_text(encoding="utf-8"), rdf.NTRIPLES)
            records[uri] = StoreRecord(
                annotation=annotation_from_graph(graph, uri, self.vocab),
                raw_graph=graph,
                ingested_at=parse_datetime(meta["ingested_at"]),
                source_uri=Iri(meta["source_uri"]) if meta.get("source_uri") else None,
            )
        self._records = records
        self._write_index()

    def _write_record_files(self, record: StoreRecord) -> None:
        key = _record_key(record.annotation.uri)
        (self._dir / f"{key}.nt").write_text(record.canonical(), encoding="utf-8")
        meta = {
            "uri": record.annotation.uri.value,
            "ingested_at": format_datetime(record.ingested_at),
            "source_uri": record.source_uri.value if record.source_uri else None,
        }
        (self._dir / f"{key}.meta.json").write_text(
            json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    def _index_entry(self, record: StoreRecord) -> dict:
        a = record.annotation
        return {
            "uri": a.uri.value,
            "targets": sorted(u.value for u in target_uris(a)),
            "created": format_datetime(a.created) if a.created else None,
            "text": a.body.chars if isinstance(a.body, InlineBody) else None,
            "boxes": _region_boxes(a),
        }

    def _write_index(self) -> None:
        entries = {
            _record_key(uri): self._index_entry(rec)
            for uri, rec in self._records.items()
        }
        (self.root / "index.json").write_text(
            json.dumps(entries, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    def reindex(self) -> int:
        """Rebuild everything from the on-disk documents."""
        with self._write_lock:
            self._load()
            return len(self._records)

    # --- core operations ---

    def put_annotation(
        self,
        a: Annotation,
        raw: Optional[Graph] = None,
        source_uri: Optional[Iri] = None,
        ingested_at: Optional[datetime] = None,
    ) -> StoreRecord:
        violations = validate(a)
        if violations:
            raise StoreError(
                "ValidationFailed",
                "; ".join(v.code for v in violations),
                violations=violations,
            )
        graph = raw if raw is not None else annotation_to_graph(a, self.vocab)
        record = StoreRecord(
            annotation=a,
            raw_graph=graph,
            ingested_at=ingested_at or datetime.now(timezone.utc),
            source_uri=source_uri,
        )
        with self._write_lock:
            existing = self._records.get(a.uri)
            if existing is not None and existing.canonical() == record.canonical():
                return existing
            updated = dict(self._records)
            updated[a.uri] = record
            self._write_record_files(record)
            self._records = updated
            self._write_index()
        return record

    def get_annotation(self, uri: Iri) -> StoreRecord:
        record = self._records.get(uri)
        if record is None:
            raise StoreError("NotFound", f"no annotation stored at {uri.value}")
        return record

    def __contains__(self, uri: Iri) -> bool:
        return uri in self._records

    def __len__(self) -> int:
        return len(self._records)

    def uris(self) -> list[Iri]:
        return sorted(self._records, key=lambda i: i.value)

    # --- search ---

    def search(self, q: SearchQuery) -> list[Iri]:
        """Conjunctive filtering; results sorted by created, then URI.

        Target matching covers direct target URIs and the `constrains` URI
        of constrained targets. Text matching is a case-insensitive
        substring test over inline-body chars. Region matching intersects
        the query box with the bounding boxes of SVG regions drawn on the
        query's target URI.
        """
        if q.is_empty():
            raise StoreError("EmptyQuery", "at least one criterion is required")
        if q.region is not None and q.target_uri is None:
            raise StoreError("RegionRequiresTarget", "region search needs a target URI")

        records = self._records
        matches = [rec.annotation for rec in records.values() if self._matches(rec, q)]
        matches.sort(
            key=lambda a: (
                a.created is not None,
                a.created or datetime.min.replace(tzinfo=timezone.utc),
                a.uri.value,
            )
        )
        return [a.uri for a in matches]

    def _matches(self, record: StoreRecord, q: SearchQuery) -> bool:
        a = record.annotation
        if q.target_uri is not None and q.target_uri not in target_uris(a):
            return False
        if q.created_from is not None or q.created_to is not None:
            if a.created is None:
                return False
            if q.created_from is not None and a.created < q.created_from:
                return False
            if q.created_to is not None and a.created > q.created_to:
                return False
        if q.text is not None:
            if not isinstance(a.body, InlineBody):
                return False
            if q.text.lower() not in a.body.chars.lower():
                return False
        if q.region is not None:
            assert q.target_uri is not None
            query_box = (q.region.x, q.region.y, q.region.w, q.region.h)
            boxes = _region_boxes(a).get(q.target_uri.value, [])
            if not any(_boxes_intersect(box, query_box) for box in boxes):
                return False
        return True

    # --- threads ---

    def get_thread(self, root: Iri) -> ThreadNode:
        """Reply tree: B is a child of A when B targets A's URI.

        Cycles are cut with a visited set; children sort by created, then URI.
        """
        if root not in self._records:
            raise StoreError("NotFound", f"no annotation stored at {root.value}")
        records = self._records
        children_of: dict[Iri, list[Annotation]] = {}
        for rec in records.values():
            for uri in target_uris(rec.annotation):
                if uri in records:
                    children_of.setdefault(uri, []).append(rec.annotation)

        def sort_key(a: Annotation):
            return (
                a.created is not None,
                a.created or datetime.min.replace(tzinfo=timezone.utc),
                a.uri.value,
            )

        visited = {root}

        def build(uri: Iri) -> ThreadNode:
            kids: list[ThreadNode] = []
            for a in sorted(children_of.get(uri, []), key=sort_key):
                if a.uri in visited:
                    continue
                visited.add(a.uri)
                kids.append(build(a.uri))
            return ThreadNode(uri, tuple(kids))

        return build(root)
