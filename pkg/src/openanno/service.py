"""Dereferenceable annotation service.

Endpoints:

    POST /annotations                ingest an RDF annotation document
    GET  /annotations/{id}           dereference (content negotiation, 406)
    GET  /annotations/{id}.json      non-normative JSON projection
    GET  /search?target=&from=&to=&q=  JSON list of annotation URIs
    POST /harvest                    {"feed": uri} -> harvest report
    GET  /timegate/{enc-original}    302 to the negotiated memento
    GET  /mementos/{id}              archived representation
    POST /mementos                   register a memento (fixture aid)
    GET  /ui/...                     static web client, when configured

URN-identified nodes in POSTed documents get server-minted HTTP URIs; the
equivalence is recorded and emitted as owl:sameAs in the stored document.
"""

from __future__ import annotations

import json
import logging
import mimetypes
import threading
import urllib.error
import urllib.request
import uuid
from dataclasses import dataclass, replace
from datetime import datetime
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional
from urllib.parse import parse_qs, quote, unquote, urlparse

from . import rdf
from .config import ServiceConfig
from .model import (
    Annotation,
    ConstrainedTarget,
    DirectTarget,
    EquivalenceMap,
    ExternalBody,
    GenericConstraint,
    InlineBody,
    ModelError,
    SvgConstraint,
    TimeConstraint,
    Timeless,
    Uniform,
    annotation_from_graph,
    annotation_to_graph,
    classify_temporal,
    find_annotation_uris,
    register_equivalence,
    resolve_references,
    target_uris,
    validate,
)
from .negotiation import (
    NegotiationError,
    format_http_datetime,
    negotiate,
)
from .rdf import Graph, Iri, format_datetime, parse_datetime
from .shapes import SvgError, SvgShape, bounding_box, parse_svg_constraint
from .store import AnnotationStore, SearchQuery, StoreError
from .temporal import Memento, TemporalError, TimeGateRegistry
from .vocab import DEFAULT_VOCAB, Vocabulary

logger = logging.getLogger(__name__)

FETCH_TIMEOUT = 10.0


class HarvestError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


@dataclass(frozen=True, slots=True)
class HarvestReport:
    ingested: int
    skipped: int
    failures: tuple[tuple[str, str], ...] = ()

    def as_dict(self) -> dict:
        return {
            "ingested": self.ingested,
            "skipped": self.skipped,
            "failures": [{"entry": e, "error": msg} for e, msg in self.failures],
        }


@dataclass(frozen=True, slots=True)
class ArchivedContent:
    original: Iri
    datetime: datetime
    content: bytes
    content_type: str


class AnnotationService:
    """Shared state behind the HTTP handlers; usable as a library too."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.vocab: Vocabulary = (
            Vocabulary.load(config.vocab_path) if config.vocab_path else DEFAULT_VOCAB
        )
        config.data_dir.mkdir(parents=True, exist_ok=True)
        self.store = AnnotationStore(config.data_dir, self.vocab)
        self.registry = (
            TimeGateRegistry.load(config.registry_path)
            if config.registry_path and Path(config.registry_path).exists()
            else TimeGateRegistry()
        )
        self.equivalences = EquivalenceMap()
        self.mementos: dict[str, ArchivedContent] = {}
        self._equiv_lock = threading.Lock()
        self._feed_locks: dict[str, threading.Lock] = {}
        self._feed_locks_guard = threading.Lock()

    # --- equivalence flow ---

    def ensure_binding(self, urn: Iri, http_uri: Iri) -> Iri:
        """Bind urn -> http_uri unless already bound; returns the binding."""
        with self._equiv_lock:
            existing = self.equivalences.lookup(urn)
            if existing is not None:
                return existing
            self.equivalences = register_equivalence(self.equivalences, urn, http_uri)
            return http_uri

    def assign_http_uris(self, a: Annotation, base_url: str) -> Annotation:
        """Mint HTTP URIs for every URN-identified node and rewrite."""

        def mint(kind: str) -> Iri:
            return Iri(f"{base_url}/{kind}/{uuid.uuid4()}")

        new_uri = a.uri
        if a.uri.is_urn:
            new_uri = self.ensure_binding(a.uri, mint("annotations"))

        def bind_tc(tc: Optional[TimeConstraint]) -> None:
            if tc is not None and tc.id.is_urn:
                self.ensure_binding(tc.id, mint("constraints"))

        bnode = a.body.uri if isinstance(a.body, ExternalBody) else a.body.id
        if bnode.is_urn:
            self.ensure_binding(bnode, mint("bodies"))
        bind_tc(a.body.time_constraint)
        for t in a.targets:
            bind_tc(t.time_constraint)
            if isinstance(t, ConstrainedTarget):
                if t.id.is_urn:
                    self.ensure_binding(t.id, mint("targets"))
                if t.constraint.id.is_urn:
                    self.ensure_binding(t.constraint.id, mint("constraints"))

        resolved = resolve_references(a, self.equivalences)
        return replace(resolved, uri=new_uri)

    # --- ingestion ---

    def ingest_document(
        self,
        text: str,
        format: str,
        base_url: str,
        source_uri: Optional[Iri] = None,
    ) -> tuple[Annotation, Graph]:
        graph = rdf.parse(text, format)
        uris = find_annotation_uris(graph, self.vocab)
        if len(uris) != 1:
            raise ModelError(
                "NotAnAnnotation",
                None,
                f"document must contain exactly one annotation, found {len(uris)}",
            )
        a = annotation_from_graph(graph, uris[0], self.vocab)
        a = self.assign_http_uris(a, base_url)
        violations = validate(a)
        if violations:
            raise StoreError(
                "ValidationFailed",
                "; ".join(v.code for v in violations),
                violations=violations,
            )
        out_graph = annotation_to_graph(a, self.vocab, equivalences=self.equivalences)
        self.store.put_annotation(a, raw=out_graph, source_uri=source_uri)
        return a, out_graph

    # --- harvesting ---

    def _feed_lock(self, feed_uri: str) -> threading.Lock:
        with self._feed_locks_guard:
            return self._feed_locks.setdefault(feed_uri, threading.Lock())

    def harvest_feed(self, feed_uri: Iri, base_url: str = "") -> HarvestReport:
        """Fetch a URI-list feed and ingest every entry.

        Re-harvesting an unchanged feed ingests nothing; per-entry failures
        are reported without aborting the batch.
        """
        with self._feed_lock(feed_uri.value):
            try:
                body, _ = _fetch(feed_uri.value)
            except OSError as exc:
                raise HarvestError("FeedUnreachable", f"{feed_uri.value}: {exc}")
            entries = [
                line.strip()
                for line in body.decode("utf-8").splitlines()
                if line.strip() and not line.strip().startswith("#")
            ]
            ingested = skipped = 0
            failures: list[tuple[str, str]] = []
            for entry in entries:
                try:
                    ingested_here, skipped_here = self._harvest_entry(
                        entry, feed_uri, base_url
                    )
                    ingested += ingested_here
                    skipped += skipped_here
                except Exception as exc:
                    failures.append((entry, str(exc)))
            return HarvestReport(ingested, skipped, tuple(failures))

    def _harvest_entry(
        self, entry: str, feed_uri: Iri, base_url: str
    ) -> tuple[int, int]:
        body, content_type = _fetch(entry)
        format = rdf.FORMAT_BY_MEDIA_TYPE.get(content_type, rdf.TURTLE)
        graph = rdf.parse(body.decode("utf-8"), format)
        uris = find_annotation_uris(graph, self.vocab)
        if not uris:
            raise ModelError("NotAnAnnotation", None, "no annotation in document")
        ingested = skipped = 0
        for uri in uris:
            a = annotation_from_graph(graph, uri, self.vocab)
            a = resolve_references(a, self.equivalences)
            violations = validate(a)
            if violations:
                raise StoreError(
                    "ValidationFailed", "; ".join(v.code for v in violations)
                )
            out_graph = annotation_to_graph(a, self.vocab, equivalences=self.equivalences)
            canonical = rdf.serialize(out_graph, rdf.NTRIPLES)
            if a.uri in self.store and self.store.get_annotation(a.uri).canonical() == canonical:
                skipped += 1
                continue
            self.store.put_annotation(a, raw=out_graph, source_uri=feed_uri)
            ingested += 1
        return ingested, skipped

    # --- mementos ---

    def register_memento(
        self,
        original: Iri,
        at: datetime,
        base_url: str,
        content: Optional[bytes] = None,
        content_type: str = "text/plain; charset=utf-8",
    ) -> Memento:
        memento_uri = Iri(f"{base_url}/mementos/{uuid.uuid4()}")
        memento = Memento(original, memento_uri, at)
        self.registry.register(memento)
        if content is None:
            content = (
                f"archived representation of {original.value} "
                f"at {format_datetime(at)}\n"
            ).encode("utf-8")
        self.mementos[memento_uri.value] = ArchivedContent(
            original, at, content, content_type
        )
        if self.config.registry_path:
            self.registry.save(self.config.registry_path)
        return memento

    # --- projections ---

    def annotation_json(self, a: Annotation) -> dict:
        def tc_dict(tc: Optional[TimeConstraint]) -> Optional[dict]:
            if tc is None:
                return None
            return {"id": tc.id.value, "when": format_datetime(tc.when)}

        def constraint_dict(c) -> dict:
            if isinstance(c, SvgConstraint):
                entry: dict = {"kind": "svg", "id": c.id.value, "svg": c.svg_source}
                try:
                    box = bounding_box(c.shape())
                    entry["bbox"] = [box.x, box.y, box.w, box.h]
                except SvgError:
                    pass
                return entry
            if isinstance(c, TimeConstraint):
                return {"kind": "time", "id": c.id.value, "when": format_datetime(c.when)}
            assert isinstance(c, GenericConstraint)
            return {"kind": "generic", "id": c.id.value, "type": c.type.value}

        if isinstance(a.body, InlineBody):
            body = {
                "kind": "inline",
                "id": a.body.id.value,
                "chars": a.body.chars,
                "encoding": a.body.encoding,
                "timeConstraint": tc_dict(a.body.time_constraint),
            }
        else:
            body = {
                "kind": "external",
                "uri": a.body.uri.value,
                "timeConstraint": tc_dict(a.body.time_constraint),
            }

        targets = []
        for t in a.targets:
            if isinstance(t, DirectTarget):
                targets.append(
                    {
                        "kind": "direct",
                        "uri": t.uri.value,
                        "timeConstraint": tc_dict(t.time_constraint),
                    }
                )
            else:
                targets.append(
                    {
                        "kind": "constrained",
                        "id": t.id.value,
                        "constrains": t.constrains.value,
                        "constraint": constraint_dict(t.constraint),
                        "timeConstraint": tc_dict(t.time_constraint),
                    }
                )

        cls = classify_temporal(a)
        temporal = (
            "Timeless"
            if isinstance(cls, Timeless)
            else "Uniform"
            if isinstance(cls, Uniform)
            else "Varied"
        )
        return {
            "uri": a.uri.value,
            "body": body,
            "targets": targets,
            "creator": a.creator,
            "created": format_datetime(a.created) if a.created else None,
            "when": format_datetime(a.when) if a.when else None,
            "temporalClass": temporal,
            "tags": [
                {
                    "resource": tag.resource.value,
                    "labels": [{"text": l.text, "lang": l.lang} for l in tag.labels],
                }
                for tag in a.semantic_tags
            ],
        }

    # --- server plumbing ---

    def make_server(self) -> ThreadingHTTPServer:
        server = ThreadingHTTPServer(
            (self.config.host, self.config.port), _Handler
        )
        server.daemon_threads = True
        server.service = self  # type: ignore[attr-defined]
        return server

    def serve_forever(self) -> None:
        server = self.make_server()
        host, port = server.server_address[:2]
        logger.info("listening on http://%s:%s", host, port)
        try:
            server.serve_forever()
        finally:
            server.server_close()


def _fetch(url: str) -> tuple[bytes, str]:
    with urllib.request.urlopen(url, timeout=FETCH_TIMEOUT) as resp:
        content_type = resp.headers.get("Content-Type", "")
        return resp.read(), content_type.split(";")[0].strip().lower()


def fetch_ptr_constraint(ptr: Iri) -> SvgShape:
    """Dereference a media-fragment `ptr` URI to the SVG region it names.

    The fragment key only carries a reference; the pointed-to resource is
    expected to be a single-element SVG constraint document.
    """
    body, _ = _fetch(ptr.value)
    return parse_svg_constraint(body.decode("utf-8"))


class _Handler(BaseHTTPRequestHandler):
    server_version = "openanno/0.1"
    protocol_version = "HTTP/1.1"

    @property
    def service(self) -> AnnotationService:
        return self.server.service  # type: ignore[attr-defined]

    @property
    def base_url(self) -> str:
        host = self.headers.get("Host") or self.service.config.listen
        return f"http://{host}"

    def log_message(self, fmt: str, *args) -> None:
        logger.debug("%s %s", self.address_string(), fmt % args)

    # --- response helpers ---

    def _send(self, status: int, headers: dict[str, str], body: bytes = b"") -> None:
        self.send_response(status)
        for name, value in headers.items():
            self.send_header(name, value)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        if body:
            self.wfile.write(body)

    def _send_json(self, status: int, payload) -> None:
        body = json.dumps(payload, indent=2).encode("utf-8") + b"\n"
        self._send(status, {"Content-Type": "application/json"}, body)

    def _send_error_json(self, status: int, code: str, message: str) -> None:
        self._send_json(status, {"error": code, "message": message})

    def _read_body(self) -> bytes:
        length = int(self.headers.get("Content-Length") or 0)
        return self.rfile.read(length) if length else b""

    # --- routing ---

    def do_GET(self) -> None:
        try:
            self._route_get()
        except Exception:
            logger.exception("GET %s failed", self.path)
            self._send_error_json(500, "InternalError", "unhandled server error")

    def do_POST(self) -> None:
        try:
            self._route_post()
        except Exception:
            logger.exception("POST %s failed", self.path)
            self._send_error_json(500, "InternalError", "unhandled server error")

    def _route_get(self) -> None:
        parsed = urlparse(self.path)
        path = parsed.path
        if path == "/":
            self._send_json(
                200,
                {
                    "service": "openanno",
                    "annotations": len(self.service.store),
                    "endpoints": [
                        "POST /annotations",
                        "GET /annotations/{id}",
                        "GET /annotations/{id}.json",
                        "GET /search",
                        "POST /harvest",
                        "GET /timegate/{original}",
                        "GET /mementos/{id}",
                        "POST /mementos",
                    ],
                },
            )
        elif path.startswith("/annotations/"):
            self._get_annotation(path)
        elif path == "/search":
            self._get_search(parse_qs(parsed.query))
        elif path.startswith("/timegate/"):
            self._get_timegate(path[len("/timegate/"):])
        elif path.startswith("/mementos/"):
            self._get_memento()
        elif path == "/ui" or path.startswith("/ui/"):
            self._get_static(path)
        else:
            self._send_error_json(404, "NotFound", f"no route for {path}")

    def _route_post(self) -> None:
        path = urlparse(self.path).path
        if path == "/annotations":
            self._post_annotation()
        elif path == "/harvest":
            self._post_harvest()
        elif path == "/mementos":
            self._post_memento()
        else:
            self._send_error_json(404, "NotFound", f"no route for {path}")

    # --- annotation endpoints ---

    def _post_annotation(self) -> None:
        content_type = (self.headers.get("Content-Type") or "").split(";")[0].strip()
        format = rdf.FORMAT_BY_MEDIA_TYPE.get(content_type.lower())
        if format is None:
            self._send_error_json(
                415, "UnsupportedMediaType", f"cannot parse {content_type!r}"
            )
            return
        try:
            text = self._read_body().decode("utf-8")
            a, graph = self.service.ingest_document(text, format, self.base_url)
        except rdf.ParseError as exc:
            self._send_error_json(400, "ParseError", str(exc))
            return
        except ModelError as exc:
            self._send_error_json(400, exc.code, str(exc))
            return
        except StoreError as exc:
            self._send_error_json(400, exc.code, str(exc))
            return
        body = rdf.serialize(graph, format, rdf.default_namespaces()).encode("utf-8")
        self._send(
            201,
            {
                "Content-Type": rdf.MEDIA_TYPES[format],
                "Location": a.uri.value,
            },
            body,
        )

    def _timegate_links(self, a: Annotation) -> Optional[str]:
        links = []
        for uri in sorted(target_uris(a), key=lambda i: i.value):
            if uri in self.service.registry:
                gate = f"{self.base_url}/timegate/{quote(uri.value, safe='')}"
                links.append(f'<{gate}>; rel="timegate"; anchor="{uri.value}"')
        return ", ".join(links) if links else None

    def _get_annotation(self, path: str) -> None:
        as_json = path.endswith(".json")
        if as_json:
            path = path[: -len(".json")]
        uri = Iri(f"{self.base_url}{path}")
        try:
            record = self.service.store.get_annotation(uri)
        except StoreError:
            self._send_error_json(404, "NotFound", f"no annotation at {uri.value}")
            return
        if as_json:
            self._send_json(200, self.service.annotation_json(record.annotation))
            return
        try:
            chosen = negotiate(self.headers.get("Accept"))
        except NegotiationError as exc:
            self._send_error_json(406, exc.code, str(exc))
            return
        if chosen.media_type == rdf.MEDIA_TYPES[rdf.NTRIPLES]:
            body = record.canonical().encode("utf-8")
        else:
            body = rdf.serialize(
                record.raw_graph, rdf.TURTLE, rdf.default_namespaces()
            ).encode("utf-8")
        headers = {"Content-Type": chosen.media_type}
        links = self._timegate_links(record.annotation)
        if links:
            headers["Link"] = links
        self._send(200, headers, body)

    def _get_search(self, params: dict[str, list[str]]) -> None:
        def single(key: str) -> Optional[str]:
            values = params.get(key, [])
            return values[0] if values else None

        try:
            query = SearchQuery(
                target_uri=Iri(single("target")) if single("target") else None,
                created_from=parse_datetime(single("from")) if single("from") else None,
                created_to=parse_datetime(single("to")) if single("to") else None,
                text=single("q"),
            )
        except ValueError as exc:
            self._send_error_json(400, "BadQuery", str(exc))
            return
        try:
            uris = self.service.store.search(query)
        except StoreError as exc:
            self._send_error_json(400, exc.code, str(exc))
            return
        self._send_json(200, [u.value for u in uris])

    # --- harvest ---

    def _post_harvest(self) -> None:
        try:
            payload = json.loads(self._read_body().decode("utf-8"))
            feed = Iri(payload["feed"])
        except (ValueError, KeyError, TypeError) as exc:
            self._send_error_json(400, "BadRequest", f"expected {{'feed': uri}}: {exc}")
            return
        try:
            report = self.service.harvest_feed(feed, self.base_url)
        except HarvestError as exc:
            self._send_error_json(502, exc.code, str(exc))
            return
        self._send_json(200, report.as_dict())

    # --- memento endpoints ---

    def _get_timegate(self, encoded_original: str) -> None:
        original = Iri(unquote(encoded_original))
        headers = {
            "Vary": "accept-datetime",
            "Link": f'<{original.value}>; rel="original"',
        }
        if original not in self.service.registry:
            self._send(404, headers, b"")
            return
        accept_dt = self.headers.get("Accept-Datetime")
        try:
            if accept_dt is not None:
                chosen = negotiate(None, accept_dt)
                memento = self.service.registry.select(original, chosen.datetime)
            else:
                memento = self.service.registry.mementos(original)[-1]
        except NegotiationError as exc:
            self._send_error_json(400, exc.code, str(exc))
            return
        headers["Location"] = memento.memento_uri.value
        self._send(302, headers, b"")

    def _get_memento(self) -> None:
        uri = f"{self.base_url}{urlparse(self.path).path}"
        archived = self.service.mementos.get(uri)
        if archived is None:
            self._send_error_json(404, "NotFound", f"no memento at {uri}")
            return
        self._send(
            200,
            {
                "Content-Type": archived.content_type,
                "Memento-Datetime": format_http_datetime(archived.datetime),
                "Link": f'<{archived.original.value}>; rel="original"',
            },
            archived.content,
        )

    def _post_memento(self) -> None:
        try:
            payload = json.loads(self._read_body().decode("utf-8"))
            original = Iri(payload["original"])
            at = parse_datetime(payload["datetime"])
        except (ValueError, KeyError, TypeError) as exc:
            self._send_error_json(
                400, "BadRequest", f"expected {{original, datetime}}: {exc}"
            )
            return
        content = payload.get("content")
        try:
            memento = self.service.register_memento(
                original,
                at,
                self.base_url,
                content=content.encode("utf-8") if content is not None else None,
                content_type=payload.get("content_type", "text/plain; charset=utf-8"),
            )
        except TemporalError as exc:
            self._send_error_json(409, exc.code, str(exc))
            return
        self._send_json(
            201,
            {
                "memento": memento.memento_uri.value,
                "original": original.value,
                "datetime": format_datetime(at),
            },
        )

    # --- static UI ---

    def _get_static(self, path: str) -> None:
        ui_dir = self.service.config.ui_dir
        if ui_dir is None:
            self._send_error_json(404, "NotFound", "no UI configured")
            return
        rel = path[len("/ui"):].lstrip("/") or "index.html"
        root = Path(ui_dir).resolve()
        full = (root / rel).resolve()
        if root not in full.parents and full != root:
            self._send_error_json(404, "NotFound", "outside UI directory")
            return
        if full.is_dir():
            full = full / "index.html"
        if not full.is_file():
            self._send_error_json(404, "NotFound", f"no file {rel}")
            return
        content_type = mimetypes.guess_type(full.name)[0] or "application/octet-stream"
        self._send(200, {"Content-Type": content_type}, full.read_bytes())
