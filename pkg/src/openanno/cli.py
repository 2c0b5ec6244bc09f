"""Operator CLI.

Machine-readable output is a single JSON document on stdout; diagnostics go
to stderr. Exit codes: 0 success, 1 validation/domain failure, 2 usage error.
Field names are documented in docs/cli.md.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import urllib.parse
import urllib.request
from dataclasses import replace
from pathlib import Path
from typing import Optional

from . import rdf
from .config import ServiceConfig, load_config
from .fragments import FragmentError, parse_media_fragment
from .model import (
    ModelError,
    Timeless,
    Uniform,
    annotation_from_graph,
    classify_temporal,
    find_annotation_uris,
    validate,
)
from .rdf import Iri, format_datetime, parse_datetime
from .service import AnnotationService, HarvestError
from .shapes import SvgError, bounding_box, parse_svg_constraint
from .store import AnnotationStore, SearchQuery, StoreError
from .temporal import TimeGateRegistry, resolve_annotation

OK, FAILURE, USAGE = 0, 1, 2


def _fail(message: str) -> int:
    print(message, file=sys.stderr)
    return FAILURE


def _guess_format(path: str, override: Optional[str]) -> str:
    if override:
        return override
    return rdf.NTRIPLES if path.endswith(".nt") else rdf.TURTLE


def _load_graph(path: str, format: Optional[str]) -> rdf.Graph:
    text = Path(path).read_text(encoding="utf-8")
    return rdf.parse(text, _guess_format(path, format))


def _single_annotation(graph: rdf.Graph):
    uris = find_annotation_uris(graph)
    if len(uris) != 1:
        raise ModelError(
            "NotAnAnnotation", None, f"expected exactly one annotation, found {len(uris)}"
        )
    return annotation_from_graph(graph, uris[0])


def _print_json(payload) -> None:
    print(json.dumps(payload, indent=2))


# --- subcommands ---


def cmd_validate(args) -> int:
    try:
        graph = _load_graph(args.file, args.format)
    except rdf.ParseError as exc:
        return _fail(f"parse error: {exc}")
    uris = find_annotation_uris(graph)
    if not uris:
        return _fail("no annotation found in document")
    problems = []
    for uri in uris:
        try:
            a = annotation_from_graph(graph, uri)
        except ModelError as exc:
            problems.append({"annotation": uri.value, "code": exc.code, "message": str(exc)})
            continue
        for v in validate(a):
            problems.append(
                {
                    "annotation": uri.value,
                    "code": v.code,
                    "node": v.node.value if isinstance(v.node, Iri) else None,
                    "message": v.message,
                }
            )
    if problems:
        _print_json(problems)
        return FAILURE
    return OK


def cmd_convert(args) -> int:
    try:
        graph = _load_graph(args.file, getattr(args, "from"))
    except rdf.ParseError as exc:
        return _fail(f"parse error: {exc}")
    sys.stdout.write(rdf.serialize(graph, args.to, rdf.default_namespaces()))
    return OK


def cmd_frag(args) -> int:
    try:
        f = parse_media_fragment(args.fragment)
    except FragmentError as exc:
        return _fail(str(exc))
    payload = {
        "t": {"start": f.temporal.start, "end": f.temporal.end} if f.temporal else None,
        "xywh": (
            {
                "unit": f.spatial.unit,
                "x": f.spatial.x,
                "y": f.spatial.y,
                "w": f.spatial.w,
                "h": f.spatial.h,
            }
            if f.spatial
            else None
        ),
        "track": f.track,
        "id": f.id,
        "ptr": f.ptr.value if f.ptr else None,
        "warnings": list(f.warnings),
    }
    print(json.dumps(payload))
    return OK


def cmd_svg_bbox(args) -> int:
    source = args.svg
    if not source.lstrip().startswith("<"):
        source = Path(source).read_text(encoding="utf-8")
    try:
        box = bounding_box(parse_svg_constraint(source))
    except SvgError as exc:
        return _fail(str(exc))
    print(json.dumps({"x": box.x, "y": box.y, "w": box.w, "h": box.h}))
    return OK


def cmd_classify(args) -> int:
    try:
        a = _single_annotation(_load_graph(args.file, args.format))
        cls = classify_temporal(a)
    except (rdf.ParseError, ModelError) as exc:
        return _fail(str(exc))
    if isinstance(cls, Timeless):
        print("Timeless")
    elif isinstance(cls, Uniform):
        print("Uniform")
    else:
        print("Varied")
    return OK


def cmd_resolve(args) -> int:
    try:
        a = _single_annotation(_load_graph(args.file, args.format))
        registry = TimeGateRegistry.load(args.registry)
        resolved = resolve_annotation(a, registry)
    except (rdf.ParseError, ModelError, ValueError) as exc:
        return _fail(str(exc))
    _print_json(resolved.as_dict())
    return OK


def _config_from_args(args) -> ServiceConfig:
    config = load_config(args.config) if args.config else load_config()
    overrides = {}
    if getattr(args, "listen", None):
        overrides["listen"] = args.listen
    if getattr(args, "data_dir", None):
        overrides["data_dir"] = Path(args.data_dir)
    if getattr(args, "registry", None):
        overrides["registry_path"] = Path(args.registry)
    if getattr(args, "ui_dir", None):
        overrides["ui_dir"] = Path(args.ui_dir)
    if getattr(args, "vocab", None):
        overrides["vocab_path"] = Path(args.vocab)
    return replace(config, **overrides) if overrides else config


def cmd_serve(args) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    service = AnnotationService(_config_from_args(args))
    try:
        service.serve_forever()
    except KeyboardInterrupt:
        pass
    return OK


def cmd_harvest(args) -> int:
    if args.server:
        payload = json.dumps({"feed": args.feed}).encode("utf-8")
        req = urllib.request.Request(
            f"{args.server.rstrip('/')}/harvest",
            data=payload,
            headers={"Content-Type": "application/json"},
        )
        try:
            with urllib.request.urlopen(req, timeout=60) as resp:
                sys.stdout.write(resp.read().decode("utf-8"))
        except OSError as exc:
            return _fail(f"harvest request failed: {exc}")
        return OK
    service = AnnotationService(_config_from_args(args))
    try:
        report = service.harvest_feed(Iri(args.feed))
    except HarvestError as exc:
        return _fail(str(exc))
    _print_json(report.as_dict())
    return OK


def cmd_search(args) -> int:
    if args.server:
        params = {}
        if args.target:
            params["target"] = args.target
        if getattr(args, "from"):
            params["from"] = getattr(args, "from")
        if args.to:
            params["to"] = args.to
        if args.text:
            params["q"] = args.text
        url = f"{args.server.rstrip('/')}/search?{urllib.parse.urlencode(params)}"
        try:
            with urllib.request.urlopen(url, timeout=60) as resp:
                sys.stdout.write(resp.read().decode("utf-8"))
        except OSError as exc:
            return _fail(f"search request failed: {exc}")
        return OK
    store = AnnotationStore(_config_from_args(args).data_dir)
    try:
        query = SearchQuery(
            target_uri=Iri(args.target) if args.target else None,
            created_from=parse_datetime(getattr(args, "from")) if getattr(args, "from") else None,
            created_to=parse_datetime(args.to) if args.to else None,
            text=args.text,
        )
        uris = store.search(query)
    except (ValueError, StoreError) as exc:
        return _fail(str(exc))
    _print_json([u.value for u in uris])
    return OK


def cmd_reindex(args) -> int:
    store = AnnotationStore(_config_from_args(args).data_dir)
    count = store.reindex()
    _print_json({"annotations": count})
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="openanno",
        description="Annotation model tooling and HTTP service",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=[rdf.NTRIPLES, rdf.TURTLE], default=None)

    p = sub.add_parser("validate", help="check an annotation document")
    p.add_argument("file")
    add_format(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("convert", help="transcode between ntriples and turtle")
    p.add_argument("file")
    p.add_argument("--from", dest="from", choices=[rdf.NTRIPLES, rdf.TURTLE], default=None)
    p.add_argument("--to", choices=[rdf.NTRIPLES, rdf.TURTLE], required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("frag", help="parse a media fragment string")
    p.add_argument("fragment")
    p.set_defaults(func=cmd_frag)

    p = sub.add_parser("svg-bbox", help="bounding box of an SVG constraint")
    p.add_argument("svg", help="SVG snippet or path to a file")
    p.set_defaults(func=cmd_svg_bbox)

    p = sub.add_parser("classify", help="temporal class of an annotation")
    p.add_argument("file")
    add_format(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("resolve", help="resolve an annotation against a registry")
    p.add_argument("file")
    p.add_argument("--registry", required=True, help="memento registry snapshot file")
    add_format(p)
    p.set_defaults(func=cmd_resolve)

    def add_service_opts(p, with_listen=False):
        p.add_argument("--config", default=None)
        p.add_argument("--data-dir", dest="data_dir", default=None)
        if with_listen:
            p.add_argument("--listen", default=None)
            p.add_argument("--registry", default=None)
            p.add_argument("--ui-dir", dest="ui_dir", default=None)
            p.add_argument("--vocab", default=None)

    p = sub.add_parser("serve", help="run the annotation service")
    add_service_opts(p, with_listen=True)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("harvest", help="harvest an annotation feed")
    p.add_argument("feed")
    p.add_argument("--server", default=None, help="running service base URL")
    add_service_opts(p)
    p.set_defaults(func=cmd_harvest)

    p = sub.add_parser("search", help="search stored annotations")
    p.add_argument("--server", default=None, help="running service base URL")
    p.add_argument("--target", default=None)
    p.add_argument("--from", dest="from", default=None, metavar="DATETIME")
    p.add_argument("--to", default=None, metavar="DATETIME")
    p.add_argument("--text", default=None)
    add_service_opts(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("reindex", help="rebuild store indexes from documents")
    add_service_opts(p)
    p.set_defaults(func=cmd_reindex)

    return parser


def run(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
