from __future__ import annotations

import json

import pytest

from openanno import rdf
from openanno.cli import run

VALID_TTL = """\
@prefix oac: <http://www.openannotation.org/ns/> .
@prefix cnt: <http://www.w3.org/2008/content#> .

<urn:uuid:cli1> a oac:Annotation ;
    oac:hasBody <urn:uuid:clib1> ;
    oac:hasTarget <http://example.org/img/1> .

<urn:uuid:clib1> a oac:Body, cnt:ContentAsText ;
    cnt:chars "a note" ;
    cnt:characterEncoding "utf-8" .

<http://example.org/img/1> a oac:Target .
"""

UNIFORM_TTL = VALID_TTL + """
<urn:uuid:cli1> oac:when "2010-04-01T00:00:00Z"^^<http://www.w3.org/2001/XMLSchema#dateTime> .
"""

NO_BODY_TTL = """\
@prefix oac: <http://www.openannotation.org/ns/> .
<urn:uuid:cli2> a oac:Annotation ;
    oac:hasTarget <http://example.org/img/1> .
"""


@pytest.fixture
def valid_file(tmp_path):
    path = tmp_path / "valid.ttl"
    path.write_text(VALID_TTL, encoding="utf-8")
    return str(path)


class TestValidate:
    def test_clean_file_silent_zero(self, valid_file, capsys):
        assert run(["validate", valid_file]) == 0
        assert capsys.readouterr().out == ""

    def test_missing_body_reported(self, tmp_path, capsys):
        path = tmp_path / "nobody.ttl"
        path.write_text(NO_BODY_TTL, encoding="utf-8")
        assert run(["validate", str(path)]) == 1
        problems = json.loads(capsys.readouterr().out)
        assert problems[0]["code"] == "MissingBody"

    def test_usage_error_is_exit_2(self):
        with pytest.raises(SystemExit) as exc:
            run(["validate"])
        assert exc.value.code == 2


class TestConvert:
    def test_double_convert_reproduces_canonical_bytes(self, valid_file, tmp_path, capsys):
        assert run(["convert", valid_file, "--to", "ntriples"]) == 0
        nt_once = capsys.readouterr().out
        ttl_path = tmp_path / "round.ttl"
        nt_path = tmp_path / "round.nt"
        nt_path.write_text(nt_once, encoding="utf-8")
        assert run(["convert", str(nt_path), "--to", "turtle"]) == 0
        ttl_path.write_text(capsys.readouterr().out, encoding="utf-8")
        assert run(["convert", str(ttl_path), "--to", "ntriples"]) == 0
        assert capsys.readouterr().out == nt_once

    def test_canonical_equals_library_serialization(self, valid_file, capsys):
        run(["convert", valid_file, "--to", "ntriples"])
        out = capsys.readouterr().out
        assert out == rdf.serialize(rdf.parse(VALID_TTL, rdf.TURTLE), rdf.NTRIPLES)


class TestFrag:
    def test_xywh_json(self, capsys):
        assert run(["frag", "xywh=10,20,30,40"]) == 0
        got = json.loads(capsys.readouterr().out)
        assert got["xywh"] == {"unit": "pixel", "x": 10, "y": 20, "w": 30, "h": 40}
        assert got["t"] is None

    def test_bad_fragment_exit_1(self, capsys):
        assert run(["frag", "t=20,10"]) == 1
        assert capsys.readouterr().out == ""


class TestSvgBbox:
    def test_inline_snippet(self, capsys):
        assert run(["svg-bbox", '<circle cx="5" cy="5" r="2"/>']) == 0
        assert json.loads(capsys.readouterr().out) == {"x": 3, "y": 3, "w": 4, "h": 4}

    def test_file_input(self, tmp_path, capsys):
        path = tmp_path / "region.svg"
        path.write_text('<rect x="1" y="1" width="2" height="2"/>', encoding="utf-8")
        assert run(["svg-bbox", str(path)]) == 0
        assert json.loads(capsys.readouterr().out) == {"x": 1, "y": 1, "w": 2, "h": 2}


class TestClassify:
    def test_uniform(self, tmp_path, capsys):
        path = tmp_path / "uniform.ttl"
        path.write_text(UNIFORM_TTL, encoding="utf-8")
        assert run(["classify", str(path)]) == 0
        assert capsys.readouterr().out.strip() == "Uniform"

    def test_timeless(self, valid_file, capsys):
        assert run(["classify", valid_file]) == 0
        assert capsys.readouterr().out.strip() == "Timeless"


class TestResolve:
    def test_uniform_resolution(self, tmp_path, capsys):
        anno = tmp_path / "uniform.ttl"
        anno.write_text(UNIFORM_TTL, encoding="utf-8")
        registry = tmp_path / "registry.txt"
        registry.write_text(
            "http://example.org/img/1 http://archive.example/v1 2010-03-30T00:00:00Z\n"
            "http://example.org/img/1 http://archive.example/v2 2010-06-01T00:00:00Z\n",
            encoding="utf-8",
        )
        assert run(["resolve", str(anno), "--registry", str(registry)]) == 0
        got = json.loads(capsys.readouterr().out)
        assert got["targets"][0]["chosen"] == "http://archive.example/v1"
        assert got["targets"][0]["requested"] == "2010-04-01T00:00:00Z"
        # inline body is not archived
        assert got["body"]["note"] == "NotArchived"


class TestStoreCommands:
    def test_local_search_and_reindex(self, tmp_path, valid_file, capsys):
        data = tmp_path / "data"
        from openanno.model import annotation_from_graph, find_annotation_uris
        from openanno.store import AnnotationStore

        graph = rdf.parse(VALID_TTL, rdf.TURTLE)
        store = AnnotationStore(data)
        store.put_annotation(annotation_from_graph(graph, find_annotation_uris(graph)[0]))

        assert run(["search", "--data-dir", str(data), "--text", "note"]) == 0
        assert json.loads(capsys.readouterr().out) == ["urn:uuid:cli1"]

        assert run(["reindex", "--data-dir", str(data)]) == 0
        assert json.loads(capsys.readouterr().out) == {"annotations": 1}
