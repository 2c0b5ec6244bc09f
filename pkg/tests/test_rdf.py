from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from openanno import rdf
from openanno.rdf import BlankNode, Graph, Iri, Literal, ParseError, Triple


def iris():
    scheme = st.sampled_from(["http://", "https://", "urn:"])
    body = st.text(
        alphabet=st.characters(
            whitelist_categories=("L", "N"), whitelist_characters="/.-_:~%é中"
        ),
        min_size=1,
        max_size=20,
    )
    return st.builds(lambda s, b: Iri(s + b), scheme, body)


def literals():
    text = st.text(max_size=30)
    plain = st.builds(Literal, text)
    typed = st.builds(lambda t, d: Literal(t, datatype=d), text, iris())
    tagged = st.builds(
        lambda t, l: Literal(t, lang=l),
        text,
        st.sampled_from(["en", "de", "en-US", "fr"]),
    )
    return st.one_of(plain, typed, tagged)


def blanks():
    return st.builds(
        BlankNode,
        st.text(alphabet="abcdefghijklmnop0123456789", min_size=1, max_size=6),
    )


def triples():
    subject = st.one_of(iris(), blanks())
    obj = st.one_of(iris(), blanks(), literals())
    return st.builds(Triple, subject, iris(), obj)


def graphs(max_size: int = 25):
    return st.builds(Graph, st.lists(triples(), max_size=max_size))


class TestTerms:
    def test_iri_scheme_classification(self):
        assert Iri("http://example.org/a").is_dereferenceable
        assert Iri("https://example.org/a").is_dereferenceable
        assert not Iri("urn:uuid:1234").is_dereferenceable
        assert Iri("urn:uuid:1234").is_urn
        assert not Iri("http://example.org/a").is_urn

    def test_relative_iri_rejected(self):
        with pytest.raises(ValueError):
            Iri("/relative/path")

    def test_literal_datatype_lang_exclusive(self):
        with pytest.raises(ValueError):
            Literal("x", datatype=Iri("urn:dt"), lang="en")

    def test_blank_label_charset(self):
        with pytest.raises(ValueError):
            BlankNode("has space")
        with pytest.raises(ValueError):
            BlankNode("")

    def test_literal_subject_rejected(self):
        with pytest.raises(ValueError):
            Triple(Literal("x"), Iri("urn:p"), Iri("urn:o"))  # type: ignore[arg-type]

    def test_datetime_literal_wire_format(self):
        from datetime import datetime, timezone

        dt = datetime(2010, 4, 1, 12, 30, 5, 999999, tzinfo=timezone.utc)
        lit = rdf.datetime_literal(dt)
        assert lit.lexical == "2010-04-01T12:30:05Z"
        assert lit.datatype.value.endswith("dateTime")
        assert rdf.literal_datetime(lit) == dt.replace(microsecond=0)


class TestParse:
    def test_single_statement(self):
        g = rdf.parse('<urn:a> <urn:p> "x" .')
        assert len(g) == 1
        (t,) = g
        assert t.object == Literal("x")

    def test_oac_prefix_expansion(self):
        text = (
            "@prefix oac: <http://www.openannotation.org/ns/> .\n"
            "<urn:a> a oac:Annotation ."
        )
        g = rdf.parse(text, rdf.TURTLE)
        assert len(g) == 1
        (t,) = g
        assert t.predicate == rdf.RDF_TYPE
        assert t.object == Iri("http://www.openannotation.org/ns/Annotation")

    def test_duplicate_statement_collapses(self):
        g = rdf.parse('<urn:a> <urn:p> "x" .\n<urn:a> <urn:p> "x" .')
        assert len(g) == 1

    def test_syntax_error_carries_position(self):
        with pytest.raises(ParseError) as exc:
            rdf.parse('<urn:a> <urn:p> "x"\n<urn:a> <urn:p> .')
        assert exc.value.line == 1

    def test_unknown_prefix(self):
        with pytest.raises(ParseError, match="unknown prefix"):
            rdf.parse("<urn:a> a oac:Annotation .", rdf.TURTLE)

    def test_relative_iri_rejected_in_document(self):
        with pytest.raises(ParseError, match="relative"):
            rdf.parse("<urn:a> <urn:p> </rel> .")

    def test_turtle_semicolon_and_comma(self):
        text = (
            "@prefix ex: <urn:ex:> .\n"
            'ex:a ex:p "one", "two" ;\n'
            "     ex:q ex:b .\n"
        )
        g = rdf.parse(text, rdf.TURTLE)
        assert len(g) == 3

    def test_turtle_collections_rejected(self):
        with pytest.raises(ParseError):
            rdf.parse("<urn:a> <urn:p> (1 2) .", rdf.TURTLE)

    def test_escapes_round_trip(self):
        text = '<urn:a> <urn:p> "line\\nbreak \\"quoted\\" \\u00e9" .'
        g = rdf.parse(text)
        (t,) = g
        assert t.object.lexical == 'line\nbreak "quoted" é'


class TestSerialize:
    def test_empty_graph(self):
        assert rdf.serialize(Graph()) == ""
        assert rdf.serialize(Graph(), rdf.TURTLE) == ""

    def test_single_triple_single_line(self):
        g = Graph([Triple(Iri("urn:a"), Iri("urn:p"), Literal("x"))])
        out = rdf.serialize(g)
        assert out.splitlines() == ['<urn:a> <urn:p> "x" .']

    def test_canonical_across_insertion_orders(self):
        t1 = Triple(Iri("urn:a"), Iri("urn:p"), Literal("1"))
        t2 = Triple(Iri("urn:b"), Iri("urn:p"), Literal("2"))
        t3 = Triple(BlankNode("x"), Iri("urn:p"), BlankNode("y"))
        assert rdf.serialize(Graph([t1, t2, t3])) == rdf.serialize(Graph([t3, t2, t1]))

    def test_canonical_blank_relabeling(self):
        g = Graph([Triple(BlankNode("zz"), Iri("urn:p"), Literal("1"))])
        assert rdf.serialize(g) == '_:b0 <urn:p> "1" .\n'

    def test_ntriples_output_is_ascii(self):
        g = Graph([Triple(Iri("urn:é"), Iri("urn:p"), Literal("中"))])
        out = rdf.serialize(g)
        assert out.isascii()
        assert rdf.parse(out).isomorphic(g)

    @settings(max_examples=150, deadline=None)
    @given(graphs())
    def test_ntriples_round_trip(self, g: Graph):
        assert rdf.parse(rdf.serialize(g)).isomorphic(g)

    @settings(max_examples=150, deadline=None)
    @given(graphs())
    def test_turtle_round_trip(self, g: Graph):
        assert rdf.parse(rdf.serialize(g, rdf.TURTLE), rdf.TURTLE) == g

    @settings(max_examples=100, deadline=None)
    @given(graphs(max_size=12))
    def test_serialize_deterministic(self, g: Graph):
        assert rdf.serialize(g) == rdf.serialize(Graph(sorted(g, key=rdf.render_triple)))


class TestNamespaces:
    def test_oac_expansion_exact(self):
        table = rdf.default_namespaces()
        assert table.namespace("oac") == "http://www.openannotation.org/ns/"

    def test_expand_shrink_identity(self):
        table = rdf.default_namespaces()
        for prefix in ("oac", "cnt", "dcterms"):
            iri = table.expand(prefix, "Thing")
            assert table.shrink(iri) == (prefix, "Thing")

    def test_preloaded_prefixes(self):
        table = rdf.default_namespaces()
        for prefix in ("oac", "cnt", "dcterms", "rdf", "xsd", "owl"):
            assert prefix in table


class TestIsomorphism:
    def test_relabeled_graphs_isomorphic(self):
        g1 = Graph([Triple(BlankNode("a"), Iri("urn:p"), BlankNode("b"))])
        g2 = Graph([Triple(BlankNode("x"), Iri("urn:p"), BlankNode("y"))])
        assert g1.isomorphic(g2)

    def test_structure_difference_detected(self):
        g1 = Graph(
            [
                Triple(BlankNode("a"), Iri("urn:p"), BlankNode("a")),
            ]
        )
        g2 = Graph(
            [
                Triple(BlankNode("x"), Iri("urn:p"), BlankNode("y")),
            ]
        )
        assert not g1.isomorphic(g2)

    def test_symmetric_blanks(self):
        g1 = Graph(
            [
                Triple(BlankNode("a"), Iri("urn:p"), Literal("1")),
                Triple(BlankNode("b"), Iri("urn:p"), Literal("1")),
            ]
        )
        g2 = Graph(
            [
                Triple(BlankNode("c"), Iri("urn:p"), Literal("1")),
                Triple(BlankNode("d"), Iri("urn:p"), Literal("1")),
            ]
        )
        assert g1.isomorphic(g2)
