"""Turtle subset: @prefix, prefixed names, `a`, `;`/`,` abbreviations.

No collections, anonymous nodes, numeric shorthand or multi-line strings;
this is the human-facing companion to the canonical N-Triples format.
"""

from __future__ import annotations

import re

from .namespaces import RDF_TYPE, NamespaceTable
from .terms import (
    BlankNode,
    Graph,
    Iri,
    Literal,
    ParseError,
    Term,
    Triple,
    escape_iri_text,
    escape_literal_text,
    render_term,
)
from .ntriples import _STRING_ESCAPES, _read_unicode_escape

MEDIA_TYPE = "text/turtle"

_SAFE_LOCAL_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_-]*$")
_LOCAL_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-.")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.col)

    def eof(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self, ahead: int = 0) -> str:
        i = self.pos + ahead
        return self.text[i] if i < len(self.text) else ""

    def advance(self) -> str:
        ch = self.text[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return ch

    def skip_ws(self) -> None:
        while not self.eof():
            ch = self.peek()
            if ch in " \t\r\n":
                self.advance()
            elif ch == "#":
                while not self.eof() and self.peek() != "\n":
                    self.advance()
            else:
                return

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.advance()


def _read_escape(sc: _Scanner, allowed: str) -> str:
    if sc.eof():
        raise sc.error("unterminated escape")
    code = sc.advance()
    if code == "u":
        return _scan_unicode(sc, 4)
    if code == "U":
        return _scan_unicode(sc, 8)
    if code in allowed and code in _STRING_ESCAPES:
        return _STRING_ESCAPES[code]
    raise sc.error(f"unsupported escape \\{code}")


def _scan_unicode(sc: _Scanner, width: int) -> str:
    digits = sc.text[sc.pos : sc.pos + width]
    if len(digits) < width or not all(c in "0123456789abcdefABCDEF" for c in digits):
        raise sc.error(f"bad \\{'u' if width == 4 else 'U'} escape")
    for _ in range(width):
        sc.advance()
    return chr(int(digits, 16))


def _read_iriref(sc: _Scanner) -> Iri:
    line, col = sc.line, sc.col
    sc.expect("<")
    out: list[str] = []
    while True:
        if sc.eof():
            raise sc.error("unterminated IRI")
        ch = sc.advance()
        if ch == ">":
            break
        if ch == "\\":
            out.append(_read_escape(sc, allowed=""))
        elif ch in ' <"{}|^`' or ord(ch) < 0x21:
            raise sc.error(f"illegal character {ch!r} in IRI")
        else:
            out.append(ch)
    value = "".join(out)
    try:
        return Iri(value)
    except ValueError:
        raise ParseError(f"relative IRI not allowed: {value!r}", line, col)


def _read_pname_parts(sc: _Scanner) -> tuple[str, str, int, int]:
    line, col = sc.line, sc.col
    prefix_chars: list[str] = []
    while not sc.eof() and (sc.peek().isalnum() or sc.peek() in "_-"):
        prefix_chars.append(sc.advance())
    sc.expect(":")
    local_chars: list[str] = []
    while not sc.eof() and sc.peek() in _LOCAL_CHARS:
        local_chars.append(sc.advance())
    # A trailing dot belongs to the statement, not the name.
    while local_chars and local_chars[-1] == ".":
        local_chars.pop()
        sc.pos -= 1
        sc.col -= 1
    return "".join(prefix_chars), "".join(local_chars), line, col


class _Parser:
    def __init__(self, text: str):
        self.sc = _Scanner(text)
        self.prefixes = NamespaceTable(bindings={})
        self.triples: list[Triple] = []

    def parse(self) -> Graph:
        sc = self.sc
        sc.skip_ws()
        while not sc.eof():
            if sc.peek() == "@":
                self._prefix_decl()
            else:
                self._triples_block()
            sc.skip_ws()
        return Graph(self.triples)

    def _prefix_decl(self) -> None:
        sc = self.sc
        for ch in "@prefix":
            sc.expect(ch)
        sc.skip_ws()
        prefix, local, line, col = _read_pname_parts(sc)
        if local:
            raise ParseError("malformed @prefix declaration", line, col)
        sc.skip_ws()
        namespace = _read_iriref(sc)
        sc.skip_ws()
        sc.expect(".")
        self.prefixes.bind(prefix, namespace.value)

    def _resolve_pname(self) -> Iri:
        prefix, local, line, col = _read_pname_parts(self.sc)
        if prefix not in self.prefixes:
            raise ParseError(f"unknown prefix {prefix!r}", line, col)
        return self.prefixes.expand(prefix, local)

    def _read_subject(self) -> Iri | BlankNode:
        sc = self.sc
        ch = sc.peek()
        if ch == "<":
            return _read_iriref(sc)
        if ch == "_" and sc.peek(1) == ":":
            return self._read_blank()
        return self._resolve_pname()

    def _read_blank(self) -> BlankNode:
        sc = self.sc
        sc.expect("_")
        sc.expect(":")
        out: list[str] = []
        while not sc.eof() and sc.peek().isalnum() and sc.peek().isascii():
            out.append(sc.advance())
        if not out:
            raise sc.error("empty blank node label")
        return BlankNode("".join(out))

    def _read_verb(self) -> Iri:
        sc = self.sc
        if sc.peek() == "a" and (sc.peek(1) in " \t\r\n<" or sc.peek(1) == ""):
            sc.advance()
            return RDF_TYPE
        if sc.peek() == "<":
            return _read_iriref(sc)
        return self._resolve_pname()

    def _read_object(self) -> Term:
        sc = self.sc
        ch = sc.peek()
        if ch == "<":
            return _read_iriref(sc)
        if ch == "_" and sc.peek(1) == ":":
            return self._read_blank()
        if ch == '"':
            return self._read_literal()
        return self._resolve_pname()

    def _read_literal(self) -> Literal:
        sc = self.sc
        sc.expect('"')
        out: list[str] = []
        while True:
            if sc.eof():
                raise sc.error("unterminated string literal")
            ch = sc.advance()
            if ch == '"':
                break
            if ch == "\n":
                raise sc.error("newline in single-line string literal")
            if ch == "\\":
                out.append(_read_escape(sc, allowed="tbnrf\"'\\"))
            else:
                out.append(ch)
        lexical = "".join(out)
        if sc.peek() == "@":
            sc.advance()
            tag: list[str] = []
            while not sc.eof() and (sc.peek().isalnum() or sc.peek() == "-"):
                tag.append(sc.advance())
            if not tag:
                raise sc.error("empty language tag")
            return Literal(lexical, lang="".join(tag))
        if sc.peek() == "^" and sc.peek(1) == "^":
            sc.advance()
            sc.advance()
            if sc.peek() == "<":
                return Literal(lexical, datatype=_read_iriref(sc))
            return Literal(lexical, datatype=self._resolve_pname())
        return Literal(lexical)

    def _triples_block(self) -> None:
        sc = self.sc
        subject = self._read_subject()
        sc.skip_ws()
        while True:
            verb = self._read_verb()
            sc.skip_ws()
            while True:
                obj = self._read_object()
                self.triples.append(Triple(subject, verb, obj))
                sc.skip_ws()
                if sc.peek() == ",":
                    sc.advance()
                    sc.skip_ws()
                    continue
                break
            if sc.peek() == ";":
                sc.advance()
                sc.skip_ws()
                if sc.peek() == ".":  # tolerate trailing semicolon
                    break
                continue
            break
        sc.expect(".")


def parse(text: str) -> Graph:
    return _Parser(text).parse()


def _shrinkable(iri: Iri, table: NamespaceTable) -> tuple[str, str] | None:
    split = table.shrink(iri)
    if split is not None and _SAFE_LOCAL_RE.match(split[1]):
        return split
    return None


def _render(term: Term, table: NamespaceTable, used: set[str]) -> str:
    if isinstance(term, Iri):
        split = _shrinkable(term, table)
        if split is not None:
            used.add(split[0])
            return f"{split[0]}:{split[1]}"
        return f"<{escape_iri_text(term.value)}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    base = f'"{escape_literal_text(term.lexical)}"'
    if term.lang is not None:
        return f"{base}@{term.lang}"
    if term.datatype is not None:
        return f"{base}^^{_render(term.datatype, table, used)}"
    return base


def serialize(graph: Graph, namespaces: NamespaceTable | None = None) -> str:
    """Deterministic Turtle: prefix header, subjects grouped and sorted."""
    if len(graph) == 0:
        return ""
    table = namespaces if namespaces is not None else NamespaceTable()
    used: set[str] = set()

    by_subject: dict[str, list[Triple]] = {}
    subject_text: dict[str, str] = {}
    for t in graph:
        key = render_term(t.subject)
        by_subject.setdefault(key, []).append(t)
        if key not in subject_text:
            subject_text[key] = _render(t.subject, table, used)

    blocks: list[str] = []
    for skey in sorted(by_subject):
        triples = by_subject[skey]
        by_pred: dict[str, list[Triple]] = {}
        for t in triples:
            by_pred.setdefault(render_term(t.predicate), []).append(t)

        # rdf:type first (as `a`), then remaining predicates sorted.
        pred_keys = sorted(by_pred)
        type_key = render_term(RDF_TYPE)
        if type_key in by_pred:
            pred_keys.remove(type_key)
            pred_keys.insert(0, type_key)

        parts: list[str] = []
        for pkey in pred_keys:
            group = by_pred[pkey]
            if pkey == type_key:
                verb = "a"
            else:
                verb = _render(group[0].predicate, table, used)
            objs = sorted(
                (_render(t.object, table, used) for t in group),
                key=lambda s: s,
            )
            parts.append(f"{verb} {', '.join(objs)}")
        body = " ;\n    ".join(parts)
        blocks.append(f"{subject_text[skey]} {body} .")

    header = [
        f"@prefix {prefix}: <{escape_iri_text(table.namespace(prefix) or '')}> ."
        for prefix in sorted(used)
    ]
    sections = []
    if header:
        sections.append("\n".join(header))
    sections.append("\n\n".join(blocks))
    return "\n\n".join(sections) + "\n"
