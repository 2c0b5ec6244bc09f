"""N-Triples parsing and canonical serialization.

The serializer is canonical: blank nodes are relabeled `_:b0`, `_:b1`, ... in
sorted-triple order and the output lines are sorted bytewise, so equal graphs
always produce identical bytes regardless of construction order.
"""

from __future__ import annotations

from .terms import (
    BlankNode,
    Graph,
    Iri,
    Literal,
    ParseError,
    Term,
    Triple,
    render_triple,
)

MEDIA_TYPE = "application/n-triples"

_STRING_ESCAPES = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}


class _Cursor:
    """Single-line scanner with 1-based column reporting."""

    def __init__(self, text: str, line: int):
        self.text = text
        self.line = line
        self.pos = 0

    @property
    def column(self) -> int:
        return self.pos + 1

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.column)

    def eof(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def advance(self) -> str:
        ch = self.text[self.pos]
        self.pos += 1
        return ch

    def skip_ws(self) -> None:
        while not self.eof() and self.text[self.pos] in " \t":
            self.pos += 1

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1


def _read_unicode_escape(cur: _Cursor, width: int) -> str:
    digits = cur.text[cur.pos : cur.pos + width]
    if len(digits) < width or not all(c in "0123456789abcdefABCDEF" for c in digits):
        raise cur.error(f"bad \\{'u' if width == 4 else 'U'} escape")
    cur.pos += width
    return chr(int(digits, 16))


def _read_escape(cur: _Cursor, allowed: str) -> str:
    if cur.eof():
        raise cur.error("unterminated escape")
    code = cur.advance()
    if code == "u":
        return _read_unicode_escape(cur, 4)
    if code == "U":
        return _read_unicode_escape(cur, 8)
    if code in allowed and code in _STRING_ESCAPES:
        return _STRING_ESCAPES[code]
    raise cur.error(f"unsupported escape \\{code}")


def read_iri(cur: _Cursor) -> Iri:
    start_col = cur.column
    cur.expect("<")
    out: list[str] = []
    while True:
        if cur.eof():
            raise cur.error("unterminated IRI")
        ch = cur.advance()
        if ch == ">":
            break
        if ch == "\\":
            out.append(_read_escape(cur, allowed=""))
        elif ch in ' <"{}|^`' or ord(ch) < 0x21:
            raise cur.error(f"illegal character {ch!r} in IRI")
        else:
            out.append(ch)
    value = "".join(out)
    try:
        return Iri(value)
    except ValueError:
        raise ParseError(f"relative IRI not allowed: {value!r}", cur.line, start_col)


def read_blank(cur: _Cursor) -> BlankNode:
    cur.expect("_")
    cur.expect(":")
    out: list[str] = []
    while not cur.eof() and (cur.peek().isalnum() and cur.peek().isascii()):
        out.append(cur.advance())
    if not out:
        raise cur.error("empty blank node label")
    return BlankNode("".join(out))


def read_literal(cur: _Cursor) -> Literal:
    cur.expect('"')
    out: list[str] = []
    while True:
        if cur.eof():
            raise cur.error("unterminated string literal")
        ch = cur.advance()
        if ch == '"':
            break
        if ch == "\\":
            out.append(_read_escape(cur, allowed="tbnrf\"'\\"))
        else:
            out.append(ch)
    lexical = "".join(out)
    if cur.peek() == "@":
        cur.advance()
        tag: list[str] = []
        while not cur.eof() and (cur.peek().isalnum() or cur.peek() == "-"):
            tag.append(cur.advance())
        if not tag:
            raise cur.error("empty language tag")
        return Literal(lexical, lang="".join(tag))
    if cur.peek() == "^":
        cur.advance()
        cur.expect("^")
        return Literal(lexical, datatype=read_iri(cur))
    return Literal(lexical)


def read_term(cur: _Cursor, subject_position: bool = False) -> Term:
    ch = cur.peek()
    if ch == "<":
        return read_iri(cur)
    if ch == "_":
        return read_blank(cur)
    if ch == '"':
        if subject_position:
            raise cur.error("literal not allowed as subject")
        return read_literal(cur)
    raise cur.error("expected IRI, blank node or literal")


def parse(text: str) -> Graph:
    triples: list[Triple] = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        cur = _Cursor(raw, lineno)
        cur.skip_ws()
        if cur.eof() or cur.peek() == "#":
            continue
        subject = read_term(cur, subject_position=True)
        cur.skip_ws()
        predicate = read_term(cur)
        if not isinstance(predicate, Iri):
            raise ParseError("predicate must be an IRI", lineno, cur.column)
        cur.skip_ws()
        obj = read_term(cur)
        cur.skip_ws()
        cur.expect(".")
        cur.skip_ws()
        if not cur.eof() and cur.peek() != "#":
            raise cur.error("unexpected trailing content")
        triples.append(Triple(subject, predicate, obj))  # type: ignore[arg-type]
    return Graph(triples)


def serialize(graph: Graph) -> str:
    # First sort with original labels to fix the relabeling order, then
    # relabel and sort the final lines bytewise.
    ordered = sorted(graph, key=render_triple)
    relabel: dict[str, str] = {}
    for t in ordered:
        for node in (t.subject, t.object):
            if isinstance(node, BlankNode) and node.label not in relabel:
                relabel[node.label] = f"b{len(relabel)}"

    def remap(term: Term) -> Term:
        if isinstance(term, BlankNode):
            return BlankNode(relabel[term.label])
        return term

    lines = sorted(
        render_triple(Triple(remap(t.subject), t.predicate, remap(t.object)))  # type: ignore[arg-type]
        for t in ordered
    )
    return "\n".join(lines) + ("\n" if lines else "")
