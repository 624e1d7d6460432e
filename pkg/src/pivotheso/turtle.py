"""Turtle subset parser, canonical serializer and graph conversion.

Supported grammar: ``@prefix`` directives, IRIs, prefixed names, string
literals with optional language tags, the ``a`` keyword, ``;``/``,``
predicate-object lists and ``#`` comments. No blank nodes, collections or
numeric literals. Unknown predicates are dropped with a warning; everything
malformed raises :class:`TurtleSyntaxError` with line/column.

Serialization is canonical: fixed prefix block, subjects sorted by id,
predicates in a fixed order, objects sorted, one-sided ``skos:related``
(the smaller id carries the triple; parsing symmetrizes). Output is UTF-8,
LF line endings, byte-stable under re-serialization.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import GraphError, TurtleSyntaxError
from .model import (
    Concept,
    Definition,
    Label,
    Mapping,
    MappingStatus,
    MatchType,
    Profile,
)
from .store import ThesaurusStore
from .textnorm import normalize_label

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
SKOS = "http://www.w3.org/2004/02/skos/core#"
DCTERMS = "http://purl.org/dc/terms/"

RDF_TYPE = RDF + "type"
PREF_LABEL = SKOS + "prefLabel"
ALT_LABEL = SKOS + "altLabel"
DEFINITION = SKOS + "definition"
BROADER = SKOS + "broader"
NARROWER = SKOS + "narrower"
RELATED = SKOS + "related"
IN_SCHEME = SKOS + "inScheme"
TOP_CONCEPT_OF = SKOS + "topConceptOf"
SOURCE = DCTERMS + "source"
SEE_ALSO = RDFS + "seeAlso"
CONCEPT_CLASS = SKOS + "Concept"
SCHEME_CLASS = SKOS + "ConceptScheme"

MATCH_PREDICATES = {
    SKOS + "exactMatch": MatchType.EXACT,
    SKOS + "closeMatch": MatchType.CLOSE,
    SKOS + "broadMatch": MatchType.BROAD,
    SKOS + "narrowMatch": MatchType.NARROW,
    SKOS + "relatedMatch": MatchType.RELATED,
}

SUPPORTED_PREDICATES = frozenset(
    {RDF_TYPE, PREF_LABEL, ALT_LABEL, DEFINITION, BROADER, NARROWER, RELATED,
     IN_SCHEME, TOP_CONCEPT_OF, SOURCE, SEE_ALSO, *MATCH_PREDICATES}
)

_SCHEME_URN = "urn:x-scheme:"


@dataclass(frozen=True)
class Iri:
    value: str


@dataclass(frozen=True)
class Lit:
    text: str
    lang: str | None = None


Triple = tuple[str, str, "Iri | Lit"]


@dataclass
class SkosDocument:
    prefixes: dict[str, str] = field(default_factory=dict)
    triples: list[Triple] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


# ---------------------------------------------------------------------------
# tokenizer
# ---------------------------------------------------------------------------

_PNAME = re.compile(r"^([A-Za-z][\w-]*)?:([\w][\w.-]*)?$", re.UNICODE)
_LANGTAG = re.compile(r"[A-Za-z]+(?:-[A-Za-z0-9]+)*")
_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f",
            '"': '"', "'": "'", "\\": "\\"}
_PN_CHARS = set("_-.:%")


class _Token:
    __slots__ = ("kind", "value", "lang", "line", "col")

    def __init__(self, kind, value=None, lang=None, line=0, col=0):
        self.kind = kind
        self.value = value
        self.lang = lang
        self.line = line
        self.col = col


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def _err(self, message: str, line=None, col=None):
        raise TurtleSyntaxError(line or self.line, col or self.col, message)

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.pos < len(self.text):
                if self.text[self.pos] == "\n":
                    self.line += 1
                    self.col = 1
                else:
                    self.col += 1
                self.pos += 1

    def _skip_ws(self) -> None:
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in " \t\r\n":
                self._advance()
            elif ch == "#":
                while self.pos < len(self.text) and self.text[self.pos] != "\n":
                    self._advance()
            else:
                return

    def next(self) -> _Token:
        self._skip_ws()
        line, col = self.line, self.col
        if self.pos >= len(self.text):
            return _Token("eof", line=line, col=col)
        ch = self.text[self.pos]
        if ch in ".;,":
            self._advance()
            return _Token(ch, line=line, col=col)
        if ch == "<":
            return self._iri(line, col)
        if ch == '"':
            return self._string(line, col)
        if ch == "@":
            self._advance()
            word = self._word()
            if word == "prefix":
                return _Token("@prefix", line=line, col=col)
            self._err(f"unsupported directive @{word}", line, col)
        return self._name(line, col)

    def _iri(self, line, col) -> _Token:
        self._advance()  # <
        out = []
        while True:
            if self.pos >= len(self.text):
                self._err("unterminated IRI", line, col)
            ch = self.text[self.pos]
            if ch == ">":
                self._advance()
                value = "".join(out)
                if not value:
                    self._err("empty IRI", line, col)
                return _Token("iri", value=value, line=line, col=col)
            if ch in ' \n\t"<{}|^`\\':
                self._err(f"bad character {ch!r} in IRI", line, col)
            out.append(ch)
            self._advance()

    def _string(self, line, col) -> _Token:
        self._advance()  # "
        out = []
        while True:
            if self.pos >= len(self.text):
                self._err("unterminated string literal", line, col)
            ch = self.text[self.pos]
            if ch == "\n":
                self._err("unterminated string literal", line, col)
            if ch == '"':
                self._advance()
                break
            if ch == "\\":
                self._advance()
                if self.pos >= len(self.text):
                    self._err("unterminated string literal", line, col)
                esc = self.text[self.pos]
                if esc in _ESCAPES:
                    out.append(_ESCAPES[esc])
                    self._advance()
                elif esc in "uU":
                    width = 4 if esc == "u" else 8
                    self._advance()
                    hexpart = self.text[self.pos:self.pos + width]
                    if len(hexpart) < width or not re.fullmatch(r"[0-9A-Fa-f]+", hexpart):
                        self._err(f"bad \\{esc} escape", line, col)
                    out.append(chr(int(hexpart, 16)))
                    self._advance(width)
                else:
                    self._err(f"unknown escape \\{esc}", line, col)
            else:
                out.append(ch)
                self._advance()
        lang = None
        if self.pos < len(self.text) and self.text[self.pos] == "@":
            self._advance()
            m = _LANGTAG.match(self.text, self.pos)
            if m is None:
                self._err("empty language tag", line, col)
            lang = m.group(0)
            self._advance(len(lang))
        return _Token("string", value="".join(out), lang=lang, line=line, col=col)

    def _word(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] in _PN_CHARS):
            self._advance()
        word = self.text[start:self.pos]
        # a prefixed-name local must not end in '.': give the dots back
        while word.endswith("."):
            word = word[:-1]
            self.pos -= 1
            self.col -= 1
        return word

    def _name(self, line, col) -> _Token:
        word = self._word()
        if not word:
            self._err(f"unexpected character {self.text[self.pos]!r}")
        if word == "a":
            return _Token("a", line=line, col=col)
        if ":" in word:
            prefix, _, local = word.partition(":")
            if _PNAME.match(word):
                return _Token("pname", value=(prefix, local), line=line, col=col)
            self._err(f"malformed prefixed name {word!r}", line, col)
        self._err(f"unexpected token {word!r}", line, col)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

class _TokenStream:
    def __init__(self, text: str):
        self._scanner = _Scanner(text)
        self._pending: _Token | None = None

    def next(self) -> _Token:
        if self._pending is not None:
            tok, self._pending = self._pending, None
            return tok
        return self._scanner.next()

    def push(self, tok: _Token) -> None:
        self._pending = tok


def parse_turtle(text: str) -> SkosDocument:
    """Parse Turtle text into a document of recognized triples."""
    doc = SkosDocument()
    stream = _TokenStream(text)
    seen: set[tuple] = set()

    def resolve(token: _Token) -> str:
        if token.kind == "iri":
            return token.value
        prefix, local = token.value
        if prefix not in doc.prefixes:
            raise TurtleSyntaxError(token.line, token.col, f"unresolved prefix {prefix!r}")
        return doc.prefixes[prefix] + local

    def record(subject: str, predicate: str, obj: Iri | Lit, token: _Token) -> None:
        if predicate not in SUPPORTED_PREDICATES:
            doc.warnings.append(
                f"line {token.line}, col {token.col}: ignored unknown predicate <{predicate}>"
            )
            return
        key = (subject, predicate, obj)
        if key not in seen:
            seen.add(key)
            doc.triples.append((subject, predicate, obj))

    while True:
        tok = stream.next()
        if tok.kind == "eof":
            return doc

        if tok.kind == "@prefix":
            name = stream.next()
            if name.kind != "pname" or name.value[1]:
                raise TurtleSyntaxError(name.line, name.col, "expected 'prefix:' after @prefix")
            iri = stream.next()
            if iri.kind != "iri":
                raise TurtleSyntaxError(iri.line, iri.col, "expected IRI in @prefix directive")
            dot = stream.next()
            if dot.kind != ".":
                raise TurtleSyntaxError(dot.line, dot.col, "expected '.' after @prefix directive")
            doc.prefixes[name.value[0]] = iri.value
            continue

        if tok.kind not in ("iri", "pname"):
            raise TurtleSyntaxError(tok.line, tok.col, f"expected subject, got {tok.kind!r}")
        subject = resolve(tok)

        statement_open = True
        while statement_open:
            ptok = stream.next()
            if ptok.kind == "a":
                predicate = RDF_TYPE
            elif ptok.kind in ("iri", "pname"):
                predicate = resolve(ptok)
            else:
                raise TurtleSyntaxError(ptok.line, ptok.col, f"expected predicate, got {ptok.kind!r}")

            while True:
                otok = stream.next()
                if otok.kind in ("iri", "pname"):
                    record(subject, predicate, Iri(resolve(otok)), ptok)
                elif otok.kind == "string":
                    record(subject, predicate, Lit(otok.value, otok.lang), ptok)
                else:
                    raise TurtleSyntaxError(otok.line, otok.col, f"expected object, got {otok.kind!r}")
                sep = stream.next()
                if sep.kind != ",":
                    break

            if sep.kind == ".":
                statement_open = False
            elif sep.kind == ";":
                nxt = stream.next()
                if nxt.kind == ".":
                    statement_open = False
                else:
                    stream.push(nxt)
            else:
                raise TurtleSyntaxError(sep.line, sep.col, f"expected ';' or '.', got {sep.kind!r}")


def parse_turtle_bytes(data: bytes) -> SkosDocument:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise TurtleSyntaxError(1, 1, f"input is not UTF-8: {exc}") from None
    if text.startswith("﻿"):
        text = text[1:]
    return parse_turtle(text)


# ---------------------------------------------------------------------------
# document -> graph
# ---------------------------------------------------------------------------

def scheme_iri(scheme_id: str) -> str:
    return scheme_id if ":" in scheme_id else _SCHEME_URN + scheme_id


def scheme_id_from_iri(iri: str) -> str:
    return iri[len(_SCHEME_URN):] if iri.startswith(_SCHEME_URN) else iri


def to_graph(
    doc: SkosDocument,
    *,
    default_profile: Profile = Profile.DOCUMENTARY,
    default_lang: str = "fr",
    naan: str = "99999",
    prefix: str = "pvt",
    seed: int = 0,
) -> ThesaurusStore:
    """Assemble a parsed document into a consistent store.

    broader/narrower and related are symmetrized; hierarchy cycles and
    duplicated preferred labels raise :class:`GraphError`. Mapping targets
    that are not described in the document become label-less stubs in a
    synthetic "external" scheme, keeping the ark as an opaque id.
    """
    store = ThesaurusStore(naan=naan, prefix=prefix, seed=seed, default_lang=default_lang)

    scheme_iris: set[str] = set()
    for s, p, o in doc.triples:
        if p == RDF_TYPE and isinstance(o, Iri) and o.value == SCHEME_CLASS:
            scheme_iris.add(s)
        elif p in (IN_SCHEME, TOP_CONCEPT_OF) and isinstance(o, Iri):
            scheme_iris.add(o.value)

    concept_iris: set[str] = set()
    for s, p, o in doc.triples:
        if p == RDF_TYPE and isinstance(o, Iri) and o.value == CONCEPT_CLASS:
            concept_iris.add(s)
        elif p in (PREF_LABEL, ALT_LABEL, DEFINITION, SOURCE, SEE_ALSO,
                   BROADER, NARROWER, RELATED, IN_SCHEME, TOP_CONCEPT_OF) and s not in scheme_iris:
            concept_iris.add(s)
        if p in (BROADER, NARROWER, RELATED) and isinstance(o, Iri):
            concept_iris.add(o.value)
    concept_iris -= scheme_iris

    def _object_kind_error(s, p, o):
        return GraphError(f"predicate <{p}> of <{s}> has an object of the wrong kind: {o!r}")

    # scheme records
    titles: dict[str, str] = {}
    for s, p, o in doc.triples:
        if s in scheme_iris and p == PREF_LABEL and isinstance(o, Lit):
            titles.setdefault(s, o.text)
    for iri in sorted(scheme_iris):
        sid = scheme_id_from_iri(iri)
        store.add_scheme(sid, titles.get(iri, sid), profile=default_profile)

    # concept scheme assignment: explicit inScheme first, then propagation
    # along relation edges, then a synthesized default scheme
    explicit: dict[str, str] = {}
    for s, p, o in doc.triples:
        if p == IN_SCHEME and s in concept_iris:
            if not isinstance(o, Iri):
                raise _object_kind_error(s, p, o)
            sid = scheme_id_from_iri(o.value)
            if s in explicit and explicit[s] != sid:
                raise GraphError(f"<{s}> is placed in two schemes")
            explicit[s] = sid

    neighbors: dict[str, set[str]] = {iri: set() for iri in concept_iris}
    for s, p, o in doc.triples:
        if p in (BROADER, NARROWER, RELATED):
            if not isinstance(o, Iri):
                raise _object_kind_error(s, p, o)
            neighbors[s].add(o.value)
            neighbors[o.value].add(s)

    assigned = dict(explicit)
    frontier = sorted(assigned)
    while frontier:
        nxt: list[str] = []
        for iri in frontier:
            for peer in sorted(neighbors.get(iri, ())):
                if peer not in assigned:
                    assigned[peer] = assigned[iri]
                    nxt.append(peer)
        frontier = nxt
    unassigned = sorted(concept_iris - assigned.keys())
    if unassigned:
        if "default" not in store.schemes:
            store.add_scheme("default", "default", profile=default_profile)
        for iri in unassigned:
            assigned[iri] = "default"

    for iri in sorted(concept_iris):
        sid = assigned[iri]
        if sid not in store.schemes:
            store.add_scheme(sid, sid, profile=default_profile)
        store.concepts[iri] = Concept(id=iri, scheme=sid)

    # labels
    for s, p, o in doc.triples:
        if p == PREF_LABEL and s in concept_iris:
            if not isinstance(o, Lit):
                raise _object_kind_error(s, p, o)
            label = Label(lang=o.lang or default_lang, text=o.text)
            c = store.concepts[s]
            if label.lang in c.pref_labels:
                raise GraphError(f"<{s}> has two preferred labels for language {label.lang!r}")
            c.pref_labels[label.lang] = label
    for s, p, o in doc.triples:
        if p == ALT_LABEL and s in concept_iris:
            if not isinstance(o, Lit):
                raise _object_kind_error(s, p, o)
            label = Label(lang=o.lang or default_lang, text=o.text)
            c = store.concepts[s]
            own = c.pref_labels.get(label.lang)
            if own is not None and normalize_label(own.text) == normalize_label(label.text):
                raise GraphError(f"<{s}> has an alt label equal to its preferred label")
            if label not in c.alt_labels:
                c.alt_labels.append(label)
    for c in store.concepts.values():
        c.alt_labels.sort()

    # definitions
    def_text: dict[str, str] = {}
    def_sources: dict[str, set[str]] = {}
    def_resources: dict[str, set[str]] = {}
    for s, p, o in doc.triples:
        if s not in concept_iris:
            continue
        if p == DEFINITION:
            if not isinstance(o, Lit):
                raise _object_kind_error(s, p, o)
            if s in def_text:
                raise GraphError(f"<{s}> has several definitions")
            def_text[s] = o.text
        elif p == SOURCE:
            if not isinstance(o, Lit):
                raise _object_kind_error(s, p, o)
            def_sources.setdefault(s, set()).add(o.text)
        elif p == SEE_ALSO:
            if not isinstance(o, Iri):
                raise _object_kind_error(s, p, o)
            def_resources.setdefault(s, set()).add(o.value)
    for iri in sorted(set(def_text) | set(def_sources) | set(def_resources)):
        store.concepts[iri].definition = Definition(
            text=def_text.get(iri, ""),
            sources=sorted(def_sources.get(iri, ())),
            external_resources=sorted(def_resources.get(iri, ())),
        )

    # duplicate preferred labels within a scheme
    seen_pref: dict[tuple[str, str, str], str] = {}
    for iri in sorted(concept_iris):
        c = store.concepts[iri]
        for lang, lb in c.pref_labels.items():
            key = (c.scheme, lang, normalize_label(lb.text))
            if key in seen_pref:
                raise GraphError(
                    f"preferred label {lb.text!r}@{lang} used by both <{seen_pref[key]}> and <{iri}>"
                )
            seen_pref[key] = iri

    # hierarchy and associative relations (symmetrized)
    for s, p, o in doc.triples:
        if p not in (BROADER, NARROWER, RELATED):
            continue
        target = o.value  # kind checked above
        child, parent = (s, target) if p == BROADER else (target, s)
        a, b = store.concepts[s], store.concepts[target]
        if a.scheme != b.scheme:
            raise GraphError(f"relation <{p}> crosses schemes: <{s}> / <{target}>")
        if p == RELATED:
            if s == target:
                raise GraphError(f"<{s}> is related to itself")
            a.related.add(target)
            b.related.add(s)
        else:
            if child == parent:
                raise GraphError(f"<{child}> is broader than itself")
            store.concepts[child].broader.add(parent)
            store.concepts[parent].narrower.add(child)

    _check_acyclic(store)

    # top concepts
    for s, p, o in doc.triples:
        if p == TOP_CONCEPT_OF and s in concept_iris:
            sid = scheme_id_from_iri(o.value)
            if sid != store.concepts[s].scheme:
                raise GraphError(f"<{s}> is topConceptOf a scheme it does not belong to")
            store.schemes[sid].top_concepts.add(s)

    # mappings; unresolved targets become external stubs
    match_triples = sorted(
        ((s, MATCH_PREDICATES[p], o.value) for s, p, o in doc.triples
         if p in MATCH_PREDICATES and isinstance(o, Iri)),
        key=lambda t: (t[0], t[2], t[1].value),
    )
    for s, p, o in doc.triples:
        if p in MATCH_PREDICATES and not isinstance(o, Iri):
            raise _object_kind_error(s, p, o)
    for source, match_type, target in match_triples:
        if source not in store.concepts:
            raise GraphError(f"mapping source <{source}> is not a concept of the document")
        if target not in store.concepts:
            _ensure_external_stub(store, target)
        if store.concepts[source].scheme == store.concepts[target].scheme:
            raise GraphError(f"mapping <{source}> -> <{target}> stays inside one scheme")
        mapping = Mapping(
            id=store.next_mapping_id(), source=source, target=target,
            match_type=match_type, status=MappingStatus.ACCEPTED, rationale="imported",
        )
        store.register_mapping(mapping)

    store.reindex()
    return store


def _ensure_external_stub(store: ThesaurusStore, iri: str) -> None:
    if "external" not in store.schemes:
        store.add_scheme("external", "external", profile=Profile.DOCUMENTARY)
    if iri not in store.concepts:
        store.concepts[iri] = Concept(id=iri, scheme="external")
        store.schemes["external"].top_concepts.add(iri)


def _check_acyclic(store: ThesaurusStore) -> None:
    indeg = {cid: len(c.broader) for cid, c in store.concepts.items()}
    queue = [cid for cid, d in indeg.items() if d == 0]
    seen = 0
    while queue:
        nid = queue.pop()
        seen += 1
        for kid in store.concepts[nid].narrower:
            indeg[kid] -= 1
            if indeg[kid] == 0:
                queue.append(kid)
    if seen != len(store.concepts):
        cyclic = sorted(cid for cid, d in indeg.items() if d > 0)
        raise GraphError(f"hierarchy cycle involving {', '.join(cyclic[:5])}")


# ---------------------------------------------------------------------------
# graph -> canonical Turtle
# ---------------------------------------------------------------------------

_PREFIX_BLOCK = (
    f"@prefix dcterms: <{DCTERMS}> .\n"
    f"@prefix rdf: <{RDF}> .\n"
    f"@prefix rdfs: <{RDFS}> .\n"
    f"@prefix skos: <{SKOS}> .\n"
)

_MATCH_ORDER = [
    (MatchType.EXACT, "skos:exactMatch"),
    (MatchType.CLOSE, "skos:closeMatch"),
    (MatchType.BROAD, "skos:broadMatch"),
    (MatchType.NARROW, "skos:narrowMatch"),
    (MatchType.RELATED, "skos:relatedMatch"),
]


def _escape(text: str) -> str:
    out = []
    for ch in text:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _lit(text: str, lang: str | None = None) -> str:
    body = f'"{_escape(text)}"'
    return f"{body}@{lang}" if lang else body


def serialize_turtle(store: ThesaurusStore, scheme_ids: list[str] | None = None) -> str:
    """Canonical Turtle for the store (optionally restricted to some schemes)."""
    wanted = set(scheme_ids) if scheme_ids is not None else set(store.schemes)
    lines: list[str] = [_PREFIX_BLOCK]

    def block(subject: str, rows: list[str]) -> None:
        body = [f"<{subject}> {rows[0]}"]
        body += [f"    {row}" for row in rows[1:]]
        lines.append(" ;\n".join(body) + " .\n")

    for sid in sorted(store.schemes):
        if sid not in wanted:
            continue
        scheme = store.schemes[sid]
        rows = ["a skos:ConceptScheme"]
        if scheme.title:
            rows.append(f"skos:prefLabel {_lit(scheme.title, store.default_lang)}")
        block(scheme_iri(sid), rows)

    accepted: dict[str, list[Mapping]] = {}
    for mid in sorted(store.mappings):
        m = store.mappings[mid]
        if m.status is MappingStatus.ACCEPTED:
            accepted.setdefault(m.source, []).append(m)

    for cid in sorted(store.concepts):
        c = store.concepts[cid]
        if c.scheme not in wanted:
            continue
        rows = ["a skos:Concept"]
        prefs = [c.pref_labels[lg] for lg in sorted(c.pref_labels)]
        if prefs:
            rows.append("skos:prefLabel " + ", ".join(_lit(lb.text, lb.lang) for lb in prefs))
        alts = sorted(c.alt_labels)
        if alts:
            rows.append("skos:altLabel " + ", ".join(_lit(lb.text, lb.lang) for lb in alts))
        if c.definition is not None:
            if c.definition.text:
                rows.append(f"skos:definition {_lit(c.definition.text, store.default_lang)}")
            for src in sorted(set(c.definition.sources)):
                rows.append(f"dcterms:source {_lit(src)}")
            for res in sorted(set(c.definition.external_resources)):
                rows.append(f"rdfs:seeAlso <{res}>")
        rows.append(f"skos:inScheme <{scheme_iri(c.scheme)}>")
        if cid in store.schemes[c.scheme].top_concepts:
            rows.append(f"skos:topConceptOf <{scheme_iri(c.scheme)}>")
        for pid in sorted(c.broader):
            rows.append(f"skos:broader <{pid}>")
        for rid in sorted(c.related):
            if cid < rid:
                rows.append(f"skos:related <{rid}>")
        for match_type, keyword in _MATCH_ORDER:
            targets = sorted({m.target for m in accepted.get(cid, []) if m.match_type is match_type})
            if targets:
                rows.append(f"{keyword} " + ", ".join(f"<{t}>" for t in targets))
        block(cid, rows)

    return "\n".join(lines)
