"""Grammar-based statement parsing.

The grammar is exactly the family of sentences the generator can emit:

    the [size] [color] CLASS  RELATION-PHRASE  the [size] [color] CLASS
    ... and the [size] [color] CLASS          (ternary relations)

Relation phrases and class names may span several tokens; both are
matched longest first, with class matching tried before attribute words
so labels like "white board" survive.  Text outside the grammar fails
loudly with diagnostics instead of guessing; an optional external parser
(see the external module) covers open phrasing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .colors import PALETTE_NAMES
from .language import SynonymTable, default_synonyms, render_query_text
from .query import Attribute, ObjectSpec, RelationSpec, SubgraphQuery
from .relations import RelationType
from .scene import ClassMapping, default_class_mapping

_DETERMINERS = ("the", "a", "an")
_SIZE_WORDS = ("large", "small")
_TOKEN_RE = re.compile(r"[a-z0-9'-]+")

EXACT = "exact-grammar"
FUZZY = "fuzzy"
EXTERNAL = "external"


class ParseError(ValueError):
    def __init__(self, message: str, diagnostics=()):
        super().__init__(message)
        self.diagnostics = tuple(diagnostics)


@dataclass(frozen=True)
class ParseOutcome:
    query: SubgraphQuery
    confidence: str  # exact-grammar, fuzzy, or external
    diagnostics: tuple[str, ...] = ()  # tokens outside the matched template


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def build_vocabulary(mapping: ClassMapping | None = None,
                     extra_labels=()) -> frozenset[str]:
    """All class terms the parser should recognize.

    Schema classes, every raw label in the mapping table, the free-space
    class, plus any scene-specific labels the caller passes.  A class
    name identical to a color or size word would be unparseable and is
    rejected.
    """
    mapping = mapping or default_class_mapping()
    vocab = set(mapping.classes) | set(mapping.mapping) | {"space"}
    vocab.update(extra_labels)
    reserved = set(PALETTE_NAMES) | set(_SIZE_WORDS)
    clash = vocab & reserved
    if clash:
        raise ValueError(f"class names conflict with attribute words: {sorted(clash)}")
    return frozenset(vocab)


class Parser:
    """Reusable parser for one synonym table + vocabulary pair."""

    def __init__(self, synonyms: SynonymTable | None = None, vocabulary=None):
        self.synonyms = synonyms or default_synonyms()
        vocab = vocabulary if vocabulary is not None else build_vocabulary()
        self._classes = {tuple(name.split()): name for name in vocab}
        self._max_class_len = max((len(k) for k in self._classes), default=1)
        phrases: dict[tuple[str, ...], RelationType] = {}
        for rtype, forms in self.synonyms.all_forms().items():
            for form in forms:
                key = tuple(tokenize(form))
                if phrases.get(key, rtype) is not rtype:
                    raise ValueError(f"synonym {form!r} maps to two relation types")
                phrases[key] = rtype
        # longest phrases first so "on top of" beats "on"
        self._phrases = sorted(phrases.items(), key=lambda kv: -len(kv[0]))

    def _match_class(self, tokens, i):
        limit = min(self._max_class_len, len(tokens) - i)
        for ln in range(limit, 0, -1):
            name = self._classes.get(tuple(tokens[i:i + ln]))
            if name is not None:
                return name, i + ln
        return None

    def _parse_spec(self, tokens, i):
        if i < len(tokens) and tokens[i] in _DETERMINERS:
            i += 1
        attrs: list[Attribute] = []
        while i < len(tokens):
            hit = self._match_class(tokens, i)
            if hit is not None:
                return ObjectSpec(hit[0], tuple(attrs)), hit[1]
            tok = tokens[i]
            if tok in PALETTE_NAMES:
                attrs.append(Attribute("color", tok))
            elif tok in _SIZE_WORDS:
                attrs.append(Attribute("size", tok))
            else:
                return None
            i += 1
        return None

    def _match_relation(self, tokens, i):
        for key, rtype in self._phrases:
            if tuple(tokens[i:i + len(key)]) == key:
                return rtype, i + len(key)
        return None

    def _parse_at(self, tokens, start):
        got = self._parse_spec(tokens, start)
        if got is None:
            return None
        target, i = got
        rel = self._match_relation(tokens, i)
        if rel is None:
            return None
        rtype, i = rel
        got = self._parse_spec(tokens, i)
        if got is None:
            return None
        anchors = [got[0]]
        i = got[1]
        if rtype.ternary:
            if i >= len(tokens) or tokens[i] != "and":
                return None
            got = self._parse_spec(tokens, i + 1)
            if got is None:
                return None
            anchors.append(got[0])
            i = got[1]
        query = SubgraphQuery(
            target, tuple(anchors),
            (RelationSpec(rtype, tuple(range(1, len(anchors) + 1))),),
        )
        return query, i

    def parse(self, text: str) -> ParseOutcome:
        tokens = tokenize(text)
        if not tokens:
            raise ParseError("empty statement")
        for start in range(len(tokens)):
            result = self._parse_at(tokens, start)
            if result is None:
                continue
            query, end = result
            leftovers = tuple(tokens[:start]) + tuple(tokens[end:])
            confidence = EXACT if not leftovers else FUZZY
            return ParseOutcome(query, confidence, leftovers)
        if not any(self._match_class(tokens, i) for i in range(len(tokens))):
            raise ParseError("no class token found", tokens)
        if not any(self._match_relation(tokens, i) for i in range(len(tokens))):
            raise ParseError("no relation phrase found", tokens)
        raise ParseError("statement does not follow the template grammar", tokens)


def parse_statement(text: str, synonyms: SynonymTable | None = None,
                    vocabulary=None) -> ParseOutcome:
    """One-shot parse; build a Parser directly when parsing in bulk."""
    return Parser(synonyms, vocabulary).parse(text)


def render_query(query: SubgraphQuery, synonyms: SynonymTable | None = None,
                 seed: int = 0) -> str:
    """Canonical sentence for a query; inverse of parse on the template family."""
    return render_query_text(query, synonyms, seed)
