"""Label normalization, citation-suffix handling and token similarity.

All label comparisons in the engine (uniqueness checks, alignment tiers,
referential diffs) go through the functions below, so the rules live in
exactly one place.
"""

from __future__ import annotations

import re
import unicodedata

# Tokens dropped before Jaccard comparison. Matched against casefolded
# tokens *before* diacritics are stripped, so the preposition "à" is removed
# while a bare letter "a" (as in type names like "campanienne A") survives.
FRENCH_STOPWORDS = frozenset({"à", "de", "des", "du", "la", "le", "les", "et", "en", "sur"})

# Trailing parenthesized citation containing a 4-digit year,
# e.g. "assiette (BARRIER, LUGINBÜHL 2021)".
_SOURCE_SUFFIX = re.compile(r"\s*\([^()]*\b\d{4}\b[^()]*\)\s*$")

_WS = re.compile(r"\s+")
_TOKEN_SPLIT = re.compile(r"\W+", re.UNICODE)


def strip_diacritics(text: str) -> str:
    decomposed = unicodedata.normalize("NFD", text)
    kept = "".join(ch for ch in decomposed if unicodedata.category(ch) != "Mn")
    return unicodedata.normalize("NFC", kept)


def strip_grouping_brackets(text: str) -> str:
    """Remove the square brackets marking an artificial grouping term."""
    t = text.strip()
    if len(t) >= 2 and t.startswith("[") and t.endswith("]"):
        return t[1:-1].strip()
    return t


def is_grouping_label(text: str) -> bool:
    t = text.strip()
    return len(t) >= 2 and t.startswith("[") and t.endswith("]")


def strip_source_suffix(text: str) -> str:
    """Drop a trailing "(AUTHOR 2021)"-style citation, if present."""
    stripped = _SOURCE_SUFFIX.sub("", text.strip())
    return stripped if stripped else text.strip()


def normalize_label(text: str) -> str:
    """Normalization used for label identity: NFC, casefold, no diacritics,
    collapsed whitespace; grouping brackets are transparent."""
    t = strip_grouping_brackets(text)
    t = unicodedata.normalize("NFC", t).casefold()
    t = strip_diacritics(t)
    return _WS.sub(" ", t).strip()


def normalize_stripped(text: str) -> str:
    """``normalize_label`` applied after removing the citation suffix."""
    return normalize_label(strip_source_suffix(text))


def tokenize(text: str, *, strip_citation: bool = False) -> frozenset[str]:
    """Content-word token set: casefolded, stopwords removed, diacritics
    stripped per token. Used for Jaccard similarity."""
    t = strip_grouping_brackets(text)
    if strip_citation:
        t = strip_source_suffix(t)
    t = unicodedata.normalize("NFC", t).casefold()
    out = set()
    for raw in _TOKEN_SPLIT.split(t):
        if not raw or raw in FRENCH_STOPWORDS:
            continue
        out.add(strip_diacritics(raw))
    return frozenset(out)


def jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    if not a and not b:
        return 0.0
    union = len(a | b)
    return len(a & b) / union if union else 0.0


_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a64(text: str) -> str:
    """64-bit FNV-1a digest of NFC-normalized text, as 16 hex chars."""
    h = _FNV_OFFSET
    for byte in unicodedata.normalize("NFC", text).encode("utf-8"):
        h ^= byte
        h = (h * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return f"{h:016x}"
