"""Data model: concepts, schemes, mappings, referentials, descriptions.

Plain dataclasses; the graph semantics (reciprocity, acyclicity, label
uniqueness) are enforced by :mod:`pivotheso.store`, not here.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import InvalidLabel
from .textnorm import is_grouping_label


class Profile(str, Enum):
    DOCUMENTARY = "documentary"
    RESEARCH = "research"


class MatchType(str, Enum):
    EXACT = "exactMatch"
    CLOSE = "closeMatch"
    BROAD = "broadMatch"
    NARROW = "narrowMatch"
    RELATED = "relatedMatch"


#: Inverse link that must accompany an accepted mapping.
INVERSE_MATCH = {
    MatchType.EXACT: MatchType.EXACT,
    MatchType.CLOSE: MatchType.CLOSE,
    MatchType.RELATED: MatchType.RELATED,
    MatchType.BROAD: MatchType.NARROW,
    MatchType.NARROW: MatchType.BROAD,
}


class MappingStatus(str, Enum):
    SUGGESTED = "suggested"
    ACCEPTED = "accepted"
    REJECTED = "rejected"


class Tier(str, Enum):
    EXACT_NORMALIZED = "exact_normalized"
    EXACT_STRIPPED = "exact_stripped"
    TOKEN_OVERLAP = "token_overlap"

    @property
    def rank(self) -> int:
        return {"exact_normalized": 1, "exact_stripped": 2, "token_overlap": 3}[self.value]


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


_LANG = re.compile(r"^[a-z]{2}$")


@dataclass(frozen=True, order=True)
class Label:
    """A language-tagged term; text is trimmed, lang is a lowercase 2-letter code."""

    lang: str
    text: str

    def __post_init__(self):
        trimmed = self.text.strip()
        if not trimmed:
            raise InvalidLabel("label text must not be empty")
        object.__setattr__(self, "text", trimmed)
        object.__setattr__(self, "lang", self.lang.lower())
        if not _LANG.match(self.lang):
            raise InvalidLabel(f"invalid language code {self.lang!r}")


@dataclass
class Definition:
    text: str
    sources: list[str] = field(default_factory=list)
    external_resources: list[str] = field(default_factory=list)

    def canonical(self) -> "Definition":
        return Definition(self.text, sorted(set(self.sources)), sorted(set(self.external_resources)))


@dataclass
class Concept:
    id: str
    scheme: str
    pref_labels: dict[str, Label] = field(default_factory=dict)
    alt_labels: list[Label] = field(default_factory=list)
    definition: Definition | None = None
    broader: set[str] = field(default_factory=set)
    narrower: set[str] = field(default_factory=set)
    related: set[str] = field(default_factory=set)

    @property
    def is_grouping(self) -> bool:
        return any(is_grouping_label(lb.text) for lb in self.pref_labels.values())

    def labels(self) -> list[Label]:
        """Pref labels then alt labels, deterministically ordered."""
        return [self.pref_labels[lg] for lg in sorted(self.pref_labels)] + list(self.alt_labels)


@dataclass
class ConceptScheme:
    id: str
    title: str
    profile: Profile = Profile.DOCUMENTARY
    top_concepts: set[str] = field(default_factory=set)
    resolver_base: str | None = None


@dataclass
class Mapping:
    """A directed cross-scheme link with ISO 25964-2 / SKOS match semantics."""

    id: str
    source: str
    target: str
    match_type: MatchType
    status: MappingStatus
    score: float | None = None
    rationale: str = ""
    tier: Tier | None = None


@dataclass(frozen=True)
class SuggestionCandidate:
    source: str
    target: str
    tier: Tier
    score: float
    recommended: MatchType


@dataclass
class Referential:
    """A vocabulary snapshot tied to a dated bibliographic source."""

    id: str
    scheme: str
    root_concept: str
    biblio_key: str
    millesime: int
    keywords: list[str] = field(default_factory=list)
    frozen: bool = False
    role_counts: dict[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class ReferentialDiff:
    added: frozenset[str]
    removed: frozenset[str]
    redefined: frozenset[tuple[str, str, str]]
    moved: frozenset[tuple[str, str, str]]

    @property
    def empty(self) -> bool:
        return not (self.added or self.removed or self.redefined or self.moved)


@dataclass(frozen=True)
class ArtifactDescription:
    """The five-concept composite describing one physical artifact."""

    artifact_id: str
    forme: str
    type_: str
    categorie: str
    chronologie: str
    referential: str


@dataclass(frozen=True)
class CombinationCeiling:
    n_categories: int
    n_types: int
    n_formes: int

    @property
    def ceiling(self) -> int:
        return self.n_categories * self.n_types


@dataclass(frozen=True, order=True)
class Diagnostic:
    rule: str
    subjects: tuple[str, ...]
    severity: Severity = field(compare=False)
    message: str = field(compare=False)

    def as_dict(self) -> dict:
        return {
            "rule": self.rule,
            "severity": self.severity.value,
            "subjects": list(self.subjects),
            "message": self.message,
        }

    def render(self) -> str:
        subj = ", ".join(self.subjects)
        return f"{self.rule} [{self.severity.value}] {subj}: {self.message}"
