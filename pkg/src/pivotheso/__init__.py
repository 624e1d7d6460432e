"""pivotheso: thesaurus engine and alignment workbench for research vocabularies."""

from .errors import PivothesoError
from .model import (
    ArtifactDescription,
    CombinationCeiling,
    Concept,
    ConceptScheme,
    Definition,
    Diagnostic,
    Label,
    Mapping,
    MappingStatus,
    MatchType,
    Profile,
    Referential,
    ReferentialDiff,
    Severity,
    SuggestionCandidate,
    Tier,
)
from .store import ThesaurusStore

__all__ = [
    "ArtifactDescription",
    "CombinationCeiling",
    "Concept",
    "ConceptScheme",
    "Definition",
    "Diagnostic",
    "Label",
    "Mapping",
    "MappingStatus",
    "MatchType",
    "PivothesoError",
    "Profile",
    "Referential",
    "ReferentialDiff",
    "Severity",
    "SuggestionCandidate",
    "ThesaurusStore",
    "Tier",
]

__version__ = "0.1.0"
