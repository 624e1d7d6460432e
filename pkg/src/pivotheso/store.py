"""In-memory concept-graph store with the core editing operations.

The store is the single mutable object of the engine. Mutations are guarded
by an internal re-entrant lock (single-writer contract); reads operate on the
current state and are safe to run concurrently with each other. Hierarchy and
associative invariants are enforced eagerly at edit time: cycles, duplicated
preferred labels and hierarchically shadowed associative links are rejected
instead of being left for validation to find.
"""

from __future__ import annotations

import threading
from typing import Iterable, Iterator

from .ark import ArkMinter
from .errors import (
    CrossScheme,
    CycleDetected,
    DuplicateConcept,
    DuplicatePrefLabel,
    DuplicateScheme,
    FrozenReferential,
    HierarchicallyLinked,
    InvalidLabel,
    InvalidTopConcept,
    SelfRelation,
    UnknownConcept,
    UnknownScheme,
)
from .model import (
    ArtifactDescription,
    Concept,
    ConceptScheme,
    Definition,
    Label,
    Mapping,
    Profile,
    Referential,
)
from .textnorm import normalize_label


class ThesaurusStore:
    """Concept graph plus the alignment, referential and description registries."""

    def __init__(
        self,
        *,
        naan: str = "99999",
        prefix: str = "pvt",
        seed: int = 0,
        default_lang: str = "fr",
    ):
        self.schemes: dict[str, ConceptScheme] = {}
        self.concepts: dict[str, Concept] = {}
        self.mappings: dict[str, Mapping] = {}
        self.referentials: dict[str, Referential] = {}
        self.descriptions: dict[str, ArtifactDescription] = {}
        self.default_lang = default_lang
        self.minter = ArkMinter(naan=naan, prefix=prefix, seed=seed)
        self.mapping_counter = 0
        self.referential_counter = 0
        self.lock = threading.RLock()
        # (scheme, lang, normalized text) -> concept id
        self._pref_index: dict[tuple[str, str, str], str] = {}
        # ids of concepts that belong to a frozen referential branch
        self._frozen_ids: set[str] = set()

    # -- lookups -------------------------------------------------------------

    def scheme(self, scheme_id: str) -> ConceptScheme:
        try:
            return self.schemes[scheme_id]
        except KeyError:
            raise UnknownScheme(f"unknown scheme {scheme_id!r}") from None

    def concept(self, concept_id: str) -> Concept:
        try:
            return self.concepts[concept_id]
        except KeyError:
            raise UnknownConcept(f"unknown concept {concept_id!r}") from None

    def concepts_in_scheme(self, scheme_id: str) -> Iterator[Concept]:
        self.scheme(scheme_id)
        for cid in sorted(self.concepts):
            c = self.concepts[cid]
            if c.scheme == scheme_id:
                yield c

    def label_of(self, concept_id: str, lang: str | None = None) -> str:
        """Display label: preferred label in ``lang`` (default language first),
        falling back to any language, then to the id itself."""
        c = self.concept(concept_id)
        lang = lang or self.default_lang
        if lang in c.pref_labels:
            return c.pref_labels[lang].text
        for lg in sorted(c.pref_labels):
            return c.pref_labels[lg].text
        return concept_id

    def find_by_pref_label(self, scheme_id: str, text: str, lang: str | None = None) -> str | None:
        key = (scheme_id, lang or self.default_lang, normalize_label(text))
        return self._pref_index.get(key)

    # -- schemes ---------------------------------------------------------------

    def add_scheme(
        self,
        scheme_id: str,
        title: str,
        profile: Profile = Profile.DOCUMENTARY,
        resolver_base: str | None = None,
    ) -> ConceptScheme:
        with self.lock:
            if scheme_id in self.schemes:
                raise DuplicateScheme(f"scheme {scheme_id!r} already exists")
            scheme = ConceptScheme(id=scheme_id, title=title, profile=profile, resolver_base=resolver_base)
            self.schemes[scheme_id] = scheme
            return scheme

    def set_profile(self, scheme_id: str, profile: Profile) -> None:
        with self.lock:
            self.scheme(scheme_id).profile = profile

    def add_top_concept(self, scheme_id: str, concept_id: str) -> None:
        with self.lock:
            scheme = self.scheme(scheme_id)
            concept = self.concept(concept_id)
            if concept.scheme != scheme_id:
                raise CrossScheme(f"{concept_id} is not in scheme {scheme_id}")
            if concept.broader:
                raise InvalidTopConcept(f"{concept_id} has broader concepts")
            scheme.top_concepts.add(concept_id)

    # -- concepts --------------------------------------------------------------

    def add_concept(
        self,
        scheme_id: str,
        pref_label: Label,
        definition: Definition | None = None,
        *,
        ark: str | None = None,
    ) -> str:
        """Create a concept; it stays an orphan until linked into the hierarchy."""
        with self.lock:
            self.scheme(scheme_id)
            key = (scheme_id, pref_label.lang, normalize_label(pref_label.text))
            if key in self._pref_index:
                raise DuplicatePrefLabel(
                    f"label {pref_label.text!r}@{pref_label.lang} already used by {self._pref_index[key]}"
                )
            if ark is None:
                ark = self.minter.mint(taken=self.concepts.__contains__)
            elif ark in self.concepts:
                raise DuplicateConcept(f"concept id {ark!r} already exists")
            elif not ark:
                raise DuplicateConcept("concept id must not be empty")
            concept = Concept(id=ark, scheme=scheme_id, pref_labels={pref_label.lang: pref_label})
            if definition is not None:
                concept.definition = definition.canonical()
            self.concepts[ark] = concept
            self._pref_index[key] = ark
            return ark

    def add_alt_label(self, concept_id: str, label: Label) -> None:
        with self.lock:
            c = self.concept(concept_id)
            self._check_not_frozen(concept_id)
            own = c.pref_labels.get(label.lang)
            if own is not None and normalize_label(own.text) == normalize_label(label.text):
                raise InvalidLabel(f"alt label {label.text!r} equals the preferred label")
            if label not in c.alt_labels:
                c.alt_labels.append(label)
                c.alt_labels.sort()

    def set_definition(self, concept_id: str, definition: Definition | None) -> None:
        with self.lock:
            self.concept(concept_id)
            self._check_not_frozen(concept_id)
            self.concepts[concept_id].definition = definition.canonical() if definition else None

    def delete_concept(self, concept_id: str) -> None:
        """Remove a concept and detach its relations. Mappings and artifact
        descriptions keep the dangling id; check_mappings / expansion flag them."""
        with self.lock:
            c = self.concept(concept_id)
            self._check_not_frozen(concept_id)
            for pid in c.broader:
                self.concepts[pid].narrower.discard(concept_id)
            for kid in c.narrower:
                self.concepts[kid].broader.discard(concept_id)
            for rid in c.related:
                self.concepts[rid].related.discard(concept_id)
            self.schemes[c.scheme].top_concepts.discard(concept_id)
            for lg, lb in c.pref_labels.items():
                self._pref_index.pop((c.scheme, lg, normalize_label(lb.text)), None)
            del self.concepts[concept_id]

    # -- relations ---------------------------------------------------------------

    def add_hierarchical_relation(self, parent_id: str, child_id: str) -> None:
        """Make ``parent`` a broader concept of ``child`` (polyhierarchy allowed)."""
        with self.lock:
            parent = self.concept(parent_id)
            child = self.concept(child_id)
            if parent.scheme != child.scheme:
                raise CrossScheme(f"{parent_id} and {child_id} are in different schemes")
            if parent_id == child_id or parent_id in self.descendants(child_id):
                raise CycleDetected(f"{parent_id} -> {child_id} would close a hierarchy cycle")
            self._check_not_frozen(parent_id, child_id)
            child.broader.add(parent_id)
            parent.narrower.add(child_id)
            # a concept with a broader link can no longer be a top concept
            self.schemes[child.scheme].top_concepts.discard(child_id)

    def add_associative_relation(self, a_id: str, b_id: str) -> None:
        """Reciprocal non-hierarchical link; idempotent."""
        with self.lock:
            a = self.concept(a_id)
            b = self.concept(b_id)
            if a_id == b_id:
                raise SelfRelation(f"{a_id} cannot be related to itself")
            if a.scheme != b.scheme:
                raise CrossScheme("associative relations stay within one scheme; use a mapping")
            if b_id in self.ancestors(a_id) or b_id in self.descendants(a_id):
                raise HierarchicallyLinked(f"{a_id} and {b_id} are hierarchically linked")
            self._check_not_frozen(a_id, b_id)
            a.related.add(b_id)
            b.related.add(a_id)

    # -- traversal ---------------------------------------------------------------

    def ancestors(self, concept_id: str) -> set[str]:
        """Transitive broader closure (cycle-safe)."""
        self.concept(concept_id)
        seen: set[str] = set()
        stack = [concept_id]
        while stack:
            for pid in self.concepts[stack.pop()].broader:
                if pid not in seen and pid in self.concepts:
                    seen.add(pid)
                    stack.append(pid)
        return seen

    def descendants(self, concept_id: str) -> set[str]:
        """Transitive narrower closure (cycle-safe)."""
        self.concept(concept_id)
        seen: set[str] = set()
        stack = [concept_id]
        while stack:
            for kid in self.concepts[stack.pop()].narrower:
                if kid not in seen and kid in self.concepts:
                    seen.add(kid)
                    stack.append(kid)
        return seen

    def paths_to_top(self, concept_id: str) -> list[str]:
        """All broader-chains from the concept up to a top concept, rendered
        root-first with " > " separators and sorted lexicographically."""
        concept = self.concept(concept_id)
        tops = self.schemes[concept.scheme].top_concepts
        chains: list[list[str]] = []

        def climb(node_id: str, below: list[str], seen: frozenset[str]) -> None:
            chain = [node_id, *below]
            if node_id in tops:
                chains.append(chain)
                return
            for pid in sorted(self.concepts[node_id].broader):
                if pid in seen or pid not in self.concepts:
                    continue
                climb(pid, chain, seen | {pid})

        climb(concept_id, [], frozenset({concept_id}))
        rendered = {" > ".join(self.label_of(cid) for cid in chain) for chain in chains}
        return sorted(rendered)

    # -- id helpers ----------------------------------------------------------------

    def next_mapping_id(self) -> str:
        self.mapping_counter += 1
        return f"m{self.mapping_counter:06d}"

    def next_referential_id(self) -> str:
        self.referential_counter += 1
        return f"ref{self.referential_counter:03d}"

    # -- freeze support ---------------------------------------------------------------

    def mark_frozen(self, concept_ids: Iterable[str]) -> None:
        self._frozen_ids.update(concept_ids)

    def _check_not_frozen(self, *concept_ids: str) -> None:
        for cid in concept_ids:
            if cid in self._frozen_ids:
                raise FrozenReferential(f"{cid} belongs to a frozen referential")

    # -- maintenance --------------------------------------------------------------------

    def reindex(self) -> None:
        """Rebuild the label index and the frozen set after a bulk load."""
        self._pref_index.clear()
        for c in self.concepts.values():
            for lg, lb in c.pref_labels.items():
                self._pref_index[(c.scheme, lg, normalize_label(lb.text))] = c.id
        self._frozen_ids.clear()
        from .referential import referential_members  # cycle-free at call time

        for ref in self.referentials.values():
            if ref.frozen:
                self._frozen_ids.update(referential_members(self, ref.id))

    def register_mapping(self, mapping: Mapping) -> None:
        """Low-level insertion used by imports; invariants are the caller's job."""
        self.mappings[mapping.id] = mapping
