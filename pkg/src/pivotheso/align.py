"""Cross-scheme alignment: mappings, conflict checks, candidate suggestion.

Match semantics follow ISO 25964-2 / SKOS. A broadMatch stored source→target
means the target is the broader concept; accepting it materializes the
narrowMatch back-link in the same step. Symmetric types (exact, close,
related) materialize a same-typed inverse.

Suggestions come in three tiers: exact label equality after normalization,
equality once the trailing "(AUTHOR 2021)" citation is stripped, and token
overlap (Jaccard over content words). Label equality alone never yields an
exactMatch recommendation: the definitions must agree too, otherwise the
generic/specific gap is assumed and broadMatch is recommended.
"""

from __future__ import annotations

from .errors import (
    AlreadyDecided,
    ConflictingType,
    CycleDetected,
    DuplicateAccepted,
    DuplicatePrefLabel,
    SameScheme,
    SelfRelation,
    UnknownMapping,
    UnknownMember,
)
from .model import (
    INVERSE_MATCH,
    Diagnostic,
    Label,
    Mapping,
    MappingStatus,
    MatchType,
    Severity,
    SuggestionCandidate,
    Tier,
)
from .store import ThesaurusStore
from .textnorm import jaccard, normalize_label, normalize_stripped, tokenize

#: Minimum token-set Jaccard for a tier-3 candidate.
DEFAULT_MIN_SCORE = 0.5
#: Definition-token Jaccard required before tiers 1-2 recommend exactMatch.
EXACTNESS_THRESHOLD = 0.6

_SCORE_BY_TIER = {Tier.EXACT_NORMALIZED: 1.0, Tier.EXACT_STRIPPED: 0.95}


# -- accepted mappings --------------------------------------------------------

def add_mapping(
    store: ThesaurusStore,
    source: str,
    target: str,
    match_type: MatchType,
    *,
    score: float | None = None,
    rationale: str = "",
) -> Mapping:
    """Store an accepted mapping and its inverse link atomically."""
    with store.lock:
        src = store.concept(source)
        tgt = store.concept(target)
        if source == target:
            raise SelfRelation("a mapping needs two distinct concepts")
        if src.scheme == tgt.scheme:
            raise SameScheme(f"{source} and {target} are both in scheme {src.scheme}")
        inverse_type = INVERSE_MATCH[match_type]
        _check_pair_free(store, source, target, match_type)
        inverse_existing = _accepted_for(store, target, source)
        if inverse_existing is not None and inverse_existing.match_type is not inverse_type:
            raise ConflictingType(
                f"{target} -> {source} already accepted as {inverse_existing.match_type.value}"
            )
        forward = Mapping(
            id=store.next_mapping_id(), source=source, target=target,
            match_type=match_type, status=MappingStatus.ACCEPTED,
            score=score, rationale=rationale,
        )
        store.mappings[forward.id] = forward
        if inverse_existing is None:
            inverse = Mapping(
                id=store.next_mapping_id(), source=target, target=source,
                match_type=inverse_type, status=MappingStatus.ACCEPTED,
                score=score, rationale=f"inverse of {forward.id}",
            )
            store.mappings[inverse.id] = inverse
        return forward


def _accepted_for(store: ThesaurusStore, source: str, target: str) -> Mapping | None:
    for mid in sorted(store.mappings):
        m = store.mappings[mid]
        if m.status is MappingStatus.ACCEPTED and m.source == source and m.target == target:
            return m
    return None


def _check_pair_free(store: ThesaurusStore, source: str, target: str, match_type: MatchType) -> None:
    existing = _accepted_for(store, source, target)
    if existing is not None:
        if existing.match_type is match_type:
            raise DuplicateAccepted(f"{source} -> {target} already accepted as {match_type.value}")
        raise ConflictingType(
            f"{source} -> {target} already accepted as {existing.match_type.value}"
        )


def inverse_of(store: ThesaurusStore, mapping_id: str) -> Mapping | None:
    """The accepted back-link of an accepted mapping, if present."""
    m = store.mappings.get(mapping_id)
    if m is None or m.status is not MappingStatus.ACCEPTED:
        return None
    want = INVERSE_MATCH[m.match_type]
    for mid in sorted(store.mappings):
        other = store.mappings[mid]
        if (
            other.status is MappingStatus.ACCEPTED
            and other.source == m.target
            and other.target == m.source
            and other.match_type is want
        ):
            return other
    return None


# -- consistency checks ---------------------------------------------------------

def check_mappings(store: ThesaurusStore) -> list[Diagnostic]:
    """Mapping-level diagnostics M1-M4 over the whole store."""
    out: list[Diagnostic] = []
    accepted = [store.mappings[mid] for mid in sorted(store.mappings)
                if store.mappings[mid].status is MappingStatus.ACCEPTED]

    # M1: a pair carrying both an equivalence and a hierarchical reading.
    # Directions are folded: narrowMatch(b->a) counts as broadMatch(a->b).
    by_pair: dict[tuple[str, str], set[MatchType]] = {}
    for m in accepted:
        if m.match_type is MatchType.NARROW:
            key, folded = (m.target, m.source), MatchType.BROAD
        else:
            key, folded = (m.source, m.target), m.match_type
        key = tuple(sorted(key))
        by_pair.setdefault(key, set()).add(folded)
    for pair in sorted(by_pair):
        types = by_pair[pair]
        if MatchType.EXACT in types and MatchType.BROAD in types:
            out.append(Diagnostic(
                rule="M1", subjects=pair, severity=Severity.ERROR,
                message="pair is mapped both as exactMatch and as a hierarchical match",
            ))

    # M2: missing inverse link.
    accepted_keys = {(m.source, m.target, m.match_type) for m in accepted}
    for m in accepted:
        want = INVERSE_MATCH[m.match_type]
        if (m.target, m.source, want) not in accepted_keys:
            out.append(Diagnostic(
                rule="M2", subjects=(m.source, m.target), severity=Severity.ERROR,
                message=f"{m.match_type.value} {m.source} -> {m.target} lacks its {want.value} inverse",
            ))

    # M3: over-equivalence of one source into a single target scheme.
    exact_targets: dict[tuple[str, str], list[str]] = {}
    for m in accepted:
        if m.match_type is MatchType.EXACT and m.target in store.concepts:
            key = (m.source, store.concepts[m.target].scheme)
            exact_targets.setdefault(key, []).append(m.target)
    for (source, _scheme), targets in sorted(exact_targets.items()):
        if len(targets) > 1:
            out.append(Diagnostic(
                rule="M3", subjects=(source, *sorted(targets)), severity=Severity.WARNING,
                message="source has several accepted exactMatch links into one scheme",
            ))

    # M4: endpoints that no longer resolve.
    for m in accepted:
        missing = [cid for cid in (m.source, m.target) if cid not in store.concepts]
        if missing:
            out.append(Diagnostic(
                rule="M4", subjects=(m.source, m.target), severity=Severity.ERROR,
                message=f"mapping {m.id} references deleted concept(s) {', '.join(missing)}",
            ))
    return sorted(out)


# -- suggestion ---------------------------------------------------------------------

def is_chronology_concept(store: ThesaurusStore, concept_id: str) -> bool:
    """True when the concept lives under a periodisation / chronology branch.

    Detection is lexical: the concept or one of its ancestors has a label
    whose citation-stripped form starts with "periodisation" or contains the
    token "chronologie". Chronology concepts are kept out of cross-scheme
    suggestions; period systems rarely have genuine counterparts in subject
    thesauri.
    """
    for cid in [concept_id, *sorted(store.ancestors(concept_id))]:
        c = store.concepts.get(cid)
        if c is None:
            continue
        for lb in c.pref_labels.values():
            stripped = normalize_stripped(lb.text)
            if stripped.startswith("periodisation") or "chronologie" in tokenize(lb.text):
                return True
    return False


def _definition_jaccard(store: ThesaurusStore, a: str, b: str) -> float | None:
    da, db = store.concepts[a].definition, store.concepts[b].definition
    if da is None or db is None:
        return None
    return jaccard(tokenize(da.text), tokenize(db.text))


def suggest_mappings(
    store: ThesaurusStore,
    source_scheme: str,
    target_scheme: str,
    min_score: float = DEFAULT_MIN_SCORE,
) -> list[SuggestionCandidate]:
    """Deterministic candidate list, best tier per (source, target) pair.

    Pairs already decided (accepted or rejected, in either direction) are
    never re-emitted.
    """
    store.scheme(source_scheme)
    store.scheme(target_scheme)
    if source_scheme == target_scheme:
        raise SameScheme("source and target schemes must differ")

    decided = {
        frozenset((m.source, m.target))
        for m in store.mappings.values()
        if m.status in (MappingStatus.ACCEPTED, MappingStatus.REJECTED)
    }

    sources = [c for c in store.concepts_in_scheme(source_scheme)
               if c.labels() and not is_chronology_concept(store, c.id)]
    targets = [c for c in store.concepts_in_scheme(target_scheme)
               if c.labels() and not is_chronology_concept(store, c.id)]

    rows: list[tuple] = []
    for src in sources:
        src_norm = {normalize_label(lb.text) for lb in src.labels()}
        src_stripped = {normalize_stripped(lb.text) for lb in src.labels()}
        src_tokens = [tokenize(lb.text, strip_citation=True) for lb in src.labels()]
        for tgt in targets:
            if frozenset((src.id, tgt.id)) in decided:
                continue
            tgt_norm = {normalize_label(lb.text) for lb in tgt.labels()}
            if src_norm & tgt_norm:
                tier = Tier.EXACT_NORMALIZED
            elif src_stripped & {normalize_stripped(lb.text) for lb in tgt.labels()}:
                tier = Tier.EXACT_STRIPPED
            else:
                tier = Tier.TOKEN_OVERLAP

            def_j = _definition_jaccard(store, src.id, tgt.id)
            if tier is not Tier.TOKEN_OVERLAP:
                exact_ok = def_j is not None and def_j >= EXACTNESS_THRESHOLD
                recommended = MatchType.EXACT if exact_ok else MatchType.BROAD
                rows.append((src.id, tier, _SCORE_BY_TIER[tier], def_j or 0.0, tgt.id, recommended))
                continue

            best = 0.0
            best_pair: tuple[frozenset[str], frozenset[str]] | None = None
            for st in src_tokens:
                if not st:
                    continue
                for lb in tgt.labels():
                    tt = tokenize(lb.text, strip_citation=True)
                    if not tt:
                        continue
                    j = jaccard(st, tt)
                    if j > best:
                        best, best_pair = j, (st, tt)
            if best_pair is None or best < min_score:
                continue
            st, tt = best_pair
            subset = st <= tt or tt <= st
            recommended = MatchType.BROAD if subset else MatchType.RELATED
            rows.append((src.id, tier, best, def_j or 0.0, tgt.id, recommended))

    rows.sort(key=lambda r: (r[0], r[1].rank, -r[2], -r[3], r[4]))
    return [
        SuggestionCandidate(source=s, target=t, tier=tier, score=round(score, 6), recommended=rec)
        for (s, tier, score, _dj, t, rec) in rows
    ]


def record_suggestions(store: ThesaurusStore, candidates: list[SuggestionCandidate]) -> list[Mapping]:
    """Persist candidates as suggested mappings (idempotent per pair)."""
    with store.lock:
        existing: dict[tuple[str, str], Mapping] = {
            (m.source, m.target): m
            for m in store.mappings.values()
            if m.status is MappingStatus.SUGGESTED
        }
        out = []
        for cand in candidates:
            m = existing.get((cand.source, cand.target))
            if m is None:
                m = Mapping(
                    id=store.next_mapping_id(), source=cand.source, target=cand.target,
                    match_type=cand.recommended, status=MappingStatus.SUGGESTED,
                    score=cand.score, tier=cand.tier,
                    rationale=f"suggested at tier {cand.tier.value} (score {cand.score})",
                )
                store.mappings[m.id] = m
            else:
                m.match_type = cand.recommended
                m.score = cand.score
                m.tier = cand.tier
                m.rationale = f"suggested at tier {cand.tier.value} (score {cand.score})"
            out.append(m)
        return out


def decide(
    store: ThesaurusStore,
    mapping_id: str,
    decision: str,
    match_type: MatchType | None = None,
) -> Mapping:
    """Accept or reject a suggested mapping.

    Accepting promotes the record and materializes the inverse link, honoring
    a match-type override. Rejected pairs never reappear in suggestions.
    """
    if decision not in ("accept", "reject"):
        raise ValueError(f"decision must be accept or reject, got {decision!r}")
    with store.lock:
        m = store.mappings.get(mapping_id)
        if m is None:
            raise UnknownMapping(f"unknown mapping {mapping_id!r}")
        if m.status is not MappingStatus.SUGGESTED:
            raise AlreadyDecided(f"mapping {mapping_id} is already {m.status.value}")
        if decision == "reject":
            m.status = MappingStatus.REJECTED
            return m
        final_type = match_type or m.match_type
        inverse_type = INVERSE_MATCH[final_type]
        _check_pair_free(store, m.source, m.target, final_type)
        inverse_existing = _accepted_for(store, m.target, m.source)
        if inverse_existing is not None and inverse_existing.match_type is not inverse_type:
            raise ConflictingType(
                f"{m.target} -> {m.source} already accepted as {inverse_existing.match_type.value}"
            )
        m.match_type = final_type
        m.status = MappingStatus.ACCEPTED
        if inverse_existing is None:
            inverse = Mapping(
                id=store.next_mapping_id(), source=m.target, target=m.source,
                match_type=inverse_type, status=MappingStatus.ACCEPTED,
                score=m.score, rationale=f"inverse of {m.id}",
            )
            store.mappings[inverse.id] = inverse
        return m


# -- grouping terms ---------------------------------------------------------------

def create_grouping_concept(
    store: ThesaurusStore,
    scheme_id: str,
    label_core: str,
    members: list[str],
    *,
    branch_root: str | None = None,
    lang: str | None = None,
) -> str:
    """Create an artificial umbrella concept "[label_core]" over ``members``.

    Members gain the grouping term as an extra broader parent (polyhierarchy).
    Without an explicit branch root the grouping term becomes a top concept.
    """
    store.scheme(scheme_id)
    core = label_core.strip()
    if not core:
        raise DuplicatePrefLabel("grouping label must not be empty")
    with store.lock:
        for member in members:
            c = store.concepts.get(member)
            if c is None or c.scheme != scheme_id:
                raise UnknownMember(f"{member!r} is not a concept of scheme {scheme_id}")
        if branch_root is not None:
            store.concept(branch_root)
            beneath = set()
            for member in members:
                beneath |= store.descendants(member) | {member}
            if branch_root in beneath:
                raise CycleDetected(f"branch root {branch_root} lies below a member")
        label = Label(lang=lang or store.default_lang, text=f"[{core}]")
        cid = store.add_concept(scheme_id, label)
        for member in members:
            store.add_hierarchical_relation(cid, member)
        if branch_root is not None:
            store.add_hierarchical_relation(branch_root, cid)
        else:
            store.add_top_concept(scheme_id, cid)
        return cid
