"""Versioned, bibliographically sourced vocabulary snapshots.

A referential is anchored on a root concept (e.g. the "vaisselle céramique
(BARRIER, LUGINBÜHL 2021)" node). Its membership is the root's own subtree
plus the subtrees of the branch heads the root is associatively linked to:
that is exactly how the source publication wires the referential concept to
its catégories / types / périodisation / vaisselle branches.

Member roles (catégorie, forme, type, périodisation) are the *leaf* concepts
under the conventionally named heads inside the membership; intermediate
grouping levels are not counted.
"""

from __future__ import annotations

from .errors import (
    AlreadyFrozen,
    CrossScheme,
    DuplicateReferential,
    InvalidMillesime,
        UnknownReferential,
)
from .model import Referential, ReferentialDiff
from .store import ThesaurusStore
from .textnorm import fnv1a64, normalize_stripped

#: stripped-label head names -> role
ROLE_HEADS = {"categories": "categories", "formes": "formes", "types": "types"}
PERIODISATION_PREFIX = "periodisation"


def referential_members(store: ThesaurusStore, ref_id: str) -> set[str]:
    """All concept ids covered by the referential."""
    ref = _referential(store, ref_id)
    root = store.concepts.get(ref.root_concept)
    if root is None:
        return set()
    members = {root.id} | store.descendants(root.id)
    for head in sorted(root.related):
        if head in store.concepts:
            members |= {head} | store.descendants(head)
    return members


def role_heads(store: ThesaurusStore, ref_id: str) -> dict[str, str]:
    """Map role name -> head concept id, resolved inside the membership."""
    heads: dict[str, str] = {}
    for cid in sorted(referential_members(store, ref_id)):
        c = store.concepts.get(cid)
        if c is None:
            continue
        for lb in c.pref_labels.values():
            stripped = normalize_stripped(lb.text)
            if stripped in ROLE_HEADS and ROLE_HEADS[stripped] not in heads:
                heads[ROLE_HEADS[stripped]] = cid
            elif stripped.startswith(PERIODISATION_PREFIX) and "periodisation" not in heads:
                heads["periodisation"] = cid
    return heads


def role_members(store: ThesaurusStore, ref_id: str) -> dict[str, set[str]]:
    """Leaf concepts per role. A leaf has no narrower concepts."""
    members = referential_members(store, ref_id)
    out: dict[str, set[str]] = {}
    for role, head in role_heads(store, ref_id).items():
        leaves = {
            cid for cid in (store.descendants(head) & members)
            if not store.concepts[cid].narrower
        }
        out[role] = leaves
    return out


def role_counts(store: ThesaurusStore, ref_id: str) -> dict[str, int]:
    return {role: len(ids) for role, ids in sorted(role_members(store, ref_id).items())}


def register_referential(
    store: ThesaurusStore,
    scheme_id: str,
    root_concept: str,
    biblio_key: str,
    millesime: int,
    *,
    ref_id: str | None = None,
    keywords: list[str] | None = None,
) -> Referential:
    """Record a millésimé referential anchored on ``root_concept``."""
    with store.lock:
        store.scheme(scheme_id)
        root = store.concept(root_concept)
        if root.scheme != scheme_id:
            raise CrossScheme(f"{root_concept} is not in scheme {scheme_id}")
        if not biblio_key.strip():
            raise InvalidMillesime("biblio_key must not be empty")
        if not (1800 <= millesime <= 2100):
            raise InvalidMillesime(f"millesime {millesime} outside the plausible 1800-2100 range")
        for ref in store.referentials.values():
            if (ref.scheme, ref.biblio_key, ref.millesime) == (scheme_id, biblio_key, millesime):
                raise DuplicateReferential(
                    f"referential for {biblio_key!r} ({millesime}) already registered"
                )
        if ref_id is None:
            ref_id = store.next_referential_id()
        elif ref_id in store.referentials:
            raise DuplicateReferential(f"referential id {ref_id!r} already exists")
        ref = Referential(
            id=ref_id, scheme=scheme_id, root_concept=root_concept,
            biblio_key=biblio_key.strip(), millesime=millesime,
            keywords=list(keywords or []),
        )
        store.referentials[ref_id] = ref
        ref.role_counts = role_counts(store, ref_id)
        return ref


def freeze(store: ThesaurusStore, ref_id: str) -> None:
    """Freeze the branch: member concepts reject any further edit."""
    with store.lock:
        ref = _referential(store, ref_id)
        if ref.frozen:
            raise AlreadyFrozen(f"referential {ref_id} is already frozen")
        ref.frozen = True
        store.mark_frozen(referential_members(store, ref_id))


def _referential(store: ThesaurusStore, ref_id: str) -> Referential:
    try:
        return store.referentials[ref_id]
    except KeyError:
        raise UnknownReferential(f"unknown referential {ref_id!r}") from None


def _member_paths(store: ThesaurusStore, ref_id: str, concept_id: str) -> str:
    """Paths from the referential root (or a branch head) down to the concept,
    keyed on citation-stripped labels so editions compare across years."""
    ref = _referential(store, ref_id)
    anchors = {ref.root_concept}
    root = store.concepts.get(ref.root_concept)
    if root is not None:
        anchors |= set(root.related)
    paths: list[str] = []

    def climb(cid: str, below: list[str], seen: frozenset[str]) -> None:
        chain = [cid, *below]
        if cid in anchors:
            paths.append(" > ".join(normalize_stripped(store.label_of(x)) for x in chain))
            return
        for pid in sorted(store.concepts[cid].broader):
            if pid not in seen and pid in store.concepts:
                climb(pid, chain, seen | {pid})

    climb(concept_id, [], frozenset({concept_id}))
    return " | ".join(sorted(set(paths)))


def diff_referentials(store: ThesaurusStore, old_id: str, new_id: str) -> ReferentialDiff:
    """Compare two referential branches keyed on citation-stripped labels."""
    _referential(store, old_id)
    _referential(store, new_id)

    def snapshot(ref_id: str) -> dict[str, tuple[str, str]]:
        snap: dict[str, tuple[str, str]] = {}
        for cid in sorted(referential_members(store, ref_id)):
            c = store.concepts.get(cid)
            if c is None or not c.pref_labels:
                continue
            key = normalize_stripped(store.label_of(cid))
            if key in snap:
                continue  # first (lowest id) occurrence wins on label clashes
            digest = fnv1a64(c.definition.text) if c.definition else ""
            snap[key] = (digest, _member_paths(store, ref_id, cid))
        return snap

    old = snapshot(old_id)
    new = snapshot(new_id)
    added = frozenset(new.keys() - old.keys())
    removed = frozenset(old.keys() - new.keys())
    redefined = set()
    moved = set()
    for label in old.keys() & new.keys():
        (od, op), (nd, np) = old[label], new[label]
        if od != nd:
            redefined.add((label, od, nd))
        if op != np:
            moved.add((label, op, np))
    return ReferentialDiff(
        added=added, removed=removed,
        redefined=frozenset(redefined), moved=frozenset(moved),
    )
