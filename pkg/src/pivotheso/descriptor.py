"""Composite artifact descriptions: forme + type + catégorie + chronologie,
sourced by a referential.

Compatibility is data-driven, not tabular: a type accepts exactly the
categories it is associatively linked to, and a type belongs to a form when
one of its ancestors is a types-group associatively linked to that form
("assiette" <-> "types assiettes"). Chronology must sit in the referential's
periodisation branch.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .errors import (
    AmbiguousLabel,
    DanglingConcept,
    FormTypeMismatch,
    IncompatibleTypeCategory,
    MalformedCsv,
    NotInReferential,
    PivothesoError,
    UnknownConcept,
    UnknownDescription,
)
from .model import ArtifactDescription, CombinationCeiling
from .referential import referential_members, role_heads, role_members
from .store import ThesaurusStore
from .textnorm import normalize_stripped

CSV_HEADER = ["artifact_id", "forme", "type", "categorie", "chronologie"]


class _RefContext:
    """Membership, role heads and label index of one referential, computed
    once and reused across many compose calls."""

    def __init__(self, store: ThesaurusStore, ref_id: str):
        self.store = store
        self.ref_id = ref_id
        self.members = referential_members(store, ref_id)
        self.heads = role_heads(store, ref_id)
        self._ancestors: dict[str, set[str]] = {}
        self._label_index: dict[str, list[str]] | None = None

    def ancestors(self, cid: str) -> set[str]:
        if cid not in self._ancestors:
            self._ancestors[cid] = self.store.ancestors(cid)
        return self._ancestors[cid]

    def under(self, cid: str, role: str) -> bool:
        head = self.heads.get(role)
        return head is not None and head in self.ancestors(cid)

    def resolve(self, cell: str) -> str:
        """Ark first, then unique citation-stripped label among the members."""
        value = cell.strip()
        if not value:
            raise UnknownConcept("empty concept cell")
        if value in self.store.concepts:
            if value not in self.members:
                raise NotInReferential(f"{value!r} is outside the referential")
            return value
        if self._label_index is None:
            index: dict[str, list[str]] = {}
            for cid in sorted(self.members):
                c = self.store.concepts.get(cid)
                if c is None:
                    continue
                seen = set()
                for lb in c.labels():
                    key = normalize_stripped(lb.text)
                    if key not in seen:
                        seen.add(key)
                        index.setdefault(key, []).append(cid)
            self._label_index = index
        hits = self._label_index.get(normalize_stripped(value), [])
        if not hits:
            raise UnknownConcept(f"no referential concept matches {value!r}")
        if len(hits) > 1:
            raise AmbiguousLabel(f"{value!r} matches several concepts: {', '.join(hits)}")
        return hits[0]

    def compose(self, artifact_id: str, forme: str, type_: str,
                categorie: str, chronologie: str) -> ArtifactDescription:
        store = self.store
        roles = {"forme": forme, "type": type_, "categorie": categorie, "chronologie": chronologie}
        for role, cid in roles.items():
            if cid not in self.members:
                raise NotInReferential(f"{role} {cid!r} is not part of referential {self.ref_id}")
        if not self.under(forme, "formes") or not self.under(type_, "types"):
            raise FormTypeMismatch(
                f"{forme!r} / {type_!r} are not a form and a type of {self.ref_id}"
            )
        if not any(g in self.ancestors(type_) for g in store.concepts[forme].related):
            raise FormTypeMismatch(f"type {type_!r} is not under the types branch of form {forme!r}")
        if not self.under(categorie, "categories") or categorie not in store.concepts[type_].related:
            raise IncompatibleTypeCategory(
                f"category {categorie!r} is not associated with type {type_!r}"
            )
        if not self.under(chronologie, "periodisation"):
            raise NotInReferential(
                f"{chronologie!r} is not in the periodisation branch of {self.ref_id}"
            )
        description = ArtifactDescription(
            artifact_id=artifact_id, forme=forme, type_=type_,
            categorie=categorie, chronologie=chronologie, referential=self.ref_id,
        )
        store.descriptions[artifact_id] = description
        return description


def compose_description(
    store: ThesaurusStore,
    artifact_id: str,
    forme: str,
    type_: str,
    categorie: str,
    chronologie: str,
    ref_id: str,
) -> ArtifactDescription:
    """Validate the five-concept combination and store it (replace semantics)."""
    with store.lock:
        return _RefContext(store, ref_id).compose(artifact_id, forme, type_, categorie, chronologie)


def expand_description(store: ThesaurusStore, artifact_id: str) -> dict:
    """Resolve a stored description into a human-readable record per role."""
    try:
        d = store.descriptions[artifact_id]
    except KeyError:
        raise UnknownDescription(f"no description for artifact {artifact_id!r}") from None
    ref = store.referentials.get(d.referential)
    roles = {
        "forme": d.forme,
        "type": d.type_,
        "categorie": d.categorie,
        "chronologie": d.chronologie,
        "referentiel": ref.root_concept if ref else None,
    }
    out: dict = {"artifact_id": d.artifact_id, "referential": d.referential}
    for role, cid in roles.items():
        if cid is None or cid not in store.concepts:
            raise DanglingConcept(f"{role} concept of {artifact_id!r} was deleted")
        c = store.concepts[cid]
        out[role] = {
            "ark": cid,
            "pref_label": store.label_of(cid),
            "definition": c.definition.text if c.definition else None,
            "path": store.paths_to_top(cid),
        }
    return out


def combination_ceiling(store: ThesaurusStore, ref_id: str) -> CombinationCeiling:
    """Theoretical combination ceiling: categories x types (forms reported only)."""
    roles = role_members(store, ref_id)
    return CombinationCeiling(
        n_categories=len(roles.get("categories", ())),
        n_types=len(roles.get("types", ())),
        n_formes=len(roles.get("formes", ())),
    )


def realized_combinations(store: ThesaurusStore, ref_id: str) -> int:
    """Count of (type, category) pairs actually wired by associative links."""
    roles = role_members(store, ref_id)
    categories = roles.get("categories", set())
    return sum(
        len(store.concepts[t].related & categories)
        for t in roles.get("types", set())
    )


@dataclass(frozen=True)
class IngestReject:
    row: int
    error_code: str
    detail: str


def ingest_inventory(
    store: ThesaurusStore, data: bytes, ref_id: str
) -> tuple[list[ArtifactDescription], list[IngestReject]]:
    """Load an inventory CSV; every row is attempted, failures are reported.

    Expected header: artifact_id,forme,type,categorie,chronologie. Concept
    cells hold arks or labels, resolved inside the referential only.
    """
    try:
        text = data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise MalformedCsv(f"inventory is not UTF-8: {exc}") from None
    try:
        reader = csv.reader(io.StringIO(text))
        rows = list(reader)
    except csv.Error as exc:
        raise MalformedCsv(f"unparseable CSV: {exc}") from None
    if not rows:
        raise MalformedCsv("missing header row")
    header = [h.strip() for h in rows[0]]
    if header != CSV_HEADER:
        raise MalformedCsv(f"expected header {','.join(CSV_HEADER)}, got {','.join(header)}")

    with store.lock:
        context = _RefContext(store, ref_id)
        stored: list[ArtifactDescription] = []
        rejects: list[IngestReject] = []
        for index, row in enumerate(rows[1:], start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(CSV_HEADER):
                rejects.append(IngestReject(index, "MalformedCsv", f"expected {len(CSV_HEADER)} cells, got {len(row)}"))
                continue
            artifact_id = row[0].strip()
            if not artifact_id:
                rejects.append(IngestReject(index, "MalformedCsv", "empty artifact_id"))
                continue
            try:
                stored.append(context.compose(
                    artifact_id,
                    context.resolve(row[1]),
                    context.resolve(row[2]),
                    context.resolve(row[3]),
                    context.resolve(row[4]),
                ))
            except PivothesoError as exc:
                rejects.append(IngestReject(index, exc.code, exc.message))
        return stored, rejects


def rejects_report_csv(rejects: list[IngestReject]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["row", "error_code", "detail"])
    for r in rejects:
        writer.writerow([r.row, r.error_code, r.detail])
    return buf.getvalue()
