"""HTTP API over a workspace, plus static hosting for the review UI.

JSON bodies throughout. Unknown ids map to 404, decision/uniqueness
conflicts to 409, other domain failures to 422 with a diagnostic payload.
Mutations persist atomically (temp file + rename) before the response.
"""

from __future__ import annotations

import logging
from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import align as align_ops
from . import descriptor as desc_ops
from . import referential as ref_ops
from . import validator
from .errors import (
    AlreadyDecided,
    ConflictingType,
    DuplicateAccepted,
    PivothesoError,
    UnknownConcept,
    UnknownDescription,
    UnknownMapping,
    UnknownReferential,
    UnknownScheme,
)
from .model import Concept, MappingStatus, MatchType, Severity
from .store import ThesaurusStore
from .workspace import Workspace

logger = logging.getLogger(__name__)

_NOT_FOUND = (UnknownScheme, UnknownConcept, UnknownMapping, UnknownReferential, UnknownDescription)
_CONFLICT = (DuplicateAccepted, AlreadyDecided, ConflictingType)


class MappingBody(BaseModel):
    source: str
    target: str
    match_type: MatchType


class DecisionBody(BaseModel):
    decision: str
    match_type: MatchType | None = None


def _concept_payload(store: ThesaurusStore, c: Concept) -> dict:
    return {
        "ark": c.id,
        "scheme": c.scheme,
        "pref_labels": {lg: c.pref_labels[lg].text for lg in sorted(c.pref_labels)},
        "alt_labels": [{"lang": lb.lang, "text": lb.text} for lb in sorted(c.alt_labels)],
        "definition": None if c.definition is None else {
            "text": c.definition.text,
            "sources": list(c.definition.sources),
            "external_resources": list(c.definition.external_resources),
        },
        "broader": sorted(c.broader),
        "narrower": sorted(c.narrower),
        "related": [
            {"ark": rid, "label": store.label_of(rid)} for rid in sorted(c.related)
        ],
        "is_grouping": c.is_grouping,
    }


def _mapping_payload(store: ThesaurusStore, m) -> dict:
    def label(cid):
        return store.label_of(cid) if cid in store.concepts else None

    inverse = align_ops.inverse_of(store, m.id)
    return {
        "id": m.id,
        "source": m.source,
        "source_label": label(m.source),
        "target": m.target,
        "target_label": label(m.target),
        "match_type": m.match_type.value,
        "status": m.status.value,
        "score": m.score,
        "tier": m.tier.value if m.tier else None,
        "rationale": m.rationale,
        "inverse_id": inverse.id if inverse else None,
    }


def _queue_item(store: ThesaurusStore, m) -> dict:
    def side(cid):
        c = store.concepts[cid]
        return {
            "ark": cid,
            "label": store.label_of(cid),
            "definition": c.definition.text if c.definition else None,
            "paths": store.paths_to_top(cid),
        }

    return {
        "mapping_id": m.id,
        "source": side(m.source),
        "target": side(m.target),
        "tier": m.tier.value if m.tier else None,
        "score": m.score,
        "recommended": m.match_type.value,
    }


def create_app(workspace: Workspace) -> FastAPI:
    app = FastAPI(title="pivotheso", version="0.1.0")
    store = workspace.store

    @app.exception_handler(PivothesoError)
    async def domain_error_handler(request: Request, exc: PivothesoError):
        if isinstance(exc, _NOT_FOUND):
            status = 404
        elif isinstance(exc, _CONFLICT):
            status = 409
        else:
            status = 422
        return JSONResponse(
            status_code=status,
            content={
                "error": exc.code,
                "detail": exc.message,
                "diagnostic": {"rule": exc.code, "severity": "error",
                               "subjects": [], "message": exc.message},
            },
        )

    @app.get("/api/schemes")
    def list_schemes(offset: int = 0, limit: int = Query(200, le=1000)):
        ids = sorted(store.schemes)
        page = ids[offset:offset + limit]
        return {
            "total": len(ids),
            "items": [
                {
                    "id": sid,
                    "title": store.schemes[sid].title,
                    "profile": store.schemes[sid].profile.value,
                    "top_concepts": sorted(store.schemes[sid].top_concepts),
                }
                for sid in page
            ],
        }

    @app.get("/api/concepts/{ark:path}/paths")
    def concept_paths(ark: str):
        return {"ark": ark, "paths": store.paths_to_top(ark)}

    @app.get("/api/concepts/{ark:path}")
    def concept_detail(ark: str):
        return _concept_payload(store, store.concept(ark))

    @app.get("/api/schemes/{scheme_id}/tree")
    def scheme_tree(scheme_id: str, root: str | None = None, depth: int = Query(2, ge=1, le=10)):
        scheme = store.scheme(scheme_id)

        def node(cid: str, remaining: int) -> dict:
            c = store.concept(cid)
            children = sorted(c.narrower, key=lambda k: (store.label_of(k), k))
            return {
                "ark": cid,
                "label": store.label_of(cid),
                "is_grouping": c.is_grouping,
                "narrower_count": len(children),
                "children": [node(k, remaining - 1) for k in children] if remaining > 0 else None,
            }

        if root is not None:
            c = store.concept(root)
            if c.scheme != scheme_id:
                raise UnknownConcept(f"{root} is not in scheme {scheme_id}")
            roots = [root]
        else:
            roots = sorted(scheme.top_concepts, key=lambda k: (store.label_of(k), k))
        return {"scheme": scheme_id, "roots": [node(r, depth) for r in roots]}

    @app.post("/api/validate/{scheme_id}")
    def validate_scheme(scheme_id: str):
        diagnostics = validator.validate(store, scheme_id)
        return {
            "scheme": scheme_id,
            "errors": sum(1 for d in diagnostics if d.severity is Severity.ERROR),
            "warnings": sum(1 for d in diagnostics if d.severity is Severity.WARNING),
            "diagnostics": [d.as_dict() for d in diagnostics],
        }

    @app.get("/api/suggestions")
    def suggestions(src: str, tgt: str, min_score: float = align_ops.DEFAULT_MIN_SCORE,
                    offset: int = 0, limit: int = Query(200, le=1000)):
        candidates = align_ops.suggest_mappings(store, src, tgt, min_score)
        with workspace.mutate():
            persisted = align_ops.record_suggestions(store, candidates)
        page = persisted[offset:offset + limit]
        return {"total": len(persisted), "items": [_queue_item(store, m) for m in page]}

    @app.get("/api/mappings")
    def list_mappings(status: str | None = None, offset: int = 0, limit: int = Query(200, le=1000)):
        wanted = MappingStatus(status) if status else None
        ids = [mid for mid in sorted(store.mappings)
               if wanted is None or store.mappings[mid].status is wanted]
        page = ids[offset:offset + limit]
        return {
            "total": len(ids),
            "items": [_mapping_payload(store, store.mappings[mid]) for mid in page],
        }

    @app.post("/api/mappings")
    def post_mapping(body: MappingBody):
        with workspace.mutate():
            mapping = align_ops.add_mapping(store, body.source, body.target, body.match_type)
        return _mapping_payload(store, mapping)

    @app.post("/api/mappings/{mapping_id}/decision")
    def post_decision(mapping_id: str, body: DecisionBody):
        if body.decision not in ("accept", "reject"):
            raise UnknownMapping(f"decision must be accept or reject, got {body.decision!r}")
        with workspace.mutate():
            mapping = align_ops.decide(store, mapping_id, body.decision, body.match_type)
        return _mapping_payload(store, mapping)

    @app.get("/api/referentials/{ref_id}/diff/{other_id}")
    def referential_diff(ref_id: str, other_id: str):
        diff = ref_ops.diff_referentials(store, ref_id, other_id)
        return {
            "old": ref_id,
            "new": other_id,
            "added": sorted(diff.added),
            "removed": sorted(diff.removed),
            "redefined": [list(t) for t in sorted(diff.redefined)],
            "moved": [list(t) for t in sorted(diff.moved)],
        }

    @app.get("/api/referentials/{ref_id}")
    def referential_detail(ref_id: str):
        if ref_id not in store.referentials:
            raise UnknownReferential(f"unknown referential {ref_id!r}")
        r = store.referentials[ref_id]
        ceiling = desc_ops.combination_ceiling(store, ref_id)
        return {
            "id": r.id, "scheme": r.scheme, "root_concept": r.root_concept,
            "biblio_key": r.biblio_key, "millesime": r.millesime,
            "keywords": list(r.keywords), "frozen": r.frozen,
            "role_counts": dict(sorted(r.role_counts.items())),
            "ceiling": ceiling.ceiling,
        }

    @app.get("/api/descriptions/{artifact_id}")
    def description_detail(artifact_id: str):
        return desc_ops.expand_description(store, artifact_id)

    ui_dir = workspace.config.ui_dir
    if ui_dir is None:
        candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        ui_dir = candidate if candidate.is_dir() else None
    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")
        logger.info("serving review UI from %s", ui_dir)

    return app
