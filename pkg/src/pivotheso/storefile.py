"""Native JSON store format (format_version 1).

Lossless: carries everything Turtle cannot (profiles, mapping decisions,
referentials with millésimes, artifact descriptions, id-minting state).
Writing is canonical — sorted keys, sorted lists, LF — and idempotent:
``write(read(x)) == x`` for canonical input.
"""

from __future__ import annotations

import json

from .errors import CorruptStore, FormatVersionMismatch, InvalidLabel
from .model import (
    ArtifactDescription,
    Concept,
    ConceptScheme,
    Definition,
    Label,
    Mapping,
    MappingStatus,
    MatchType,
    Profile,
    Referential,
    Tier,
)
from .store import ThesaurusStore

FORMAT_VERSION = 1


def write_store(store: ThesaurusStore) -> bytes:
    payload = {
        "format_version": FORMAT_VERSION,
        "default_lang": store.default_lang,
        "ark": {
            "naan": store.minter.naan,
            "prefix": store.minter.prefix,
            "seed": store.minter.seed,
            "counter": store.minter.counter,
        },
        "counters": {
            "mapping": store.mapping_counter,
            "referential": store.referential_counter,
        },
        "schemes": [
            {
                "id": s.id,
                "title": s.title,
                "profile": s.profile.value,
                "top_concepts": sorted(s.top_concepts),
                "resolver_base": s.resolver_base,
            }
            for s in (store.schemes[sid] for sid in sorted(store.schemes))
        ],
        "concepts": [
            {
                "ark": c.id,
                "scheme": c.scheme,
                "pref_labels": {lg: c.pref_labels[lg].text for lg in sorted(c.pref_labels)},
                "alt_labels": [[lb.lang, lb.text] for lb in sorted(c.alt_labels)],
                "definition": (
                    None if c.definition is None else {
                        "text": c.definition.text,
                        "sources": sorted(set(c.definition.sources)),
                        "external_resources": sorted(set(c.definition.external_resources)),
                    }
                ),
                "broader": sorted(c.broader),
                "related": sorted(c.related),
            }
            for c in (store.concepts[cid] for cid in sorted(store.concepts))
        ],
        "mappings": [
            {
                "id": m.id,
                "source": m.source,
                "target": m.target,
                "match_type": m.match_type.value,
                "status": m.status.value,
                "score": m.score,
                "rationale": m.rationale,
                "tier": m.tier.value if m.tier else None,
            }
            for m in (store.mappings[mid] for mid in sorted(store.mappings))
        ],
        "referentials": [
            {
                "id": r.id,
                "scheme": r.scheme,
                "root_concept": r.root_concept,
                "biblio_key": r.biblio_key,
                "millesime": r.millesime,
                "keywords": list(r.keywords),
                "frozen": r.frozen,
                "role_counts": {k: r.role_counts[k] for k in sorted(r.role_counts)},
            }
            for r in (store.referentials[rid] for rid in sorted(store.referentials))
        ],
        "descriptions": [
            {
                "artifact_id": d.artifact_id,
                "forme": d.forme,
                "type": d.type_,
                "categorie": d.categorie,
                "chronologie": d.chronologie,
                "referential": d.referential,
            }
            for d in (store.descriptions[aid] for aid in sorted(store.descriptions))
        ],
    }
    return (json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n").encode("utf-8")


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise CorruptStore(message)


def read_store(data: bytes) -> ThesaurusStore:
    """Load a native store; structural damage raises CorruptStore, a foreign
    format_version raises FormatVersionMismatch. Semantic rule violations
    (cycles, duplicate labels) are left to the validator on purpose."""
    try:
        payload = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptStore(f"unreadable store: {exc}") from None
    _expect(isinstance(payload, dict), "store root must be an object")
    version = payload.get("format_version")
    _expect(version is not None, "missing format_version")
    if version != FORMAT_VERSION:
        raise FormatVersionMismatch(f"expected format_version {FORMAT_VERSION}, got {version!r}")

    for key in ("schemes", "concepts", "mappings", "referentials", "descriptions"):
        _expect(isinstance(payload.get(key), list), f"missing or invalid {key!r} list")

    store = ThesaurusStore(default_lang=payload.get("default_lang", "fr"))
    ark = payload.get("ark", {})
    _expect(isinstance(ark, dict), "invalid ark block")
    store.minter.naan = str(ark.get("naan", store.minter.naan))
    store.minter.prefix = str(ark.get("prefix", store.minter.prefix))
    store.minter.seed = int(ark.get("seed", 0))
    store.minter.counter = int(ark.get("counter", 0))
    counters = payload.get("counters", {})
    store.mapping_counter = int(counters.get("mapping", 0))
    store.referential_counter = int(counters.get("referential", 0))

    try:
        for raw in payload["schemes"]:
            _expect(isinstance(raw, dict) and raw.get("id"), "scheme without id")
            _expect(raw["id"] not in store.schemes, f"duplicate scheme {raw['id']!r}")
            store.schemes[raw["id"]] = ConceptScheme(
                id=raw["id"],
                title=raw.get("title", raw["id"]),
                profile=Profile(raw.get("profile", "documentary")),
                top_concepts=set(raw.get("top_concepts", [])),
                resolver_base=raw.get("resolver_base"),
            )
        for raw in payload["concepts"]:
            _expect(isinstance(raw, dict) and raw.get("ark"), "concept without ark")
            cid = raw["ark"]
            _expect(cid not in store.concepts, f"duplicate concept {cid!r}")
            _expect(raw.get("scheme") in store.schemes, f"concept {cid!r} references unknown scheme")
            definition = None
            if raw.get("definition") is not None:
                d = raw["definition"]
                _expect(isinstance(d, dict) and isinstance(d.get("text"), str), f"bad definition on {cid!r}")
                definition = Definition(
                    text=d["text"],
                    sources=sorted(set(d.get("sources", []))),
                    external_resources=sorted(set(d.get("external_resources", []))),
                )
            concept = Concept(
                id=cid,
                scheme=raw["scheme"],
                pref_labels={lg: Label(lang=lg, text=t) for lg, t in raw.get("pref_labels", {}).items()},
                alt_labels=sorted(Label(lang=lg, text=t) for lg, t in raw.get("alt_labels", [])),
                definition=definition,
                broader=set(raw.get("broader", [])),
                related=set(raw.get("related", [])),
            )
            store.concepts[cid] = concept
        for raw in payload["mappings"]:
            _expect(isinstance(raw, dict) and raw.get("id"), "mapping without id")
            _expect(raw["id"] not in store.mappings, f"duplicate mapping {raw['id']!r}")
            store.mappings[raw["id"]] = Mapping(
                id=raw["id"],
                source=raw["source"],
                target=raw["target"],
                match_type=MatchType(raw["match_type"]),
                status=MappingStatus(raw["status"]),
                score=raw.get("score"),
                rationale=raw.get("rationale", ""),
                tier=Tier(raw["tier"]) if raw.get("tier") else None,
            )
        for raw in payload["referentials"]:
            _expect(isinstance(raw, dict) and raw.get("id"), "referential without id")
            _expect(raw["id"] not in store.referentials, f"duplicate referential {raw['id']!r}")
            store.referentials[raw["id"]] = Referential(
                id=raw["id"],
                scheme=raw["scheme"],
                root_concept=raw["root_concept"],
                biblio_key=raw["biblio_key"],
                millesime=int(raw["millesime"]),
                keywords=list(raw.get("keywords", [])),
                frozen=bool(raw.get("frozen", False)),
                role_counts={k: int(v) for k, v in raw.get("role_counts", {}).items()},
            )
        for raw in payload["descriptions"]:
            _expect(isinstance(raw, dict) and raw.get("artifact_id"), "description without artifact_id")
            store.descriptions[raw["artifact_id"]] = ArtifactDescription(
                artifact_id=raw["artifact_id"],
                forme=raw["forme"],
                type_=raw["type"],
                categorie=raw["categorie"],
                chronologie=raw["chronologie"],
                referential=raw["referential"],
            )
    except (KeyError, TypeError, ValueError, InvalidLabel) as exc:
        raise CorruptStore(f"malformed store record: {exc}") from None

    # graph integrity: relation endpoints and top concepts must resolve;
    # mapping / description endpoints may dangle (that is domain state,
    # reported by check_mappings and expansion)
    for c in store.concepts.values():
        for pid in c.broader:
            _expect(pid in store.concepts, f"{c.id} has unknown broader {pid!r}")
        for rid in c.related:
            _expect(rid in store.concepts, f"{c.id} has unknown related {rid!r}")
    for scheme in store.schemes.values():
        for cid in scheme.top_concepts:
            _expect(cid in store.concepts, f"scheme {scheme.id!r} lists unknown top concept {cid!r}")
            _expect(
                store.concepts[cid].scheme == scheme.id,
                f"top concept {cid!r} is not in scheme {scheme.id!r}",
            )

    # narrower is derived, related is kept symmetric
    for c in store.concepts.values():
        for pid in c.broader:
            store.concepts[pid].narrower.add(c.id)
        for rid in c.related:
            store.concepts[rid].related.add(c.id)

    store.reindex()
    return store
