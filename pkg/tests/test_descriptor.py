from __future__ import annotations

import csv
import io
import random

import pytest

from conftest import add
from pivotheso import fixtures
from pivotheso.descriptor import (
    CSV_HEADER,
    combination_ceiling,
    compose_description,
    expand_description,
    ingest_inventory,
    realized_combinations,
    rejects_report_csv,
)
from pivotheso.errors import (
    DanglingConcept,
    FormTypeMismatch,
    IncompatibleTypeCategory,
    MalformedCsv,
    NotInReferential,
    UnknownDescription,
    UnknownReferential,
)
from pivotheso.referential import referential_members, role_heads, role_members

TESSON = "B2002.32.273.44"


def compose_tesson(store):
    return compose_description(
        store, TESSON,
        fixtures.ARK_FORME_ASSIETTE, fixtures.ARK_TYPE_A15,
        fixtures.ARK_CAT_PGFINLF, fixtures.ARK_CHRONO_ETAPE1, fixtures.REF_ID,
    )


def test_compose_tesson_succeeds(paper):
    d = compose_tesson(paper)
    assert d.artifact_id == TESSON
    assert paper.descriptions[TESSON] is d


def test_compose_wrong_category_fails(paper):
    campa = paper.find_by_pref_label("bibracte", "CAMPA (BARRIER, LUGINBÜHL 2021)")
    with pytest.raises(IncompatibleTypeCategory):
        compose_description(
            paper, TESSON, fixtures.ARK_FORME_ASSIETTE, fixtures.ARK_TYPE_A15,
            campa, fixtures.ARK_CHRONO_ETAPE1, fixtures.REF_ID,
        )


def test_compose_unknown_forme_not_in_referential(paper):
    outside = paper.find_by_pref_label("bibracte", "céramique (mobilier)")
    with pytest.raises(NotInReferential):
        compose_description(
            paper, TESSON, outside, fixtures.ARK_TYPE_A15,
            fixtures.ARK_CAT_PGFINLF, fixtures.ARK_CHRONO_ETAPE1, fixtures.REF_ID,
        )


def test_compose_type_under_wrong_form(full):
    # a tonnelet type does not sit under the types-branch wired to assiette
    groups = role_heads(full, fixtures.REF_ID)
    tonnelet_group = full.find_by_pref_label("bibracte", fixtures.types_group_label("tonnelet"))
    tonnelet_type = sorted(full.concept(tonnelet_group).narrower)[0]
    categorie = sorted(full.concept(tonnelet_type).related)[0]
    chrono = fixtures.ARK_CHRONO_ETAPE1
    with pytest.raises(FormTypeMismatch):
        compose_description(
            full, "X.1", fixtures.ARK_FORME_ASSIETTE, tonnelet_type,
            categorie, chrono, fixtures.REF_ID,
        )
    _ = groups


def test_compose_chronology_outside_periodisation(paper):
    with pytest.raises(NotInReferential):
        compose_description(
            paper, TESSON, fixtures.ARK_FORME_ASSIETTE, fixtures.ARK_TYPE_A15,
            fixtures.ARK_CAT_PGFINLF, fixtures.ARK_CAT_PGFINLF, fixtures.REF_ID,
        )


def test_compose_replaces_existing(paper):
    compose_tesson(paper)
    d2 = compose_tesson(paper)
    assert paper.descriptions[TESSON] is d2


def test_expand_description_resolves_all_roles(paper):
    compose_tesson(paper)
    record = expand_description(paper, TESSON)
    assert record["categorie"]["definition"].startswith(
        "Céramique à pâte grise fine et surface lissée fumigée"
    )
    for role in ("forme", "type", "categorie", "chronologie", "referentiel"):
        assert record[role]["ark"]
        assert record[role]["pref_label"]
        assert isinstance(record[role]["path"], list)
    assert record["type"]["path"] == [fixtures.CHEMIN_TYPE]
    assert record["referentiel"]["ark"] == fixtures.ARK_REF_VAISSELLE


def test_expand_unknown_description(paper):
    with pytest.raises(UnknownDescription):
        expand_description(paper, "nope")


def test_expand_dangling_concept(tiny):
    from pivotheso.model import ArtifactDescription

    a = add(tiny, "a", "x")
    tiny.descriptions["art"] = ArtifactDescription("art", a, a, a, a, "ref")
    tiny.delete_concept(a)
    with pytest.raises(DanglingConcept):
        expand_description(tiny, "art")


def test_ceiling_full_fixture(full):
    ceiling = combination_ceiling(full, fixtures.REF_ID)
    assert (ceiling.n_categories, ceiling.n_types, ceiling.n_formes) == (53, 423, 25)
    assert ceiling.ceiling == 22419


def test_ceiling_edge_cases(tiny):
    from test_referential import _mini_referential

    root, heads, suffix = _mini_referential(tiny, "a", "Doe", 2020, "t1")
    from pivotheso.referential import register_referential

    add(tiny, "a", f"CAT-A{suffix}", parent=heads["catégories"], definition="c")
    group = add(tiny, "a", f"types bols{suffix}", parent=heads["types"], definition="g")
    add(tiny, "a", f"bol B1{suffix}", parent=group, definition="t")
    register_referential(tiny, "a", root, "Doe 2020", 2020, ref_id="r")
    assert combination_ceiling(tiny, "r").ceiling == 1

    # doubling categories doubles the ceiling
    add(tiny, "a", f"CAT-B{suffix}", parent=heads["catégories"], definition="c")
    assert combination_ceiling(tiny, "r").ceiling == 2


def test_ceiling_zero_categories(tiny):
    from test_referential import _mini_referential
    from pivotheso.referential import register_referential

    root, heads, suffix = _mini_referential(tiny, "a", "Doe", 2020, "t1")
    group = add(tiny, "a", f"types bols{suffix}", parent=heads["types"], definition="g")
    add(tiny, "a", f"bol B1{suffix}", parent=group, definition="t")
    register_referential(tiny, "a", root, "Doe 2020", 2020, ref_id="r")
    assert combination_ceiling(tiny, "r").ceiling == 0


def test_ceiling_unknown_referential(paper):
    with pytest.raises(UnknownReferential):
        combination_ceiling(paper, "nope")


def test_realized_combinations_counts_wired_pairs(paper):
    # brute force: sum over type leaves of |related ∩ category leaves|
    roles = role_members(paper, fixtures.REF_ID)
    expected = 0
    for t in roles["types"]:
        expected += len(paper.concepts[t].related & roles["categories"])
    assert realized_combinations(paper, fixtures.REF_ID) == expected
    assert realized_combinations(paper, fixtures.REF_ID) <= combination_ceiling(paper, fixtures.REF_ID).ceiling


# -- inventory ingestion -----------------------------------------------------------

def _csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(rows)
    return buf.getvalue().encode("utf-8")


def test_ingest_single_valid_row_by_labels(paper):
    data = _csv([[TESSON, "assiette", "assiette A15", "PGFINLF",
                  "Étape 1 céramique : 120/110 à 90/80 av. n.è."]])
    stored, rejects = ingest_inventory(paper, data, fixtures.REF_ID)
    assert len(stored) == 1 and rejects == []
    assert paper.descriptions[TESSON].type_ == fixtures.ARK_TYPE_A15


def test_ingest_by_ark(paper):
    data = _csv([[TESSON, fixtures.ARK_FORME_ASSIETTE, fixtures.ARK_TYPE_A15,
                  fixtures.ARK_CAT_PGFINLF, fixtures.ARK_CHRONO_ETAPE1]])
    stored, rejects = ingest_inventory(paper, data, fixtures.REF_ID)
    assert len(stored) == 1 and rejects == []


def test_ingest_incompatible_category_rejected(paper):
    data = _csv([[TESSON, "assiette", "assiette A15", "CAMPA",
                  "Étape 1 céramique : 120/110 à 90/80 av. n.è."]])
    stored, rejects = ingest_inventory(paper, data, fixtures.REF_ID)
    assert stored == []
    assert len(rejects) == 1
    assert rejects[0].row == 1
    assert rejects[0].error_code == "IncompatibleTypeCategory"


def test_ingest_header_only(paper):
    stored, rejects = ingest_inventory(paper, _csv([]), fixtures.REF_ID)
    assert stored == [] and rejects == []


def test_ingest_bad_header(paper):
    with pytest.raises(MalformedCsv):
        ingest_inventory(paper, b"id,forme\n", fixtures.REF_ID)


def test_ingest_attempts_every_row(paper):
    data = _csv([
        ["ok1", "assiette", "assiette A15", "PGFINLF", "Étape 1 céramique : 120/110 à 90/80 av. n.è."],
        ["bad", "assiette", "assiette A15", "CAMPA", "Étape 1 céramique : 120/110 à 90/80 av. n.è."],
        ["ok2", "assiette", "assiette A15", "PGFINTN", "Étape 1 céramique : 120/110 à 90/80 av. n.è."],
    ])
    stored, rejects = ingest_inventory(paper, data, fixtures.REF_ID)
    assert [d.artifact_id for d in stored] == ["ok1", "ok2"]
    assert [r.row for r in rejects] == [2]


def test_ingest_label_resolution_is_scoped_to_referential(full):
    # the decoy "assiette (ROUX 1999)" also strips to "assiette", but lives
    # outside the branch: resolution must hit the member concept only
    data = _csv([[TESSON, "assiette", "assiette A15", "PGFINLF",
                  "Étape 1 céramique : 120/110 à 90/80 av. n.è."]])
    stored, rejects = ingest_inventory(full, data, fixtures.REF_ID)
    assert rejects == []
    assert stored[0].forme == fixtures.ARK_FORME_ASSIETTE
    decoy = full.find_by_pref_label("bibracte", "assiette (ROUX 1999)")
    assert decoy is not None and stored[0].forme != decoy


def test_ingest_unknown_label(paper):
    data = _csv([[TESSON, "soucoupe volante", "assiette A15", "PGFINLF",
                  "Étape 1 céramique : 120/110 à 90/80 av. n.è."]])
    stored, rejects = ingest_inventory(paper, data, fixtures.REF_ID)
    assert rejects[0].error_code == "UnknownConcept"


def test_ingest_rejects_report_csv_shape(paper):
    data = _csv([["bad", "assiette", "assiette A15", "CAMPA",
                  "Étape 1 céramique : 120/110 à 90/80 av. n.è."]])
    _, rejects = ingest_inventory(paper, data, fixtures.REF_ID)
    report = rejects_report_csv(rejects)
    lines = report.strip().splitlines()
    assert lines[0] == "row,error_code,detail"
    assert lines[1].startswith("1,IncompatibleTypeCategory,")


def _synthetic_inventory(store, rng, n_rows):
    """Deterministic mixed inventory over the full referential."""
    roles = role_members(store, fixtures.REF_ID)
    types = sorted(roles["types"])
    categories = sorted(roles["categories"])
    chronos = sorted(roles["periodisation"])
    formes = sorted(roles["formes"])

    def form_for_type(t):
        for g in store.ancestors(t):
            for f in store.concepts[g].related:
                if f in roles["formes"]:
                    return f
        return None

    rows = []
    for i in range(n_rows):
        t = rng.choice(types)
        f = form_for_type(t)
        cats = sorted(store.concepts[t].related & set(categories))
        kind = rng.randrange(6)
        if kind <= 2 and cats:  # valid row
            rows.append([f"inv.{i}", f, t, rng.choice(cats), rng.choice(chronos)])
        elif kind == 3:  # incompatible category
            bad = rng.choice([c for c in categories if c not in cats] or categories)
            rows.append([f"inv.{i}", f, t, bad, rng.choice(chronos)])
        elif kind == 4:  # form/type mismatch
            other = rng.choice([x for x in formes if x != f])
            rows.append([f"inv.{i}", other, t, rng.choice(cats or categories), rng.choice(chronos)])
        else:  # unknown label
            rows.append([f"inv.{i}", "objet volant non identifié", t,
                         rng.choice(cats or categories), rng.choice(chronos)])
    return rows


def naive_recheck(store, rows):
    """Independent row-by-row verdicts: one exhaustive label-index pass over
    the branch members, then raw set checks per row."""
    members = referential_members(store, fixtures.REF_ID)
    roles = role_members(store, fixtures.REF_ID)
    from pivotheso.textnorm import normalize_stripped

    label_index: dict[str, set[str]] = {}
    for cid in members:
        c = store.concepts.get(cid)
        if c is None:
            continue
        for lb in [*c.pref_labels.values(), *c.alt_labels]:
            label_index.setdefault(normalize_stripped(lb.text), set()).add(cid)

    def find(cell):
        if cell in store.concepts:
            return cell if cell in members else None
        hits = label_index.get(normalize_stripped(cell), set())
        return next(iter(hits)) if len(hits) == 1 else None

    ancestors_cache: dict[str, set[str]] = {}

    def ancestors(cid):
        if cid not in ancestors_cache:
            ancestors_cache[cid] = store.ancestors(cid)
        return ancestors_cache[cid]

    verdicts = []
    for row in rows:
        _, forme, type_, categorie, chronologie = row
        f, t, cat, chrono = find(forme), find(type_), find(categorie), find(chronologie)
        if None in (f, t, cat, chrono):
            verdicts.append(False)
            continue
        ok = (
            f in roles["formes"]
            and t in roles["types"]
            and cat in roles["categories"]
            and chrono in roles["periodisation"]
            and cat in store.concepts[t].related
            and any(g in ancestors(t) for g in store.concepts[f].related)
        )
        verdicts.append(ok)
    return verdicts


def test_ingest_thousand_rows_matches_bruteforce(full):
    rng = random.Random(424242)
    rows = _synthetic_inventory(full, rng, 1000)
    stored, rejects = ingest_inventory(full, _csv(rows), fixtures.REF_ID)
    assert len(stored) + len(rejects) == 1000
    verdicts = naive_recheck(full, rows)
    expected_rejects = [i + 1 for i, ok in enumerate(verdicts) if not ok]
    assert [r.row for r in rejects] == expected_rejects


def test_ingest_deterministic(full):
    rng = random.Random(11)
    rows = _synthetic_inventory(full, rng, 60)
    first = ingest_inventory(full, _csv(rows), fixtures.REF_ID)
    second = ingest_inventory(full, _csv(rows), fixtures.REF_ID)
    assert [d.artifact_id for d in first[0]] == [d.artifact_id for d in second[0]]
    assert first[1] == second[1]
