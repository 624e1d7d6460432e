from __future__ import annotations

import pytest

from conftest import add
from pivotheso import fixtures
from pivotheso.errors import (
    AlreadyFrozen,
    DuplicateReferential,
    FrozenReferential,
    InvalidMillesime,
    UnknownConcept,
    UnknownReferential,
)
from pivotheso.model import Definition
from pivotheso.referential import (
    diff_referentials,
    freeze,
    referential_members,
    register_referential,
    role_counts,
)
from pivotheso.storefile import read_store, write_store
from pivotheso.turtle import serialize_turtle


def _mini_referential(store, scheme, biblio, year, tag):
    """Small branch shaped like the real one: root associatively linked to
    the catégories / types / formes / périodisation heads."""
    suffix = f" ({biblio.upper()} {year})"
    root = add(store, scheme, f"vaisselle {tag}{suffix}", definition="racine", top=True)
    heads = {}
    for head in ("catégories", "types", "formes"):
        heads[head] = add(store, scheme, f"{head}{suffix}", definition=head)
    heads["périodisation"] = add(store, scheme, f"périodisation {biblio} {year}", definition="p")
    for cid in heads.values():
        store.add_associative_relation(root, cid)
    return root, heads, suffix


def test_register_computes_role_counts(tiny):
    root, heads, suffix = _mini_referential(tiny, "a", "Doe", 2020, "t1")
    add(tiny, "a", f"CAT-A{suffix}", parent=heads["catégories"], definition="c")
    add(tiny, "a", f"CAT-B{suffix}", parent=heads["catégories"], definition="c")
    group = add(tiny, "a", f"types bols{suffix}", parent=heads["types"], definition="g")
    add(tiny, "a", f"bol B1{suffix}", parent=group, definition="t")
    add(tiny, "a", f"bol{suffix}", parent=heads["formes"], definition="f")
    r = register_referential(tiny, "a", root, "Doe 2020", 2020, ref_id="doe2020")
    assert r.role_counts == {"categories": 2, "formes": 1, "periodisation": 0, "types": 1}


def test_register_full_fixture_counts(full):
    r = full.referentials[fixtures.REF_ID]
    assert r.role_counts["categories"] == 53
    assert r.role_counts["formes"] == 25
    assert r.role_counts["types"] == 423


def test_register_duplicate(tiny):
    root, _, _ = _mini_referential(tiny, "a", "Doe", 2020, "t1")
    register_referential(tiny, "a", root, "Doe 2020", 2020)
    with pytest.raises(DuplicateReferential):
        register_referential(tiny, "a", root, "Doe 2020", 2020)


def test_register_millesime_range(tiny):
    root, _, _ = _mini_referential(tiny, "a", "Doe", 2020, "t1")
    with pytest.raises(InvalidMillesime):
        register_referential(tiny, "a", root, "Doe 10", 10)
    with pytest.raises(InvalidMillesime):
        register_referential(tiny, "a", root, "Doe 2200", 2200)


def test_register_unknown_root(tiny):
    with pytest.raises(UnknownConcept):
        register_referential(tiny, "a", "ark:/0/none", "Doe 2020", 2020)


def test_membership_covers_related_heads(paper):
    members = referential_members(paper, fixtures.REF_ID)
    assert fixtures.ARK_TYPE_A15 in members
    assert fixtures.ARK_CAT_PGFINLF in members
    assert fixtures.ARK_CHRONO_ETAPE1 in members
    assert fixtures.ARK_FORME_ASSIETTE in members  # via the vaisselle subtree
    top = paper.find_by_pref_label("bibracte", "Bibracte_Thesaurus")
    assert top not in members


def test_freeze_blocks_member_edits(paper):
    freeze(paper, fixtures.REF_ID)
    with pytest.raises(FrozenReferential):
        paper.set_definition(fixtures.ARK_TYPE_A15, Definition(text="new", sources=["x"]))
    with pytest.raises(FrozenReferential):
        paper.delete_concept(fixtures.ARK_CAT_PGFINLF)
    with pytest.raises(AlreadyFrozen):
        freeze(paper, fixtures.REF_ID)


def test_freeze_leaves_outside_concepts_editable(paper):
    freeze(paper, fixtures.REF_ID)
    outside = paper.find_by_pref_label("bibracte", "céramique (mobilier)")
    paper.set_definition(outside, Definition(text="edited", sources=["x"]))
    assert paper.concept(outside).definition.text == "edited"


def test_freeze_survives_reload(paper):
    freeze(paper, fixtures.REF_ID)
    loaded = read_store(write_store(paper))
    with pytest.raises(FrozenReferential):
        loaded.set_definition(fixtures.ARK_TYPE_A15, Definition(text="new", sources=["x"]))


def test_frozen_branch_serialization_is_byte_stable(paper):
    freeze(paper, fixtures.REF_ID)
    before = serialize_turtle(paper, ["bibracte"])
    # activity outside the branch must not disturb the branch bytes
    add(paper, "pactols2", "nouveau concept", definition="d")
    outside = paper.find_by_pref_label("bibracte", "céramique (mobilier)")
    paper.set_definition(outside, Definition(text="edited", sources=["x"]))
    after = serialize_turtle(paper, ["bibracte"])
    block = lambda text, ark: next(b for b in text.split("\n\n") if b.startswith(f"<{ark}>"))
    for ark in (fixtures.ARK_TYPE_A15, fixtures.ARK_CAT_PGFINLF, fixtures.ARK_REF_VAISSELLE):
        assert block(before, ark) == block(after, ark)


def test_freeze_unknown(tiny):
    with pytest.raises(UnknownReferential):
        freeze(tiny, "nope")


def test_diff_identical_is_empty(paper):
    diff = diff_referentials(paper, fixtures.REF_ID, fixtures.REF_ID)
    assert diff.empty


def test_diff_added_removed_redefined(tiny):
    # v1: {A15: d1}; v2: {A15: d2, A16: d3} -> added={A16}, redefined={A15}
    r1, h1, s1 = _mini_referential(tiny, "a", "Doe", 2020, "v1")
    g1 = add(tiny, "a", f"types assiettes{s1}", parent=h1["types"], definition="g")
    add(tiny, "a", f"assiette A15{s1}", parent=g1, definition="d1")
    register_referential(tiny, "a", r1, "Doe 2020", 2020, ref_id="v1")

    r2, h2, s2 = _mini_referential(tiny, "a", "Doe", 2023, "v2")
    g2 = add(tiny, "a", f"types assiettes{s2}", parent=h2["types"], definition="g")
    add(tiny, "a", f"assiette A15{s2}", parent=g2, definition="d2")
    add(tiny, "a", f"assiette A16{s2}", parent=g2, definition="d3")
    register_referential(tiny, "a", r2, "Doe 2023", 2023, ref_id="v2")

    diff = diff_referentials(tiny, "v1", "v2")
    # set-operation oracle on stripped labels
    v1_labels = {"vaisselle v1", "catégories", "types", "formes", "périodisation doe 2020",
                 "types assiettes", "assiette a15"}
    v2_labels = v1_labels - {"vaisselle v1", "périodisation doe 2020"} | {
        "vaisselle v2", "périodisation doe 2023", "assiette a16"}
    from pivotheso.textnorm import normalize_label
    expect_added = {normalize_label(x) for x in v2_labels - v1_labels}
    expect_removed = {normalize_label(x) for x in v1_labels - v2_labels}
    assert diff.added == expect_added
    assert diff.removed == expect_removed
    assert {t[0] for t in diff.redefined} == {"assiette a15"}
    assert diff.moved == frozenset()


def test_diff_antisymmetric(tiny):
    r1, h1, s1 = _mini_referential(tiny, "a", "Doe", 2020, "v1")
    add(tiny, "a", f"CAT-A{s1}", parent=h1["catégories"], definition="c")
    register_referential(tiny, "a", r1, "Doe 2020", 2020, ref_id="v1")
    r2, h2, s2 = _mini_referential(tiny, "a", "Doe", 2023, "v2")
    add(tiny, "a", f"CAT-B{s2}", parent=h2["catégories"], definition="c")
    register_referential(tiny, "a", r2, "Doe 2023", 2023, ref_id="v2")
    ab = diff_referentials(tiny, "v1", "v2")
    ba = diff_referentials(tiny, "v2", "v1")
    assert ab.added == ba.removed
    assert ab.removed == ba.added


def test_diff_detects_move(tiny):
    # v2 re-parents A15 under a new grouping term -> moved contains it
    r1, h1, s1 = _mini_referential(tiny, "a", "Doe", 2020, "v1")
    g1 = add(tiny, "a", f"types assiettes{s1}", parent=h1["types"], definition="g")
    add(tiny, "a", f"assiette A15{s1}", parent=g1, definition="d1")
    register_referential(tiny, "a", r1, "Doe 2020", 2020, ref_id="v1")

    r2, h2, s2 = _mini_referential(tiny, "a", "Doe", 2023, "v2")
    g2 = add(tiny, "a", f"types assiettes{s2}", parent=h2["types"], definition="g")
    mid = add(tiny, "a", f"[plats fins]{s2}", parent=g2)
    add(tiny, "a", f"assiette A15{s2}", parent=mid, definition="d1")
    register_referential(tiny, "a", r2, "Doe 2023", 2023, ref_id="v2")

    diff = diff_referentials(tiny, "v1", "v2")
    moved_labels = {t[0] for t in diff.moved}
    assert "assiette a15" in moved_labels
    assert {t[0] for t in diff.redefined} == set()


def test_diff_unknown(tiny):
    with pytest.raises(UnknownReferential):
        diff_referentials(tiny, "x", "y")
