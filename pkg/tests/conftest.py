from __future__ import annotations

import random

import pytest

from pivotheso import fixtures
from pivotheso.model import Definition, Label, Profile
from pivotheso.store import ThesaurusStore


@pytest.fixture()
def paper():
    return fixtures.paper_store()


@pytest.fixture(scope="session")
def full():
    return fixtures.full_store()


@pytest.fixture()
def tiny():
    """Minimal two-scheme store for operation-level tests."""
    store = ThesaurusStore(seed=7)
    store.add_scheme("a", "Scheme A", Profile.RESEARCH)
    store.add_scheme("b", "Scheme B")
    return store


def add(store, scheme, text, parent=None, definition=None, top=False, **kwargs):
    d = None
    if definition is not None:
        d = Definition(text=definition, sources=["src"])
    cid = store.add_concept(scheme, Label(lang="fr", text=text), d, **kwargs)
    if parent is not None:
        store.add_hierarchical_relation(parent, cid)
    if top:
        store.add_top_concept(scheme, cid)
    return cid


def random_tree_store(rng: random.Random, n_concepts: int = 60, schemes: int = 2) -> ThesaurusStore:
    """Random polyhierarchical store built through the public API only."""
    store = ThesaurusStore(seed=rng.randrange(10**6))
    ids: dict[str, list[str]] = {}
    for s in range(schemes):
        sid = f"s{s}"
        store.add_scheme(sid, f"Scheme {s}", Profile.DOCUMENTARY)
        root = add(store, sid, f"root {s}", definition="root", top=True)
        ids[sid] = [root]
    for i in range(n_concepts):
        sid = f"s{rng.randrange(schemes)}"
        cid = add(store, sid, f"concept {sid}-{i}", definition=f"def {i}")
        # attach under 1-2 random parents
        for parent in rng.sample(ids[sid], k=min(len(ids[sid]), rng.choice([1, 1, 1, 2]))):
            try:
                store.add_hierarchical_relation(parent, cid)
            except Exception:
                pass
        ids[sid].append(cid)
    # sprinkle associative relations
    for _ in range(n_concepts):
        sid = f"s{rng.randrange(schemes)}"
        if len(ids[sid]) < 2:
            continue
        a, b = rng.sample(ids[sid], 2)
        try:
            store.add_associative_relation(a, b)
        except Exception:
            pass
    return store
