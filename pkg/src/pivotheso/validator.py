"""Rule engine checking a scheme against the ISO 25964-1 reading used here.

Rules R1-R8 cover label uniqueness, relation consistency and definition
sourcing. The Research profile tightens R6 (definitions must be sourced);
the Documentary profile reports the same findings as warnings. Grouping
terms (bracketed labels) are exempt from R6, since they exist only to
enable alignment and carry no producer-defined notion.
"""

from __future__ import annotations

from collections import defaultdict

from .errors import UnknownRule
from .model import Diagnostic, Profile, Severity
from .store import ThesaurusStore
from .textnorm import normalize_label

RULES = {
    "R1": "Two concepts of one scheme must not share a normalized preferred label "
          "for the same language (ISO 25964-1: no two strictly identical terms).",
    "R2": "An alternative label that collides with another concept's preferred label "
          "in the same scheme is suspicious, though legal (warning).",
    "R3": "The broader/narrower hierarchy of a scheme must be acyclic.",
    "R4": "Associative relations are reciprocal: if a lists b as related, "
          "b must list a (ISO 25964-1).",
    "R5": "An associative relation must not link an ancestor to one of its "
          "descendants; the hierarchy already carries that connection.",
    "R6": "Every concept needs a definition backed by at least one source "
          "(error under the Research profile, warning under Documentary); "
          "bracketed grouping terms are exempt.",
    "R7": "Every concept should reach a top concept through broader chains; "
          "orphans and top concepts with parents are flagged.",
    "R8": "broader and narrower must mirror each other exactly (import symmetry).",
}


def explain(rule_code: str) -> str:
    """Human-readable statement of a rule R1-R8."""
    try:
        return RULES[rule_code]
    except KeyError:
        raise UnknownRule(f"unknown rule {rule_code!r}") from None


def validate(store: ThesaurusStore, scheme_id: str) -> list[Diagnostic]:
    """Run all rules against one scheme; deterministic (rule, subject) order."""
    scheme = store.scheme(scheme_id)
    concepts = {c.id: c for c in store.concepts_in_scheme(scheme_id)}
    out: list[Diagnostic] = []

    out.extend(_r1_duplicate_pref(concepts))
    out.extend(_r2_alt_collides_pref(concepts))
    out.extend(_r3_hierarchy_cycle(concepts))
    out.extend(_r4_reciprocity(concepts))
    out.extend(_r5_associative_shadowed(concepts))
    out.extend(_r6_definitions(concepts, scheme.profile))
    out.extend(_r7_orphans(concepts, scheme.top_concepts))
    out.extend(_r8_asymmetry(concepts))
    return sorted(out)


def _r1_duplicate_pref(concepts) -> list[Diagnostic]:
    groups: dict[tuple[str, str], list[str]] = defaultdict(list)
    for c in concepts.values():
        for lang, lb in c.pref_labels.items():
            groups[(lang, normalize_label(lb.text))].append(c.id)
    out = []
    for (lang, norm), ids in groups.items():
        if len(ids) > 1:
            out.append(Diagnostic(
                rule="R1", subjects=tuple(sorted(ids)), severity=Severity.ERROR,
                message=f"duplicate preferred label {norm!r}@{lang}",
            ))
    return out


def _r2_alt_collides_pref(concepts) -> list[Diagnostic]:
    pref: dict[tuple[str, str], str] = {}
    for c in concepts.values():
        for lang, lb in c.pref_labels.items():
            pref[(lang, normalize_label(lb.text))] = c.id
    out = []
    for c in concepts.values():
        for alt in c.alt_labels:
            owner = pref.get((alt.lang, normalize_label(alt.text)))
            if owner is not None and owner != c.id:
                out.append(Diagnostic(
                    rule="R2", subjects=(c.id, owner), severity=Severity.WARNING,
                    message=f"alt label {alt.text!r}@{alt.lang} collides with the preferred label of {owner}",
                ))
    return out


def _r3_hierarchy_cycle(concepts) -> list[Diagnostic]:
    # Tarjan SCC over broader edges only (narrower may be out of sync, R8):
    # a concept is cyclic iff it sits in a non-trivial component or loops
    # onto itself.
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = 0
    cyclic: set[str] = set()

    def edges(cid: str):
        return (p for p in concepts[cid].broader if p in concepts)

    for start in concepts:
        if start in index:
            continue
        work = [(start, iter(edges(start)))]
        index[start] = low[start] = counter
        counter += 1
        stack.append(start)
        on_stack.add(start)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(edges(nxt))))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                if len(component) > 1 or node in concepts[node].broader:
                    cyclic.update(component)
    if not cyclic:
        return []
    return [Diagnostic(
        rule="R3", subjects=tuple(sorted(cyclic)), severity=Severity.ERROR,
        message="hierarchy contains a cycle",
    )]


def _r4_reciprocity(concepts) -> list[Diagnostic]:
    out = []
    for c in concepts.values():
        for rid in sorted(c.related):
            other = concepts.get(rid)
            if other is not None and c.id not in other.related:
                out.append(Diagnostic(
                    rule="R4", subjects=(c.id, rid), severity=Severity.ERROR,
                    message=f"{c.id} lists {rid} as related but not vice versa",
                ))
    return out


def _ancestors(concepts, cid: str) -> set[str]:
    seen: set[str] = set()
    stack = [cid]
    while stack:
        node = concepts.get(stack.pop())
        if node is None:
            continue
        for pid in node.broader:
            if pid not in seen:
                seen.add(pid)
                stack.append(pid)
    return seen


def _r5_associative_shadowed(concepts) -> list[Diagnostic]:
    out = []
    reported: set[tuple[str, str]] = set()
    for c in concepts.values():
        anc = _ancestors(concepts, c.id)
        for rid in sorted(c.related):
            if rid in anc:
                pair = tuple(sorted((c.id, rid)))
                if pair not in reported:
                    reported.add(pair)
                    out.append(Diagnostic(
                        rule="R5", subjects=pair, severity=Severity.ERROR,
                        message="associative relation between an ancestor and a descendant",
                    ))
    return out


def _r6_definitions(concepts, profile: Profile) -> list[Diagnostic]:
    severity = Severity.ERROR if profile is Profile.RESEARCH else Severity.WARNING
    out = []
    for c in concepts.values():
        if c.is_grouping:
            continue
        if c.definition is None:
            out.append(Diagnostic(
                rule="R6", subjects=(c.id,), severity=severity,
                message="missing definition",
            ))
        elif not c.definition.sources:
            out.append(Diagnostic(
                rule="R6", subjects=(c.id,), severity=severity,
                message="definition has no source",
            ))
    return out


def _r7_orphans(concepts, top_concepts: set[str]) -> list[Diagnostic]:
    out = []
    for cid in sorted(top_concepts):
        c = concepts.get(cid)
        if c is not None and c.broader:
            out.append(Diagnostic(
                rule="R7", subjects=(cid,), severity=Severity.WARNING,
                message="top concept has broader concepts",
            ))
    # downward reachability over broader edges inverted by hand, so a broken
    # narrower mirror (R8) cannot hide an orphan
    children: dict[str, list[str]] = defaultdict(list)
    for c in concepts.values():
        for pid in c.broader:
            children[pid].append(c.id)
    reached = set(cid for cid in top_concepts if cid in concepts)
    stack = list(reached)
    while stack:
        for kid in children.get(stack.pop(), ()):
            if kid not in reached:
                reached.add(kid)
                stack.append(kid)
    for cid in sorted(concepts):
        if cid not in reached:
            out.append(Diagnostic(
                rule="R7", subjects=(cid,), severity=Severity.WARNING,
                message="concept does not reach any top concept",
            ))
    return out


def _r8_asymmetry(concepts) -> list[Diagnostic]:
    out = []
    for c in concepts.values():
        for pid in sorted(c.broader):
            parent = concepts.get(pid)
            if parent is not None and c.id not in parent.narrower:
                out.append(Diagnostic(
                    rule="R8", subjects=(pid, c.id), severity=Severity.ERROR,
                    message=f"{c.id} has broader {pid} without the narrower mirror",
                ))
        for kid in sorted(c.narrower):
            child = concepts.get(kid)
            if child is not None and c.id not in child.broader:
                out.append(Diagnostic(
                    rule="R8", subjects=(c.id, kid), severity=Severity.ERROR,
                    message=f"{c.id} has narrower {kid} without the broader mirror",
                ))
    return out
