"""Shared builders and independent oracles for the test suite.

The oracles here deliberately avoid the library's own traversal and
indexing code: reachability is a hand-rolled BFS over plain dicts,
flags are evaluated straight off the records, and the two-node layout
equilibrium comes from bisection on the force balance. Tests compare
the real implementations against these.
"""

from __future__ import annotations

import random

from methodgraph.schema import BaseRef, EdgeKind, MethodRecord, PartialDate

_AREAS = (
    "Generative Models",
    "Representation Learning",
    "Optimization",
    "Reinforcement Learning",
    "Vision",
)


def make_record(
    acronym: str,
    based_on: tuple[tuple[str, str], ...] = (),
    area: str = "Generative Models",
    date: tuple[int, int, int] = (2020, 1, 1),
    name: str | None = None,
) -> MethodRecord:
    """Minimal valid record; based_on pairs are (target, kind)."""
    return MethodRecord(
        title=f"Paper about {acronym}",
        url=f"https://example.org/{acronym.lower()}",
        authors=("Ada Lovelace", "Emmy Noether"),
        release_date=PartialDate(*date),
        venue="TestConf",
        method_name=name or f"Method {acronym}",
        subject_area=area,
        acronym=acronym,
        description=f"What {acronym} does.",
        based_on=tuple(BaseRef(t, EdgeKind(k)) for t, k in based_on),
    )


def mini_records(edges: dict[str, list[str]]) -> list[MethodRecord]:
    """Records for a small layout graph: {derived: [base, ...]}. Every
    mentioned acronym becomes a node; all edges direct."""
    nodes: set[str] = set(edges)
    for targets in edges.values():
        nodes.update(targets)
    return [
        make_record(a, tuple((t, "direct") for t in edges.get(a, [])))
        for a in sorted(nodes)
    ]


def random_records(
    seed: int,
    max_nodes: int = 200,
    max_edges: int = 600,
    cyclic: bool = False,
    conceptual_rate: float = 0.25,
    area_count: int = 3,
) -> list[MethodRecord]:
    """A random digraph as records. Acyclic graphs only use edges from a
    higher index to a lower one; cyclic ones mix in ascending edges."""
    rng = random.Random(seed)
    n = rng.randint(2, max_nodes)
    names = [f"M{i:03d}" for i in range(n)]
    areas = [rng.choice(_AREAS[:area_count]) for _ in range(n)]
    edges: set[tuple[int, int]] = set()
    for _ in range(rng.randint(0, max_edges)):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        if not cyclic and i < j:
            i, j = j, i  # descending keeps it a DAG
        edges.add((i, j))
    based: dict[int, list[tuple[str, str]]] = {i: [] for i in range(n)}
    for i, j in sorted(edges):
        kind = "conceptual" if rng.random() < conceptual_rate else "direct"
        based[i].append((names[j], kind))
    return [
        make_record(
            names[i],
            tuple(based[i]),
            area=areas[i],
            date=(2000 + i % 25, 1 + i % 12, 1 + i % 28),
        )
        for i in range(n)
    ]


def planted_scc_records(seed: int) -> tuple[list[MethodRecord], list[frozenset[str]]]:
    """A DAG plus disjoint planted directed cycles over contiguous index
    groups. Descending base edges cannot link two groups into a larger
    component, so the groups are exactly the expected SCCs."""
    rng = random.Random(seed)
    n = rng.randint(12, 60)
    names = [f"M{i:03d}" for i in range(n)]
    based: dict[int, set[str]] = {i: set() for i in range(n)}
    for _ in range(rng.randint(n, 3 * n)):
        i, j = rng.randrange(n), rng.randrange(n)
        if i > j:
            based[i].add(names[j])

    groups: list[frozenset[str]] = []
    start = 0
    while start + 2 <= n and len(groups) < rng.randint(1, 4):
        size = rng.randint(2, min(5, n - start))
        members = list(range(start, start + size))
        for a, b in zip(members, members[1:] + members[:1]):
            based[a].add(names[b])  # directed cycle through the group
        groups.append(frozenset(names[m] for m in members))
        start += size + rng.randint(1, 4)

    records = [
        make_record(names[i], tuple((t, "direct") for t in sorted(based[i])))
        for i in range(n)
    ]
    return records, groups


# -- oracles -----------------------------------------------------------


def bfs_reach(
    records: list[MethodRecord],
    start: str,
    forward: bool,
    include_conceptual: bool = False,
) -> set[str]:
    """Brute-force reachability over the records themselves. ``forward``
    follows based-on arrows (ancestors); otherwise reversed (descendants)."""
    defined = {r.acronym for r in records}
    adjacency: dict[str, set[str]] = {a: set() for a in defined}
    for r in records:
        for ref in r.based_on:
            if ref.target not in defined or ref.target == r.acronym:
                continue
            if ref.kind is EdgeKind.CONCEPTUAL and not include_conceptual:
                continue
            if forward:
                adjacency[r.acronym].add(ref.target)
            else:
                adjacency[ref.target].add(r.acronym)
    seen: set[str] = set()
    frontier = [start]
    while frontier:
        node = frontier.pop()
        for nxt in adjacency[node]:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    seen.discard(start)
    return seen


def brute_force_flags(records: list[MethodRecord]) -> dict[str, bool]:
    """Direct evaluation of the red-marking rule: a method is flagged
    when some method from a different subject area directly builds on it."""
    defined = {r.acronym: r for r in records}
    flags = {a: False for a in defined}
    for r in records:
        for ref in r.based_on:
            target = defined.get(ref.target)
            if target is None or ref.kind is not EdgeKind.DIRECT:
                continue
            if ref.target == r.acronym:
                continue
            if r.subject_area.strip().lower() != target.subject_area.strip().lower():
                flags[ref.target] = True
    return flags


def bisect_equilibrium(
    repulsion: float = 900.0,
    stiffness: float = 1.0,
    rest_length: float = 30.0,
    lo: float = 1.0,
    hi: float = 1000.0,
) -> float:
    """Root of k(d - L) = C / d^2: the separation where one spring
    exactly balances the pair repulsion."""
    def residual(d: float) -> float:
        return stiffness * (d - rest_length) - repulsion / (d * d)

    assert residual(lo) < 0 < residual(hi)
    for _ in range(200):
        mid = (lo + hi) / 2.0
        if residual(mid) < 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0
