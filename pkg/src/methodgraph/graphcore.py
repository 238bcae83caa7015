"""The method-inheritance graph and its query operations.

Every record contributes one node keyed by acronym; every based-on
reference contributes one directed edge from the derived method to its
base. Graphs are immutable snapshots: building a new one is the only
way to change anything, which is what makes concurrent reads trivially
safe in the service layer.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator

from .schema import (
    Acronym,
    EdgeKind,
    IssueCode,
    MethodRecord,
    Severity,
    ValidationIssue,
    ValidationReport,
)

__all__ = [
    "Edge",
    "MethodGraph",
    "Recommendation",
    "SubgraphView",
    "UnknownAcronymError",
    "UnknownAreaError",
    "ancestors",
    "area_subgraph",
    "build_graph",
    "descendants",
    "has_cross_area_user",
    "induced_subgraph",
    "recommend",
    "search",
    "strongly_connected_components",
    "upgrade_candidates",
    "validate_dag",
]

# Default scoring weights for recommend(); the service exposes both
# through its configuration.
BASE_WEIGHT_DEFAULT = 1.0
USER_WEIGHT_DEFAULT = 0.5


class UnknownAcronymError(KeyError):
    def __init__(self, acronym: Acronym):
        super().__init__(acronym)
        self.acronym = acronym

    def __str__(self) -> str:
        return f"unknown acronym {self.acronym!r}"


class UnknownAreaError(LookupError):
    def __init__(self, area: str):
        super().__init__(area)
        self.area = area

    def __str__(self) -> str:
        return f"no methods in subject area {self.area!r}"


@dataclass(frozen=True)
class Edge:
    """Directed edge from a derived method to one of its bases."""

    source: Acronym
    target: Acronym
    kind: EdgeKind = EdgeKind.DIRECT


@dataclass(frozen=True)
class MethodGraph:
    """Immutable snapshot of the whole inheritance graph.

    ``nodes`` is keyed and iterated in sorted-acronym order, and
    ``edges`` is sorted, so two graphs built from the same records are
    identical regardless of input order.
    """

    nodes: dict[Acronym, MethodRecord]
    edges: tuple[Edge, ...]
    out_map: dict[Acronym, tuple[Edge, ...]]
    in_map: dict[Acronym, tuple[Edge, ...]]
    snapshot_id: int = 1

    def __contains__(self, acronym: Acronym) -> bool:
        return acronym in self.nodes

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def record(self, acronym: Acronym) -> MethodRecord:
        try:
            return self.nodes[acronym]
        except KeyError:
            raise UnknownAcronymError(acronym) from None

    def out_edges(self, acronym: Acronym) -> tuple[Edge, ...]:
        return self.out_map.get(acronym, ())

    def in_edges(self, acronym: Acronym) -> tuple[Edge, ...]:
        return self.in_map.get(acronym, ())

    def areas(self) -> list[str]:
        """Distinct subject areas, case-insensitively deduplicated."""
        seen: dict[str, str] = {}
        for record in self.nodes.values():
            label = record.subject_area.strip()
            seen.setdefault(label.lower(), label)
        return sorted(seen.values(), key=str.lower)


@dataclass(frozen=True)
class SubgraphView:
    """One subject area plus the depth-1 bases its methods stand on."""

    area: str
    member_nodes: frozenset[Acronym]
    edges: tuple[Edge, ...]
    cross_area_flags: dict[Acronym, bool]


@dataclass(frozen=True)
class Recommendation:
    acronym: Acronym
    score: float
    reasons: tuple[str, ...] = ()


def _index_edges(
    nodes: dict[Acronym, MethodRecord], edges: tuple[Edge, ...]
) -> tuple[dict[Acronym, tuple[Edge, ...]], dict[Acronym, tuple[Edge, ...]]]:
    out: dict[Acronym, list[Edge]] = {a: [] for a in nodes}
    inc: dict[Acronym, list[Edge]] = {a: [] for a in nodes}
    for edge in edges:
        out[edge.source].append(edge)
        inc[edge.target].append(edge)
    return (
        {a: tuple(es) for a, es in out.items()},
        {a: tuple(es) for a, es in inc.items()},
    )


def build_graph(
    records: list[MethodRecord], snapshot_id: int = 1
) -> tuple[MethodGraph, ValidationReport]:
    """Assemble a graph from records, reporting every dataset-level problem.

    Duplicate acronyms keep the first occurrence; based-on references to
    undefined acronyms are dropped. Cycles and self-loops are kept in
    the graph (the data is what it is) but flagged, as are edges whose
    base has a complete release date newer than its derived method.
    """
    issues: list[ValidationIssue] = []
    by_key: dict[Acronym, MethodRecord] = {}
    for record in records:
        if record.acronym in by_key:
            issues.append(
                ValidationIssue(
                    Severity.ERROR,
                    IssueCode.DUPLICATE_ACRONYM,
                    record.acronym,
                    "acronym appears more than once; first occurrence kept",
                )
            )
            continue
        by_key[record.acronym] = record

    nodes = {a: by_key[a] for a in sorted(by_key)}
    edges: list[Edge] = []
    seen: set[Edge] = set()
    for acronym, record in nodes.items():
        for ref in record.based_on:
            if ref.target not in nodes:
                issues.append(
                    ValidationIssue(
                        Severity.ERROR,
                        IssueCode.DANGLING_REF,
                        acronym,
                        f"based-on target {ref.target} is not defined; edge dropped",
                    )
                )
                continue
            edge = Edge(acronym, ref.target, ref.kind)
            if edge in seen:
                continue
            seen.add(edge)
            edges.append(edge)
    edges.sort(key=lambda e: (e.source, e.target, e.kind.value))

    out_map, in_map = _index_edges(nodes, tuple(edges))
    graph = MethodGraph(
        nodes=nodes,
        edges=tuple(edges),
        out_map=out_map,
        in_map=in_map,
        snapshot_id=snapshot_id,
    )

    issues.extend(validate_dag(graph))

    for edge in graph.edges:
        derived = nodes[edge.source].release_date
        base = nodes[edge.target].release_date
        if derived.is_complete and base.is_complete and base.sort_key() > derived.sort_key():
            issues.append(
                ValidationIssue(
                    Severity.WARNING,
                    IssueCode.DATE_ANOMALY,
                    edge.source,
                    f"base {edge.target} ({base}) is newer than {edge.source} ({derived})",
                )
            )

    return graph, ValidationReport(tuple(issues))


def induced_subgraph(graph: MethodGraph, members: set[Acronym]) -> MethodGraph:
    """The subgraph on ``members`` with every edge whose endpoints both remain."""
    missing = sorted(members - set(graph.nodes))
    if missing:
        raise UnknownAcronymError(missing[0])
    nodes = {a: graph.nodes[a] for a in sorted(members)}
    edges = tuple(e for e in graph.edges if e.source in nodes and e.target in nodes)
    out_map, in_map = _index_edges(nodes, edges)
    return MethodGraph(
        nodes=nodes,
        edges=edges,
        out_map=out_map,
        in_map=in_map,
        snapshot_id=graph.snapshot_id,
    )


def _require(graph: MethodGraph, acronym: Acronym) -> None:
    if acronym not in graph.nodes:
        raise UnknownAcronymError(acronym)


def ancestors(
    graph: MethodGraph, acronym: Acronym, include_conceptual: bool = False
) -> set[Acronym]:
    """Every method reachable by following based-on edges outward.

    Conceptual edges are traversed only when asked. The starting method
    is never part of its own answer, cycles included.
    """
    _require(graph, acronym)
    seen = {acronym}
    frontier = deque([acronym])
    while frontier:
        node = frontier.popleft()
        for edge in graph.out_edges(node):
            if edge.kind is EdgeKind.CONCEPTUAL and not include_conceptual:
                continue
            if edge.target not in seen:
                seen.add(edge.target)
                frontier.append(edge.target)
    seen.discard(acronym)
    return seen


def descendants(
    graph: MethodGraph, acronym: Acronym, include_conceptual: bool = False
) -> set[Acronym]:
    """Mirror of :func:`ancestors` over incoming edges: who builds on this."""
    _require(graph, acronym)
    seen = {acronym}
    frontier = deque([acronym])
    while frontier:
        node = frontier.popleft()
        for edge in graph.in_edges(node):
            if edge.kind is EdgeKind.CONCEPTUAL and not include_conceptual:
                continue
            if edge.source not in seen:
                seen.add(edge.source)
                frontier.append(edge.source)
    seen.discard(acronym)
    return seen


def upgrade_candidates(graph: MethodGraph, acronym: Acronym) -> list[MethodRecord]:
    """Methods that directly build on this one, newest first.

    Only direct edges qualify: a method that merely took inspiration is
    not a drop-in replacement. Ties on release date break by acronym.
    """
    _require(graph, acronym)
    users = {
        edge.source
        for edge in graph.in_edges(acronym)
        if edge.kind is EdgeKind.DIRECT and edge.source != acronym
    }
    records = [graph.nodes[a] for a in users]
    records.sort(
        key=lambda r: (tuple(-part for part in r.release_date.sort_key()), r.acronym)
    )
    return records


def has_cross_area_user(graph: MethodGraph, acronym: Acronym) -> bool:
    """Red-marking predicate: does a method from another subject area
    build directly on this one?"""
    mine = graph.nodes[acronym].subject_area.strip().lower()
    return any(
        edge.kind is EdgeKind.DIRECT
        and graph.nodes[edge.source].subject_area.strip().lower() != mine
        for edge in graph.in_edges(acronym)
    )


def area_subgraph(graph: MethodGraph, area: str) -> SubgraphView:
    """The view for one subject area: its methods plus what they stand on.

    Members are every node whose subject area matches (case-insensitive,
    exact) plus the direct-edge bases of those nodes, one level deep.
    Cross-area flags are evaluated against the whole graph, so a base
    pulled into the view keeps its global marking.
    """
    needle = area.strip().lower()
    core = {a for a, r in graph.nodes.items() if r.subject_area.strip().lower() == needle}
    if not core:
        raise UnknownAreaError(area)
    members = set(core)
    for acronym in core:
        for edge in graph.out_edges(acronym):
            if edge.kind is EdgeKind.DIRECT:
                members.add(edge.target)
    edges = tuple(e for e in graph.edges if e.source in members and e.target in members)
    flags = {m: has_cross_area_user(graph, m) for m in members}
    canonical = graph.nodes[min(core)].subject_area.strip()
    return SubgraphView(
        area=canonical,
        member_nodes=frozenset(members),
        edges=edges,
        cross_area_flags=flags,
    )


def search(graph: MethodGraph, query: str, limit: int = 10) -> list[MethodRecord]:
    """Case-insensitive search over acronyms and method names.

    Ranking: exact acronym, then acronym prefix, then name prefix, then
    name substring, then acronym substring; ties break by acronym.
    """
    needle = query.strip().lower()
    if not needle:
        raise ValueError("search query is empty")
    if limit < 1:
        raise ValueError("limit must be at least 1")
    ranked: list[tuple[int, Acronym]] = []
    for acronym, record in graph.nodes.items():
        acr = acronym.lower()
        name = record.method_name.lower()
        if acr == needle:
            tier = 0
        elif acr.startswith(needle):
            tier = 1
        elif name.startswith(needle):
            tier = 2
        elif needle in name:
            tier = 3
        elif needle in acr:
            tier = 4
        else:
            continue
        ranked.append((tier, acronym))
    ranked.sort()
    return [graph.nodes[a] for _, a in ranked[:limit]]


def recommend(
    graph: MethodGraph,
    known: set[Acronym],
    k: int = 5,
    base_weight: float = BASE_WEIGHT_DEFAULT,
    user_weight: float = USER_WEIGHT_DEFAULT,
) -> list[Recommendation]:
    """Suggest what to read next given the methods someone already knows.

    A candidate scores ``base_weight`` per known direct base and
    ``user_weight`` per known direct user; zero-score candidates are
    dropped. Order: score desc, release date desc, acronym asc — total
    and deterministic.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    for acronym in known:
        _require(graph, acronym)
    out: list[Recommendation] = []
    for acronym, record in graph.nodes.items():
        if acronym in known:
            continue
        bases_known = sorted(
            {e.target for e in graph.out_edges(acronym) if e.kind is EdgeKind.DIRECT} & known
        )
        users_known = sorted(
            {e.source for e in graph.in_edges(acronym) if e.kind is EdgeKind.DIRECT} & known
        )
        score = base_weight * len(bases_known) + user_weight * len(users_known)
        if score <= 0:
            continue
        reasons = []
        if bases_known:
            reasons.append(f"builds on {', '.join(bases_known)} you already know")
        if users_known:
            reasons.append(f"used by {', '.join(users_known)} you already know")
        out.append(Recommendation(acronym, score, tuple(reasons)))
    out.sort(
        key=lambda rec: (
            -rec.score,
            tuple(-part for part in graph.nodes[rec.acronym].release_date.sort_key()),
            rec.acronym,
        )
    )
    return out[:k]


def strongly_connected_components(graph: MethodGraph) -> list[frozenset[Acronym]]:
    """Tarjan's algorithm, iterative, over direct edges only.

    Deterministic: roots are visited in sorted-acronym order.
    """
    adjacency = {
        a: [e.target for e in graph.out_edges(a) if e.kind is EdgeKind.DIRECT]
        for a in graph.nodes
    }
    index: dict[Acronym, int] = {}
    low: dict[Acronym, int] = {}
    on_stack: set[Acronym] = set()
    stack: list[Acronym] = []
    components: list[frozenset[Acronym]] = []
    counter = 0

    for root in graph.nodes:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work: list[tuple[Acronym, Iterator[Acronym]]] = [(root, iter(adjacency[root]))]
        while work:
            node, children = work[-1]
            advanced = False
            for child in children:
                if child not in index:
                    index[child] = low[child] = counter
                    counter += 1
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(adjacency[child])))
                    advanced = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                component = set()
                while True:
                    top = stack.pop()
                    on_stack.discard(top)
                    component.add(top)
                    if top == node:
                        break
                components.append(frozenset(component))
    return components


def validate_dag(graph: MethodGraph) -> list[ValidationIssue]:
    """Flag every directed cycle over direct edges.

    One ``cycle`` issue per strongly connected component of size >= 2
    (the detail lists all members) and one ``self_loop`` issue per
    direct self-edge. An empty result is a proof the direct-edge graph
    is a DAG.
    """
    issues: list[ValidationIssue] = []
    for component in strongly_connected_components(graph):
        if len(component) >= 2:
            members = sorted(component)
            issues.append(
                ValidationIssue(
                    Severity.ERROR,
                    IssueCode.CYCLE,
                    members[0],
                    "cycle among: " + ", ".join(members),
                )
            )
    for edge in graph.edges:
        if edge.kind is EdgeKind.DIRECT and edge.source == edge.target:
            issues.append(
                ValidationIssue(
                    Severity.ERROR,
                    IssueCode.SELF_LOOP,
                    edge.source,
                    "method lists itself as a base",
                )
            )
    issues.sort(key=lambda i: (str(i.subject), i.code.value))
    return issues
