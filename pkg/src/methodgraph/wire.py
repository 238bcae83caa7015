"""JSON wire documents shared by the HTTP service and the CLI.

Whatever emits graph JSON goes through these builders, so a shape change
here is a shape change everywhere — there is exactly one serialization
path. Node and link documents follow the common force-graph viewer
convention: ``{"nodes": [{"id", ...}], "links": [{"source", "target"}]}``.
"""

from __future__ import annotations

import json
from typing import Mapping, Sequence

from .graphcore import (
    MethodGraph,
    Recommendation,
    SubgraphView,
    has_cross_area_user,
)
from .ingest import record_to_dict
from .schema import Acronym, EdgeKind, ValidationIssue

__all__ = [
    "dumps",
    "export_layout",
    "graph_document",
    "issues_payload",
    "method_document",
    "recommendations_payload",
    "records_payload",
    "subgraph_document",
]


def dumps(document) -> str:
    """Canonical JSON bytes for a wire document: compact, sorted keys,
    UTF-8 kept literal, NaN rejected outright."""
    return json.dumps(
        document, ensure_ascii=False, sort_keys=True, separators=(",", ":"), allow_nan=False
    )


def _node_entry(graph: MethodGraph, acronym: Acronym, flag: bool) -> dict:
    record = graph.nodes[acronym]
    return {
        "id": acronym,
        "name": record.method_name,
        "area": record.subject_area,
        "flag": flag,
    }


def _link_entries(edges, include_conceptual: bool = True) -> list[dict]:
    return [
        {"source": e.source, "target": e.target, "kind": e.kind.value}
        for e in edges
        if include_conceptual or e.kind is not EdgeKind.CONCEPTUAL
    ]


def export_layout(
    positions: Mapping[Acronym, Sequence[float]],
    graph: MethodGraph,
    flags: Mapping[Acronym, bool] | None = None,
) -> dict:
    """Positions plus graph structure in the force-graph node/link form.

    ``positions`` must cover exactly the graph's nodes; ``z`` appears on
    every node precisely when the layout was three-dimensional. When the
    graph is a view of something larger, pass ``flags`` computed against
    the full graph so cross-area markings survive the restriction.
    """
    if set(positions) != set(graph.nodes):
        raise ValueError("positions do not cover exactly the graph's nodes")
    lengths = {len(v) for v in positions.values()}
    if lengths - {2, 3} or len(lengths) != 1:
        raise ValueError("positions must be uniformly 2- or 3-dimensional")
    dimensions = lengths.pop()

    nodes = []
    for acronym in sorted(graph.nodes):
        flag = flags[acronym] if flags is not None else has_cross_area_user(graph, acronym)
        entry = _node_entry(graph, acronym, flag)
        point = positions[acronym]
        entry["x"] = float(point[0])
        entry["y"] = float(point[1])
        if dimensions == 3:
            entry["z"] = float(point[2])
        nodes.append(entry)
    return {"nodes": nodes, "links": _link_entries(graph.edges)}


def graph_document(graph: MethodGraph, include_conceptual: bool = False) -> dict:
    """Structure-only document for the whole snapshot (no coordinates)."""
    nodes = [
        _node_entry(graph, acronym, has_cross_area_user(graph, acronym))
        for acronym in sorted(graph.nodes)
    ]
    return {
        "snapshot_id": graph.snapshot_id,
        "nodes": nodes,
        "links": _link_entries(graph.edges, include_conceptual),
    }


def subgraph_document(view: SubgraphView, graph: MethodGraph) -> dict:
    nodes = [
        _node_entry(graph, acronym, view.cross_area_flags[acronym])
        for acronym in sorted(view.member_nodes)
    ]
    return {
        "area": view.area,
        "nodes": nodes,
        "links": _link_entries(view.edges),
    }


def method_document(graph: MethodGraph, acronym: Acronym) -> dict:
    """Full record plus one-hop neighborhood, for the metadata panel."""
    record = graph.record(acronym)
    bases = [
        {"acronym": e.target, "kind": e.kind.value}
        for e in graph.out_edges(acronym)
        if e.target != acronym
    ]
    users = [
        {"acronym": e.source, "kind": e.kind.value}
        for e in sorted(graph.in_edges(acronym), key=lambda e: e.source)
        if e.source != acronym
    ]
    return {"record": record_to_dict(record), "bases": bases, "users": users}


def records_payload(records) -> list[dict]:
    return [record_to_dict(r) for r in records]


def recommendations_payload(recommendations: list[Recommendation]) -> list[dict]:
    return [
        {"acronym": r.acronym, "score": r.score, "reasons": list(r.reasons)}
        for r in recommendations
    ]


def issues_payload(issues: Sequence[ValidationIssue]) -> list[dict]:
    return [issue.as_dict() for issue in issues]
