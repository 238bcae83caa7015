"""HTTP API over the method graph: snapshots, layouts, submissions.

One process owns one dataset. Readers always work against the snapshot
they grabbed at the start of their request; the snapshot itself is an
immutable object, so isolation costs nothing. All mutations (community
submissions, collection changes) funnel through a single writer lock:
validate, append to the log, rebuild, and publish the next snapshot
with one attribute assignment.

Every JSON body is produced by the wire module, so the service and the
CLI emit byte-identical shapes, and repeated reads of a deterministic
resource (layouts in particular) return byte-identical responses.
"""

from __future__ import annotations

import json
import threading
from collections import OrderedDict
from dataclasses import replace
from datetime import datetime, timezone

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import Response

from . import wire
from .config import Settings, settings_from_env
from .graphcore import (
    MethodGraph,
    UnknownAcronymError,
    UnknownAreaError,
    ancestors,
    area_subgraph,
    build_graph,
    descendants,
    has_cross_area_user,
    induced_subgraph,
    recommend,
    search,
    strongly_connected_components,
    upgrade_candidates,
)
from .ingest import record_from_dict
from .layout import run
from .schema import (
    IssueCode,
    MalformedFieldError,
    MethodRecord,
    Severity,
    ValidationIssue,
    validate_record,
)
from .store import (
    Collection,
    Datastore,
    Submission,
    append_submission,
    apply_submission,
    load_dataset,
    read_collections,
    write_collections,
)

__all__ = ["create_app", "ServiceState"]

_LAYOUT_CACHE_SIZE = 32


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _json(document, status_code: int = 200) -> Response:
    return Response(
        wire.dumps(document), status_code=status_code, media_type="application/json"
    )


def _error(status_code: int, code: str, detail: str, **extra) -> Response:
    body: dict = {"error": {"code": code, "detail": detail}}
    body.update(extra)
    return _json(body, status_code)


class ServiceState:
    """Everything one service instance owns: the published snapshot,
    the datastore paths, collections, and the writer lock."""

    def __init__(self, store: Datastore, settings: Settings):
        self.store = store
        self.settings = settings
        self.graph, self.boot_report = load_dataset(store)
        self.collections = read_collections(store.collections_path)
        self.lock = threading.Lock()
        self._layout_cache: OrderedDict[tuple, str] = OrderedDict()

    # -- layout ------------------------------------------------------

    def layout_body(
        self, graph: MethodGraph, dim: int, seed: int, scope: tuple, document_extra: dict
    ) -> str:
        """Serialized layout for a scope, cached per snapshot.

        The simulation is deterministic, so caching cannot change any
        response body; it only makes the repeat reads the UI issues
        (pan, reselect, reload) cheap.
        """
        key = (graph.snapshot_id, dim, seed, scope)
        cached = self._layout_cache.get(key)
        if cached is not None:
            self._layout_cache.move_to_end(key)
            return cached

        sub, flags = self._scope_graph(graph, scope)
        params = replace(self.settings.layout, dimensions=dim, seed=seed)
        positions, _stats = run(sub, params)
        document = wire.export_layout(positions, sub, flags)
        document.update(document_extra)
        body = wire.dumps(document)
        self._layout_cache[key] = body
        while len(self._layout_cache) > _LAYOUT_CACHE_SIZE:
            self._layout_cache.popitem(last=False)
        return body

    def _scope_graph(self, graph: MethodGraph, scope: tuple):
        kind, value = scope
        if kind == "area":
            view = area_subgraph(graph, value)
            sub = induced_subgraph(graph, set(view.member_nodes))
            return sub, view.cross_area_flags
        if kind == "collection":
            members = set(value)
            sub = induced_subgraph(graph, members)
            flags = {a: has_cross_area_user(graph, a) for a in members}
            return sub, flags
        return graph, None

    # -- mutations (call only while holding the lock) ------------------

    def publish(self, records: list[MethodRecord]) -> None:
        graph, _report = build_graph(records, snapshot_id=self.graph.snapshot_id + 1)
        self.graph = graph  # single reference swap: readers see old or new, never a mix

    def save_collections(self) -> None:
        write_collections(self.store.collections_path, self.collections)


def _validate_submission(
    graph: MethodGraph, record: MethodRecord
) -> list[ValidationIssue]:
    """Local record checks plus snapshot-level checks: dangling refs and
    any direct-edge cycle the change would introduce."""
    issues = validate_record(record)
    nodes = set(graph.nodes) | {record.acronym}
    for ref in record.based_on:
        if ref.target == record.acronym:
            continue  # the self-loop check already flagged it
        if ref.target not in nodes:
            issues.append(
                ValidationIssue(
                    Severity.ERROR,
                    IssueCode.DANGLING_REF,
                    record.acronym,
                    f"based-on target {ref.target} is not in the graph",
                )
            )
    if any(issue.is_error for issue in issues):
        return issues

    candidate, report = build_graph(apply_submission(list(graph.nodes.values()), record))
    for component in strongly_connected_components(candidate):
        if len(component) > 1 and record.acronym in component:
            issues.append(
                ValidationIssue(
                    Severity.ERROR,
                    IssueCode.CYCLE,
                    record.acronym,
                    "cycle among: " + ", ".join(sorted(component)),
                )
            )
    # reuse the bulk builder's date check, restricted to this record
    issues.extend(
        issue
        for issue in report.issues
        if issue.code is IssueCode.DATE_ANOMALY and issue.subject == record.acronym
    )
    return issues


def _collection_document(collection: Collection, graph: MethodGraph) -> dict:
    """Stale members (pointing at nothing in the current snapshot) are
    listed, never silently dropped."""
    return {
        "name": collection.name,
        "members": sorted(collection.members),
        "created_at": collection.created_at,
        "stale": sorted(m for m in collection.members if m not in graph.nodes),
    }


def create_app(settings: Settings | None = None) -> FastAPI:
    """Build the application; loads the dataset eagerly so a bad data
    path fails at startup, not on first request."""
    settings = settings if settings is not None else settings_from_env()
    store = Datastore.at(
        settings.data_path, settings.log_path, settings.collections_path
    )
    state = ServiceState(store, settings)
    app = FastAPI(title="methodgraph", docs_url=None, redoc_url=None, openapi_url=None)
    app.state.service = state

    @app.exception_handler(RequestValidationError)
    def malformed_query(_request: Request, exc: RequestValidationError) -> Response:
        return _error(400, "malformed_query", str(exc.errors()[0].get("msg", exc)))

    # -- read endpoints ------------------------------------------------

    @app.get("/api/health")
    def health() -> Response:
        graph = state.graph
        return _json(
            {
                "status": "ok",
                "snapshot_id": graph.snapshot_id,
                "nodes": graph.node_count,
                "edges": graph.edge_count,
            }
        )

    @app.get("/api/graph")
    def whole_graph(include_conceptual: bool = False) -> Response:
        return _json(wire.graph_document(state.graph, include_conceptual))

    @app.get("/api/methods/{acronym}")
    def method(acronym: str) -> Response:
        graph = state.graph
        key = acronym.strip().upper()
        if key not in graph.nodes:
            return _error(404, "unknown_acronym", f"no method with acronym {key}")
        return _json(wire.method_document(graph, key))

    def _closure(acronym: str, include_conceptual: bool, fn) -> Response:
        graph = state.graph
        key = acronym.strip().upper()
        if key not in graph.nodes:
            return _error(404, "unknown_acronym", f"no method with acronym {key}")
        return _json(sorted(fn(graph, key, include_conceptual=include_conceptual)))

    @app.get("/api/methods/{acronym}/ancestors")
    def method_ancestors(acronym: str, include_conceptual: bool = False) -> Response:
        return _closure(acronym, include_conceptual, ancestors)

    @app.get("/api/methods/{acronym}/descendants")
    def method_descendants(acronym: str, include_conceptual: bool = False) -> Response:
        return _closure(acronym, include_conceptual, descendants)

    @app.get("/api/methods/{acronym}/upgrades")
    def method_upgrades(acronym: str) -> Response:
        graph = state.graph
        key = acronym.strip().upper()
        if key not in graph.nodes:
            return _error(404, "unknown_acronym", f"no method with acronym {key}")
        return _json(wire.records_payload(upgrade_candidates(graph, key)))

    @app.get("/api/areas")
    def areas() -> Response:
        return _json(state.graph.areas())

    @app.get("/api/areas/{area}/graph")
    def area_graph(area: str) -> Response:
        graph = state.graph
        try:
            view = area_subgraph(graph, area)
        except UnknownAreaError:
            return _error(404, "unknown_area", f"no subject area matching {area!r}")
        return _json(wire.subgraph_document(view, graph))

    @app.get("/api/search")
    def search_methods(q: str, limit: int = 10) -> Response:
        if not q.strip():
            return _error(400, "malformed_query", "q must be nonempty")
        if not 1 <= limit <= 100:
            return _error(400, "malformed_query", "limit must be between 1 and 100")
        return _json(wire.records_payload(search(state.graph, q, limit)))

    @app.get("/api/recommendations")
    def recommendations(known: str, k: int = 5) -> Response:
        graph = state.graph
        if k < 1:
            return _error(400, "malformed_query", "k must be at least 1")
        acronyms = {part.strip().upper() for part in known.split(",") if part.strip()}
        if not acronyms:
            return _error(400, "malformed_query", "known must list at least one acronym")
        try:
            picks = recommend(
                graph,
                acronyms,
                k=k,
                base_weight=state.settings.base_weight,
                user_weight=state.settings.user_weight,
            )
        except UnknownAcronymError as exc:
            return _error(404, "unknown_acronym", str(exc))
        return _json(wire.recommendations_payload(picks))

    @app.get("/api/layout")
    def layout(
        dim: int | None = None,
        seed: int | None = None,
        area: str | None = None,
        collection: str | None = None,
    ) -> Response:
        graph = state.graph
        dim = state.settings.layout.dimensions if dim is None else dim
        seed = state.settings.layout.seed if seed is None else seed
        if dim not in (2, 3):
            return _error(400, "malformed_query", "dim must be 2 or 3")
        if area is not None and collection is not None:
            return _error(400, "malformed_query", "area and collection are exclusive")

        extra: dict = {}
        if area is not None:
            try:
                area_subgraph(graph, area)
            except UnknownAreaError:
                return _error(404, "unknown_area", f"no subject area matching {area!r}")
            scope = ("area", area.strip().lower())
        elif collection is not None:
            stored = state.collections.get(collection)
            if stored is None:
                return _error(404, "unknown_collection", f"no collection named {collection!r}")
            live = tuple(sorted(m for m in stored.members if m in graph.nodes))
            if not live:
                return _error(422, "empty_collection", "no member is in the current graph")
            stale = sorted(stored.members - set(live))
            if stale:
                extra["stale"] = stale
            scope = ("collection", live)
        else:
            scope = ("all", None)
        return Response(
            state.layout_body(graph, dim, seed, scope, extra),
            media_type="application/json",
        )

    # -- collections ---------------------------------------------------

    @app.get("/api/collections")
    def list_collections() -> Response:
        graph = state.graph
        docs = [
            _collection_document(c, graph)
            for c in sorted(state.collections.values(), key=lambda c: c.name)
        ]
        return _json(docs)

    @app.get("/api/collections/{name}")
    def get_collection(name: str) -> Response:
        stored = state.collections.get(name)
        if stored is None:
            return _error(404, "unknown_collection", f"no collection named {name!r}")
        return _json(_collection_document(stored, state.graph))

    @app.post("/api/collections")
    async def create_collection(request: Request) -> Response:
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return _error(400, "malformed_body", "request body is not valid JSON")
        if not isinstance(body, dict):
            return _error(400, "malformed_body", "expected an object")
        name = body.get("name")
        members = body.get("members")
        if not isinstance(name, str) or not name.strip():
            return _error(422, "validation_failed", "name must be a nonempty string")
        if not isinstance(members, list) or not all(isinstance(m, str) for m in members):
            return _error(422, "validation_failed", "members must be a list of acronyms")
        name = name.strip()
        normalized = {m.strip().upper() for m in members if m.strip()}
        with state.lock:
            graph = state.graph
            if name in state.collections:
                return _error(422, "validation_failed", f"collection {name!r} already exists")
            missing = sorted(m for m in normalized if m not in graph.nodes)
            if missing:
                return _error(
                    422,
                    "validation_failed",
                    "unknown members: " + ", ".join(missing),
                )
            stored = Collection(
                name=name, members=frozenset(normalized), created_at=_utc_now()
            )
            state.collections[name] = stored
            state.save_collections()
            return _json(_collection_document(stored, graph), 201)

    @app.delete("/api/collections/{name}")
    def delete_collection(name: str) -> Response:
        with state.lock:
            if name not in state.collections:
                return _error(404, "unknown_collection", f"no collection named {name!r}")
            del state.collections[name]
            state.save_collections()
        return Response(status_code=204)

    # -- submissions -----------------------------------------------------

    @app.post("/api/submissions")
    async def submit(request: Request) -> Response:
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return _error(400, "malformed_body", "request body is not valid JSON")
        if not isinstance(body, dict) or not isinstance(body.get("record"), dict):
            return _error(400, "malformed_body", 'expected {"record": {...}}')
        submitter = str(body.get("submitter", ""))

        with state.lock:
            graph = state.graph
            try:
                record = record_from_dict(body["record"])
            except MalformedFieldError as exc:
                issue = ValidationIssue(
                    Severity.ERROR, IssueCode.MALFORMED_FIELD, 0, str(exc)
                )
                return _error(
                    422,
                    "validation_failed",
                    str(exc),
                    issues=wire.issues_payload([issue]),
                )
            issues = _validate_submission(graph, record)
            submission = Submission(
                record=record,
                submitter=submitter,
                submitted_at=_utc_now(),
                status="rejected" if any(i.is_error for i in issues) else "accepted",
                issues=tuple(issues),
            )
            if submission.status == "rejected":
                errors = sum(1 for i in issues if i.is_error)
                return _error(
                    422,
                    "validation_failed",
                    f"submission rejected: {errors} error(s)",
                    submission=submission.as_dict(),
                )
            append_submission(state.store.log_path, submission)
            state.publish(apply_submission(list(graph.nodes.values()), record))
        return _json(submission.as_dict(), 201)

    return app
