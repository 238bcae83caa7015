"""End-to-end checks of the HTTP API against a temporary datastore.

Every response body goes through the canonical serializer, so byte
comparisons between repeated calls are meaningful.
"""

import json

import pytest
from fastapi.testclient import TestClient

from methodgraph.config import Settings
from methodgraph.datagen import fixture_records
from methodgraph.ingest import export_table, record_to_dict
from methodgraph.layout import LayoutParams
from methodgraph.server import create_app
from methodgraph.store import Collection, Datastore, write_collections

from helpers import make_record

# Layout quality is irrelevant here; keep the endpoint cheap.
FAST_LAYOUT = LayoutParams(max_iterations=300)


def client_for(data_path) -> TestClient:
    settings = Settings(data_path=str(data_path), layout=FAST_LAYOUT)
    return TestClient(create_app(settings))


@pytest.fixture
def client(datastore_dir) -> TestClient:
    return client_for(datastore_dir / "fixture.csv")


def error_of(response) -> dict:
    body = response.json()
    assert set(body["error"]) >= {"code", "detail"}
    return body["error"]


class TestReadRoutes:
    def test_health(self, client):
        body = client.get("/api/health").json()
        assert body == {"status": "ok", "snapshot_id": 1, "nodes": 7, "edges": 6}

    def test_graph_document(self, client):
        body = client.get("/api/graph").json()
        assert [n["id"] for n in body["nodes"]] == sorted(
            r.acronym for r in fixture_records()
        )
        assert {(l["source"], l["target"]) for l in body["links"]} == {
            ("GAN", "GEN"), ("GAN", "DIS"),
            ("AAE", "AE"), ("AAE", "DIS"),
            ("AE", "ENCDR"), ("AE", "DCDR"),
        }
        assert all(set(n) == {"id", "name", "area", "flag"} for n in body["nodes"])

    def test_conceptual_links_are_opt_in(self, tmp_path):
        records = list(fixture_records())
        records.append(make_record("WGAN", (("GAN", "conceptual"),), date=(2017, 1, 26)))
        path = tmp_path / "data.csv"
        path.write_text(export_table(records), encoding="utf-8")
        api = client_for(path)

        plain = api.get("/api/graph").json()
        full = client_for(path).get("/api/graph?include_conceptual=true").json()
        assert len(plain["links"]) == 6
        assert len(full["links"]) == 7
        assert {"source": "WGAN", "target": "GAN", "kind": "conceptual"} in full["links"]
        # the node itself is always present; only the link is filtered
        assert any(n["id"] == "WGAN" for n in plain["nodes"])
        assert api.get("/api/methods/WGAN/ancestors").json() == []
        assert api.get(
            "/api/methods/WGAN/ancestors?include_conceptual=true"
        ).json() == ["DIS", "GAN", "GEN"]

    def test_method_document(self, client):
        body = client.get("/api/methods/aae").json()  # case-insensitive lookup
        assert body["record"]["acronym"] == "AAE"
        assert body["bases"] == [
            {"acronym": "AE", "kind": "direct"},
            {"acronym": "DIS", "kind": "direct"},
        ]
        assert body["users"] == []
        dis = client.get("/api/methods/DIS").json()
        assert [u["acronym"] for u in dis["users"]] == ["AAE", "GAN"]

    def test_unknown_method_404(self, client):
        response = client.get("/api/methods/NOPE")
        assert response.status_code == 404
        assert error_of(response)["code"] == "unknown_acronym"

    def test_ancestors_and_descendants(self, client):
        assert client.get("/api/methods/AAE/ancestors").json() == [
            "AE", "DCDR", "DIS", "ENCDR",
        ]
        assert client.get("/api/methods/DIS/descendants").json() == ["AAE", "GAN"]
        assert client.get("/api/methods/GEN/ancestors").json() == []

    def test_upgrades_newest_first(self, client):
        body = client.get("/api/methods/DIS/upgrades").json()
        assert [r["acronym"] for r in body] == ["AAE", "GAN"]

    def test_areas(self, client):
        assert client.get("/api/areas").json() == [
            "Generative Models", "Representation Learning",
        ]

    def test_area_graph_pulls_in_direct_bases(self, client):
        body = client.get("/api/areas/generative models/graph").json()
        assert body["area"] == "Generative Models"
        # AE is outside the area but is a direct base of AAE
        assert [n["id"] for n in body["nodes"]] == ["AAE", "AE", "DIS", "GAN", "GEN"]

    def test_area_flags_mark_cross_area_users(self, client):
        body = client.get("/api/areas/representation learning/graph").json()
        flags = {n["id"]: n["flag"] for n in body["nodes"]}
        assert flags == {"AE": True, "ENCDR": False, "DCDR": False}

    def test_unknown_area_404(self, client):
        response = client.get("/api/areas/Quantum Basketry/graph")
        assert response.status_code == 404
        assert error_of(response)["code"] == "unknown_area"

    def test_search(self, client):
        body = client.get("/api/search", params={"q": "auto"}).json()
        assert [r["acronym"] for r in body] == ["AE", "AAE"]
        limited = client.get("/api/search", params={"q": "auto", "limit": 1}).json()
        assert [r["acronym"] for r in limited] == ["AE"]

    def test_search_rejects_bad_query(self, client):
        assert client.get("/api/search", params={"q": "  "}).status_code == 400
        assert client.get("/api/search", params={"q": "a", "limit": 0}).status_code == 400
        missing = client.get("/api/search")
        assert missing.status_code == 400
        assert error_of(missing)["code"] == "malformed_query"

    def test_recommendations(self, client):
        body = client.get("/api/recommendations", params={"known": "AE,DIS"}).json()
        assert body[0]["acronym"] == "AAE"
        assert body[0]["score"] == 2.0
        assert any("builds on" in reason for reason in body[0]["reasons"])

    def test_recommendations_rejections(self, client):
        assert client.get(
            "/api/recommendations", params={"known": "NOPE"}
        ).status_code == 404
        assert client.get(
            "/api/recommendations", params={"known": " , "}
        ).status_code == 400
        assert client.get(
            "/api/recommendations", params={"known": "AE", "k": 0}
        ).status_code == 400


class TestLayoutRoute:
    def test_shape_and_byte_identity(self, client):
        first = client.get("/api/layout", params={"seed": 5})
        second = client.get("/api/layout", params={"seed": 5})
        assert first.status_code == 200
        assert first.content == second.content
        body = first.json()
        assert {n["id"] for n in body["nodes"]} == {
            r.acronym for r in fixture_records()
        }
        assert all({"x", "y", "z"} <= set(n) for n in body["nodes"])

    def test_two_dimensional(self, client):
        body = client.get("/api/layout", params={"dim": 2}).json()
        assert all("z" not in n for n in body["nodes"])

    def test_seeds_differ(self, client):
        a = client.get("/api/layout", params={"seed": 1}).content
        b = client.get("/api/layout", params={"seed": 2}).content
        assert a != b

    def test_rejects_bad_dim(self, client):
        assert client.get("/api/layout", params={"dim": 4}).status_code == 400
        response = client.get("/api/layout", params={"dim": "x"})
        assert response.status_code == 400
        assert error_of(response)["code"] == "malformed_query"

    def test_area_scope(self, client):
        body = client.get("/api/layout", params={"area": "Representation Learning"}).json()
        assert {n["id"] for n in body["nodes"]} == {"AE", "ENCDR", "DCDR"}
        flags = {n["id"]: n["flag"] for n in body["nodes"]}
        assert flags["AE"] is True  # AAE uses it from another area

    def test_area_and_collection_are_exclusive(self, client):
        response = client.get("/api/layout", params={"area": "x", "collection": "y"})
        assert response.status_code == 400

    def test_unknown_scopes_404(self, client):
        assert client.get("/api/layout", params={"area": "nope"}).status_code == 404
        assert client.get("/api/layout", params={"collection": "nope"}).status_code == 404


class TestCollections:
    def test_create_read_delete(self, client):
        created = client.post(
            "/api/collections", json={"name": "mine", "members": ["gan", "AE "]}
        )
        assert created.status_code == 201
        doc = created.json()
        assert doc["name"] == "mine"
        assert doc["members"] == ["AE", "GAN"]
        assert doc["stale"] == []
        assert "created_at" in doc

        assert client.get("/api/collections/mine").json()["members"] == ["AE", "GAN"]
        assert [c["name"] for c in client.get("/api/collections").json()] == ["mine"]

        scoped = client.get("/api/layout", params={"collection": "mine"}).json()
        assert {n["id"] for n in scoped["nodes"]} == {"AE", "GAN"}

        assert client.delete("/api/collections/mine").status_code == 204
        assert client.get("/api/collections/mine").status_code == 404

    def test_create_rejections(self, client):
        assert client.post(
            "/api/collections", json={"name": " ", "members": []}
        ).status_code == 422
        assert client.post(
            "/api/collections", json={"name": "x", "members": "GAN"}
        ).status_code == 422
        bad = client.post("/api/collections", json={"name": "x", "members": ["ZZZ"]})
        assert bad.status_code == 422
        assert "ZZZ" in error_of(bad)["detail"]
        client.post("/api/collections", json={"name": "dup", "members": ["GAN"]})
        again = client.post("/api/collections", json={"name": "dup", "members": ["AE"]})
        assert again.status_code == 422

    def test_malformed_body_400(self, client):
        response = client.post(
            "/api/collections",
            content=b"not json",
            headers={"content-type": "application/json"},
        )
        assert response.status_code == 400
        assert error_of(response)["code"] == "malformed_body"

    def test_stale_members_reported_not_dropped(self, datastore_dir):
        store = Datastore.at(datastore_dir / "fixture.csv")
        write_collections(
            store.collections_path,
            {"old": Collection("old", frozenset({"GAN", "GONE"}), "2026-01-01T00:00:00+00:00")},
        )
        api = client_for(store.dataset_path)
        doc = api.get("/api/collections/old").json()
        assert doc["members"] == ["GAN", "GONE"]
        assert doc["stale"] == ["GONE"]
        scoped = api.get("/api/layout", params={"collection": "old"}).json()
        assert {n["id"] for n in scoped["nodes"]} == {"GAN"}
        assert scoped["stale"] == ["GONE"]

    def test_all_members_stale_is_422(self, datastore_dir):
        store = Datastore.at(datastore_dir / "fixture.csv")
        write_collections(
            store.collections_path,
            {"ghost": Collection("ghost", frozenset({"GONE"}), "2026-01-01T00:00:00+00:00")},
        )
        api = client_for(store.dataset_path)
        response = api.get("/api/layout", params={"collection": "ghost"})
        assert response.status_code == 422
        assert error_of(response)["code"] == "empty_collection"


class TestSubmissions:
    NEW = record_to_dict(
        make_record("NEW", (("GAN", "direct"),), date=(2024, 5, 1), name="Newcomer")
    )

    def test_accepted_submission_is_immediately_visible(self, client):
        response = client.post(
            "/api/submissions", json={"record": self.NEW, "submitter": "me"}
        )
        assert response.status_code == 201
        body = response.json()
        assert body["status"] == "accepted"
        assert body["submitter"] == "me"
        assert body["issues"] == []

        health = client.get("/api/health").json()
        assert health == {"status": "ok", "snapshot_id": 2, "nodes": 8, "edges": 7}
        assert client.get("/api/methods/NEW").json()["record"]["method_name"] == "Newcomer"
        assert client.get("/api/methods/NEW/ancestors").json() == ["DIS", "GAN", "GEN"]

    def test_amendment_replaces_without_growing(self, client):
        amended = record_to_dict(
            make_record(
                "AAE",
                (("AE", "direct"), ("DIS", "direct")),
                date=(2015, 11, 18),
                name="Adversarial Autoencoder (rev)",
            )
        )
        response = client.post("/api/submissions", json={"record": amended})
        assert response.status_code == 201
        health = client.get("/api/health").json()
        assert health["nodes"] == 7
        assert health["snapshot_id"] == 2
        doc = client.get("/api/methods/AAE").json()
        assert doc["record"]["method_name"] == "Adversarial Autoencoder (rev)"

    def test_dangling_reference_rejected(self, client):
        bad = record_to_dict(make_record("ORPHAN", (("GHOST", "direct"),)))
        response = client.post("/api/submissions", json={"record": bad})
        assert response.status_code == 422
        error = error_of(response)
        assert error["code"] == "validation_failed"
        submission = response.json()["submission"]
        assert submission["status"] == "rejected"
        codes = [issue["code"] for issue in submission["issues"]]
        assert "dangling_ref" in codes
        # nothing was published
        assert client.get("/api/health").json()["snapshot_id"] == 1
        assert client.get("/api/methods/ORPHAN").status_code == 404

    def test_cycle_rejected(self, client):
        # GEN based on GAN would close GAN -> GEN -> GAN
        looped = record_to_dict(
            make_record("GEN", (("GAN", "direct"),), date=(2014, 6, 10))
        )
        response = client.post("/api/submissions", json={"record": looped})
        assert response.status_code == 422
        codes = [i["code"] for i in response.json()["submission"]["issues"]]
        assert codes == ["cycle"]

    def test_date_anomaly_warns_but_accepts(self, client):
        early = record_to_dict(
            make_record("RETRO", (("GAN", "direct"),), date=(2010, 1, 1))
        )
        response = client.post("/api/submissions", json={"record": early})
        assert response.status_code == 201
        body = response.json()
        assert body["status"] == "accepted"
        assert [i["code"] for i in body["issues"]] == ["date_anomaly"]
        assert [i["severity"] for i in body["issues"]] == ["warning"]

    def test_malformed_record_rejected(self, client):
        response = client.post(
            "/api/submissions", json={"record": {"acronym": "X", "release_date": 3}}
        )
        assert response.status_code == 422
        codes = [i["code"] for i in response.json().get("issues", [])]
        assert codes == ["malformed_field"]

    def test_non_object_body_400(self, client):
        assert client.post("/api/submissions", json=["not", "an", "object"]).status_code == 400
        assert client.post("/api/submissions", json={"record": "x"}).status_code == 400
        raw = client.post(
            "/api/submissions",
            content=b"{{{",
            headers={"content-type": "application/json"},
        )
        assert raw.status_code == 400
        assert error_of(raw)["code"] == "malformed_body"

    def test_restart_replays_the_log(self, datastore_dir):
        path = datastore_dir / "fixture.csv"
        first = client_for(path)
        assert first.post(
            "/api/submissions", json={"record": self.NEW, "submitter": "me"}
        ).status_code == 201
        before = first.get("/api/graph").json()

        reborn = client_for(path)
        after = reborn.get("/api/graph").json()
        assert after["nodes"] == before["nodes"]
        assert after["links"] == before["links"]
        assert reborn.get("/api/methods/NEW/ancestors").json() == ["DIS", "GAN", "GEN"]


class TestResponseDiscipline:
    def test_error_envelope_shape_is_uniform(self, client):
        for response in (
            client.get("/api/methods/NOPE"),
            client.get("/api/areas/nope/graph"),
            client.get("/api/collections/nope"),
            client.get("/api/layout", params={"dim": 7}),
        ):
            body = response.json()
            assert set(body) == {"error"} or "submission" in body
            assert set(body["error"]) >= {"code", "detail"}

    def test_responses_are_canonical_json(self, client):
        raw = client.get("/api/graph").content.decode("utf-8")
        parsed = json.loads(raw)
        canonical = json.dumps(
            parsed, sort_keys=True, separators=(",", ":"), ensure_ascii=False
        )
        assert raw == canonical
