import json

import pytest
from fastapi.testclient import TestClient

from nl2domain.config import PipelineConfig
from nl2domain.service.app import create_app
from nl2domain.service.sessions import SessionManager
from nl2domain.service.spellcheck import SpellChecker, edit_distance

from conftest import (
    AFFECT_SENTENCE,
    AFFORDANCE_SENTENCE,
    COREF_SENTENCE,
    TABLE1_SENTENCES,
)

TABLE1_TEXT = "\n".join(TABLE1_SENTENCES)


@pytest.fixture()
def client():
    return TestClient(create_app())


def new_session(client, objects=None) -> str:
    body = {"objects": objects or []}
    r = client.post("/sessions", json=body)
    assert r.status_code == 200
    return r.json()["session_id"]


class TestSessionLifecycle:
    def test_create_session_default_config(self, client):
        sid = new_session(client)
        r = client.get(f"/sessions/{sid}/domain")
        assert r.status_code == 200
        assert r.json()["states"] == []

    def test_bad_embedding_path_is_rejected(self, client):
        r = client.post("/sessions",
                        json={"config": {"embeddings_path": "/no/such/file"}})
        assert r.status_code == 422

    def test_two_sessions_have_distinct_ids(self, client):
        assert new_session(client) != new_session(client)

    def test_unknown_session_is_404(self, client):
        assert client.get("/sessions/nope/domain").status_code == 404


class TestSubmitText:
    def test_table1_shapes_the_domain(self, client):
        sid = new_session(client)
        r = client.post(f"/sessions/{sid}/text", json={"text": TABLE1_TEXT})
        assert r.status_code == 200
        domain = client.get(f"/sessions/{sid}/domain").json()
        fluents = [s for s in domain["states"] if s["kind"] == "fluent"]
        binaries = [s for s in domain["states"] if s["kind"] == "binary"]
        assert len(fluents) == 1 and len(binaries) == 4
        assert fluents[0]["values"] == ["restaurant", "park"]

    def test_affordance_sentence(self, client):
        sid = new_session(client)
        r = client.post(f"/sessions/{sid}/text",
                        json={"text": AFFORDANCE_SENTENCE})
        report = r.json()
        assert report["sentences"][0]["category"] == "affordance"
        domain = client.get(f"/sessions/{sid}/domain").json()
        assert len(domain["affordances"]) == 1
        aff = domain["affordances"][0]
        assert aff["name"] == "go_to_library"
        assert len(aff["preconditions"]) == 1
        assert len(aff["postconditions"]) == 1

    def test_empty_text_changes_nothing(self, client):
        sid = new_session(client)
        before = client.get(f"/sessions/{sid}/domain").json()
        r = client.post(f"/sessions/{sid}/text", json={"text": "   "})
        assert r.status_code == 200
        assert r.json()["sentences"] == []
        assert client.get(f"/sessions/{sid}/domain").json() == before

    def test_per_sentence_atomicity(self, client):
        sid = new_session(client)
        mixed = (TABLE1_SENTENCES[0] + "\n"
                 + "Qwxz florp blarg.\n"
                 + TABLE1_SENTENCES[3])
        r = client.post(f"/sessions/{sid}/text", json={"text": mixed})
        statuses = [s["status"] for s in r.json()["sentences"]]
        assert statuses == ["ok", "error", "ok"]
        domain = client.get(f"/sessions/{sid}/domain").json()
        ids = {s["id"] for s in domain["states"]}
        assert ids == {"max_go", "max_stand_station"}

    def test_explicit_category_bypasses_precedence(self, client):
        sid = new_session(client)
        # force the affect-looking sentence through the state panel: it has
        # no extractable triple, so it lands as unmatched, not an affect rule
        r = client.post(f"/sessions/{sid}/text",
                        json={"text": "Max sleeps.", "category": "affordance"})
        assert r.json()["sentences"][0]["status"] == "unmatched"

    def test_conllu_sidecar_consumed(self, client):
        conllu = (
            "# text = Max drinks juice\n"
            "1\tMax\tMax\tPROPN\t_\t_\t2\tnsubj\t_\t_\n"
            "2\tdrinks\tdrink\tVERB\t_\t_\t0\troot\t_\t_\n"
            "3\tjuice\tjuice\tNOUN\t_\t_\t2\tdobj\t_\t_\n")
        sid = new_session(client)
        r = client.post(f"/sessions/{sid}/text",
                        json={"text": "", "conllu": conllu, "category": "state"})
        assert r.status_code == 200
        domain = client.get(f"/sessions/{sid}/domain").json()
        assert {s["id"] for s in domain["states"]} == {"max_drink_juice"}


class TestSuggestionsEndpoints:
    def test_accept_capability_inserts_skeleton(self, client):
        sid = new_session(client, objects=[{"name": "max", "type": "dog"}])
        sugs = client.get(f"/sessions/{sid}/suggestions").json()["suggestions"]
        cap = next(s for s in sugs if "guide a blind person" in s["prompt"])
        r = client.post(f"/sessions/{sid}/suggestions/{cap['id']}/accept")
        assert r.status_code == 200
        code = client.get(f"/sessions/{sid}/code",
                          params={"target": "sexpr"}).text
        assert "guide_blind_person" in code

    def test_reject_suppresses_reproposal(self, client):
        sid = new_session(client, objects=[{"name": "max", "type": "dog"}])
        sugs = client.get(f"/sessions/{sid}/suggestions").json()["suggestions"]
        cap = next(s for s in sugs if "guide a blind person" in s["prompt"])
        client.post(f"/sessions/{sid}/suggestions/{cap['id']}/reject")
        client.post(f"/sessions/{sid}/text", json={"text": TABLE1_TEXT})
        again = client.get(f"/sessions/{sid}/suggestions").json()["suggestions"]
        assert cap["id"] not in {s["id"] for s in again}

    def test_double_decision_is_an_error(self, client):
        sid = new_session(client, objects=[{"name": "max", "type": "dog"}])
        sugs = client.get(f"/sessions/{sid}/suggestions").json()["suggestions"]
        cap = next(s for s in sugs if s["kind"] == "capability")
        assert client.post(
            f"/sessions/{sid}/suggestions/{cap['id']}/accept").status_code == 200
        assert client.post(
            f"/sessions/{sid}/suggestions/{cap['id']}/accept").status_code == 422

    def test_unknown_suggestion_is_an_error(self, client):
        sid = new_session(client)
        assert client.post(
            f"/sessions/{sid}/suggestions/s-none/accept").status_code == 422


class TestGetCode:
    def test_code_is_pure(self, client):
        sid = new_session(client)
        client.post(f"/sessions/{sid}/text", json={"text": TABLE1_TEXT})
        a = client.get(f"/sessions/{sid}/code", params={"target": "sexpr"}).text
        b = client.get(f"/sessions/{sid}/code", params={"target": "sexpr"}).text
        assert a == b

    def test_both_targets(self, client):
        sid = new_session(client)
        client.post(f"/sessions/{sid}/text", json={"text": TABLE1_TEXT})
        assert "define-smart-object" in client.get(
            f"/sessions/{sid}/code", params={"target": "sexpr"}).text
        assert "(define (domain" in client.get(
            f"/sessions/{sid}/code", params={"target": "pddl"}).text

    def test_unknown_target(self, client):
        sid = new_session(client)
        r = client.get(f"/sessions/{sid}/code", params={"target": "cobol"})
        assert r.status_code == 422

    def test_empty_session_emits_skeleton(self, client):
        sid = new_session(client)
        text = client.get(f"/sessions/{sid}/code", params={"target": "sexpr"}).text
        assert text.startswith(";;")


class TestSpellcheck:
    def test_libary_suggests_library(self, client):
        r = client.post("/spellcheck", json={"text": "Max goes to the libary"})
        flags = r.json()["flags"]
        assert len(flags) == 1
        assert flags[0]["token"] == "libary"
        assert "library" in flags[0]["candidates"]

    def test_correct_text_has_no_flags(self, client):
        r = client.post("/spellcheck",
                        json={"text": "Max goes to the library"})
        assert r.json()["flags"] == []

    def test_domain_slug_exempt(self, client):
        sid = new_session(client)
        client.post(f"/sessions/{sid}/text", json={"text": TABLE1_TEXT})
        r = client.post("/spellcheck",
                        json={"text": "max_go is a fluent", "session_id": sid})
        assert r.json()["flags"] == []

    def test_edit_distance_oracle(self):
        # brute-force oracle: single-character edits of "library"
        word = "library"
        singles = set()
        alphabet = "abcdefghijklmnopqrstuvwxyz"
        for i in range(len(word) + 1):
            for c in alphabet:
                singles.add(word[:i] + c + word[i:])
        for i in range(len(word)):
            singles.add(word[:i] + word[i + 1:])
            for c in alphabet:
                singles.add(word[:i] + c + word[i + 1:])
        for variant in sorted(singles)[::23]:
            assert edit_distance(variant, word) <= 1

    def test_candidates_ranked_by_distance_then_frequency(self):
        checker = SpellChecker(dictionary=["their", "there", "these", "cheese"])
        cands = checker.candidates("theer")
        assert cands[0] in {"their", "there"}
        assert "cheese" not in cands


class TestPersistenceAndReplay:
    def test_event_sourced_replay_reproduces_bundle(self, tmp_path):
        config = PipelineConfig(session_root=str(tmp_path))
        manager = SessionManager(config)
        session = manager.create(objects=[{"name": "max", "type": "dog"}])
        manager.submit_text(session.id, TABLE1_TEXT)
        manager.submit_text(session.id, AFFORDANCE_SENTENCE)
        manager.submit_text(session.id, AFFECT_SENTENCE)
        cap = next(s for s in session.pending()
                   if "guide a blind person" in s.prompt)
        manager.decide_suggestion(session.id, cap.id, accept=True)

        replayed = manager.replay(session.transcript, config)
        assert replayed.structurally_equal(session.bundle)

    def test_load_session_verifies_replay(self, tmp_path):
        config = PipelineConfig(session_root=str(tmp_path))
        manager = SessionManager(config)
        session = manager.create()
        manager.submit_text(session.id, TABLE1_TEXT)

        fresh = SessionManager(config)
        loaded = fresh.load_session(session.id)
        assert loaded.bundle.structurally_equal(session.bundle)

    def test_persisted_layout(self, tmp_path):
        config = PipelineConfig(session_root=str(tmp_path))
        manager = SessionManager(config)
        session = manager.create()
        manager.submit_text(session.id, COREF_SENTENCE)
        directory = tmp_path / session.id
        assert (directory / "bundle.json").exists()
        assert (directory / "transcript.jsonl").exists()
        assert (directory / "config.json").exists()
        events = [json.loads(l) for l in
                  (directory / "transcript.jsonl").read_text().splitlines()]
        assert events[-1]["event"] == "text"
