import random

from fastapi.testclient import TestClient

from ragforge.engine import GenerationConfig, PromptProfile, RagEngine
from ragforge.providers import mock_provider
from ragforge.service import QuestionCategory, SessionStore, create_app

CONDENSE_MARKER = "Domanda singola"

ALL_CATEGORIES = [category.value for category in QuestionCategory]


def scripted_provider(turns=8):
    script = []
    for i in range(turns):
        script.append((CONDENSE_MARKER, f"domanda condensata {i}?"))
    for i in range(turns):
        script.append((None, f"risposta {i}"))
    return mock_provider(script)


def build_client(tiny_retriever, tmp_path, provider=None, log_name="service.jsonl", store=None):
    provider = provider or scripted_provider()
    engine = RagEngine(
        tiny_retriever,
        provider,
        GenerationConfig(prompt_profile=PromptProfile.CONDENSED),
        k=2,
    )
    store = store or SessionStore(tmp_path / log_name)
    app = create_app(engine, store)
    return TestClient(app), store, provider


def create_session(client):
    response = client.post("/sessions")
    assert response.status_code == 200
    return response.json()["session_id"]


def test_health(tiny_retriever, tmp_path):
    client, _, _ = build_client(tiny_retriever, tmp_path)
    assert client.get("/health").json() == {"status": "ok"}


def test_sessions_get_distinct_ids_and_are_immediately_usable(tiny_retriever, tmp_path):
    client, store, _ = build_client(tiny_retriever, tmp_path)
    first = create_session(client)
    second = create_session(client)
    assert first != second
    assert store.session(first) is not None and store.session(second) is not None


def test_first_message_returns_scripted_answer_with_sources(tiny_retriever, tmp_path):
    client, store, provider = build_client(tiny_retriever, tmp_path)
    session_id = create_session(client)
    response = client.post(f"/sessions/{session_id}/messages", json={"question": "come si pagano le tasse?"})
    assert response.status_code == 200
    body = response.json()
    assert body["turn"] == 0
    assert body["answer"] == "risposta 0"
    assert body["sources"]
    assert len(provider.calls) == 1  # no condensation on the first turn
    assert store.log_entries()[0].question == "come si pagano le tasse?"


def test_second_message_triggers_condensation(tiny_retriever, tmp_path):
    client, _, provider = build_client(tiny_retriever, tmp_path)
    session_id = create_session(client)
    client.post(f"/sessions/{session_id}/messages", json={"question": "prima domanda?"})
    calls_before = len(provider.calls)
    client.post(f"/sessions/{session_id}/messages", json={"question": "e poi?"})
    assert len(provider.calls) - calls_before == 2
    assert CONDENSE_MARKER in provider.calls[calls_before].prompt


def test_unknown_session_is_404(tiny_retriever, tmp_path):
    client, _, _ = build_client(tiny_retriever, tmp_path)
    assert client.post("/sessions/nope/messages", json={"question": "q"}).status_code == 404


def test_empty_question_is_validation_error(tiny_retriever, tmp_path):
    client, _, _ = build_client(tiny_retriever, tmp_path)
    session_id = create_session(client)
    assert client.post(f"/sessions/{session_id}/messages", json={"question": ""}).status_code == 422


def test_provider_outage_yields_degraded_response_not_answer(tiny_retriever, tmp_path):
    broken = mock_provider([(None, RuntimeError("fuori servizio"))])
    client, store, _ = build_client(tiny_retriever, tmp_path, provider=broken)
    session_id = create_session(client)
    response = client.post(f"/sessions/{session_id}/messages", json={"question": "q?"})
    assert response.status_code == 503
    assert "degraded" in response.json()["detail"]
    assert store.log_entries() == []
    assert store.session(session_id).turns == []


def test_persistence_failure_never_reports_success(tiny_retriever, tmp_path, monkeypatch):
    client, store, _ = build_client(tiny_retriever, tmp_path)
    session_id = create_session(client)

    original_append = store._append

    def failing_append(event):
        if event["type"] == "turn":
            raise OSError("disk full")
        return original_append(event)

    monkeypatch.setattr(store, "_append", failing_append)
    response = client.post(f"/sessions/{session_id}/messages", json={"question": "q?"})
    assert response.status_code == 503
    assert store.session(session_id).turns == []
    assert store.log_entries() == []
    assert store.stats().total_questions == 0


def test_feedback_is_stored_and_validated(tiny_retriever, tmp_path):
    client, store, _ = build_client(tiny_retriever, tmp_path)
    session_id = create_session(client)
    client.post(f"/sessions/{session_id}/messages", json={"question": "q?"})

    good = {
        "respondent_role": "UniversityStudent",
        "overall_rating": 5,
        "per_answer_ratings": ["Excellent"],
        "comment": "ottimo",
    }
    assert client.post(f"/sessions/{session_id}/feedback", json=good).status_code == 200
    assert store.stats().feedback_count == 1
    assert store.stats().ratings["5"] == 1
    assert store.stats().roles["UniversityStudent"] == 1

    for rating in (0, 6):
        bad = dict(good, overall_rating=rating)
        assert client.post(f"/sessions/{session_id}/feedback", json=bad).status_code == 422
    too_many = dict(good, per_answer_ratings=["Good", "Bad"])
    assert client.post(f"/sessions/{session_id}/feedback", json=too_many).status_code == 422
    bad_role = dict(good, respondent_role="Alien")
    assert client.post(f"/sessions/{session_id}/feedback", json=bad_role).status_code == 422
    assert client.post("/sessions/nope/feedback", json=good).status_code == 404


def test_thirty_one_feedback_records_show_in_stats(tiny_retriever, tmp_path):
    client, store, _ = build_client(tiny_retriever, tmp_path)
    session_id = create_session(client)
    for i in range(31):
        body = {"respondent_role": "Other", "overall_rating": 1 + i % 5, "per_answer_ratings": []}
        assert client.post(f"/sessions/{session_id}/feedback", json=body).status_code == 200
    stats = client.get("/stats").json()
    assert stats["feedback_count"] == 31
    assert sum(stats["ratings"].values()) == 31


def test_category_tagging_overwrite_and_errors(tiny_retriever, tmp_path):
    client, _, _ = build_client(tiny_retriever, tmp_path)
    session_id = create_session(client)
    client.post(f"/sessions/{session_id}/messages", json={"question": "q?"})

    url = f"/sessions/{session_id}/turns/0/category"
    assert client.post(url, json={"category": "TaxesAndScholarships"}).status_code == 200
    stats = client.get("/stats").json()
    assert stats["categories"]["TaxesAndScholarships"] == 1
    assert stats["untagged"] == 0

    assert client.post(url, json={"category": "OffTopic"}).status_code == 200
    stats = client.get("/stats").json()
    assert stats["categories"]["OffTopic"] == 1
    assert stats["categories"]["TaxesAndScholarships"] == 0
    assert stats["total_questions"] == 1  # overwrite preserves totals

    assert client.post(f"/sessions/{session_id}/turns/7/category", json={"category": "OffTopic"}).status_code == 404
    assert client.post(url, json={"category": "NonEsiste"}).status_code == 422


def test_stats_empty_then_single_increment(tiny_retriever, tmp_path):
    client, _, _ = build_client(tiny_retriever, tmp_path)
    stats = client.get("/stats").json()
    assert stats["total_questions"] == 0
    assert stats["untagged"] == 0
    assert all(v == 0 for v in stats["categories"].values())
    assert all(v == 0 for v in stats["ratings"].values())

    session_id = create_session(client)
    client.post(f"/sessions/{session_id}/messages", json={"question": "q?"})
    stats = client.get("/stats").json()
    assert stats["total_questions"] == 1
    assert stats["untagged"] == 1
    assert sum(stats["categories"].values()) == 0


def test_stats_totals_match_store_after_random_interleavings(tiny_retriever, tmp_path):
    provider = scripted_provider(turns=40)
    client, store, _ = build_client(tiny_retriever, tmp_path, provider=provider)
    rng = random.Random(17)
    sessions = [create_session(client) for _ in range(3)]
    turn_counts = {session_id: 0 for session_id in sessions}

    for _ in range(40):
        op = rng.choice(["message", "tag", "feedback"])
        session_id = rng.choice(sessions)
        if op == "message":
            response = client.post(f"/sessions/{session_id}/messages", json={"question": "q?"})
            assert response.status_code == 200
            turn_counts[session_id] += 1
        elif op == "tag" and turn_counts[session_id]:
            turn = rng.randrange(turn_counts[session_id])
            category = rng.choice(ALL_CATEGORIES)
            client.post(f"/sessions/{session_id}/turns/{turn}/category", json={"category": category})
        elif op == "feedback":
            client.post(
                f"/sessions/{session_id}/feedback",
                json={"respondent_role": "Other", "overall_rating": rng.randint(1, 5), "per_answer_ratings": []},
            )
        stats = client.get("/stats").json()
        assert stats["total_questions"] == len(store.log_entries())
        assert sum(stats["categories"].values()) + stats["untagged"] == stats["total_questions"]
        assert stats["feedback_count"] == len(store.feedback_records())
        assert sum(stats["ratings"].values()) == stats["feedback_count"]


def test_static_assets_served_at_root_without_shadowing_api(tiny_retriever, tmp_path):
    static = tmp_path / "static"
    static.mkdir()
    (static / "index.html").write_text("<!doctype html><title>ui</title>", encoding="utf-8")
    provider = scripted_provider()
    engine = RagEngine(tiny_retriever, provider, GenerationConfig(prompt_profile=PromptProfile.CONDENSED), k=2)
    app = create_app(engine, SessionStore(tmp_path / "s.jsonl"), static_dir=static)
    client = TestClient(app)
    assert client.get("/health").json() == {"status": "ok"}
    assert "ui" in client.get("/").text
    assert client.post("/sessions").status_code == 200


def test_restart_replays_sessions_log_and_feedback(tiny_retriever, tmp_path):
    client, store, _ = build_client(tiny_retriever, tmp_path, log_name="replay.jsonl")
    session_id = create_session(client)
    client.post(f"/sessions/{session_id}/messages", json={"question": "prima?"})
    client.post(f"/sessions/{session_id}/messages", json={"question": "seconda?"})
    client.post(f"/sessions/{session_id}/turns/0/category", json={"category": "GenericInformation"})
    client.post(
        f"/sessions/{session_id}/feedback",
        json={"respondent_role": "Professor", "overall_rating": 4, "per_answer_ratings": ["Good", "Bad"]},
    )
    stats_before = client.get("/stats").json()

    reloaded = SessionStore(tmp_path / "replay.jsonl")
    client2, _, provider2 = build_client(tiny_retriever, tmp_path, store=reloaded)
    assert client2.get("/stats").json() == stats_before

    revived = reloaded.session(session_id)
    assert revived is not None
    assert [turn.question for turn in revived.turns] == ["prima?", "seconda?"]
    # The revived session keeps answering with its history intact.
    response = client2.post(f"/sessions/{session_id}/messages", json={"question": "terza?"})
    assert response.status_code == 200
    assert response.json()["turn"] == 2
    assert CONDENSE_MARKER in provider2.calls[0].prompt
