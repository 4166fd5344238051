from __future__ import annotations

import json

import httpx
import pytest

from golden_question import GOLDEN_QUESTION
from iwflint.detectors import MULTIPLE, UNKNOWN
from iwflint.judge import (
    API_KEY_ENV,
    INDETERMINATE,
    POLICY_RETRY,
    SATISFIED,
    VIOLATED,
    BackendAnswerScorers,
    BackendConfig,
    BackendError,
    HttpBackend,
    Judge,
    MockBackend,
    ResponseCache,
    RetryPolicy,
    build_prompt,
    call_with_retry,
    load_prompt_specs,
    make_backend,
    option_label,
    parse_answer,
    parse_response,
    render_question,
)
from iwflint.model import CRITERIA, Question


@pytest.mark.parametrize(
    "raw,parsed",
    [
        ("Yes, it satisfies the criterion.", SATISFIED),
        ("yes — nothing wrong here", SATISFIED),
        ("  YES", SATISFIED),
        ("No.", VIOLATED),
        ("no: the stem is negative", VIOLATED),
        ("It depends", INDETERMINATE),
        ("Yesterday I thought so", INDETERMINATE),
        ("Nope", INDETERMINATE),
        ("", INDETERMINATE),
    ],
)
def test_parse_response(raw, parsed):
    assert parse_response(raw).parsed == parsed


def test_parse_response_keeps_explanation():
    r = parse_response("No. The options overlap.")
    assert r.explanation == "The options overlap." and r.raw == "No. The options overlap."


def test_option_labels():
    assert [option_label(i) for i in (0, 4, 25, 26, 27, 51, 52)] == ["A", "E", "Z", "AA", "AB", "AZ", "BA"]


def test_render_question_marks_key():
    q = Question("q", "Pick one", ("a", "b", "c", "d", "e"), 3)
    assert render_question(q) == "Pick one\nA. a\nB. b\nC. c\nD. d (correct)\nE. e"
    assert "(correct)" not in render_question(q, mark_correct=False)


def test_prompt_specs_cover_all_criteria():
    specs = load_prompt_specs()
    assert list(specs) == list(CRITERIA)
    prompt = build_prompt(GOLDEN_QUESTION, specs[CRITERIA[0]])
    assert specs[CRITERIA[0]].display_name in prompt and "B. Nitrogen (correct)" in prompt


# --- HTTP backend -------------------------------------------------------------


def _http(handler) -> HttpBackend:
    return HttpBackend("https://judge.test/v1/chat", "gpt-4", "sk-test", client=httpx.Client(transport=httpx.MockTransport(handler)))


def test_http_backend_payload_and_auth():
    seen = {}

    def handler(request: httpx.Request) -> httpx.Response:
        seen["auth"] = request.headers["authorization"]
        seen["body"] = json.loads(request.content)
        return httpx.Response(200, json={"choices": [{"message": {"content": "Yes."}}]})

    assert _http(handler).complete("hello") == "Yes."
    assert seen["auth"] == "Bearer sk-test"
    assert seen["body"] == {"model": "gpt-4", "messages": [{"role": "user", "content": "hello"}]}


@pytest.mark.parametrize("status,retryable", [(429, True), (500, True), (503, True), (400, False), (401, False)])
def test_http_status_classification(status, retryable):
    backend = _http(lambda request: httpx.Response(status, text="nope"))
    with pytest.raises(BackendError) as info:
        backend.complete("x")
    assert info.value.retryable is retryable


def test_http_malformed_and_timeout():
    with pytest.raises(BackendError, match="malformed") as info:
        _http(lambda request: httpx.Response(200, json={"choices": []})).complete("x")
    assert not info.value.retryable

    def slow(request):
        raise httpx.ReadTimeout("too slow", request=request)

    with pytest.raises(BackendError, match="timeout") as info:
        _http(slow).complete("x")
    assert info.value.retryable


def test_make_backend_requires_key(monkeypatch):
    monkeypatch.delenv(API_KEY_ENV, raising=False)
    with pytest.raises(BackendError, match=API_KEY_ENV):
        make_backend(BackendConfig("https://judge.test"))
    monkeypatch.setenv(API_KEY_ENV, "k")
    assert isinstance(make_backend(BackendConfig("https://judge.test")), HttpBackend)
    assert isinstance(make_backend(BackendConfig("mock://no")), MockBackend)


def test_backend_config_validation():
    for kwargs in ({"concurrency": 0}, {"max_attempts": 0}, {"timeout": 0}):
        with pytest.raises(ValueError):
            BackendConfig("mock://yes", **kwargs)


# --- mock backend, retry, cache ------------------------------------------------


def test_mock_modes():
    assert parse_response(MockBackend.from_url("mock://yes").complete("p")).parsed == SATISFIED
    assert parse_response(MockBackend.from_url("mock://no").complete("p")).parsed == VIOLATED
    hashed = MockBackend.from_url("mock://hash")
    assert hashed.complete("p") == hashed.complete("p")
    failing = MockBackend.from_url("mock://yes?fail=needle")
    assert failing.complete("hay") and failing.calls == 1
    with pytest.raises(BackendError):
        failing.complete("a needle here")


def test_non_retryable_error_stops_immediately():
    def boom(prompt):
        raise BackendError("bad request", retryable=False)

    backend = MockBackend(boom)
    sleeps = []
    with pytest.raises(BackendError) as info:
        call_with_retry(backend, "p", RetryPolicy(5, 1.0), sleeps.append)
    assert backend.calls == 1 and sleeps == [] and info.value.attempts == 1


def test_cache_round_trip(tmp_path):
    cache = ResponseCache(tmp_path)
    assert cache.get("prompt", "m") is None
    cache.put("prompt", "m", [{"raw": "Yes", "attempts": 1}])
    assert cache.get("prompt", "m") == [{"raw": "Yes", "attempts": 1}]
    assert cache.get("prompt", "other-model") is None
    assert len(cache) == 1
    assert not list(tmp_path.glob(".tmp-*"))


def test_cache_one_entry_per_pair(tmp_path):
    questions = [Question(f"q{i}", f"Which gas number {i}?", ("Neon", "Argon"), 0) for i in range(3)]
    backend = MockBackend.from_url("mock://hash")
    cache = ResponseCache(tmp_path)
    Judge(backend, cache=cache).judge_corpus(questions, concurrency=4)
    assert len(cache) == 3 * len(CRITERIA)
    calls = backend.calls
    again = Judge(backend, cache=cache).judge_corpus(questions)
    assert backend.calls == calls
    assert all(o.cached for j in again.judgements for o in j.outcomes)


def test_indeterminate_retry_is_cached(tmp_path):
    replies = iter(["Perhaps", "No."])
    backend = MockBackend(lambda prompt: next(replies))
    cache = ResponseCache(tmp_path)
    q = GOLDEN_QUESTION
    out = Judge(backend, cache=cache, policy=POLICY_RETRY).judge_criterion(q, CRITERIA[0])
    assert out.flaw is True and len(out.responses) == 2
    replay = Judge(MockBackend(lambda p: pytest.fail("no call expected")), cache=cache).judge_criterion(q, CRITERIA[0])
    assert replay.flaw is True and replay.cached


def test_unknown_policy_rejected():
    with pytest.raises(ValueError):
        Judge(MockBackend(), policy="coin-flip")


# --- answer scorer ---------------------------------------------------------------


@pytest.mark.parametrize(
    "reply,expected",
    [("B", 1), ("The answer is B.", 1), ("B and D", MULTIPLE), ("I am not sure", UNKNOWN), ("F", UNKNOWN), ("b", UNKNOWN)],
)
def test_parse_answer(reply, expected):
    assert parse_answer(reply, 4) == expected


def test_backend_answer_scorer():
    q = Question("q", "Which gas?", ("Neon", "Argon", "Xenon"), 0)
    assert BackendAnswerScorers().answer(q) == UNKNOWN
    scorer = BackendAnswerScorers(backend=MockBackend(lambda prompt: "C"))
    assert scorer.answer(q) == 2

    def fail(prompt):
        raise BackendError("down", retryable=False)

    assert BackendAnswerScorers(backend=MockBackend(fail)).answer(q) == UNKNOWN
