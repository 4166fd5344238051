"""Per-criterion LLM judging: prompt construction, yes/no parsing, retries and a response cache."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import re
import tempfile
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Protocol, Sequence
from urllib.parse import parse_qs, urlparse

import httpx

from .detectors import MULTIPLE, UNKNOWN, Answer, HeuristicScorers
from .model import CRITERIA, Criterion, FlawSet, LabelMatrix, Question

log = logging.getLogger(__name__)

API_KEY_ENV = "IWF_API_KEY"

PROMPT_TEMPLATE = (
    "Begin your response with yes or no, does this multiple-choice question satisfy "
    "the criteria relating to {criteria}: {definition}? Explain why. {question}"
)

SATISFIED = "satisfied"
VIOLATED = "violated"
INDETERMINATE = "indeterminate"

POLICY_FLAW = "flaw"
POLICY_NO_FLAW = "no-flaw"
POLICY_RETRY = "retry"
POLICIES = (POLICY_FLAW, POLICY_NO_FLAW, POLICY_RETRY)


@dataclass(frozen=True)
class CriterionPromptSpec:
    criterion: Criterion
    display_name: str
    definition: str


def load_prompt_specs() -> dict[Criterion, CriterionPromptSpec]:
    raw = resources.files("iwflint.resources").joinpath("criteria.tsv").read_text(encoding="utf-8")
    specs = {}
    for line in raw.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        name, display, definition = line.split("\t")
        c = Criterion.parse(name)
        specs[c] = CriterionPromptSpec(c, display, definition)
    missing = set(CRITERIA) - set(specs)
    if missing:
        raise ValueError(f"prompt table lacks {sorted(m.value for m in missing)}")
    return {c: specs[c] for c in CRITERIA}


def option_label(i: int) -> str:
    """A, B, ..., Z, AA, AB, ..."""
    label = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        label = chr(ord("A") + r) + label
    return label


def render_question(q: Question, mark_correct: bool = True) -> str:
    lines = [q.stem.strip()]
    for i, opt in enumerate(q.options):
        line = f"{option_label(i)}. {opt.strip()}"
        if mark_correct and i == q.answer_index:
            line += " (correct)"
        lines.append(line)
    return "\n".join(lines)


def build_prompt(q: Question, spec: CriterionPromptSpec) -> str:
    return PROMPT_TEMPLATE.format(
        criteria=spec.display_name, definition=spec.definition, question=render_question(q)
    )


def prompt_hash(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class JudgeResponse:
    raw: str
    parsed: str
    explanation: str


_LEAD_RE = re.compile(r"^\s*(yes|no)\b[\s.,:;!\-–—]*", re.I)


def parse_response(raw: str) -> JudgeResponse:
    """Code a reply by its leading word: yes = satisfied, no = violated, else indeterminate."""
    m = _LEAD_RE.match(raw)
    if not m:
        return JudgeResponse(raw, INDETERMINATE, raw.strip())
    parsed = SATISFIED if m.group(1).lower() == "yes" else VIOLATED
    return JudgeResponse(raw, parsed, raw[m.end() :].strip())


# --- backends ---------------------------------------------------------------


class BackendError(Exception):
    def __init__(self, message: str, retryable: bool = True):
        super().__init__(message)
        self.retryable = retryable


class Backend(Protocol):
    model: str

    def complete(self, prompt: str) -> str: ...


@dataclass(frozen=True)
class BackendConfig:
    endpoint: str
    model: str = "gpt-4"
    timeout: float = 60.0
    concurrency: int = 4
    max_attempts: int = 3
    backoff_base: float = 1.0
    cache_dir: Path | None = None

    def __post_init__(self):
        if self.concurrency < 1:
            raise ValueError("concurrency must be >= 1")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")


class HttpBackend:
    """Chat-completions style endpoint: POST {model, messages}; reply in choices[0].message.content."""

    def __init__(self, endpoint: str, model: str, api_key: str, timeout: float = 60.0, client: httpx.Client | None = None):
        self.endpoint = endpoint
        self.model = model
        self._client = client or httpx.Client(timeout=timeout)
        self._headers = {"Authorization": f"Bearer {api_key}", "Content-Type": "application/json"}

    def complete(self, prompt: str) -> str:
        payload = {"model": self.model, "messages": [{"role": "user", "content": prompt}]}
        try:
            resp = self._client.post(self.endpoint, json=payload, headers=self._headers)
        except httpx.TimeoutException as exc:
            raise BackendError(f"timeout: {exc}") from exc
        except httpx.TransportError as exc:
            raise BackendError(f"transport error: {exc}") from exc
        if resp.status_code == 429 or resp.status_code >= 500:
            raise BackendError(f"HTTP {resp.status_code}")
        if resp.status_code >= 400:
            raise BackendError(f"HTTP {resp.status_code}: {resp.text[:200]}", retryable=False)
        try:
            return resp.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise BackendError(f"malformed response: {exc}", retryable=False) from exc

    def close(self) -> None:
        self._client.close()


class MockBackend:
    """Deterministic offline backend; ``responder`` maps a prompt to a reply or raises BackendError."""

    def __init__(self, responder: Callable[[str], str] | None = None, model: str = "mock"):
        self.responder = responder or (lambda prompt: "Yes, the question satisfies this criterion.")
        self.model = model
        self.calls = 0
        self._lock = threading.Lock()

    def complete(self, prompt: str) -> str:
        with self._lock:
            self.calls += 1
        return self.responder(prompt)

    @classmethod
    def from_url(cls, url: str, model: str = "mock") -> "MockBackend":
        """``mock://yes``, ``mock://no`` or ``mock://hash``; ``?fail=text`` fails prompts containing text."""
        parsed = urlparse(url)
        mode = parsed.netloc or parsed.path.strip("/") or "yes"
        fails = parse_qs(parsed.query).get("fail", [])

        def respond(prompt: str) -> str:
            if any(f in prompt for f in fails):
                raise BackendError("injected failure", retryable=True)
            if mode == "yes":
                return "Yes, the question satisfies this criterion."
            if mode == "no":
                return "No, the question violates this criterion."
            if mode == "hash":
                return "Yes, it does." if int(prompt_hash(prompt)[:8], 16) % 4 else "No, it does not."
            raise ValueError(f"unknown mock mode {mode!r}")

        return cls(respond, model)


# --- cache ------------------------------------------------------------------


class ResponseCache:
    """One JSON file per (prompt hash, model). Writes are atomic renames."""

    def __init__(self, directory: str | Path):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)

    def path(self, prompt: str, model: str) -> Path:
        model_tag = re.sub(r"[^A-Za-z0-9._-]", "_", model)[:64]
        return self.dir / f"{prompt_hash(prompt)}.{model_tag}.json"

    def get(self, prompt: str, model: str) -> list[dict] | None:
        p = self.path(prompt, model)
        try:
            entry = json.loads(p.read_text(encoding="utf-8"))
        except FileNotFoundError:
            return None
        if entry.get("model") != model or entry.get("prompt_sha256") != prompt_hash(prompt):
            return None
        return entry["responses"]

    def put(self, prompt: str, model: str, responses: list[dict]) -> None:
        entry = {"model": model, "prompt_sha256": prompt_hash(prompt), "responses": responses}
        data = json.dumps(entry, ensure_ascii=False, sort_keys=True, indent=1) + "\n"
        fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=".tmp-", suffix=".json")
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(data)
        os.replace(tmp, self.path(prompt, model))

    def __len__(self) -> int:
        return sum(1 for _ in self.dir.glob("*.json"))


# --- judging ----------------------------------------------------------------


@dataclass(frozen=True)
class RetryPolicy:
    max_attempts: int = 3
    backoff_base: float = 1.0


def call_with_retry(
    backend: Backend, prompt: str, retry: RetryPolicy, sleep: Callable[[float], None] = time.sleep
) -> tuple[str, int]:
    """Return (reply, attempts used). Backs off ``base * 2**k`` seconds between attempts."""
    last: BackendError | None = None
    for attempt in range(1, retry.max_attempts + 1):
        try:
            return backend.complete(prompt), attempt
        except BackendError as exc:
            last = exc
            log.debug("attempt %d/%d failed: %s", attempt, retry.max_attempts, exc)
            if not exc.retryable:
                break
            if attempt < retry.max_attempts:
                sleep(retry.backoff_base * 2 ** (attempt - 1))
    err = BackendError(f"failed after {attempt} attempt(s): {last}", retryable=False)
    err.attempts = attempt
    raise err from last


@dataclass
class CriterionOutcome:
    criterion: Criterion
    prompt_sha256: str
    responses: list[JudgeResponse] = field(default_factory=list)
    attempts: int = 0
    flaw: bool | None = None
    mark: str | None = None
    error: str | None = None
    cached: bool = False

    @property
    def response(self) -> JudgeResponse | None:
        return self.responses[-1] if self.responses else None

    @property
    def complete(self) -> bool:
        return self.flaw is not None


@dataclass
class QuestionJudgement:
    question_id: str
    outcomes: list[CriterionOutcome]

    @property
    def complete(self) -> bool:
        return all(o.complete for o in self.outcomes)

    @property
    def flaws(self) -> FlawSet:
        return FlawSet.from_criteria(o.criterion for o in self.outcomes if o.flaw)

    @property
    def missing(self) -> list[Criterion]:
        return [o.criterion for o in self.outcomes if not o.complete]


class Judge:
    """Holds backend, cache and policy; judges one (question, criterion) pair at a time."""

    def __init__(
        self,
        backend: Backend,
        prompts: dict[Criterion, CriterionPromptSpec] | None = None,
        cache: ResponseCache | None = None,
        retry: RetryPolicy = RetryPolicy(),
        policy: str = POLICY_RETRY,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if policy not in POLICIES:
            raise ValueError(f"policy must be one of {POLICIES}")
        self.backend = backend
        self.prompts = prompts or load_prompt_specs()
        self.cache = cache
        self.retry = retry
        self.policy = policy
        self.sleep = sleep
        self.network_calls = 0
        self._lock = threading.Lock()

    def _fetch(self, prompt: str) -> dict:
        with self._lock:
            self.network_calls += 1
        raw, attempts = call_with_retry(self.backend, prompt, self.retry, self.sleep)
        return {"raw": raw, "attempts": attempts}

    def judge_criterion(self, q: Question, c: Criterion) -> CriterionOutcome:
        prompt = build_prompt(q, self.prompts[c])
        out = CriterionOutcome(c, prompt_hash(prompt))
        model = self.backend.model
        records = self.cache.get(prompt, model) if self.cache else None
        out.cached = records is not None
        records = list(records or [])
        known = len(records)
        try:
            if not records:
                records.append(self._fetch(prompt))
            first = parse_response(records[0]["raw"])
            if first.parsed == INDETERMINATE and self.policy == POLICY_RETRY and len(records) < 2:
                records.append(self._fetch(prompt))
        except BackendError as exc:
            out.error = str(exc)
            out.responses = [parse_response(r["raw"]) for r in records]
            out.attempts = sum(r["attempts"] for r in records) + getattr(exc, "attempts", 0)
            return out
        if self.cache is not None and len(records) > known:
            self.cache.put(prompt, model, records)
        out.responses = [parse_response(r["raw"]) for r in records]
        out.attempts = sum(r["attempts"] for r in records)
        final = out.responses[-1] if self.policy == POLICY_RETRY else out.responses[0]
        if final.parsed == VIOLATED:
            out.flaw = True
        elif final.parsed == SATISFIED:
            out.flaw = False
        else:
            out.flaw = self.policy == POLICY_FLAW
            out.mark = INDETERMINATE
        return out

    def judge_question(self, q: Question, criteria: Sequence[Criterion] = CRITERIA) -> QuestionJudgement:
        return QuestionJudgement(q.id, [self.judge_criterion(q, c) for c in criteria])

    def judge_corpus(
        self, questions: Sequence[Question], criteria: Sequence[Criterion] = CRITERIA, concurrency: int = 1
    ) -> "JudgeRun":
        """Fan out (question, criterion) requests; results come back in corpus order."""
        tasks = [(q, c) for q in questions for c in criteria]
        with ThreadPoolExecutor(max_workers=max(1, concurrency)) as pool:
            outcomes = list(pool.map(lambda qc: self.judge_criterion(*qc), tasks))
        judgements = []
        n = len(criteria)
        for k, q in enumerate(questions):
            judgements.append(QuestionJudgement(q.id, outcomes[k * n : (k + 1) * n]))
        return JudgeRun(judgements, tuple(criteria), self.backend.model)


@dataclass
class JudgeRun:
    judgements: list[QuestionJudgement]
    criteria: tuple[Criterion, ...]
    model: str

    @property
    def incomplete(self) -> list[str]:
        return [j.question_id for j in self.judgements if not j.complete]

    def matrix(self) -> LabelMatrix:
        return LabelMatrix(
            tuple(j.question_id for j in self.judgements),
            tuple(j.flaws for j in self.judgements),
            "llm",
            frozenset(self.incomplete),
        )

    def audit_records(self) -> Iterable[dict]:
        for j in self.judgements:
            for o in j.outcomes:
                yield {
                    "id": j.question_id,
                    "criterion": o.criterion.value,
                    "model": self.model,
                    "prompt_sha256": o.prompt_sha256,
                    "responses": [r.raw for r in o.responses],
                    "parsed": o.response.parsed if o.response else None,
                    "flaw": o.flaw,
                    "attempts": o.attempts,
                    "mark": o.mark,
                    "error": o.error,
                }


def judge_question(q: Question, backend: Backend, prompts=None, policy: str = POLICY_RETRY, **kwargs) -> QuestionJudgement:
    return Judge(backend, prompts, policy=policy, **kwargs).judge_question(q)


def judge_corpus(
    questions: Sequence[Question],
    backend: Backend,
    cfg: BackendConfig,
    criteria: Sequence[Criterion] = CRITERIA,
    policy: str = POLICY_RETRY,
    sleep: Callable[[float], None] = time.sleep,
) -> JudgeRun:
    cache = ResponseCache(cfg.cache_dir) if cfg.cache_dir else None
    judge = Judge(backend, cache=cache, retry=RetryPolicy(cfg.max_attempts, cfg.backoff_base), policy=policy, sleep=sleep)
    return judge.judge_corpus(questions, criteria, cfg.concurrency)


def make_backend(cfg: BackendConfig) -> Backend:
    """Mock backend for ``mock://`` endpoints, otherwise HTTP with the key from IWF_API_KEY."""
    if cfg.endpoint.startswith("mock:"):
        return MockBackend.from_url(cfg.endpoint, cfg.model)
    key = os.environ.get(API_KEY_ENV, "").strip()
    if not key:
        raise BackendError(f"{API_KEY_ENV} is not set", retryable=False)
    return HttpBackend(cfg.endpoint, cfg.model, key, cfg.timeout)


# --- answer scorer for more_than_one_correct ---------------------------------

ANSWER_PROMPT = (
    "Answer the following multiple-choice question. Reply with only the letter of the "
    "correct option; if more than one option is correct, list every correct letter.\n{question}"
)


@dataclass(frozen=True)
class BackendAnswerScorers(HeuristicScorers):
    """Heuristic scorers whose ``answer`` asks a backend to solve the question."""

    backend: Backend | None = None
    deterministic: bool = False

    def answer(self, question: Question) -> Answer:
        if self.backend is None:
            return UNKNOWN
        prompt = ANSWER_PROMPT.format(question=render_question(question, mark_correct=False))
        try:
            reply, _ = call_with_retry(self.backend, prompt, RetryPolicy())
        except BackendError:
            return UNKNOWN
        return parse_answer(reply, len(question.options))


def parse_answer(reply: str, n_options: int) -> Answer:
    labels = {option_label(i): i for i in range(n_options)}
    found = [labels[m] for m in re.findall(r"\b([A-Z]{1,2})\b", reply) if m in labels]
    distinct = sorted(set(found))
    if not distinct:
        return UNKNOWN
    if len(distinct) > 1:
        return MULTIPLE
    return distinct[0]
