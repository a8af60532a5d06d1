"""Different-meaning-sentence candidate generation through an LLM client.

Two prompt strategies produce two candidates each: reusing the figurative
expression literally, and replacing the expression with other words. The
prompt templates ship as versioned text assets; the client is an adapter so
generation can run against a live HTTP API, a recorded transcript, or a
deterministic stub.
"""

from __future__ import annotations

import json
import logging
import os
import time
from importlib import resources
from pathlib import Path
from typing import Optional, Protocol

import requests

from figlang.figdata.model import AnnotatedSentence, status_rank

logger = logging.getLogger("figlang.figdata")

LLM_API_KEY_VAR = "LLM_API_KEY"

STRATEGY_LITERAL = 1
STRATEGY_REPLACEMENT = 2


def _load_template(name: str) -> str:
    return resources.files("figlang.figdata").joinpath(f"prompts/{name}").read_text(encoding="utf-8")


LITERAL_USE_TEMPLATE = _load_template("dms_literal_use.txt")
REPLACEMENT_TEMPLATE = _load_template("dms_replacement.txt")


class LlmError(RuntimeError):
    """The LLM client failed to produce a usable response."""


class DmsGenerationError(RuntimeError):
    """Candidate generation failed after retries; the item should be parked."""


class LlmClientAdapter(Protocol):
    def generate(self, prompt: str) -> str: ...


def format_prompt(template: str, utterance: str, expressions: list[str]) -> str:
    return template.format(utterance=utterance, expressions=", ".join(expressions))


def parse_candidates(response: str) -> list[str]:
    """Extract exactly two sentences from a model response.

    Accepts plain lines or common list markers; anything other than two
    non-empty sentences counts as malformed.
    """
    lines = []
    for raw in response.splitlines():
        text = raw.strip()
        if not text:
            continue
        for marker in ("1.", "2.", "1)", "2)", "-", "*"):
            if text.startswith(marker):
                text = text[len(marker):].strip()
                break
        if text:
            lines.append(text)
    if len(lines) != 2:
        raise LlmError(f"expected 2 candidate sentences, got {len(lines)}")
    return lines


def generate_dms_candidates(
    sentence: AnnotatedSentence,
    llm: LlmClientAdapter,
    retries: int = 1,
) -> list[str]:
    """Produce the four DMS candidates for one sentence and advance its status.

    Candidates are ordered [literal-use x2, replacement x2]. Raises
    DmsGenerationError when a strategy keeps failing; the caller parks the
    item with the error note instead of advancing it.
    """
    if status_rank(sentence.status) < status_rank("ems_done"):
        raise ValueError(f"item {sentence.id} has status {sentence.status}; needs ems_done first")
    expressions = [e.surface for e in sentence.verified_expressions()]
    if not expressions:
        raise ValueError(f"item {sentence.id} has no verified expressions")

    candidates: list[str] = []
    for template in (LITERAL_USE_TEMPLATE, REPLACEMENT_TEMPLATE):
        prompt = format_prompt(template, sentence.original, expressions)
        last_error: Optional[Exception] = None
        for attempt in range(retries + 1):
            try:
                candidates.extend(parse_candidates(llm.generate(prompt)))
                last_error = None
                break
            except LlmError as exc:
                last_error = exc
                logger.warning("DMS generation attempt %d failed for %s: %s", attempt + 1, sentence.id, exc)
        if last_error is not None:
            sentence.provenance["dms_error"] = str(last_error)
            raise DmsGenerationError(f"item {sentence.id}: {last_error}") from last_error
    sentence.dms_candidates = candidates
    sentence.status = "dms_candidates_ready"
    sentence.provenance.pop("dms_error", None)
    return candidates


class HttpLlmClient:
    """OpenAI-style chat-completions client; API key from the environment."""

    def __init__(
        self,
        model: str = "gpt-4",
        base_url: str = "https://api.openai.com/v1",
        temperature: float = 0.0,
        timeout_s: float = 60.0,
        max_retries: int = 2,
        backoff_s: float = 2.0,
        session: Optional[requests.Session] = None,
    ) -> None:
        self.model = model
        self.base_url = base_url.rstrip("/")
        self.temperature = temperature
        self.timeout_s = timeout_s
        self.max_retries = max_retries
        self.backoff_s = backoff_s
        self.session = session or requests.Session()

    def generate(self, prompt: str) -> str:
        api_key = os.environ.get(LLM_API_KEY_VAR)
        if not api_key:
            raise LlmError(f"environment variable {LLM_API_KEY_VAR} is not set")
        payload = {
            "model": self.model,
            "temperature": self.temperature,
            "messages": [{"role": "user", "content": prompt}],
        }
        last_error: Optional[Exception] = None
        for attempt in range(self.max_retries + 1):
            try:
                response = self.session.post(
                    f"{self.base_url}/chat/completions",
                    json=payload,
                    headers={"Authorization": f"Bearer {api_key}"},
                    timeout=self.timeout_s,
                )
                if response.status_code == 429 or response.status_code >= 500:
                    raise LlmError(f"retryable API status {response.status_code}")
                response.raise_for_status()
                return response.json()["choices"][0]["message"]["content"]
            except (requests.RequestException, LlmError, KeyError, ValueError) as exc:
                last_error = exc
                if attempt < self.max_retries:
                    time.sleep(self.backoff_s * (2**attempt))
        raise LlmError(f"LLM API failed after {self.max_retries + 1} attempts: {last_error}")


class TranscriptReplayClient:
    """Replays recorded prompt/response pairs; errors on unknown prompts."""

    def __init__(self, path: str | Path) -> None:
        self.responses: dict[str, str] = {}
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if not line:
                    continue
                record = json.loads(line)
                self.responses[record["prompt"]] = record["response"]

    def generate(self, prompt: str) -> str:
        try:
            return self.responses[prompt]
        except KeyError:
            raise LlmError("prompt not found in recorded transcript") from None


class TranscriptRecorder:
    """Wraps a client and appends every exchange to a transcript file."""

    def __init__(self, inner: LlmClientAdapter, path: str | Path) -> None:
        self.inner = inner
        self.path = Path(path)

    def generate(self, prompt: str) -> str:
        response = self.inner.generate(prompt)
        with open(self.path, "a", encoding="utf-8") as handle:
            handle.write(json.dumps({"prompt": prompt, "response": response}, ensure_ascii=False))
            handle.write("\n")
        return response


class StubLlmClient:
    """Deterministic offline generator for tests and demo runs.

    Derives two distinct sentences from the prompt content so repeated runs
    are reproducible without any network access.
    """

    def generate(self, prompt: str) -> str:
        utterance = ""
        expressions = ""
        for line in prompt.splitlines():
            if line.startswith("Original Sentence:"):
                utterance = line[len("Original Sentence:"):].rstrip(".").strip()
            elif line.startswith("Figurative expressions:"):
                expressions = line[len("Figurative expressions:"):].strip()
        literal = "literal manner" in prompt
        mode = "literally speaking" if literal else "with other words"
        first = f"In a different situation, {expressions} applies {mode}, unlike: {utterance}."
        second = f"Meanwhile {expressions} means something else entirely here, {mode}."
        return f"{first}\n{second}"
