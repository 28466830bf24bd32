"""Text-generation providers: scripted mock, offline stand-ins, HTTP remote."""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass
from typing import Callable, Protocol, Sequence

LLM_URL_ENV = "RAGFORGE_LLM_URL"
LLM_KEY_ENV = "RAGFORGE_LLM_KEY"

Matcher = None | str | Callable[[str], bool]
Response = str | Exception | Callable[[str], str]


class LLMProvider(Protocol):
    name: str

    def generate(self, prompt: str, temperature: float = 0.0, max_new_tokens: int | None = None) -> str: ...


class ProviderError(RuntimeError):
    """A provider call failed; carries the pipeline context in its message."""


class MockScriptError(RuntimeError):
    """A mock received a call its script does not cover."""


@dataclass(frozen=True)
class MockCall:
    prompt: str
    temperature: float
    max_new_tokens: int | None


class MockLLMProvider:
    """Deterministic provider driven by an ordered (matcher, response) script.

    Each call consumes the first unconsumed entry whose matcher accepts the
    prompt. Matchers: ``None`` accepts anything, a string matches as a
    substring, a callable is a predicate. Responses: a string is returned, a
    callable is applied to the prompt, an exception is raised. Every call is
    recorded in ``calls``.
    """

    def __init__(self, script: Sequence[tuple[Matcher, Response]], name: str = "mock"):
        if not script:
            raise ValueError("mock script must not be empty")
        self.name = name
        self._entries: list[tuple[Matcher, Response]] = list(script)
        self._consumed: list[bool] = [False] * len(self._entries)
        self.calls: list[MockCall] = []

    @staticmethod
    def _matches(matcher: Matcher, prompt: str) -> bool:
        if matcher is None:
            return True
        if isinstance(matcher, str):
            return matcher in prompt
        return bool(matcher(prompt))

    def generate(self, prompt: str, temperature: float = 0.0, max_new_tokens: int | None = None) -> str:
        self.calls.append(MockCall(prompt=prompt, temperature=temperature, max_new_tokens=max_new_tokens))
        for position, (matcher, response) in enumerate(self._entries):
            if self._consumed[position] or not self._matches(matcher, prompt):
                continue
            self._consumed[position] = True
            if isinstance(response, Exception):
                raise response
            if callable(response):
                return response(prompt)
            return response
        if all(self._consumed):
            raise MockScriptError(f"mock script exhausted after {len(self._entries)} calls; prompt was: {prompt[:120]!r}")
        raise MockScriptError(f"no script entry matches prompt: {prompt[:120]!r}")

    @property
    def remaining(self) -> int:
        return self._consumed.count(False)


def mock_provider(script: Sequence[tuple[Matcher, Response]], name: str = "mock") -> MockLLMProvider:
    return MockLLMProvider(script, name=name)


class EchoProvider:
    """Returns the question line of the prompt; a no-model baseline."""

    name = "echo"

    def generate(self, prompt: str, temperature: float = 0.0, max_new_tokens: int | None = None) -> str:
        for line in prompt.splitlines():
            for marker in ("Question: ", "Domanda succesiva: ", "Domanda: "):
                if line.startswith(marker):
                    return line[len(marker) :]
        return prompt.splitlines()[-1] if prompt else ""


class ExtractiveProvider:
    """Returns the first sentences of the prompt context; a retrieval-only baseline."""

    name = "extractive"

    def __init__(self, sentences: int = 2):
        self._sentences = sentences

    def generate(self, prompt: str, temperature: float = 0.0, max_new_tokens: int | None = None) -> str:
        from .metrics import split_sentences

        context = ""
        for marker in ("Documenti: ", "Informazioni: "):
            at = prompt.find(marker)
            if at >= 0:
                context = prompt[at + len(marker) :]
                break
        parts = split_sentences(context)
        if not parts:
            return "Mi dispiace, non ho trovato informazioni pertinenti."
        return " ".join(parts[: self._sentences])


class RemoteLLMProvider:
    """Chat-completion provider over HTTP.

    Endpoint and credentials come from the environment (RAGFORGE_LLM_URL,
    RAGFORGE_LLM_KEY). Requests carry the prompt as a single user message and
    the response is read from the first choice.
    """

    def __init__(
        self,
        model: str,
        url: str | None = None,
        api_key: str | None = None,
        max_in_flight: int = 4,
        transport=None,
        timeout: float = 60.0,
    ):
        import httpx

        self.name = f"remote-{model}"
        self.model = model
        self.url = url or os.environ.get(LLM_URL_ENV)
        if not self.url:
            raise ValueError(f"remote provider needs an endpoint URL ({LLM_URL_ENV})")
        key = api_key if api_key is not None else os.environ.get(LLM_KEY_ENV, "")
        headers = {"Authorization": f"Bearer {key}"} if key else {}
        self._client = httpx.Client(headers=headers, timeout=timeout, transport=transport)
        self._gate = threading.BoundedSemaphore(max_in_flight)

    def generate(self, prompt: str, temperature: float = 0.0, max_new_tokens: int | None = None) -> str:
        body = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": temperature,
        }
        if max_new_tokens is not None:
            body["max_tokens"] = max_new_tokens
        with self._gate:
            response = self._client.post(self.url, json=body)
        response.raise_for_status()
        payload = response.json()
        return payload["choices"][0]["message"]["content"]

    def close(self) -> None:
        self._client.close()


def build_provider(name: str) -> LLMProvider:
    """Construct a provider from its CLI name.

    ``echo`` and ``extractive`` run offline; ``remote:<model>`` talks to the
    endpoint configured via environment variables.
    """
    if name == "echo":
        return EchoProvider()
    if name == "extractive":
        return ExtractiveProvider()
    if name == "remote" or name.startswith("remote:"):
        _, _, model = name.partition(":")
        return RemoteLLMProvider(model=model or "default")
    raise ValueError(f"unknown provider {name!r} (expected echo, extractive or remote[:model])")
