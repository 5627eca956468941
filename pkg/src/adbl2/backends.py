"""Scoring backends: rule-table stub, HTTP wire protocol, OpenAI-style adapter.

Every backend answers one question: given a prompt and two candidate
continuations, what is the log-likelihood of each? The wire protocol for
remote backends is ``POST /score`` with body
``{"prompt": str, "continuations": [str, str]}`` answered by
``{"logprobs": [float, float]}`` aligned by index.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass
from importlib import resources
from typing import TYPE_CHECKING, Optional, Protocol, Sequence

import httpx

from .errors import BackendProtocolError, BackendTimeout, BackendUnavailable
from .model import DebateTree, RelationType

if TYPE_CHECKING:
    from .prompts import PromptTemplate

# Large enough that the softmax saturates to 1.0 in double precision.
ORACLE_MARGIN = 1000.0


class ScoringBackend(Protocol):
    """Anything that can score two continuations after a prompt."""

    backend_id: str

    def score(self, prompt: str, continuations: tuple[str, str]) -> tuple[float, float]:
        ...


def _split_scores(label: RelationType, margin: float) -> tuple[float, float]:
    """Raw (attack, support) scores placing ``label`` ahead by ``margin``."""
    half = margin / 2.0
    if label is RelationType.ATTACK:
        return half, -half
    return -half, half


@dataclass(frozen=True)
class StubRule:
    """Substring rule: prompts containing ``pattern`` score ``label`` higher."""

    pattern: str
    label: RelationType
    margin: float


class StubBackend:
    """Deterministic rule-table backend for tests and offline use.

    Rules are tried in order; the last rule must have an empty pattern so
    every prompt matches something.
    """

    def __init__(self, rules: Sequence[StubRule], backend_id: str = "stub"):
        rules = list(rules)
        if not rules or rules[-1].pattern != "":
            raise ValueError("stub rules must end with a default (empty-pattern) entry")
        self.rules = rules
        self.backend_id = backend_id

    def score(self, prompt: str, continuations: tuple[str, str]) -> tuple[float, float]:
        for rule in self.rules:
            if rule.pattern in prompt:
                return _split_scores(rule.label, rule.margin)
        raise AssertionError("unreachable: default rule matches every prompt")

    @classmethod
    def from_json(cls, entries: Sequence[dict], backend_id: str = "stub") -> "StubBackend":
        rules = [
            StubRule(
                pattern=entry["pattern"],
                label=RelationType.from_string(entry["label"]),
                margin=float(entry["margin"]),
            )
            for entry in entries
        ]
        return cls(rules, backend_id=backend_id)

    @classmethod
    def from_rules_file(cls, path: str, backend_id: str = "stub") -> "StubBackend":
        with open(path, "r", encoding="utf-8") as handle:
            return cls.from_json(json.load(handle), backend_id=backend_id)

    @classmethod
    def shipped(cls) -> "StubBackend":
        """The packaged rule table (reproduces the bundled worked example)."""
        path = resources.files("adbl2").joinpath("data").joinpath("stub_rules.json")
        with path.open("r", encoding="utf-8") as handle:
            return cls.from_json(json.load(handle))


class ConstantBackend:
    """Always returns the same pair of raw scores."""

    def __init__(self, raw_attack: float = 0.0, raw_support: float = 0.0,
                 backend_id: str = "constant"):
        self.raw = (raw_attack, raw_support)
        self.backend_id = backend_id

    def score(self, prompt: str, continuations: tuple[str, str]) -> tuple[float, float]:
        return self.raw

    @classmethod
    def always(cls, label: RelationType, margin: float = ORACLE_MARGIN) -> "ConstantBackend":
        raw_attack, raw_support = _split_scores(label, margin)
        return cls(raw_attack, raw_support, backend_id=f"constant-{label.value}")


class SelfConsistencyBackend:
    """Oracle backend that answers with labels it was built from.

    Looks up the known (child, parent) pair whose texts both occur in the
    prompt; longest child text wins when several match. Used as the
    end-to-end oracle: evaluation against it must come out perfect.
    """

    backend_id = "self-consistency"

    def __init__(self, entries: Sequence[tuple[str, str, RelationType]],
                 margin: float = ORACLE_MARGIN):
        self.entries = sorted(entries, key=lambda entry: len(entry[0]), reverse=True)
        self.margin = margin

    def score(self, prompt: str, continuations: tuple[str, str]) -> tuple[float, float]:
        for child_text, parent_text, label in self.entries:
            if child_text in prompt and parent_text in prompt:
                return _split_scores(label, self.margin)
        return 0.0, 0.0

    @classmethod
    def from_tree(cls, tree: DebateTree, margin: float = ORACLE_MARGIN) -> "SelfConsistencyBackend":
        entries = [
            (tree.argument(edge.child).text, tree.argument(edge.parent).text, edge.relation)
            for edge in tree.edges
        ]
        return cls(entries, margin=margin)

    @classmethod
    def from_triples(cls, triples, margin: float = ORACLE_MARGIN) -> "SelfConsistencyBackend":
        entries = [(t.child_text, t.parent_text, t.label) for t in triples]
        return cls(entries, margin=margin)


class HttpBackend:
    """Client for the native ``POST /score`` wire protocol."""

    def __init__(
        self,
        endpoint: str,
        backend_id: str = "http",
        timeout: float = 30.0,
        max_in_flight: int = 4,
        transport: Optional[httpx.BaseTransport] = None,
    ):
        if timeout <= 0:
            raise ValueError("timeout must be positive")
        if max_in_flight < 1:
            raise ValueError("max_in_flight must be at least 1")
        self.endpoint = endpoint
        self.backend_id = backend_id
        self.timeout = timeout
        self._gate = threading.BoundedSemaphore(max_in_flight)
        self._client = httpx.Client(timeout=timeout, transport=transport)

    def score(self, prompt: str, continuations: tuple[str, str]) -> tuple[float, float]:
        body = {"prompt": prompt, "continuations": list(continuations)}
        with self._gate:
            try:
                response = self._client.post(self.endpoint, json=body)
            except httpx.TimeoutException as exc:
                raise BackendTimeout(f"{self.backend_id}: no answer within {self.timeout}s") from exc
            except httpx.HTTPError as exc:
                raise BackendUnavailable(f"{self.backend_id}: {exc}") from exc
        return _parse_logprobs(response, self.backend_id)

    def close(self) -> None:
        self._client.close()


def _parse_logprobs(response: httpx.Response, backend_id: str) -> tuple[float, float]:
    if response.status_code != 200:
        raise BackendProtocolError(f"{backend_id}: HTTP {response.status_code}")
    try:
        payload = response.json()
        logprobs = payload["logprobs"]
        raw_attack, raw_support = float(logprobs[0]), float(logprobs[1])
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        raise BackendProtocolError(f"{backend_id}: malformed response body") from exc
    if not (math.isfinite(raw_attack) and math.isfinite(raw_support)):
        raise BackendProtocolError(f"{backend_id}: non-finite logprobs")
    return raw_attack, raw_support


class OpenAICompletionBackend:
    """Adapter onto OpenAI-compatible completion endpoints with echo+logprobs.

    Scores a continuation by completing ``prompt + continuation`` with
    ``echo`` and ``logprobs`` on, then summing the token log-likelihoods of
    the tokens that start at or after the end of the prompt. Multi-token
    label words are therefore scored as a whole.
    """

    def __init__(
        self,
        endpoint: str,
        model: str,
        backend_id: str = "openai",
        timeout: float = 30.0,
        max_in_flight: int = 4,
        api_key: Optional[str] = None,
        transport: Optional[httpx.BaseTransport] = None,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.model = model
        self.backend_id = backend_id
        self.timeout = timeout
        self._gate = threading.BoundedSemaphore(max_in_flight)
        headers = {"Authorization": f"Bearer {api_key}"} if api_key else {}
        self._client = httpx.Client(timeout=timeout, transport=transport, headers=headers)

    def score(self, prompt: str, continuations: tuple[str, str]) -> tuple[float, float]:
        return (
            self._score_one(prompt, continuations[0]),
            self._score_one(prompt, continuations[1]),
        )

    def _score_one(self, prompt: str, continuation: str) -> float:
        body = {
            "model": self.model,
            "prompt": prompt + continuation,
            "max_tokens": 0,
            "echo": True,
            "logprobs": 0,
        }
        with self._gate:
            try:
                response = self._client.post(f"{self.endpoint}/completions", json=body)
            except httpx.TimeoutException as exc:
                raise BackendTimeout(f"{self.backend_id}: no answer within {self.timeout}s") from exc
            except httpx.HTTPError as exc:
                raise BackendUnavailable(f"{self.backend_id}: {exc}") from exc
        if response.status_code != 200:
            raise BackendProtocolError(f"{self.backend_id}: HTTP {response.status_code}")
        try:
            choice = response.json()["choices"][0]
            token_logprobs = choice["logprobs"]["token_logprobs"]
            offsets = choice["logprobs"]["text_offset"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise BackendProtocolError(f"{self.backend_id}: malformed completion body") from exc
        cut = len(prompt)
        total = 0.0
        counted = 0
        for offset, logprob in zip(offsets, token_logprobs):
            if offset >= cut and logprob is not None:
                total += float(logprob)
                counted += 1
        if counted == 0:
            raise BackendProtocolError(f"{self.backend_id}: no continuation tokens scored")
        return total

    def close(self) -> None:
        self._client.close()


class BackendRegistry:
    """Named backends configured at startup; requests pick one by name.

    A backend entry may carry its own prompt template (different models
    want different wording); otherwise the default template applies.
    """

    def __init__(
        self,
        backends: dict[str, ScoringBackend],
        default: str,
        templates: Optional[dict[str, "PromptTemplate"]] = None,
    ):
        if default not in backends:
            raise ValueError(f"default backend {default!r} is not registered")
        self.backends = backends
        self.default = default
        self.templates = templates or {}

    def get(self, name: Optional[str] = None) -> ScoringBackend:
        wanted = name or self.default
        try:
            return self.backends[wanted]
        except KeyError:
            raise BackendUnavailable(f"no backend named {wanted!r}") from None

    def template_for(self, name: Optional[str] = None) -> "PromptTemplate":
        from .prompts import DEFAULT_TEMPLATE

        return self.templates.get(name or self.default, DEFAULT_TEMPLATE)

    @classmethod
    def builtin(cls) -> "BackendRegistry":
        return cls({"stub": StubBackend.shipped()}, default="stub")

    @classmethod
    def from_file(cls, path: str) -> "BackendRegistry":
        from .prompts import load_template

        with open(path, "r", encoding="utf-8") as handle:
            config = json.load(handle)
        backends: dict[str, ScoringBackend] = {}
        templates: dict[str, "PromptTemplate"] = {}
        for name, spec in config["backends"].items():
            backends[name] = _backend_from_spec(name, spec)
            if "template" in spec:
                templates[name] = load_template(spec["template"])
        return cls(backends, default=config.get("default", next(iter(backends))),
                   templates=templates)


def _backend_from_spec(name: str, spec: dict) -> ScoringBackend:
    kind = spec.get("type", "stub")
    if kind == "stub":
        if "rules_file" in spec and spec["rules_file"]:
            return StubBackend.from_rules_file(spec["rules_file"], backend_id=name)
        if "rules" in spec:
            return StubBackend.from_json(spec["rules"], backend_id=name)
        return StubBackend.shipped()
    if kind == "http":
        return HttpBackend(
            endpoint=spec["endpoint"],
            backend_id=name,
            timeout=float(spec.get("timeout", 30.0)),
            max_in_flight=int(spec.get("max_in_flight", 4)),
        )
    if kind == "openai":
        return OpenAICompletionBackend(
            endpoint=spec["endpoint"],
            model=spec["model"],
            backend_id=name,
            timeout=float(spec.get("timeout", 30.0)),
            max_in_flight=int(spec.get("max_in_flight", 4)),
            api_key=spec.get("api_key"),
        )
    raise ValueError(f"unknown backend type {kind!r} for {name!r}")
