"""Uniform client over chat-completion endpoints.

Two endpoint kinds share one `complete()` surface:

* ``remote-chat``: the ubiquitous chat-completions JSON shape (messages
  array with system/user roles) over HTTP, with retry and backoff on
  transient transport failures.
* ``scripted``: deterministic offline playback, used for replay oracles,
  fixtures, and every test that must not touch the network. Responses
  resolve in order through: a programmatic responder, a fingerprint
  transcript, a request-line map, then a default response.
"""

from __future__ import annotations

import json
import os
import threading
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Callable, Sequence

from .prompting import AssembledPrompt, PromptConfig, build_prompt, extract_request_line

if TYPE_CHECKING:
    from .datagen import Instance


class GatewayError(RuntimeError):
    pass


class Timeout(GatewayError):
    pass


class TransportError(GatewayError):
    pass


class AuthError(GatewayError):
    pass


class MalformedEndpointReply(GatewayError):
    pass


class DuplicatePromptFingerprint(ValueError):
    pass


REMOTE_CHAT = "remote-chat"
SCRIPTED = "scripted"


@dataclass(frozen=True)
class EndpointSpec:
    kind: str = SCRIPTED
    base_url: str = ""
    model_name: str = "scripted"
    timeout: float = 30.0
    max_retries: int = 2
    temperature: float = 0.0
    max_output_tokens: int = 512
    auth_token_env_var: str = ""
    # Scripted sources, resolved in this order:
    responder: Callable[[AssembledPrompt], str] | None = field(default=None, compare=False)
    transcript: dict[str, str] = field(default_factory=dict)
    request_map: dict[str, str] = field(default_factory=dict)
    default_response: str | None = None
    audit_log_path: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in (REMOTE_CHAT, SCRIPTED):
            raise ValueError(f"unknown endpoint kind: {self.kind!r}")
        if self.timeout <= 0:
            raise ValueError("timeout must be > 0")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.kind == REMOTE_CHAT and not self.base_url:
            raise ValueError("remote-chat endpoint requires base_url")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "base_url": self.base_url,
            "model_name": self.model_name,
            "timeout": self.timeout,
            "max_retries": self.max_retries,
            "temperature": self.temperature,
            "max_output_tokens": self.max_output_tokens,
            "auth_token_env_var": self.auth_token_env_var,
            "transcript": dict(self.transcript),
            "request_map": dict(self.request_map),
            "default_response": self.default_response,
        }

    @classmethod
    def from_dict(cls, d: dict, default_temperature: float = 0.0) -> EndpointSpec:
        return cls(
            kind=d.get("kind", SCRIPTED),
            base_url=d.get("base_url", ""),
            model_name=d.get("model_name", "scripted"),
            timeout=float(d.get("timeout", 30.0)),
            max_retries=int(d.get("max_retries", 2)),
            temperature=float(d.get("temperature", default_temperature)),
            max_output_tokens=int(d.get("max_output_tokens", 512)),
            auth_token_env_var=d.get("auth_token_env_var", ""),
            transcript=dict(d.get("transcript", {})),
            request_map=dict(d.get("request_map", {})),
            default_response=d.get("default_response"),
        )


def load_endpoint_config(path: str, default_temperature: float = 0.0) -> EndpointSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return EndpointSpec.from_dict(json.load(fh), default_temperature=default_temperature)


@dataclass(frozen=True)
class ChatExchange:
    system_text: str
    user_text: str
    response_text: str
    latency: float
    token_counts: tuple[int, int] | None = None
    error: str | None = None

    def __post_init__(self) -> None:
        if self.response_text == "" and self.error is None:
            object.__setattr__(self, "error", "EmptyCompletion")


_audit_locks: dict[str, threading.Lock] = {}
_audit_locks_guard = threading.Lock()


def _audit(path: str, record: dict) -> None:
    with _audit_locks_guard:
        lock = _audit_locks.setdefault(path, threading.Lock())
    with lock, open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(record, sort_keys=True) + "\n")


def _scripted_lookup(endpoint: EndpointSpec, prompt: AssembledPrompt) -> str:
    if endpoint.responder is not None:
        return endpoint.responder(prompt)
    if prompt.fingerprint in endpoint.transcript:
        return endpoint.transcript[prompt.fingerprint]
    request = extract_request_line(prompt)
    if request is not None and request in endpoint.request_map:
        return endpoint.request_map[request]
    if endpoint.default_response is not None:
        return endpoint.default_response
    raise MalformedEndpointReply(
        f"scripted endpoint has no response for prompt {prompt.fingerprint[:12]}"
    )


def _remote_call(endpoint: EndpointSpec, prompt: AssembledPrompt) -> tuple[str, tuple[int, int] | None]:
    payload = {
        "model": endpoint.model_name,
        "messages": [
            {"role": "system", "content": prompt.system_text},
            {"role": "user", "content": prompt.user_text},
        ],
        "temperature": endpoint.temperature,
        "max_tokens": endpoint.max_output_tokens,
    }
    url = endpoint.base_url.rstrip("/") + "/chat/completions"
    headers = {"Content-Type": "application/json"}
    if endpoint.auth_token_env_var:
        token = os.environ.get(endpoint.auth_token_env_var, "")
        if token:
            headers["Authorization"] = f"Bearer {token}"
    request = urllib.request.Request(
        url, data=json.dumps(payload).encode("utf-8"), headers=headers, method="POST"
    )
    try:
        with urllib.request.urlopen(request, timeout=endpoint.timeout) as resp:
            body = resp.read().decode("utf-8")
    except urllib.error.HTTPError as exc:
        if exc.code in (401, 403):
            raise AuthError(f"endpoint rejected credentials (HTTP {exc.code})") from exc
        raise TransportError(f"HTTP {exc.code} from {url}") from exc
    except TimeoutError as exc:
        raise Timeout(f"no reply from {url} within {endpoint.timeout}s") from exc
    except urllib.error.URLError as exc:
        if isinstance(exc.reason, TimeoutError):
            raise Timeout(f"no reply from {url} within {endpoint.timeout}s") from exc
        raise TransportError(f"cannot reach {url}: {exc.reason}") from exc
    except OSError as exc:
        raise TransportError(f"cannot reach {url}: {exc}") from exc
    try:
        reply = json.loads(body)
        content = reply["choices"][0]["message"]["content"]
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        raise MalformedEndpointReply(f"unexpected reply shape from {url}") from exc
    if not isinstance(content, str):
        raise MalformedEndpointReply(f"non-text completion from {url}")
    tokens = None
    usage = reply.get("usage")
    if isinstance(usage, dict) and "prompt_tokens" in usage and "completion_tokens" in usage:
        tokens = (int(usage["prompt_tokens"]), int(usage["completion_tokens"]))
    return content, tokens


def complete(endpoint: EndpointSpec, prompt: AssembledPrompt) -> ChatExchange:
    """Run one completion. Retries transient transport failures with
    exponential backoff; never retries a well-formed model reply."""
    start = time.monotonic()
    if endpoint.kind == SCRIPTED:
        text = _scripted_lookup(endpoint, prompt)
        exchange = ChatExchange(
            system_text=prompt.system_text,
            user_text=prompt.user_text,
            response_text=text,
            latency=time.monotonic() - start,
        )
    else:
        attempt = 0
        while True:
            try:
                text, tokens = _remote_call(endpoint, prompt)
                break
            except (Timeout, TransportError):
                if attempt >= endpoint.max_retries:
                    raise
                time.sleep(min(0.25 * (2**attempt), 4.0))
                attempt += 1
        exchange = ChatExchange(
            system_text=prompt.system_text,
            user_text=prompt.user_text,
            response_text=text,
            latency=time.monotonic() - start,
            token_counts=tokens,
        )
    if endpoint.audit_log_path:
        _audit(
            endpoint.audit_log_path,
            {
                "fingerprint": prompt.fingerprint,
                "model": endpoint.model_name,
                "response_text": exchange.response_text,
                "latency": exchange.latency,
            },
        )
    return exchange


def scripted_from_dataset(
    dataset: Sequence[Instance], prompt_config: PromptConfig | None = None
) -> EndpointSpec:
    """Replay endpoint: for the prompt built from instance i, return
    instance i's expert response verbatim.

    The transcript is keyed by prompt fingerprint, so evaluation must use
    the same prompt config passed here (zero-shot default).
    """
    config = prompt_config or PromptConfig()
    transcript: dict[str, str] = {}
    for instance in dataset:
        prompt = build_prompt(instance.scene, instance.initial_state, instance.request, config)
        if prompt.fingerprint in transcript:
            raise DuplicatePromptFingerprint(
                f"two instances share prompt fingerprint {prompt.fingerprint[:12]}"
            )
        transcript[prompt.fingerprint] = instance.response
    return EndpointSpec(kind=SCRIPTED, model_name="replay", transcript=transcript)


def scripted_transform(
    dataset: Sequence[Instance],
    transform: Callable[[str], str],
    prompt_config: PromptConfig | None = None,
) -> EndpointSpec:
    """Like :func:`scripted_from_dataset` but with each expert response
    passed through `transform` first (degraded-model studies)."""
    config = prompt_config or PromptConfig()
    base = scripted_from_dataset(dataset, config)
    return replace(
        base,
        model_name="replay-transform",
        transcript={k: transform(v) for k, v in base.transcript.items()},
    )
