"""Deterministic prompt assembly.

Section order is fixed: system description, command API, worked examples,
camera state, observations, request. Identical inputs always produce an
identical prompt and fingerprint, which is what makes scripted replay and
byte-stable evaluation reports possible.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .camera import CameraState
from .commands import api_docs
from .scene import describe_observations, format_number

if TYPE_CHECKING:
    from .datagen import Instance
    from .scene import Scene


class EmptyRequest(ValueError):
    pass


class ShotCountExceedsPool(ValueError):
    pass


DEFAULT_PREAMBLE = (
    "You are the control assistant for a pan-tilt-zoom camera. Read the\n"
    "observations and the user request, then answer with camera commands\n"
    "only, one per line, chosen from the API below. Respect every stated\n"
    "parameter range. Objects are identified as label_N ids (for example\n"
    "car_1 is the first car in the observation list); refer to them by id."
)

# Conventional example count for multi-shot runs.
DEFAULT_MULTISHOT = 4


@dataclass(frozen=True)
class PromptConfig:
    shots: int = 0
    example_pool: tuple = ()
    include_state: bool = True
    system_preamble: str = DEFAULT_PREAMBLE

    def __post_init__(self) -> None:
        if self.shots < 0:
            raise ValueError("shots must be >= 0")


@dataclass(frozen=True)
class AssembledPrompt:
    system_text: str
    user_text: str
    example_count: int
    fingerprint: str

    def to_dict(self) -> dict:
        return {
            "system_text": self.system_text,
            "user_text": self.user_text,
            "example_count": self.example_count,
            "fingerprint": self.fingerprint,
        }


def fingerprint_of(system_text: str, user_text: str) -> str:
    digest = hashlib.sha256()
    digest.update(system_text.encode("utf-8"))
    digest.update(b"\x00")
    digest.update(user_text.encode("utf-8"))
    return digest.hexdigest()


def render_api_docs() -> str:
    lines = ["Camera API:"]
    for doc in api_docs():
        lines.append(f"- {doc.signature}: {doc.description} ({doc.param_ranges})")
    return "\n".join(lines)


def state_line(state: CameraState) -> str:
    return "State: pan={p}°, tilt={t}°, zoom={z}x".format(
        p=format_number(state.pan),
        t=format_number(state.tilt),
        z=format_number(state.zoom),
    )


def render_example(example: Instance, ordinal: int) -> str:
    """One worked interaction: observations, the user turn, the response."""
    return "\n".join(
        [
            f"### Example {ordinal}",
            describe_observations(example.scene, example.initial_state),
            f"User: {example.request}",
            "Assistant:",
            example.response,
        ]
    )


def build_prompt(
    scene: Scene,
    state: CameraState,
    request: str,
    config: PromptConfig | None = None,
) -> AssembledPrompt:
    """Assemble the full prompt for one request against one scene.

    The first `config.shots` instances of the example pool are rendered as
    worked examples; selection is a deterministic prefix so runs are
    reproducible (shuffle the pool up front when variety is wanted).
    """
    config = config or PromptConfig()
    if not request or not request.strip():
        raise EmptyRequest("request must be nonempty")
    if config.shots > len(config.example_pool):
        raise ShotCountExceedsPool(
            f"shots={config.shots} exceeds example pool of {len(config.example_pool)}"
        )
    system_text = config.system_preamble + "\n\n" + render_api_docs()
    sections: list[str] = []
    examples = list(config.example_pool[: config.shots])
    for ordinal, example in enumerate(examples, start=1):
        sections.append(render_example(example, ordinal))
    if config.include_state:
        sections.append(state_line(state))
    sections.append(describe_observations(scene, state))
    sections.append(f"Request: {request}")
    user_text = "\n\n".join(sections)
    return AssembledPrompt(
        system_text=system_text,
        user_text=user_text,
        example_count=len(examples),
        fingerprint=fingerprint_of(system_text, user_text),
    )


def extract_request_line(prompt: AssembledPrompt) -> str | None:
    """Recover the request text from an assembled prompt, if present."""
    for line in reversed(prompt.user_text.splitlines()):
        if line.startswith("Request: "):
            return line[len("Request: ") :]
    return None
