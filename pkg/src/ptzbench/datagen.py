"""Self-instruct dataset generation and the validity filter.

Generation prompts carry 8 worked conversations (4 from the seed store, 4
from the already-generated pool, backfilled from seeds while the pool is
small), an environment keyword, and a style keyword. The generator must
answer with a JSON array of instances; malformed batches and elements are
discarded and counted. The filter then keeps exactly those candidates
whose response parses and validates against their own scene, which is the
same rule the evaluation parser applies.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import re
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

from .camera import CameraState
from .commands import parse_response, serialize
from .gateway import EndpointSpec, complete
from .prompting import AssembledPrompt, fingerprint_of, render_api_docs
from .scene import ENVIRONMENTS, Scene, SceneObject


class InsufficientSeeds(ValueError):
    pass


class NoArrayFound(ValueError):
    pass


class InvalidTarget(ValueError):
    pass


class GenerationStalled(RuntimeError):
    pass


class DatasetValidationError(ValueError):
    pass


SOURCES = ("seed", "generated", "expert")
STYLES = ("panning", "unique", "creative", "zooming", "tracking")

GEN_SEED_EXAMPLES = 4
GEN_POOL_EXAMPLES = 4
DEFAULT_BATCH_SIZE = 10
DEFAULT_TARGET = 1000


@dataclass(frozen=True)
class Instance:
    """One (prompt, response) conversation grounded in a concrete scene."""

    instance_id: str
    source: str
    environment: str
    scene: Scene
    initial_state: CameraState
    request: str
    response: str
    style: str | None = None

    def __post_init__(self) -> None:
        if self.source not in SOURCES:
            raise ValueError(f"instance {self.instance_id}: unknown source {self.source!r}")
        if not self.request:
            raise ValueError(f"instance {self.instance_id}: request must be nonempty")

    def to_dict(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "source": self.source,
            "environment": self.environment,
            "scene": self.scene.to_dict(),
            "initial_state": self.initial_state.to_dict(),
            "request": self.request,
            "response": self.response,
            "style": self.style,
        }

    @classmethod
    def from_dict(cls, d: dict) -> Instance:
        return cls(
            instance_id=str(d["instance_id"]),
            source=str(d["source"]),
            environment=str(d["environment"]),
            scene=Scene.from_dict(d["scene"]),
            initial_state=CameraState.from_dict(d["initial_state"]),
            request=str(d["request"]),
            response=str(d["response"]),
            style=d.get("style"),
        )


@dataclass(frozen=True)
class GenBatchSpec:
    """One generation prompt's worth of context: 8 examples total."""

    environment: str
    style: str
    batch_size: int = DEFAULT_BATCH_SIZE
    seed_examples: tuple[Instance, ...] = ()
    generated_examples: tuple[Instance, ...] = ()

    def __post_init__(self) -> None:
        if self.environment not in ENVIRONMENTS:
            raise ValueError(f"unknown environment {self.environment!r}")
        if self.style not in STYLES:
            raise ValueError(f"unknown style {self.style!r}; known: {STYLES}")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if len(self.seed_examples) != GEN_SEED_EXAMPLES:
            raise InsufficientSeeds(
                f"generation prompts need {GEN_SEED_EXAMPLES} seed examples, got {len(self.seed_examples)}"
            )
        if len(self.generated_examples) != GEN_POOL_EXAMPLES:
            raise InsufficientSeeds(
                f"generation prompts need {GEN_POOL_EXAMPLES} pool examples, got {len(self.generated_examples)}"
            )


@dataclass
class FilterStats:
    total: int = 0
    kept: int = 0
    rejected_by_kind: dict[str, int] = field(default_factory=dict)

    @property
    def rejected(self) -> int:
        return sum(self.rejected_by_kind.values())

    @property
    def reject_rate(self) -> float:
        if self.total == 0:
            return 0.0
        return 1.0 - self.kept / self.total

    def add_rejection(self, kind: str, count: int = 1) -> None:
        self.rejected_by_kind[kind] = self.rejected_by_kind.get(kind, 0) + count
        self.total += count

    def merge(self, other: FilterStats) -> None:
        self.total += other.total
        self.kept += other.kept
        for kind, count in other.rejected_by_kind.items():
            self.rejected_by_kind[kind] = self.rejected_by_kind.get(kind, 0) + count

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "kept": self.kept,
            "rejected_by_kind": dict(sorted(self.rejected_by_kind.items())),
            "reject_rate": self.reject_rate,
        }

    @classmethod
    def from_dict(cls, d: dict) -> FilterStats:
        return cls(
            total=int(d["total"]),
            kept=int(d["kept"]),
            rejected_by_kind={str(k): int(v) for k, v in d.get("rejected_by_kind", {}).items()},
        )


@dataclass(frozen=True)
class DiscardRecord:
    index: int
    reason: str
    detail: str = ""


@dataclass(frozen=True)
class BatchAudit:
    """What went into and came out of one generation prompt."""

    batch_index: int
    environment: str
    style: str
    seed_example_ids: tuple[str, ...]
    pool_example_ids: tuple[str, ...]
    backfilled: int
    kept_ids: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "batch_index": self.batch_index,
            "environment": self.environment,
            "style": self.style,
            "seed_example_ids": list(self.seed_example_ids),
            "pool_example_ids": list(self.pool_example_ids),
            "backfilled": self.backfilled,
            "kept_ids": list(self.kept_ids),
        }

    @classmethod
    def from_dict(cls, d: dict) -> BatchAudit:
        return cls(
            batch_index=int(d["batch_index"]),
            environment=str(d["environment"]),
            style=str(d["style"]),
            seed_example_ids=tuple(d["seed_example_ids"]),
            pool_example_ids=tuple(d["pool_example_ids"]),
            backfilled=int(d["backfilled"]),
            kept_ids=tuple(d["kept_ids"]),
        )


@dataclass
class GenerationResult:
    dataset: list[Instance]
    stats: FilterStats
    audits: list[BatchAudit]


# ---------------------------------------------------------------------------
# dataset files


def save_dataset(instances: Sequence[Instance], path: str) -> None:
    """Write instances as JSONL, one per line, scene inlined."""
    with open(path, "w", encoding="utf-8") as fh:
        for instance in instances:
            fh.write(json.dumps(instance.to_dict(), sort_keys=True) + "\n")


def load_dataset(path: str, validate: bool = True) -> list[Instance]:
    """Read a JSONL dataset.

    With validate on (the default), seed and expert instances whose
    response does not parse cleanly against their own scene are rejected
    with a line diagnostic; generated instances pass through so the filter
    can judge them.
    """
    instances: list[Instance] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                instance = Instance.from_dict(json.loads(line))
            except (ValueError, KeyError, TypeError) as exc:
                raise DatasetValidationError(f"{path}:{line_no}: {exc}") from exc
            if validate and instance.source in ("seed", "expert"):
                outcome = parse_response(instance.response, instance.scene)
                if not outcome.accepted:
                    kinds = ",".join(outcome.diagnostic_kinds())
                    raise DatasetValidationError(
                        f"{path}:{line_no}: instance {instance.instance_id} response"
                        f" rejected by parser ({kinds})"
                    )
            instances.append(instance)
    return instances


# ---------------------------------------------------------------------------
# generation prompt

_GENERATION_PREAMBLE = (
    "You write training conversations for a pan-tilt-zoom camera control\n"
    "assistant. Each conversation pairs a natural user request with the\n"
    "exact camera commands that satisfy it in a concrete scene. Answer\n"
    "with a JSON array only, no commentary. Every element must be an\n"
    "object with the keys: environment, objects, state, request, response.\n"
    "objects is a list of {id, label, attributes, extent:{pan_min, pan_max,\n"
    "tilt_min, tilt_max}}; state is {pan, tilt, zoom}; response is camera\n"
    "commands only, one per line, referencing object ids that exist in the\n"
    "element's own objects list."
)


def instance_to_element(instance: Instance) -> dict:
    """The wire shape a generator is asked to emit, built from an instance."""
    return {
        "environment": instance.environment,
        "objects": [o.to_dict() for o in instance.scene.objects],
        "state": instance.initial_state.to_dict(),
        "request": instance.request,
        "response": instance.response,
    }


def build_generation_prompt(spec: GenBatchSpec) -> AssembledPrompt:
    """Render one batched generation prompt from a batch spec.

    Deterministic given the batch spec; the style and environment keywords
    and the exact instance count request appear verbatim.
    """
    system_text = _GENERATION_PREAMBLE + "\n\n" + render_api_docs()
    examples = [instance_to_element(i) for i in spec.seed_examples + spec.generated_examples]
    user_text = "\n".join(
        [
            "Worked examples:",
            json.dumps(examples, indent=2, sort_keys=True),
            "",
            f"Environment: {spec.environment}",
            f"Style: {spec.style}",
            (
                f"Generate exactly {spec.batch_size} new \"{spec.style}\" instances set in a"
                f" \"{spec.environment}\" environment, as one JSON array."
            ),
        ]
    )
    return AssembledPrompt(
        system_text=system_text,
        user_text=user_text,
        example_count=len(examples),
        fingerprint=fingerprint_of(system_text, user_text),
    )


# ---------------------------------------------------------------------------
# structured-output recovery

_ARRAY_START_RE = re.compile(r"\[")


def _extract_first_array(text: str) -> list:
    decoder = json.JSONDecoder()
    for match in _ARRAY_START_RE.finditer(text):
        try:
            value, _ = decoder.raw_decode(text, match.start())
        except ValueError:
            continue
        if isinstance(value, list):
            return value
    raise NoArrayFound("no JSON array found in generator output")


def _element_to_candidate(element: object, index: int) -> Instance | DiscardRecord:
    if not isinstance(element, dict):
        return DiscardRecord(index, "NotAnObject", f"element {index} is {type(element).__name__}")
    for key in ("environment", "objects", "state", "request", "response"):
        if key not in element:
            return DiscardRecord(index, f"MissingField:{key}")
    environment = element["environment"]
    if environment not in ENVIRONMENTS:
        return DiscardRecord(index, "UnknownEnvironment", str(environment))
    if not isinstance(element["request"], str) or not element["request"].strip():
        return DiscardRecord(index, "BadRequest")
    if not isinstance(element["response"], str):
        return DiscardRecord(index, "BadResponse")
    try:
        objects = tuple(SceneObject.from_dict(o) for o in element["objects"])
        scene = Scene(scene_id=f"candidate-{index}-scene", environment=environment, objects=objects)
    except (ValueError, KeyError, TypeError) as exc:
        return DiscardRecord(index, "BadObjects", str(exc))
    if not objects:
        return DiscardRecord(index, "BadObjects", "empty objects list")
    try:
        state = CameraState.from_dict(element["state"])
    except (ValueError, KeyError, TypeError) as exc:
        return DiscardRecord(index, "BadState", str(exc))
    return Instance(
        instance_id=f"candidate-{index}",
        source="generated",
        environment=environment,
        scene=scene,
        initial_state=state,
        request=element["request"].strip(),
        response=element["response"],
        style=None,
    )


def parse_generation_output(raw: str) -> tuple[list[Instance], list[DiscardRecord]]:
    """Recover candidate instances from generator text.

    Finds the first JSON array (code fences and surrounding prose are
    fine), then checks each element against the instance schema. Raises
    NoArrayFound when the text contains no parseable array at all.
    """
    elements = _extract_first_array(raw)
    candidates: list[Instance] = []
    discards: list[DiscardRecord] = []
    for index, element in enumerate(elements):
        result = _element_to_candidate(element, index)
        if isinstance(result, Instance):
            candidates.append(result)
        else:
            discards.append(result)
    return candidates, discards


# ---------------------------------------------------------------------------
# the validity filter


def filter_instances(candidates: Sequence[Instance]) -> tuple[list[Instance], FilterStats]:
    """Keep candidates whose response parses and validates against their
    own scene; reject the rest, tallied by first diagnostic kind.

    Kept instances carry their response re-serialized in canonical form,
    which makes the filter idempotent: re-filtering a kept set keeps
    everything.
    """
    stats = FilterStats()
    kept: list[Instance] = []
    for candidate in candidates:
        stats.total += 1
        outcome = parse_response(candidate.response, candidate.scene)
        if outcome.accepted:
            stats.kept += 1
            kept.append(replace(candidate, response=serialize(outcome.commands)))
        else:
            kind = outcome.diagnostics[0].kind if outcome.diagnostics else "Rejected"
            stats.rejected_by_kind[kind] = stats.rejected_by_kind.get(kind, 0) + 1
    return kept, stats


# ---------------------------------------------------------------------------
# batched generation loop


def _weighted_choice(rng: random.Random, mix: dict[str, float]) -> str:
    items = sorted(mix.items())
    names = [name for name, _ in items]
    weights = [weight for _, weight in items]
    return rng.choices(names, weights=weights, k=1)[0]


def sample_batch_examples(
    seed_pool: Sequence[Instance],
    generated_pool: Sequence[Instance],
    rng: random.Random,
) -> tuple[list[Instance], list[Instance], int]:
    """Draw 4 seed examples and 4 pool examples, backfilling the pool side
    from seeds while the generated pool has fewer than 4 instances.

    Returns (seed_examples, pool_examples, backfilled_count).
    """
    if len(seed_pool) < GEN_SEED_EXAMPLES:
        raise InsufficientSeeds(
            f"seed store has {len(seed_pool)} instances; need at least {GEN_SEED_EXAMPLES}"
        )
    seed_examples = rng.sample(list(seed_pool), GEN_SEED_EXAMPLES)
    if len(generated_pool) >= GEN_POOL_EXAMPLES:
        return seed_examples, rng.sample(list(generated_pool), GEN_POOL_EXAMPLES), 0
    pool_examples = list(generated_pool)
    backfilled = GEN_POOL_EXAMPLES - len(pool_examples)
    chosen_ids = {i.instance_id for i in seed_examples}
    remaining = [s for s in seed_pool if s.instance_id not in chosen_ids]
    need = backfilled
    if len(remaining) >= need:
        pool_examples.extend(rng.sample(remaining, need))
    else:
        pool_examples.extend(remaining)
        while len(pool_examples) < GEN_POOL_EXAMPLES:
            pool_examples.append(rng.choice(list(seed_pool)))
    return seed_examples, pool_examples, backfilled


def _config_digest(
    seed: int,
    target_count: int,
    batch_size: int,
    env_mix: dict[str, float],
    style_mix: dict[str, float],
    seed_pool: Sequence[Instance],
) -> str:
    payload = json.dumps(
        {
            "seed": seed,
            "target_count": target_count,
            "batch_size": batch_size,
            "env_mix": sorted(env_mix.items()),
            "style_mix": sorted(style_mix.items()),
            "seed_ids": [i.instance_id for i in seed_pool],
        },
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _write_checkpoint(
    path: str,
    cursor: int,
    digest: str,
    pool: Sequence[Instance],
    stats: FilterStats,
    audits: Sequence[BatchAudit],
) -> None:
    payload = {
        "version": 1,
        "cursor": cursor,
        "config_digest": digest,
        "kept": [i.to_dict() for i in pool],
        "stats": stats.to_dict(),
        "audits": [a.to_dict() for a in audits],
    }
    tmp_path = path + ".tmp"
    with open(tmp_path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True)
        fh.write("\n")
    os.replace(tmp_path, path)


def _load_checkpoint(path: str, digest: str) -> tuple[int, list[Instance], FilterStats, list[BatchAudit]]:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("config_digest") != digest:
        raise ValueError(f"checkpoint {path} was written for a different generation config")
    return (
        int(payload["cursor"]),
        [Instance.from_dict(d) for d in payload["kept"]],
        FilterStats.from_dict(payload["stats"]),
        [BatchAudit.from_dict(d) for d in payload.get("audits", [])],
    )


def run_generation(
    endpoint: EndpointSpec,
    target_count: int,
    env_mix: dict[str, float] | None = None,
    style_mix: dict[str, float] | None = None,
    seed: int = 0,
    seed_pool: Sequence[Instance] = (),
    batch_size: int = DEFAULT_BATCH_SIZE,
    checkpoint_path: str | None = None,
    max_batches: int | None = None,
    on_batch: Callable[[BatchAudit], None] | None = None,
) -> GenerationResult:
    """Loop generation batches until the kept count reaches target_count.

    Batch scheduling is deterministic per (seed, batch index): environment
    and style draws, example sampling, and id assignment all re-derive
    from the batch index, so a run resumed from a checkpoint produces the
    same final dataset as an uninterrupted one. Gateway errors propagate
    after the last completed batch has been checkpointed.
    """
    if target_count < 1:
        raise InvalidTarget(f"target_count must be >= 1, got {target_count}")
    if len(seed_pool) < GEN_SEED_EXAMPLES:
        raise InsufficientSeeds(
            f"seed store has {len(seed_pool)} instances; need at least {GEN_SEED_EXAMPLES}"
        )
    env_mix = env_mix or {name: 1.0 for name in ENVIRONMENTS}
    style_mix = style_mix or {name: 1.0 for name in STYLES}
    digest = _config_digest(seed, target_count, batch_size, env_mix, style_mix, seed_pool)

    cursor = 0
    pool: list[Instance] = []
    stats = FilterStats()
    audits: list[BatchAudit] = []
    if checkpoint_path and os.path.exists(checkpoint_path):
        cursor, pool, stats, audits = _load_checkpoint(checkpoint_path, digest)

    while len(pool) < target_count:
        if max_batches is not None and cursor >= max_batches:
            raise GenerationStalled(
                f"kept {len(pool)}/{target_count} after {cursor} batches (max_batches={max_batches})"
            )
        rng = random.Random(f"{seed}:batch:{cursor}")
        environment = _weighted_choice(rng, env_mix)
        style = _weighted_choice(rng, style_mix)
        seed_examples, pool_examples, backfilled = sample_batch_examples(seed_pool, pool, rng)
        batch = GenBatchSpec(
            environment=environment,
            style=style,
            batch_size=batch_size,
            seed_examples=tuple(seed_examples),
            generated_examples=tuple(pool_examples),
        )
        prompt = build_generation_prompt(batch)
        exchange = complete(endpoint, prompt)
        batch_stats = FilterStats()
        kept: list[Instance] = []
        try:
            candidates, discards = parse_generation_output(exchange.response_text)
        except NoArrayFound:
            batch_stats.add_rejection("NoArrayFound")
            candidates, discards = [], []
        for discard in discards:
            batch_stats.add_rejection(discard.reason)
        filtered, filter_stats = filter_instances(candidates)
        batch_stats.merge(filter_stats)
        for candidate in filtered:
            new_id = f"gen_{len(pool) + len(kept) + 1:05d}"
            kept.append(
                replace(
                    candidate,
                    instance_id=new_id,
                    scene=replace(candidate.scene, scene_id=f"{new_id}-scene"),
                    style=style,
                )
            )
        pool.extend(kept)
        stats.merge(batch_stats)
        audit = BatchAudit(
            batch_index=cursor,
            environment=environment,
            style=style,
            seed_example_ids=tuple(i.instance_id for i in seed_examples),
            pool_example_ids=tuple(i.instance_id for i in pool_examples),
            backfilled=backfilled,
            kept_ids=tuple(i.instance_id for i in kept),
        )
        audits.append(audit)
        cursor += 1
        if checkpoint_path:
            _write_checkpoint(checkpoint_path, cursor, digest, pool, stats, audits)
        if on_batch is not None:
            on_batch(audit)
    return GenerationResult(dataset=pool, stats=stats, audits=audits)
