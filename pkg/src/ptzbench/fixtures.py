"""Deterministic fixture datasets and scripted generators.

Everything here is a pure function of its seed, so the shipped data files
can be regenerated bit-for-bit (``python -m ptzbench.fixtures``) and tests
can rebuild them in memory instead of trusting the files.

* the seed store (200 conversations) anchoring dataset generation,
* the expert benchmark (100 conversations) used by the replay oracle,
* the filter-fidelity corpus with exactly 30% injected invalid instances
  (unknown commands, out-of-range arguments, absent objects, equal parts),
* scripted generator responders that stand in for a live model during
  dataset generation runs.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import replace
from importlib import resources
from pathlib import Path
from typing import Callable

from .camera import CameraState, simulate
from .commands import Command, serialize
from .datagen import STYLES, Instance, instance_to_element
from .prompting import AssembledPrompt, build_prompt
from .scene import ENVIRONMENTS, Scene, generate_scene

SEED_DATASET_SEED = 9001
EXPERT_DATASET_SEED = 9002
FILTER_CORPUS_SEED = 9003

SEED_DATASET_FILE = "seeds_200.jsonl"
EXPERT_DATASET_FILE = "expert_100.jsonl"
FILTER_CORPUS_FILE = "filter_corpus_200.jsonl"

_ZOOM_PALETTE = (1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 8.0)

_FAKE_COMMANDS = ("sweep", "rotate_to", "track", "fly_to", "orbit")
_RANGE_BREAKERS = ("zoom(99.0)", "pan_left(400)", "tilt_up(500)", "hold(0)")
_GHOST_OBJECTS = ("zebra_9", "ghost_1", "unicorn_2")


def _describe(obj) -> str:
    name = obj.label.replace("_", " ")
    attrs = " ".join(obj.attributes)
    return f"{attrs} {name}" if attrs else name


# --- request/command templates ---------------------------------------------


def _t_pan(rng: random.Random, scene: Scene, state: CameraState):
    n = rng.randint(2, 8)
    if state.pan + 5 * n <= 180:
        return f"Pan {n} frames to the right.", [Command("pan_right", (n,))]
    return f"Pan {n} frames to the left.", [Command("pan_left", (n,))]


def _t_tilt(rng: random.Random, scene: Scene, state: CameraState):
    n = rng.randint(2, 6)
    if state.tilt + 3 * n <= 90:
        return f"Tilt up for {n} frames.", [Command("tilt_up", (n,))]
    return f"Tilt down for {n} frames.", [Command("tilt_down", (n,))]


def _t_zoom(rng: random.Random, scene: Scene, state: CameraState):
    v = rng.choice([z for z in _ZOOM_PALETTE if abs(z - state.zoom) > 1e-9])
    return f"Set the zoom to {v:g}x.", [Command("zoom", (v,))]


def _t_center(rng: random.Random, scene: Scene, state: CameraState):
    obj = rng.choice(scene.objects)
    return f"Center the view on the {_describe(obj)}.", [Command("center", (obj.id,))]


def _t_inspect(rng: random.Random, scene: Scene, state: CameraState):
    obj = rng.choice(scene.objects)
    return f"Zoom in on the {_describe(obj)}.", [Command("zoom_to", (obj.id,))]


def _t_pair(rng: random.Random, scene: Scene, state: CameraState):
    first, second = rng.sample(scene.objects, 2)
    hold = rng.randint(2, 4)
    return (
        f"Show me the {_describe(first)}, pause briefly, then the {_describe(second)}.",
        [Command("center", (first.id,)), Command("hold", (hold,)), Command("center", (second.id,))],
    )


def _t_reset(rng: random.Random, scene: Scene, state: CameraState):
    n = rng.randint(2, 5)
    return (
        f"Return to the home position and hold for {n} frames.",
        [Command("home"), Command("hold", (n,))],
    )


def _t_pan_zoom(rng: random.Random, scene: Scene, state: CameraState):
    n = rng.randint(2, 6)
    v = rng.choice([z for z in _ZOOM_PALETTE if abs(z - state.zoom) > 1e-9])
    if state.pan + 5 * n <= 180:
        side, cmd = "right", Command("pan_right", (n,))
    else:
        side, cmd = "left", Command("pan_left", (n,))
    return (
        f"Pan {side} {n} frames, then set the zoom to {v:g}x.",
        [cmd, Command("zoom", (v,))],
    )


_TEMPLATES = (_t_pan, _t_tilt, _t_zoom, _t_center, _t_inspect, _t_pair, _t_reset, _t_pan_zoom)


def _random_state(rng: random.Random) -> CameraState:
    return CameraState(
        pan=float(round(rng.uniform(-60, 60) / 5) * 5),
        tilt=float(round(rng.uniform(-20, 20) / 3) * 3),
        zoom=rng.choice((1.0, 1.0, 1.0, 1.5, 2.0)),
    )


def _end_state(scene: Scene, state: CameraState, commands: list[Command]) -> CameraState:
    if not commands:
        return state
    return simulate(scene, state, commands).final_state


def _strict_mover(rng: random.Random, scene: Scene, state: CameraState) -> Command:
    """A command guaranteed to change the viewport from `state`."""
    options = ["zoom", "pan", "tilt", "center"]
    rng.shuffle(options)
    for kind in options:
        if kind == "zoom":
            values = [v for v in _ZOOM_PALETTE if abs(v - state.zoom) > 1e-9]
            if values:
                return Command("zoom", (rng.choice(values),))
        elif kind == "pan":
            n = rng.randint(1, 6)
            if state.pan + 5 * n <= 180:
                return Command("pan_right", (n,))
            if state.pan - 5 * n >= -180:
                return Command("pan_left", (n,))
        elif kind == "tilt":
            n = rng.randint(1, 5)
            if state.tilt + 3 * n <= 90:
                return Command("tilt_up", (n,))
            if state.tilt - 3 * n >= -90:
                return Command("tilt_down", (n,))
        else:
            off_axis = [
                o
                for o in scene.objects
                if abs(o.extent.center[0] - state.pan) > 1.0
                or abs(o.extent.center[1] - state.tilt) > 1.0
            ]
            if off_axis:
                return Command("center", (rng.choice(off_axis).id,))
    return Command("zoom", (min(state.zoom + 1.0, 25.0),))


def _tail_is_strict(scene: Scene, initial: CameraState, commands: list[Command]) -> bool:
    """True when dropping the final command visibly truncates the trajectory."""
    if len(commands) < 2:
        return False
    full = simulate(scene, initial, commands)
    prefix = simulate(scene, initial, commands[:-1])
    if not prefix.frames:
        return False
    last_viewport = prefix.frames[-1].viewport
    return any(f.viewport != last_viewport for f in full.frames[len(prefix.frames) :])


def _ensure_strict_tail(
    rng: random.Random, scene: Scene, initial: CameraState, commands: list[Command]
) -> list[Command]:
    for _ in range(5):
        if _tail_is_strict(scene, initial, commands):
            return commands
        commands = commands + [_strict_mover(rng, scene, _end_state(scene, initial, commands))]
    raise RuntimeError("could not construct a strictly-moving command tail")


def _build_instance(
    rng: random.Random,
    instance_id: str,
    source: str,
    environment: str | None = None,
    strict_tail: bool = False,
    with_style: bool = False,
) -> Instance:
    environment = environment or rng.choice(sorted(ENVIRONMENTS))
    scene = generate_scene(environment, rng.randrange(1_000_000), rng.randint(3, 8))
    state = _random_state(rng)
    template = rng.choice(_TEMPLATES)
    request, commands = template(rng, scene, state)
    if strict_tail:
        commands = _ensure_strict_tail(rng, scene, state, commands)
    return Instance(
        instance_id=instance_id,
        source=source,
        environment=environment,
        scene=scene,
        initial_state=state,
        request=request,
        response=serialize(commands),
        style=rng.choice(STYLES) if with_style and rng.random() < 0.5 else None,
    )


def build_seed_dataset(count: int = 200, seed: int = SEED_DATASET_SEED) -> list[Instance]:
    """The manually-curated-style seed store shipped with the package."""
    rng = random.Random(f"seeds:{seed}")
    return [
        _build_instance(rng, f"seed_{i:03d}", "seed", with_style=True)
        for i in range(1, count + 1)
    ]


def build_expert_dataset(count: int = 100, seed: int = EXPERT_DATASET_SEED) -> list[Instance]:
    """The expert benchmark: 100 conversations, each at least two commands
    long with a final command that strictly moves the camera (so truncating
    the response always lowers frame-by-frame agreement)."""
    rng = random.Random(f"expert:{seed}")
    instances = [
        _build_instance(rng, f"expert_{i:03d}", "expert", strict_tail=True)
        for i in range(1, count + 1)
    ]
    fingerprints = set()
    for instance in instances:
        prompt = build_prompt(instance.scene, instance.initial_state, instance.request)
        if prompt.fingerprint in fingerprints:
            raise RuntimeError(f"expert dataset collision at {instance.instance_id}")
        fingerprints.add(prompt.fingerprint)
    return instances


def _corrupt_unknown_command(rng: random.Random, response: str) -> str:
    lines = response.splitlines()
    i = rng.randrange(len(lines))
    name, _, rest = lines[i].partition("(")
    lines[i] = f"{rng.choice(_FAKE_COMMANDS)}({rest}"
    return "\n".join(lines)


def _corrupt_range(rng: random.Random, response: str) -> str:
    return response + "\n" + rng.choice(_RANGE_BREAKERS)


def _corrupt_object(rng: random.Random, response: str) -> str:
    verb = rng.choice(("center", "zoom_to"))
    return response + f"\n{verb}({rng.choice(_GHOST_OBJECTS)})"


def build_filter_corpus(
    count: int = 200,
    invalid_fraction: float = 0.3,
    seed: int = FILTER_CORPUS_SEED,
) -> tuple[list[Instance], frozenset[str]]:
    """A candidate corpus with exactly `invalid_fraction` invalid instances,
    split equally between unknown commands, out-of-range arguments, and
    references to absent objects. Returns (instances, invalid_ids)."""
    n_invalid = round(count * invalid_fraction)
    if n_invalid % 3 != 0:
        raise ValueError(f"invalid share {n_invalid} must split into three equal parts")
    rng = random.Random(f"corpus:{seed}")
    corruptions = (
        [_corrupt_unknown_command] * (n_invalid // 3)
        + [_corrupt_range] * (n_invalid // 3)
        + [_corrupt_object] * (n_invalid // 3)
        + [None] * (count - n_invalid)
    )
    rng.shuffle(corruptions)
    instances: list[Instance] = []
    invalid_ids = set()
    for i, corruption in enumerate(corruptions, start=1):
        instance = _build_instance(rng, f"case_{i:03d}", "generated")
        if corruption is not None:
            instance = replace(instance, response=corruption(rng, instance.response))
            invalid_ids.add(instance.instance_id)
        instances.append(instance)
    return instances, frozenset(invalid_ids)


# --- scripted generators ----------------------------------------------------

_ENV_LINE = re.compile(r"^Environment: (\w+)$", re.MULTILINE)
_COUNT_LINE = re.compile(r"Generate exactly (\d+) ")


def scripted_generator(invalid_per_batch: int = 0) -> Callable[[AssembledPrompt], str]:
    """A responder that plays the generator model for run_generation.

    Emits the requested number of schema-valid instances in the requested
    environment, derived deterministically from the prompt fingerprint;
    the first `invalid_per_batch` of each batch get corrupted responses so
    filter statistics are predictable.
    """

    def responder(prompt: AssembledPrompt) -> str:
        env_match = _ENV_LINE.search(prompt.user_text)
        count_match = _COUNT_LINE.search(prompt.user_text)
        environment = env_match.group(1) if env_match else "construction"
        count = int(count_match.group(1)) if count_match else 10
        rng = random.Random(f"generator:{prompt.fingerprint}")
        corruptions = (_corrupt_unknown_command, _corrupt_range, _corrupt_object)
        elements = []
        for i in range(count):
            instance = _build_instance(rng, f"draft_{i}", "generated", environment=environment)
            element = instance_to_element(instance)
            if i < invalid_per_batch:
                element["response"] = corruptions[i % 3](rng, element["response"])
            elements.append(element)
        return "```json\n" + json.dumps(elements, sort_keys=True) + "\n```"

    return responder


# --- shipped data files -----------------------------------------------------


def data_path(name: str) -> Path:
    """Path of a shipped data file inside the installed package."""
    return Path(str(resources.files("ptzbench") / "data" / name))


def load_shipped_expert_dataset() -> list[Instance]:
    from .datagen import load_dataset

    return load_dataset(str(data_path(EXPERT_DATASET_FILE)))


def load_shipped_seed_dataset() -> list[Instance]:
    from .datagen import load_dataset

    return load_dataset(str(data_path(SEED_DATASET_FILE)))


def write_data_files(directory: str | Path | None = None) -> list[Path]:
    """Regenerate the three shipped JSONL files; returns the paths written."""
    from .datagen import save_dataset

    target = Path(directory) if directory else Path(__file__).parent / "data"
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for name, instances in (
        (SEED_DATASET_FILE, build_seed_dataset()),
        (EXPERT_DATASET_FILE, build_expert_dataset()),
        (FILTER_CORPUS_FILE, build_filter_corpus()[0]),
    ):
        path = target / name
        save_dataset(instances, str(path))
        written.append(path)
    return written


if __name__ == "__main__":
    for path in write_data_files():
        print(path)
