"""Static scenes: labeled, attributed objects at fixed angular positions.

Scenes are immutable after construction and generation is a pure function
of (environment, seed, object_count), so observations are reproducible
across runs and processes.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import cached_property

from .camera import CameraState, hfov, vfov
from .geometry import WORLD, AngularRect


class UnknownEnvironment(ValueError):
    pass


class InvalidObjectCount(ValueError):
    pass


class SceneValidationError(ValueError):
    """Raised by the loader on the first invariant violation, naming the field."""


@dataclass(frozen=True)
class SceneObject:
    id: str
    label: str
    attributes: tuple[str, ...]
    extent: AngularRect

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("object id must be nonempty")
        if not self.label:
            raise ValueError(f"object {self.id}: label must be nonempty")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "label": self.label,
            "attributes": list(self.attributes),
            "extent": self.extent.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> SceneObject:
        return cls(
            id=str(d["id"]),
            label=str(d["label"]),
            attributes=tuple(str(a) for a in d.get("attributes", [])),
            extent=AngularRect.from_dict(d["extent"]),
        )


@dataclass(frozen=True)
class Scene:
    scene_id: str
    environment: str
    objects: tuple[SceneObject, ...]
    world_bounds: AngularRect = WORLD

    def __post_init__(self) -> None:
        ids = [o.id for o in self.objects]
        if len(ids) != len(set(ids)):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"duplicate object ids in scene {self.scene_id}: {dupes}")
        for obj in self.objects:
            if not self.world_bounds.contains(obj.extent):
                raise ValueError(f"object {obj.id} extent outside world bounds")

    @cached_property
    def _by_id(self) -> dict[str, SceneObject]:
        return {o.id: o for o in self.objects}

    def object_ids(self) -> frozenset[str]:
        return frozenset(self._by_id)

    def get_object(self, object_id: str) -> SceneObject:
        try:
            return self._by_id[object_id]
        except KeyError:
            raise KeyError(f"no object {object_id!r} in scene {self.scene_id}") from None

    def to_dict(self) -> dict:
        return {
            "scene_id": self.scene_id,
            "environment": self.environment,
            "world_bounds": self.world_bounds.to_dict(),
            "objects": [o.to_dict() for o in self.objects],
        }

    @classmethod
    def from_dict(cls, d: dict) -> Scene:
        return cls(
            scene_id=str(d["scene_id"]),
            environment=str(d["environment"]),
            objects=tuple(SceneObject.from_dict(o) for o in d["objects"]),
            world_bounds=AngularRect.from_dict(d["world_bounds"]) if "world_bounds" in d else WORLD,
        )


@dataclass(frozen=True)
class EnvironmentVocab:
    labels: tuple[str, ...]
    attributes: tuple[str, ...]


# Shipped configuration table: label/attribute vocabulary per environment.
ENVIRONMENTS: dict[str, EnvironmentVocab] = {
    "construction": EnvironmentVocab(
        labels=("excavator", "dump_truck", "roller", "car", "person", "crane"),
        attributes=("yellow", "orange", "gray", "rusty", "parked", "idle"),
    ),
    "industrial": EnvironmentVocab(
        labels=("forklift", "pallet", "tank", "conveyor", "worker", "truck", "silo", "drum"),
        attributes=("blue", "green", "steel", "dusty", "loaded", "empty"),
    ),
    "urban": EnvironmentVocab(
        labels=("car", "bus", "bicycle", "pedestrian", "taxi", "van", "scooter", "truck"),
        attributes=("red", "white", "black", "silver", "parked", "moving"),
    ),
    "mining": EnvironmentVocab(
        labels=("haul_truck", "loader", "drill", "conveyor", "worker", "dozer", "shovel", "water_truck"),
        attributes=("yellow", "muddy", "gray", "heavy", "loaded", "idle"),
    ),
    "parking": EnvironmentVocab(
        labels=("car", "van", "motorcycle", "truck", "trailer", "cart", "suv", "pickup"),
        attributes=("gray", "blue", "red", "white", "dusty", "parked"),
    ),
}

MAX_OBJECT_COUNT = 50

# Object extents span 2x2 to 30x20 degrees so several zoom levels are exercised.
_MIN_W, _MAX_W = 2.0, 30.0
_MIN_H, _MAX_H = 2.0, 20.0


def generate_scene(environment: str, seed: int, object_count: int) -> Scene:
    """Deterministically generate a scene for (environment, seed, object_count).

    Objects draw labels and attributes from the environment vocabulary;
    extents are non-degenerate, possibly overlapping, and contained in the
    world bounds. Ids are label-prefixed ordinals such as ``car_1``.
    """
    if environment not in ENVIRONMENTS:
        raise UnknownEnvironment(
            f"unknown environment {environment!r}; known: {sorted(ENVIRONMENTS)}"
        )
    if not (1 <= object_count <= MAX_OBJECT_COUNT):
        raise InvalidObjectCount(
            f"object_count must be in [1, {MAX_OBJECT_COUNT}], got {object_count}"
        )
    vocab = ENVIRONMENTS[environment]
    rng = random.Random(f"{environment}:{seed}:{object_count}")
    counters: dict[str, int] = {}
    objects = []
    for _ in range(object_count):
        label = rng.choice(vocab.labels)
        n_attrs = rng.randint(1, 2)
        attrs = tuple(rng.sample(vocab.attributes, n_attrs))
        width = rng.uniform(_MIN_W, _MAX_W)
        height = rng.uniform(_MIN_H, _MAX_H)
        cx = rng.uniform(WORLD.pan_min + width / 2, WORLD.pan_max - width / 2)
        cy = rng.uniform(WORLD.tilt_min + height / 2, WORLD.tilt_max - height / 2)
        counters[label] = counters.get(label, 0) + 1
        objects.append(
            SceneObject(
                id=f"{label}_{counters[label]}",
                label=label,
                attributes=attrs,
                extent=AngularRect(cx - width / 2, cx + width / 2, cy - height / 2, cy + height / 2),
            )
        )
    return Scene(
        scene_id=f"{environment}-{seed}-{object_count}",
        environment=environment,
        objects=tuple(objects),
    )


def format_number(value: float) -> str:
    """Compact deterministic rendering of a degree or zoom value."""
    return f"{value:g}"


def _position_phrase(dpan: float, dtilt: float, half_h: float, half_v: float) -> str:
    in_h = abs(dpan) <= half_h
    in_v = abs(dtilt) <= half_v
    if in_h and in_v:
        return "in view"
    horizontal = None
    if not in_h:
        side = "right" if dpan > 0 else "left"
        if abs(dpan) <= 45.0:
            horizontal = f"slightly {side}"
        elif abs(dpan) <= 100.0:
            horizontal = f"to the {side}"
        else:
            horizontal = f"far to the {side}"
    vertical = None
    if not in_v:
        vertical = "above" if dtilt > 0 else "below"
    if horizontal and vertical:
        return f"{horizontal} and {vertical}"
    return horizontal or vertical or "in view"


def describe_observations(scene: Scene, state: CameraState) -> str:
    """Render the scene as text: one line per object (by id), then a state line.

    Position phrases come from fixed angular bins on the offset between an
    object's center and the camera axis, so the text is deterministic.
    """
    half_h = hfov(state.zoom) / 2.0
    half_v = vfov(state.zoom) / 2.0
    lines = []
    for obj in sorted(scene.objects, key=lambda o: o.id):
        cx, cy = obj.extent.center
        phrase = _position_phrase(cx - state.pan, cy - state.tilt, half_h, half_v)
        attrs = " ".join(obj.attributes)
        subject = f"a {attrs} {obj.label}" if attrs else f"a {obj.label}"
        lines.append(f"{subject} is {phrase}")
    lines.append(
        "camera: pan={p}°, tilt={t}°, zoom={z}x".format(
            p=format_number(state.pan),
            t=format_number(state.tilt),
            z=format_number(state.zoom),
        )
    )
    return "\n".join(lines)


def load_scene(path: str) -> Scene:
    """Load and validate a scene JSON document, rejecting on first violation."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SceneValidationError(f"{path}: not valid JSON: {exc}") from exc
    for field in ("scene_id", "environment", "objects"):
        if field not in payload:
            raise SceneValidationError(f"{path}: missing field {field!r}")
    try:
        return Scene.from_dict(payload)
    except (ValueError, KeyError, TypeError) as exc:
        raise SceneValidationError(f"{path}: {exc}") from exc


def save_scene(scene: Scene, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scene.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
