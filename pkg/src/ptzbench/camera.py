"""PTZ kinematics: a deterministic state machine expanding commands into frames.

Every command expands into one or more frames, each frame recording the
post-step camera state and its viewport rectangle. Motion clamps at the
pan/tilt/zoom limits (frames are still emitted at the limit), so any
validated command sequence simulates without error.

Expansion rules:

* ``pan_left(n)`` / ``pan_right(n)``: n frames at 5 degrees per frame.
* ``tilt_up(n)`` / ``tilt_down(n)``: n frames at 3 degrees per frame.
* ``zoom(v)``: one frame at zoom v.
* ``home()``: one frame at (0, 0, 1).
* ``hold(n)``: n frames repeating the current state.
* ``center(obj)``: k frames linearly interpolating pan and tilt onto the
  object's center, k = max(1, ceil(max(|dpan|/5, |dtilt|/3))).
* ``zoom_to(obj)``: the center expansion, then one frame whose zoom makes
  the object fill 80% of the tighter viewport axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable

from .geometry import AngularRect, PAN_MAX, PAN_MIN, TILT_MAX, TILT_MIN

if TYPE_CHECKING:
    from .commands import Command
    from .scene import Scene

BASE_HFOV = 60.0
BASE_VFOV = 33.75
ZOOM_MIN = 1.0
ZOOM_MAX = 25.0
PAN_STEP = 5.0
TILT_STEP = 3.0
ZOOM_TO_FILL = 0.8


def hfov(zoom: float) -> float:
    """Horizontal field of view in degrees at the given zoom."""
    return BASE_HFOV / zoom


def vfov(zoom: float) -> float:
    """Vertical field of view in degrees at the given zoom."""
    return BASE_VFOV / zoom


@dataclass(frozen=True)
class CameraState:
    """Pan, tilt, zoom triple. Pan in [-180, 180], tilt in [-90, 90], zoom in [1, 25]."""

    pan: float
    tilt: float
    zoom: float

    def __post_init__(self) -> None:
        for name in ("pan", "tilt", "zoom"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (PAN_MIN <= self.pan <= PAN_MAX):
            raise ValueError(f"pan out of range: {self.pan}")
        if not (TILT_MIN <= self.tilt <= TILT_MAX):
            raise ValueError(f"tilt out of range: {self.tilt}")
        if not (ZOOM_MIN <= self.zoom <= ZOOM_MAX):
            raise ValueError(f"zoom out of range: {self.zoom}")

    def to_dict(self) -> dict[str, float]:
        return {"pan": self.pan, "tilt": self.tilt, "zoom": self.zoom}

    @classmethod
    def from_dict(cls, d: dict) -> CameraState:
        return cls(pan=float(d["pan"]), tilt=float(d["tilt"]), zoom=float(d["zoom"]))


HOME_STATE = CameraState(0.0, 0.0, 1.0)


@dataclass(frozen=True)
class Frame:
    """One simulator step: 1-based index, viewport rectangle, camera state."""

    index: int
    viewport: AngularRect
    state: CameraState

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "viewport": self.viewport.to_dict(),
            "state": self.state.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> Frame:
        return cls(
            index=int(d["index"]),
            viewport=AngularRect.from_dict(d["viewport"]),
            state=CameraState.from_dict(d["state"]),
        )


@dataclass(frozen=True)
class SimResult:
    """Frame sequence, final state, and per-command (ordinal, first, last) spans."""

    frames: tuple[Frame, ...]
    final_state: CameraState
    per_command_spans: tuple[tuple[int, int, int], ...]

    def viewports(self) -> list[AngularRect]:
        return [f.viewport for f in self.frames]

    def to_dict(self) -> dict:
        return {
            "frames": [f.to_dict() for f in self.frames],
            "final_state": self.final_state.to_dict(),
            "spans": [list(s) for s in self.per_command_spans],
        }

    @classmethod
    def from_dict(cls, d: dict) -> SimResult:
        return cls(
            frames=tuple(Frame.from_dict(f) for f in d["frames"]),
            final_state=CameraState.from_dict(d["final_state"]),
            per_command_spans=tuple(tuple(int(x) for x in s) for s in d["spans"]),
        )


def viewport_of(state: CameraState) -> AngularRect:
    """Viewport rectangle centered on (pan, tilt), clipped to world bounds."""
    half_w = hfov(state.zoom) / 2.0
    half_h = vfov(state.zoom) / 2.0
    return AngularRect(
        pan_min=max(state.pan - half_w, PAN_MIN),
        pan_max=min(state.pan + half_w, PAN_MAX),
        tilt_min=max(state.tilt - half_h, TILT_MIN),
        tilt_max=min(state.tilt + half_h, TILT_MAX),
    )


def _clamp(value: float, lo: float, hi: float) -> float:
    return lo if value < lo else hi if value > hi else value


def fit_zoom(width: float, height: float) -> float:
    """Zoom that makes a width x height extent fill 80% of the tighter axis."""
    z = min(ZOOM_TO_FILL * BASE_HFOV / width, ZOOM_TO_FILL * BASE_VFOV / height)
    return _clamp(z, ZOOM_MIN, ZOOM_MAX)


def _interpolated_states(state: CameraState, target_pan: float, target_tilt: float) -> list[CameraState]:
    dpan = target_pan - state.pan
    dtilt = target_tilt - state.tilt
    k = max(1, math.ceil(max(abs(dpan) / PAN_STEP, abs(dtilt) / TILT_STEP)))
    states = []
    for j in range(1, k + 1):
        if j == k:
            pan, tilt = target_pan, target_tilt
        else:
            pan = state.pan + dpan * j / k
            tilt = state.tilt + dtilt * j / k
        states.append(CameraState(pan, tilt, state.zoom))
    return states


def _expand(command: Command, state: CameraState, scene: Scene) -> list[CameraState]:
    name = command.name
    if name in ("pan_left", "pan_right"):
        step = PAN_STEP if name == "pan_right" else -PAN_STEP
        states = []
        pan = state.pan
        for _ in range(command.args[0]):
            pan = _clamp(pan + step, PAN_MIN, PAN_MAX)
            states.append(CameraState(pan, state.tilt, state.zoom))
        return states
    if name in ("tilt_up", "tilt_down"):
        step = TILT_STEP if name == "tilt_up" else -TILT_STEP
        states = []
        tilt = state.tilt
        for _ in range(command.args[0]):
            tilt = _clamp(tilt + step, TILT_MIN, TILT_MAX)
            states.append(CameraState(state.pan, tilt, state.zoom))
        return states
    if name == "zoom":
        return [CameraState(state.pan, state.tilt, _clamp(command.args[0], ZOOM_MIN, ZOOM_MAX))]
    if name == "home":
        return [HOME_STATE]
    if name == "hold":
        return [state] * command.args[0]
    if name == "center":
        obj = scene.get_object(command.args[0])
        cx, cy = obj.extent.center
        return _interpolated_states(state, cx, cy)
    if name == "zoom_to":
        obj = scene.get_object(command.args[0])
        cx, cy = obj.extent.center
        states = _interpolated_states(state, cx, cy)
        last = states[-1]
        states.append(CameraState(last.pan, last.tilt, fit_zoom(obj.extent.width, obj.extent.height)))
        return states
    raise ValueError(f"unknown command: {name}")


def simulate(scene: Scene, initial: CameraState, commands: Iterable[Command]) -> SimResult:
    """Expand an ordered command sequence into frames, starting from `initial`.

    Pure and deterministic: identical inputs give identical results across
    runs. An empty command list yields an empty frame list and the initial
    state as final state.
    """
    frames: list[Frame] = []
    spans: list[tuple[int, int, int]] = []
    state = initial
    for ordinal, command in enumerate(commands, start=1):
        first = len(frames) + 1
        for step_state in _expand(command, state, scene):
            frames.append(Frame(index=len(frames) + 1, viewport=viewport_of(step_state), state=step_state))
            state = step_state
        spans.append((ordinal, first, len(frames)))
    return SimResult(frames=tuple(frames), final_state=state, per_command_spans=tuple(spans))
