"""Planar angular geometry: axis-aligned rectangles in pan/tilt degrees.

The world is modeled as a flat angular plane (pan on x, tilt on y), so
areas, intersections, and unions are plain products and sums of degree
spans. Pan spans [-180, 180] and tilt spans [-90, 90].
"""

from __future__ import annotations

from dataclasses import dataclass

PAN_MIN = -180.0
PAN_MAX = 180.0
TILT_MIN = -90.0
TILT_MAX = 90.0


@dataclass(frozen=True)
class AngularRect:
    """A camera viewport or object extent in pan/tilt degree coordinates."""

    pan_min: float
    pan_max: float
    tilt_min: float
    tilt_max: float

    def __post_init__(self) -> None:
        for name in ("pan_min", "pan_max", "tilt_min", "tilt_max"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (self.pan_min < self.pan_max and self.tilt_min < self.tilt_max):
            raise ValueError(
                f"degenerate rectangle: pan [{self.pan_min}, {self.pan_max}], "
                f"tilt [{self.tilt_min}, {self.tilt_max}]"
            )
        if (
            self.pan_min < PAN_MIN
            or self.pan_max > PAN_MAX
            or self.tilt_min < TILT_MIN
            or self.tilt_max > TILT_MAX
        ):
            raise ValueError(
                f"rectangle outside world bounds: pan [{self.pan_min}, {self.pan_max}], "
                f"tilt [{self.tilt_min}, {self.tilt_max}]"
            )

    @property
    def width(self) -> float:
        return self.pan_max - self.pan_min

    @property
    def height(self) -> float:
        return self.tilt_max - self.tilt_min

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def center(self) -> tuple[float, float]:
        return (
            (self.pan_min + self.pan_max) / 2.0,
            (self.tilt_min + self.tilt_max) / 2.0,
        )

    def intersection_area(self, other: AngularRect) -> float:
        """Overlap area in square degrees; 0.0 when disjoint or touching."""
        w = min(self.pan_max, other.pan_max) - max(self.pan_min, other.pan_min)
        h = min(self.tilt_max, other.tilt_max) - max(self.tilt_min, other.tilt_min)
        if w <= 0.0 or h <= 0.0:
            return 0.0
        return w * h

    def contains(self, other: AngularRect) -> bool:
        return (
            self.pan_min <= other.pan_min
            and self.pan_max >= other.pan_max
            and self.tilt_min <= other.tilt_min
            and self.tilt_max >= other.tilt_max
        )

    def to_dict(self) -> dict[str, float]:
        return {
            "pan_min": self.pan_min,
            "pan_max": self.pan_max,
            "tilt_min": self.tilt_min,
            "tilt_max": self.tilt_max,
        }

    @classmethod
    def from_dict(cls, d: dict) -> AngularRect:
        return cls(
            pan_min=float(d["pan_min"]),
            pan_max=float(d["pan_max"]),
            tilt_min=float(d["tilt_min"]),
            tilt_max=float(d["tilt_max"]),
        )


WORLD = AngularRect(PAN_MIN, PAN_MAX, TILT_MIN, TILT_MAX)
