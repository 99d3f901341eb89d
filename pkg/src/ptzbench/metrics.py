"""Trajectory evaluation mathematics.

* ``iou``: intersection-over-union of two rectangles.
* ``union_area``: exact area of a rectangle union via a coordinate
  compression sweep (no sampling error, permutation invariant).
* ``bma``: box match accuracy, the frame-by-frame average IOU between a
  model trajectory and an expert trajectory with clamped indexing, so the
  shorter sequence's final frame is held against the longer's remainder.
  Rewards both spatial targeting and timing.
* ``aa``: area accuracy, the IOU between the unions of all areas the two
  cameras visited. Order-insensitive coverage; the forgiving counterpart
  to ``bma``.
* ``bootstrap_compare``: paired bootstrap resampling significance test.

Empty-trajectory conventions: two empty trajectories score 1.0, exactly
one empty scores 0.0 (a silent model scores zero rather than erroring).
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import AngularRect


class EmptyScores(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


@dataclass(frozen=True)
class ScorePair:
    """Per-task scores, both in [0, 1]."""

    task_id: str
    bma: float
    aa: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.bma <= 1.0 and 0.0 <= self.aa <= 1.0):
            raise ValueError(f"scores outside [0, 1]: bma={self.bma}, aa={self.aa}")


@dataclass(frozen=True)
class BootstrapReport:
    metric: str
    mean_diff: float
    ci_low: float
    ci_high: float
    p_value: float
    significant: bool
    iterations: int
    sample_size: int
    seed: int
    alpha: float

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "mean_diff": self.mean_diff,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "p_value": self.p_value,
            "significant": self.significant,
            "iterations": self.iterations,
            "sample_size": self.sample_size,
            "seed": self.seed,
            "alpha": self.alpha,
        }


def iou(a: AngularRect, b: AngularRect) -> float:
    """area(a n b) / area(a u b); 0.0 for disjoint rectangles."""
    inter = a.intersection_area(b)
    if inter <= 0.0:
        return 0.0
    union = a.area + b.area - inter
    return inter / union


def union_area(rects: Sequence[AngularRect]) -> float:
    """Exact area of the union of rectangles, in square degrees.

    Compresses the distinct pan and tilt coordinates into a cell grid,
    marks covered cells, and sums cell areas. Exact for axis-aligned
    rectangles and invariant under permutation and duplication of inputs.
    """
    if not rects:
        return 0.0
    xs = sorted({r.pan_min for r in rects} | {r.pan_max for r in rects})
    ys = sorted({r.tilt_min for r in rects} | {r.tilt_max for r in rects})
    covered = np.zeros((len(xs) - 1, len(ys) - 1), dtype=bool)
    for r in rects:
        i0 = bisect_left(xs, r.pan_min)
        i1 = bisect_left(xs, r.pan_max)
        j0 = bisect_left(ys, r.tilt_min)
        j1 = bisect_left(ys, r.tilt_max)
        covered[i0:i1, j0:j1] = True
    dx = np.diff(np.asarray(xs))
    dy = np.diff(np.asarray(ys))
    cell_areas = np.outer(dx, dy)
    return float(cell_areas[covered].sum())


def bma(model_frames: Sequence[AngularRect], expert_frames: Sequence[AngularRect]) -> float:
    """Frame-by-frame average IOU with clamped indexing, normalized by
    max(len(model), len(expert))."""
    n_model = len(model_frames)
    n_expert = len(expert_frames)
    if n_model == 0 and n_expert == 0:
        return 1.0
    if n_model == 0 or n_expert == 0:
        return 0.0
    n = max(n_model, n_expert)
    total = 0.0
    for i in range(1, n + 1):
        total += iou(model_frames[min(i, n_model) - 1], expert_frames[min(i, n_expert) - 1])
    return total / n


def aa(model_frames: Sequence[AngularRect], expert_frames: Sequence[AngularRect]) -> float:
    """IOU of the two visited-area unions, computed exactly.

    The intersection area comes from inclusion-exclusion:
    |A n B| = |A| + |B| - |A u B|.
    """
    if not model_frames and not expert_frames:
        return 1.0
    if not model_frames or not expert_frames:
        return 0.0
    area_model = union_area(model_frames)
    area_expert = union_area(expert_frames)
    area_both = union_area(list(model_frames) + list(expert_frames))
    if area_both <= 0.0:
        return 0.0
    inter = area_model + area_expert - area_both
    value = inter / area_both
    if value < 0.0:
        return 0.0
    if value > 1.0:
        return 1.0
    return value


def bootstrap_compare(
    scores_a: Sequence[float],
    scores_b: Sequence[float],
    iterations: int = 1000,
    sample_size: int = 100,
    alpha: float = 0.05,
    seed: int = 0,
    metric: str = "score",
) -> BootstrapReport:
    """Paired bootstrap comparison of two score arrays.

    Each iteration resamples `sample_size` paired indices with replacement
    and records the mean difference a - b. The two-sided p-value is
    min(frac <= 0, frac >= 0) * 2 clipped to [0, 1]; the confidence
    interval is the 2.5/97.5 percentile band. Deterministic per seed.
    """
    if len(scores_a) == 0 or len(scores_b) == 0:
        raise EmptyScores("both score arrays must be nonempty")
    if len(scores_a) != len(scores_b):
        raise LengthMismatch(
            f"paired scores must have equal length: {len(scores_a)} vs {len(scores_b)}"
        )
    a = np.asarray(scores_a, dtype=float)
    b = np.asarray(scores_b, dtype=float)
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, len(a), size=(iterations, sample_size))
    diffs = (a[idx] - b[idx]).mean(axis=1)
    frac_le = float(np.mean(diffs <= 0.0))
    frac_ge = float(np.mean(diffs >= 0.0))
    p_value = min(1.0, 2.0 * min(frac_le, frac_ge))
    ci_low, ci_high = (float(v) for v in np.percentile(diffs, [2.5, 97.5]))
    mean_diff = float(np.mean(a - b))
    return BootstrapReport(
        metric=metric,
        mean_diff=mean_diff,
        ci_low=ci_low,
        ci_high=ci_high,
        p_value=p_value,
        significant=p_value < alpha,
        iterations=iterations,
        sample_size=sample_size,
        seed=seed,
        alpha=alpha,
    )
