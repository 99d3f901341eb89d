import random

import pytest

from ptzbench.geometry import AngularRect


def random_rect(rng: random.Random, min_span: float = 2.0) -> AngularRect:
    """A random rectangle inside world bounds with spans of a few degrees up."""
    width = rng.uniform(min_span, 60.0)
    height = rng.uniform(min_span, 40.0)
    cx = rng.uniform(-180.0 + width / 2, 180.0 - width / 2)
    cy = rng.uniform(-90.0 + height / 2, 90.0 - height / 2)
    return AngularRect(cx - width / 2, cx + width / 2, cy - height / 2, cy + height / 2)


def overlapping_rect(rng: random.Random, anchor: AngularRect) -> AngularRect:
    """A random rectangle biased to overlap `anchor`."""
    width = rng.uniform(2.0, 60.0)
    height = rng.uniform(2.0, 40.0)
    cx = min(max(anchor.center[0] + rng.uniform(-width, width), -180.0 + width / 2), 180.0 - width / 2)
    cy = min(max(anchor.center[1] + rng.uniform(-height, height), -90.0 + height / 2), 90.0 - height / 2)
    return AngularRect(cx - width / 2, cx + width / 2, cy - height / 2, cy + height / 2)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(1234)
