import pytest

from ptzbench.geometry import WORLD, AngularRect


def test_valid_rect_properties():
    rect = AngularRect(0, 10, -5, 5)
    assert rect.width == 10
    assert rect.height == 10
    assert rect.area == 100
    assert rect.center == (5.0, 0.0)


def test_degenerate_rect_rejected():
    with pytest.raises(ValueError):
        AngularRect(10, 10, 0, 5)
    with pytest.raises(ValueError):
        AngularRect(0, 10, 5, 0)


def test_out_of_world_rect_rejected():
    with pytest.raises(ValueError):
        AngularRect(-200, 0, 0, 5)
    with pytest.raises(ValueError):
        AngularRect(0, 10, 0, 95)


def test_intersection_area():
    a = AngularRect(0, 10, 0, 10)
    b = AngularRect(5, 15, 0, 10)
    assert a.intersection_area(b) == 50
    assert b.intersection_area(a) == 50
    assert a.intersection_area(AngularRect(20, 30, 0, 10)) == 0.0
    # touching edges do not count as overlap
    assert a.intersection_area(AngularRect(10, 20, 0, 10)) == 0.0


def test_contains():
    assert WORLD.contains(AngularRect(-10, 10, -10, 10))
    assert not AngularRect(0, 5, 0, 5).contains(AngularRect(0, 6, 0, 5))


def test_dict_round_trip():
    rect = AngularRect(-12.5, 3.25, -1.75, 88.0)
    assert AngularRect.from_dict(rect.to_dict()) == rect


def test_coordinates_normalized_to_float():
    rect = AngularRect(0, 10, 0, 10)
    assert isinstance(rect.pan_min, float)
    assert isinstance(rect.tilt_max, float)
