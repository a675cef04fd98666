import itertools
import random

import pytest

from liftsplit.event import Event, iter_submasks


_TEST_CASES = [
    (0b0000, 4, []),
    (0b0101, 4, [0, 2]),
    (0b1010, 4, [1, 3]),
    (0b1111, 4, [0, 1, 2, 3]),
    (0b100, 3, [2]),
]


@pytest.mark.parametrize("mask, size, points", _TEST_CASES)
def test_points(mask, size, points):
    assert list(Event(mask, size)) == points
    assert Event.from_points(points, size) == mask
    assert Event(mask, size).count() == len(points)


@pytest.mark.parametrize("mask, size, points", _TEST_CASES)
def test_complement(mask, size, points):
    complement = ~Event(mask, size)
    assert complement.size == size
    assert sorted(complement) == [i for i in range(size) if i not in points]
    assert ~complement == mask


def test_operators_keep_size():
    e = Event(0b0011, 4)
    f = Event(0b0110, 4)
    for g in (e & f, e | f, e ^ f, e.difference(f)):
        assert isinstance(g, Event)
        assert g.size == 4
    assert e & f == 0b0010
    assert e | f == 0b0111
    assert e ^ f == 0b0101
    assert e.difference(f) == 0b0001


def test_out_of_range():
    with pytest.raises(ValueError):
        Event.from_points([4], 4)
    with pytest.raises(AssertionError):
        Event(0b10000, 4)


def test_lowest():
    assert Event(0b1100, 4).lowest() == 2
    with pytest.raises(AssertionError):
        Event.empty(4).lowest()


def test_all():
    events = list(Event.all(3))
    assert events == list(range(8))
    assert events[0] == Event.empty(3)
    assert events[-1] == Event.full(3)


def test_subset():
    assert Event(0b0010, 4).issubset(Event(0b0110, 4))
    assert not Event(0b1010, 4).issubset(Event(0b0110, 4))
    assert Event.empty(4).issubset(Event.empty(4))


def test_iter_submasks():
    assert list(iter_submasks(0b101)) == [0b000, 0b001, 0b100, 0b101]
    assert list(iter_submasks(0)) == [0]


@pytest.mark.parametrize("_", range(100))
def test_de_morgan(_):
    size = random.randint(1, 10)
    e = Event(random.randrange(1 << size), size)
    f = Event(random.randrange(1 << size), size)
    assert ~(e & f) == ~e | ~f
    assert ~(e | f) == ~e & ~f
    assert set(e ^ f) == set(e).symmetric_difference(set(f))


def test_submasks_are_subsets():
    mask = 0b10110
    submasks = list(iter_submasks(mask))
    assert len(submasks) == 1 << 3
    for a, b in itertools.pairwise(submasks):
        assert a < b
    assert all(Event(s, 5).issubset(Event(mask, 5)) for s in submasks)
