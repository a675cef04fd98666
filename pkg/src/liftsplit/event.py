# -*- coding: utf-8 -*-
"""Events of finite spaces.

An event is a subset of the points of a finite space. Points are addressed by
index ``0..n-1`` and an event is represented as a bit-vector (integer), with
bit ``i`` set when point ``i`` belongs to the event. For example, on a space of
4 points the event ``{0, 2}`` is::

    0b0101

Since events are integers, sets of events can be enumerated by counting, and
comparing events in ascending integer order gives the canonical order used for
every sweep and every reported witness.

Example:
    >>> from liftsplit.event import Event
    >>> e = Event.from_points([0, 2], 4)
    >>> sorted(e)
    [0, 2]
    >>> sorted(~e)
    [1, 3]
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator


__author__ = "Chariton Karamitas <huku@census-labs.com>"

__all__ = ["Event", "iter_submasks"]


class Event(int):
    """Represents an event of a finite space.

    This class encapsulates both the bit-vector and the size of the ambient
    space, since the latter is needed to take complements. Boolean operators
    return events of the same space.
    """

    _size: int

    def __new__(cls, mask: int, size: int) -> Event:
        assert 0 <= mask < (1 << size), f"Mask {mask:#x} out of range for {size} points"
        self = int.__new__(cls, mask)
        self._size = size
        return self

    def __repr__(self) -> str:
        return f"Event({sorted(self)})"

    def __reduce__(self):
        return (Event, (int(self), self._size))

    def __iter__(self) -> Iterator[int]:
        mask = int(self)
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def __contains__(self, point: object) -> bool:
        return isinstance(point, int) and bool(int(self) >> point & 1)

    def __and__(self, other: int) -> Event:
        return Event(int(self) & int(other), self._size)

    __rand__ = __and__

    def __or__(self, other: int) -> Event:
        return Event(int(self) | int(other), self._size)

    __ror__ = __or__

    def __xor__(self, other: int) -> Event:
        return Event(int(self) ^ int(other), self._size)

    __rxor__ = __xor__

    def __invert__(self) -> Event:
        return Event(((1 << self._size) - 1) ^ int(self), self._size)

    @property
    def size(self) -> int:
        """Number of points of the ambient space."""
        return self._size

    def count(self) -> int:
        """Return the number of points in this event."""
        return int(self).bit_count()

    def difference(self, other: int) -> Event:
        return Event(int(self) & ~int(other), self._size)

    def issubset(self, other: int) -> bool:
        return int(self) & ~int(other) == 0

    def lowest(self) -> int:
        """Return the lowest-index point of a nonempty event."""
        assert self, "Empty event has no lowest point"
        return (int(self) & -int(self)).bit_length() - 1

    def to_list(self) -> list[int]:
        """Return the sorted list of point indices (serialization format)."""
        return list(self)

    @classmethod
    def from_points(cls, points: Iterable[int], size: int) -> Event:
        mask = 0
        for point in points:
            if not 0 <= point < size:
                raise ValueError(f"Point {point} out of range for {size} points")
            mask |= 1 << point
        return cls(mask, size)

    @classmethod
    def full(cls, size: int) -> Event:
        return cls((1 << size) - 1, size)

    @classmethod
    def empty(cls, size: int) -> Event:
        return cls(0, size)

    @classmethod
    def all(cls, size: int) -> Iterator[Event]:
        """Generate all ``2**size`` events in ascending order."""
        for mask in range(1 << size):
            yield cls(mask, size)


def iter_submasks(mask: int) -> Iterator[int]:
    """Generate all submasks of ``mask`` in ascending order, including 0."""
    bits = [1 << i for i in range(mask.bit_length()) if mask >> i & 1]
    for selector in range(1 << len(bits)):
        yield sum(bit for i, bit in enumerate(bits) if selector >> i & 1)
