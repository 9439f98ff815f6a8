"""Exception types raised by the package."""

from __future__ import annotations


class CoincidentPoints(ValueError):
    """Two points of a configuration are exactly equal."""

    def __init__(self, i: int, j: int):
        self.i = i
        self.j = j
        super().__init__(f"coincident points at indices {i}, {j}")


class DegenerateLift(ValueError):
    """The standard lift is undefined (zero vector or south-pole direction)."""


class NonAscendingInput(ValueError):
    """A sequence required to be ascending (and positive, where relevant) is not."""


class DegenerateStart(ValueError):
    """A minimization start has near-coincident points."""
