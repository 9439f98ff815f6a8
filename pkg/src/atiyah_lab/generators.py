"""Configurations for the special cases and for fuzzing.

Randomness comes from numpy's PCG64 bit generator seeded through
``np.random.default_rng(seed)``. Sample k of a campaign with base seed s uses
the stream seeded with s + k, so any single sample can be regenerated alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .closed_forms import case_lambdas
from .errors import NonAscendingInput
from .geometry import CANONICAL, Configuration, OrientationPolicy, Point


class GeneratorKind(str, Enum):
    CASE_A = "case_a"
    CASE_B = "case_b"
    COLLINEAR_VERTICAL = "collinear_vertical"
    RANDOM_BOX = "random_box"
    RANDOM_GAUSSIAN = "random_gaussian"
    POLYGON = "polygon"


def _strictly_ascending(vals: Sequence[float], what: str) -> list[float]:
    vals = [float(v) for v in vals]
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise NonAscendingInput(f"{what} must be strictly ascending, got {vals}")
    return vals


def table1_policy(m: int, n: int) -> OrientationPolicy:
    """Orientation used by the line-pair setup.

    Points 0..m-1 lie on L and m..m+n-1 on M. Pairs within L or within M
    are oriented by index; every cross pair is oriented from the M point to
    the L point (x_i - y_j), i.e. against index order.
    """
    fwd = {}
    for i in range(m + n):
        for j in range(i + 1, m + n):
            fwd[(i, j)] = not (i < m <= j)
    return OrientationPolicy.explicit(fwd, label="table1")


def case_a_config(a: Sequence[float], b: float = -1.0) -> tuple[Configuration, OrientationPolicy]:
    """Points (a_i, 0) on L followed by (0, b) on M."""
    a = _strictly_ascending(a, "a")
    if not a:
        raise ValueError("case A needs m >= 1")
    if not b < 0:
        raise ValueError("case A expects b < 0")
    pts = [Point(ai, 0) for ai in a] + [Point(0.0, complex(b, 0))]
    return Configuration(pts), table1_policy(len(a), 1)


def case_b_config(a: Sequence[float]) -> tuple[Configuration, OrientationPolicy]:
    """Points (a_i, 0) on L followed by (0, -1) and (0, 1) on M."""
    a = _strictly_ascending(a, "a")
    if not a:
        raise ValueError("case B needs m >= 1")
    pts = [Point(ai, 0) for ai in a] + [Point(0.0, -1.0), Point(0.0, 1.0)]
    return Configuration(pts), table1_policy(len(a), 2)


def dropped_scalar(a: Sequence[float], b: Sequence[float]) -> float:
    """prod_{i<r} (2 (a_r - a_i))^2 * prod_{j<s} (b_s - b_j)^2.

    The factor separating det P of the full configuration (line-pair
    orientation) from the determinant of the reduced forms in which the
    L-L and M-M pair factors are dropped.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    da = (a[None, :] - a[:, None])[np.triu_indices(a.size, 1)]
    db = (b[None, :] - b[:, None])[np.triu_indices(b.size, 1)]
    return float(np.prod((2 * da) ** 2) * np.prod(db**2))


def log_dropped_scalar(a: Sequence[float], b: Sequence[float]) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    da = (a[None, :] - a[:, None])[np.triu_indices(a.size, 1)]
    db = (b[None, :] - b[:, None])[np.triu_indices(b.size, 1)]
    return float(2 * np.log(2 * da).sum() + 2 * np.log(db).sum())


def collinear_vertical(heights: Sequence[float]) -> Configuration:
    h = _strictly_ascending(heights, "heights")
    return Configuration([Point(x, 0) for x in h])


def _draw(rng: np.random.Generator, n: int, kind: GeneratorKind, scale: float) -> np.ndarray:
    if kind is GeneratorKind.RANDOM_BOX:
        return scale * rng.random((n, 3))
    if kind is GeneratorKind.RANDOM_GAUSSIAN:
        return scale * rng.standard_normal((n, 3))
    if kind is GeneratorKind.COLLINEAR_VERTICAL:
        x = np.zeros((n, 3))
        x[:, 0] = np.sort(scale * rng.standard_normal(n))
        return x
    if kind is GeneratorKind.POLYGON:
        # regular n-gon of unit circumradius in the plane a = 0, random phase,
        # each vertex jittered by `scale` (scale=0 keeps it exactly regular)
        t = rng.uniform(0, 2 * math.pi) + 2 * math.pi * np.arange(n) / n
        x = np.stack([np.zeros(n), np.cos(t), np.sin(t)], axis=1)
        return x + scale * rng.standard_normal((n, 3))
    raise ValueError(f"{kind} is not a free-point generator")


def _as_config(x: np.ndarray) -> Configuration | None:
    if len({tuple(r) for r in x.tolist()}) < len(x):
        return None
    return Configuration.from_array(x)


def random_config(
    n: int,
    seed: int,
    kind: GeneratorKind | str = GeneratorKind.RANDOM_GAUSSIAN,
    scale: float = 1.0,
) -> Configuration:
    """Deterministic random configuration; exact duplicates are redrawn."""
    if n < 2:
        raise ValueError("need n >= 2")
    kind = GeneratorKind(kind)
    rng = np.random.default_rng(seed)
    while True:
        c = _as_config(_draw(rng, n, kind, scale))
        if c is not None:
            return c


@dataclass(frozen=True)
class GeneratorSpec:
    """What to sample in a campaign.

    The point count of each sample is drawn uniformly from [n_min, n_max].
    For CASE_A the sample has m = N - 1 points on L, for CASE_B m = N - 2,
    with a-positions drawn as sorted normals times `scale`. A fixed `a`
    list overrides the draw for the case kinds.
    """

    kind: GeneratorKind = GeneratorKind.RANDOM_GAUSSIAN
    n_min: int = 3
    n_max: int | None = None
    seed: int = 0
    scale: float = 1.0
    a: tuple[float, ...] | None = None
    b: float = -1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", GeneratorKind(self.kind))
        if self.n_max is None:
            object.__setattr__(self, "n_max", self.n_min)
        if self.a is not None:
            a = tuple(_strictly_ascending(self.a, "a"))
            object.__setattr__(self, "a", a)
            extra = {GeneratorKind.CASE_A: 1, GeneratorKind.CASE_B: 2}.get(self.kind)
            if extra is None:
                raise ValueError("an explicit a-list only applies to case kinds")
            object.__setattr__(self, "n_min", len(a) + extra)
            object.__setattr__(self, "n_max", len(a) + extra)
        lo = {GeneratorKind.CASE_B: 3}.get(self.kind, 2)
        if self.n_min < lo or self.n_max < self.n_min:
            raise ValueError(f"invalid point-count range [{self.n_min}, {self.n_max}]")
        if self.kind is GeneratorKind.CASE_A and not self.b < 0:
            raise ValueError("case A expects b < 0")
        if self.scale < 0 or (self.scale == 0 and self.kind is not GeneratorKind.POLYGON):
            raise ValueError("scale must be positive")

    def sample_seed(self, index: int) -> int:
        return self.seed + index

    def sample(self, index: int) -> tuple[Configuration, OrientationPolicy]:
        rng = np.random.default_rng(self.sample_seed(index))
        n = int(rng.integers(self.n_min, self.n_max + 1))
        if self.kind in (GeneratorKind.CASE_A, GeneratorKind.CASE_B):
            m = n - (1 if self.kind is GeneratorKind.CASE_A else 2)
            while True:
                a = self.a if self.a is not None else np.sort(self.scale * rng.standard_normal(m))
                if self.a is not None or np.all(np.diff(a) > 0):
                    break
            if self.kind is GeneratorKind.CASE_A:
                return case_a_config(a, self.b)
            return case_b_config(a)
        while True:
            c = _as_config(_draw(rng, n, self.kind, self.scale))
            if c is not None:
                return c, CANONICAL

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "n_min": self.n_min,
            "n_max": self.n_max,
            "seed": self.seed,
            "scale": self.scale,
            "a": list(self.a) if self.a is not None else None,
            "b": self.b,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorSpec":
        known = {"kind", "n_min", "n_max", "seed", "scale", "a", "b"}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown generator keys: {sorted(unknown)}")
        d = dict(d)
        if d.get("a") is not None:
            d["a"] = tuple(d["a"])
        return cls(**d)


def case_a_lambdas(a: Sequence[float], b: float = -1.0) -> np.ndarray:
    """Normalized lambdas lam_i / |b| of a case A configuration."""
    return case_lambdas(np.asarray(a, dtype=float) / abs(b))
