"""Points in R x C, the Hopf map, spinor lifts and per-pair linear forms.

A point is stored as (a, z) with a the real "height" coordinate and z the
complex planar coordinate. For an ordered pair of distinct points the
direction vector (da, dz) is lifted through the Hopf map

    h(z, w) = ((|z|^2 - |w|^2) / 2, z * conj(w))

using the standard lift lam**-0.5 * (lam, conj(dz)) with
lam = da + sqrt(da^2 + |dz|^2). The opposite direction always receives the
lift (-conj(w), conj(z)). Dropping the common lam**-0.5 factor gives the two
linear forms attached to the pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Mapping, Sequence

import numpy as np

from .binary_forms import LinearForm
from .errors import CoincidentPoints, DegenerateLift


@dataclass(frozen=True)
class Point:
    a: float
    z: complex

    def __post_init__(self):
        a, z = float(self.a), complex(self.z)
        if not (math.isfinite(a) and math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ValueError(f"point coordinates must be finite, got ({a}, {z})")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "z", z)

    @classmethod
    def from_xyz(cls, a: float, re: float, im: float) -> "Point":
        return cls(a, complex(re, im))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.a, self.z.real, self.z.imag)


class Configuration(Sequence[Point]):
    """An ordered tuple of N >= 2 pairwise distinct points.

    Distinctness is checked by exact equality of the stored values.
    """

    __slots__ = ("_points",)

    def __init__(self, points: Sequence[Point | tuple]):
        pts = tuple(p if isinstance(p, Point) else _coerce_point(p) for p in points)
        if len(pts) < 2:
            raise ValueError("a configuration needs at least two points")
        seen: dict[tuple[float, complex], int] = {}
        for k, p in enumerate(pts):
            key = (p.a, p.z)
            if key in seen:
                raise CoincidentPoints(seen[key], k)
            seen[key] = k
        self._points = pts

    @classmethod
    def from_array(cls, arr) -> "Configuration":
        """Build from an (N, 3) array of rows (a, Re z, Im z)."""
        arr = np.asarray(arr, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 3:
            raise ValueError(f"expected an (N, 3) array, got shape {arr.shape}")
        return cls([Point(r[0], complex(r[1], r[2])) for r in arr])

    def as_array(self) -> np.ndarray:
        return np.array([p.as_tuple() for p in self._points], dtype=float)

    def heights(self) -> np.ndarray:
        return np.array([p.a for p in self._points])

    def planar(self) -> np.ndarray:
        return np.array([p.z for p in self._points])

    def __len__(self) -> int:
        return len(self._points)

    def __getitem__(self, k):
        return self._points[k]

    def __iter__(self) -> Iterator[Point]:
        return iter(self._points)

    def __eq__(self, other) -> bool:
        return isinstance(other, Configuration) and self._points == other._points

    def __hash__(self) -> int:
        return hash(self._points)

    def __repr__(self) -> str:
        return f"Configuration({list(self._points)!r})"

    def translated(self, da: float, dz: complex) -> "Configuration":
        return Configuration([Point(p.a + da, p.z + dz) for p in self._points])

    def scaled(self, s: float) -> "Configuration":
        return Configuration([Point(s * p.a, s * p.z) for p in self._points])

    def rotated(self, theta: float) -> "Configuration":
        """Rotate about the R axis: z -> exp(i theta) z."""
        u = complex(math.cos(theta), math.sin(theta))
        return Configuration([Point(p.a, u * p.z) for p in self._points])

    def permuted(self, perm: Sequence[int]) -> "Configuration":
        return Configuration([self._points[k] for k in perm])

    def distances(self) -> np.ndarray:
        x = self.as_array()
        return np.sqrt(((x[:, None, :] - x[None, :, :]) ** 2).sum(-1))

    def diameter(self) -> float:
        return float(self.distances().max())


def _coerce_point(p) -> Point:
    if len(p) == 2:
        return Point(p[0], p[1])
    if len(p) == 3:
        return Point.from_xyz(*p)
    raise ValueError(f"cannot interpret {p!r} as a point")


@dataclass(frozen=True)
class Spinor:
    z: complex
    w: complex

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "w", complex(self.w))
        if self.z == 0 and self.w == 0:
            raise ValueError("spinor must be nonzero")

    def norm2(self) -> float:
        return abs(self.z) ** 2 + abs(self.w) ** 2

    def __mul__(self, u: complex) -> "Spinor":
        return Spinor(self.z * u, self.w * u)

    __rmul__ = __mul__


def hopf(s: Spinor) -> tuple[float, complex]:
    return ((abs(s.z) ** 2 - abs(s.w) ** 2) / 2, s.z * s.w.conjugate())


def lift_lambda(a: float, v: complex) -> float:
    """a + sqrt(a^2 + |v|^2), evaluated without cancellation when a < 0."""
    v2 = abs(v) ** 2
    r = math.hypot(a, abs(v))
    if a >= 0:
        return a + r
    return v2 / (r - a)


def standard_lift(a: float, v: complex) -> Spinor:
    """The lift lam**-0.5 * (lam, conj(v)) of the vector (a, v)."""
    v = complex(v)
    if a == 0 and v == 0:
        raise DegenerateLift("cannot lift the zero vector")
    lam = lift_lambda(a, v)
    if lam <= 0:
        raise DegenerateLift(
            f"vector ({a}, {v}) points to the south pole; lift the reversed vector "
            "and apply reverse_lift"
        )
    s = math.sqrt(lam)
    return Spinor(s, v.conjugate() / s)


def reverse_lift(s: Spinor) -> Spinor:
    """Lift used for the opposite vector: (z, w) -> (-conj(w), conj(z))."""
    return Spinor(-s.w.conjugate(), s.z.conjugate())


class OrientationKind(Enum):
    CANONICAL = "canonical"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class OrientationPolicy:
    """Rule choosing which direction of each unordered pair is lifted first.

    Under CANONICAL the forward direction of pair i < j is x_j - x_i, except
    for vertical pairs (z_i == z_j) with a_j < a_i, which are flipped so the
    forward lambda stays positive. EXPLICIT takes a mapping {(i, j): forward}
    with i < j; pairs missing from the mapping fall back to the canonical rule.
    """

    kind: OrientationKind = OrientationKind.CANONICAL
    forward: Mapping[tuple[int, int], bool] = field(default_factory=dict)
    label: str = "canonical"

    @classmethod
    def canonical(cls) -> "OrientationPolicy":
        return cls()

    @classmethod
    def explicit(cls, forward: Mapping[tuple[int, int], bool], label: str = "explicit"):
        fwd = {}
        for (i, j), flag in forward.items():
            if i == j:
                raise ValueError("orientation keys must be pairs of distinct indices")
            if i > j:
                i, j, flag = j, i, not flag
            fwd[(i, j)] = bool(flag)
        return cls(OrientationKind.EXPLICIT, fwd, label)

    def with_flip(self, i: int, j: int, c: "Configuration") -> "OrientationPolicy":
        """Copy of this policy with the pair {i, j} oriented the other way."""
        i, j = min(i, j), max(i, j)
        fwd = dict(self.forward)
        fwd[(i, j)] = not self.is_forward(c, i, j)
        return OrientationPolicy(OrientationKind.EXPLICIT, fwd, self.label + "+flip")

    def is_forward(self, c: Configuration, i: int, j: int) -> bool:
        """True if pair i < j is oriented as x_j - x_i."""
        if self.kind is OrientationKind.EXPLICIT and (i, j) in self.forward:
            return self.forward[(i, j)]
        p, q = c[i], c[j]
        return not (p.z == q.z and q.a < p.a)


CANONICAL = OrientationPolicy.canonical()


@dataclass(frozen=True)
class PairData:
    """Direction data and linear forms of one unordered pair {i, j}, i < j.

    `forward` is True when the lifted direction is x_j - x_i. `form_fwd`
    belongs to the source point of the forward direction, `form_bwd` to its
    target; both omit the lam**-0.5 normalization.
    """

    i: int
    j: int
    forward: bool
    lam: float
    delta_a: float
    delta_z: complex
    r: float
    form_fwd: LinearForm
    form_bwd: LinearForm

    @property
    def source(self) -> int:
        return self.i if self.forward else self.j

    @property
    def target(self) -> int:
        return self.j if self.forward else self.i

    @property
    def lam_reverse(self) -> float:
        return lift_lambda(-self.delta_a, -self.delta_z)

    def form_for(self, k: int) -> LinearForm:
        """The form l_{k, other} that enters the polynomial of point k."""
        if k == self.source:
            return self.form_fwd
        if k == self.target:
            return self.form_bwd
        raise IndexError(f"point {k} is not in pair ({self.i}, {self.j})")

    def bound_factor(self) -> float:
        """lam^2 + |dz|^2, which equals 2 * lam * r."""
        return self.lam**2 + abs(self.delta_z) ** 2


def pair_data(
    c: Configuration, i: int, j: int, policy: OrientationPolicy = CANONICAL
) -> PairData:
    if i == j:
        raise ValueError("pair indices must differ")
    i, j = min(i, j), max(i, j)
    p, q = c[i], c[j]
    if p == q:
        raise CoincidentPoints(i, j)
    forward = policy.is_forward(c, i, j)
    src, dst = (p, q) if forward else (q, p)
    da = dst.a - src.a
    dz = dst.z - src.z
    lam = lift_lambda(da, dz)
    if lam <= 0:
        raise DegenerateLift(f"pair ({i}, {j}) is oriented towards the south pole")
    return PairData(
        i=i,
        j=j,
        forward=forward,
        lam=lam,
        delta_a=da,
        delta_z=dz,
        r=math.hypot(da, abs(dz)),
        form_fwd=LinearForm(lam, dz.conjugate()),
        form_bwd=LinearForm(-dz, lam),
    )


def all_pairs(c: Configuration, policy: OrientationPolicy = CANONICAL) -> list[PairData]:
    n = len(c)
    return [pair_data(c, i, j, policy) for i in range(n) for j in range(i + 1, n)]
