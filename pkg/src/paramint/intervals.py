"""Closed-interval scalar/vector/matrix arithmetic with outward rounding.

Endpoints are binary64 floats.  Every arithmetic operation computes its
endpoints in round-to-nearest and then nudges each one unit in the last
place away from the interval's interior (epsilon-inflation).  This keeps
results mathematical enclosures without touching the FPU rounding mode,
and the inflation sits far below the 6-7 significant digits of any value
the regression data checks.

Empty intervals are not representable: construction requires lo <= hi and
intersection raises when the result would be empty.  Division by an
interval containing zero raises ZeroDivisionError (no extended division).
All values are immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

_EPS = 2.0 ** -52
_TINY = 4.9e-324  # a few denormals, keeps mid/rad roundtrips safe near zero

Number = Union[int, float]


def next_down(x: float) -> float:
    return math.nextafter(x, -math.inf)


def next_up(x: float) -> float:
    return math.nextafter(x, math.inf)


def _mid_rad_bounds(mid, rad):
    """Outward bounds for mid +/- rad carrying the rounding error of both."""
    slack = 2.0 * _EPS * (np.abs(mid) + np.abs(rad)) + _TINY
    return mid - rad - slack, mid + rad + slack


@dataclass(frozen=True)
class Interval:
    """Closed real interval [lo, hi]."""

    lo: float
    hi: float

    def __post_init__(self):
        lo = float(self.lo)
        hi = float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError("interval endpoints must not be NaN")
        if lo > hi:
            raise ValueError(f"invalid interval: lo={lo} > hi={hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    # -- constructors ------------------------------------------------------

    @classmethod
    def point(cls, v: Number) -> "Interval":
        return cls(float(v), float(v))

    @classmethod
    def symmetric(cls, rad: Number) -> "Interval":
        r = abs(float(rad))
        return cls(-r, r)

    @classmethod
    def from_mid_rad(cls, mid: Number, rad: Number) -> "Interval":
        if rad < 0:
            raise ValueError("radius must be nonnegative")
        lo, hi = _mid_rad_bounds(float(mid), float(rad))
        return cls(float(lo), float(hi))

    # -- functionals -------------------------------------------------------

    @property
    def mid(self) -> float:
        return (self.lo + self.hi) / 2.0

    @property
    def rad(self) -> float:
        return (self.hi - self.lo) / 2.0

    @property
    def mag(self) -> float:
        return max(abs(self.lo), abs(self.hi))

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    # -- set predicates ----------------------------------------------------

    def __contains__(self, v: Number) -> bool:
        return self.lo <= float(v) <= self.hi

    def encloses(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0.0 <= self.hi

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def intersect(self, other: "Interval") -> "Interval":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            raise ValueError("empty intersection")
        return Interval(lo, hi)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> "Interval":
        other = _as_interval(other)
        return Interval(next_down(self.lo + other.lo), next_up(self.hi + other.hi))

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        other = _as_interval(other)
        return Interval(next_down(self.lo - other.hi), next_up(self.hi - other.lo))

    def __rsub__(self, other) -> "Interval":
        return _as_interval(other) - self

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __mul__(self, other) -> "Interval":
        other = _as_interval(other)
        p = (self.lo * other.lo, self.lo * other.hi,
             self.hi * other.lo, self.hi * other.hi)
        return Interval(next_down(min(p)), next_up(max(p)))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        other = _as_interval(other)
        if other.contains_zero():
            raise ZeroDivisionError(
                f"undefined quotient: divisor {other} contains zero")
        q = (self.lo / other.lo, self.lo / other.hi,
             self.hi / other.lo, self.hi / other.hi)
        return Interval(next_down(min(q)), next_up(max(q)))

    def __rtruediv__(self, other) -> "Interval":
        return _as_interval(other) / self

    def __abs__(self) -> "Interval":
        if self.lo >= 0.0:
            return self
        if self.hi <= 0.0:
            return -self
        return Interval(0.0, max(-self.lo, self.hi))

    def sign(self) -> int:
        """+1 / -1 for sign-definite intervals, 0 when zero is inside."""
        if self.lo > 0.0:
            return 1
        if self.hi < 0.0:
            return -1
        return 0

    def to_pair(self) -> list:
        return [self.lo, self.hi]

    def __repr__(self) -> str:
        return f"[{self.lo!r}, {self.hi!r}]"


def _as_interval(x) -> Interval:
    if isinstance(x, Interval):
        return x
    if isinstance(x, (int, float, np.floating, np.integer)):
        return Interval.point(float(x))
    raise TypeError(f"cannot interpret {type(x).__name__} as Interval")


class IntervalVector:
    """Axis-aligned box: a vector of closed intervals, stored as lo/hi arrays."""

    __slots__ = ("lo", "hi")

    def __init__(self, intervals: Iterable[Interval] | None = None, *,
                 lo=None, hi=None):
        if intervals is not None:
            items = list(intervals)
            lo = np.array([iv.lo for iv in items], dtype=float)
            hi = np.array([iv.hi for iv in items], dtype=float)
        else:
            lo = np.asarray(lo, dtype=float).copy()
            hi = np.asarray(hi, dtype=float).copy()
        if lo.ndim != 1 or lo.shape != hi.shape:
            raise ValueError("lo/hi must be 1-D arrays of equal length")
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)):
            raise ValueError("interval endpoints must not be NaN")
        if np.any(lo > hi):
            raise ValueError("invalid interval vector: lo > hi somewhere")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("IntervalVector is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_bounds(cls, lo, hi) -> "IntervalVector":
        return cls(lo=lo, hi=hi)

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[Number]]) -> "IntervalVector":
        arr = np.asarray(pairs, dtype=float)
        if arr.size == 0:
            return cls(lo=np.zeros(0), hi=np.zeros(0))
        return cls(lo=arr[:, 0], hi=arr[:, 1])

    @classmethod
    def point(cls, values) -> "IntervalVector":
        v = np.asarray(values, dtype=float)
        return cls(lo=v, hi=v)

    @classmethod
    def symmetric(cls, radii) -> "IntervalVector":
        r = np.abs(np.asarray(radii, dtype=float))
        return cls(lo=-r, hi=r)

    @classmethod
    def from_mid_rad(cls, mid, rad) -> "IntervalVector":
        lo, hi = _mid_rad_bounds(np.asarray(mid, float), np.asarray(rad, float))
        return cls(lo=lo, hi=hi)

    @classmethod
    def hull_of_points(cls, points) -> "IntervalVector":
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ValueError("need a nonempty 2-D array of points")
        return cls(lo=pts.min(axis=0), hi=pts.max(axis=0))

    # -- functionals -------------------------------------------------------

    @property
    def mid(self) -> np.ndarray:
        return (self.lo + self.hi) / 2.0

    @property
    def rad(self) -> np.ndarray:
        return (self.hi - self.lo) / 2.0

    @property
    def mag(self) -> np.ndarray:
        return np.maximum(np.abs(self.lo), np.abs(self.hi))

    def __len__(self) -> int:
        return self.lo.shape[0]

    def __getitem__(self, i: int) -> Interval:
        return Interval(float(self.lo[i]), float(self.hi[i]))

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    # -- set operations ----------------------------------------------------

    def hull(self, other: "IntervalVector") -> "IntervalVector":
        return IntervalVector(lo=np.minimum(self.lo, other.lo),
                              hi=np.maximum(self.hi, other.hi))

    def intersect(self, other: "IntervalVector") -> "IntervalVector":
        lo = np.maximum(self.lo, other.lo)
        hi = np.minimum(self.hi, other.hi)
        if np.any(lo > hi):
            raise ValueError("empty intersection")
        return IntervalVector(lo=lo, hi=hi)

    def encloses(self, other: "IntervalVector") -> bool:
        return bool(np.all(self.lo <= other.lo) and np.all(other.hi <= self.hi))

    def contains_point(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(self.lo <= x) and np.all(x <= self.hi))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> "IntervalVector":
        if isinstance(other, IntervalVector):
            return IntervalVector([a + b for a, b in zip(self, other)])
        shift = np.asarray(other, dtype=float)
        return IntervalVector([iv + float(s) for iv, s in zip(self, shift)])

    __radd__ = __add__

    def __sub__(self, other) -> "IntervalVector":
        if isinstance(other, IntervalVector):
            return IntervalVector([a - b for a, b in zip(self, other)])
        shift = np.asarray(other, dtype=float)
        return IntervalVector([iv - float(s) for iv, s in zip(self, shift)])

    def __neg__(self) -> "IntervalVector":
        return IntervalVector(lo=-self.hi, hi=-self.lo)

    def to_pairs(self) -> list:
        return [[float(l), float(h)] for l, h in zip(self.lo, self.hi)]

    def __repr__(self) -> str:
        body = ", ".join(f"[{l:g}, {h:g}]" for l, h in zip(self.lo, self.hi))
        return f"IntervalVector({body})"


class IntervalMatrix:
    """Row-major grid of closed intervals, stored as lo/hi arrays."""

    __slots__ = ("lo", "hi")

    def __init__(self, *, lo, hi):
        lo = np.asarray(lo, dtype=float).copy()
        hi = np.asarray(hi, dtype=float).copy()
        if lo.ndim != 2 or lo.shape != hi.shape:
            raise ValueError("lo/hi must be 2-D arrays of equal shape")
        if np.any(lo > hi):
            raise ValueError("invalid interval matrix: lo > hi somewhere")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("IntervalMatrix is immutable")

    @classmethod
    def point(cls, values) -> "IntervalMatrix":
        v = np.asarray(values, dtype=float)
        return cls(lo=v, hi=v)

    @classmethod
    def from_mid_rad(cls, mid, rad) -> "IntervalMatrix":
        lo, hi = _mid_rad_bounds(np.asarray(mid, float), np.asarray(rad, float))
        return cls(lo=lo, hi=hi)

    @property
    def shape(self):
        return self.lo.shape

    @property
    def mid(self) -> np.ndarray:
        return (self.lo + self.hi) / 2.0

    @property
    def rad(self) -> np.ndarray:
        return (self.hi - self.lo) / 2.0

    @property
    def mag(self) -> np.ndarray:
        return np.maximum(np.abs(self.lo), np.abs(self.hi))

    def __getitem__(self, ij) -> Interval:
        i, j = ij
        return Interval(float(self.lo[i, j]), float(self.hi[i, j]))

    def encloses_matrix(self, m) -> bool:
        m = np.asarray(m, dtype=float)
        return bool(np.all(self.lo <= m) and np.all(m <= self.hi))

    def __repr__(self) -> str:
        return f"IntervalMatrix(shape={self.shape})"


# -- shape-generic functionals ----------------------------------------------

def midpoint(x):
    return x.mid


def radius(x):
    return x.rad


def magnitude(x):
    return x.mag


# -- linear-map enclosures ----------------------------------------------------

def mat_interval_product(M, v: IntervalVector) -> IntervalVector:
    """Enclosure of {M x : x in v} for a real matrix M.

    Each x_j occurs once per row, so the row-wise interval sum is the exact
    hull of the linear image (up to outward rounding).
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[1] != len(v):
        raise ValueError(f"shape mismatch: {M.shape} @ box[{len(v)}]")
    rows = []
    for i in range(M.shape[0]):
        acc = Interval(0.0, 0.0)
        for j in range(M.shape[1]):
            mij = M[i, j]
            if mij != 0.0:
                acc = acc + mij * v[j]
        rows.append(acc)
    return IntervalVector(rows)


def interval_mat_product(M: IntervalMatrix, v: IntervalVector) -> IntervalVector:
    """Enclosure of {A x : A in M, x in v} for an interval matrix."""
    if M.shape[1] != len(v):
        raise ValueError(f"shape mismatch: {M.shape} @ box[{len(v)}]")
    rows = []
    for i in range(M.shape[0]):
        acc = Interval(0.0, 0.0)
        for j in range(M.shape[1]):
            acc = acc + M[i, j] * v[j]
        rows.append(acc)
    return IntervalVector(rows)


def affine_image_hull(x0, U, box: IntervalVector) -> IntervalVector:
    """Hull of {x0 + U q : q in box}, computed row-wise (exact per row)."""
    x0 = np.asarray(x0, dtype=float)
    U = np.asarray(U, dtype=float)
    if U.ndim != 2 or U.shape[0] != x0.shape[0] or U.shape[1] != len(box):
        raise ValueError(f"shape mismatch: x0[{x0.shape}], U{U.shape}, box[{len(box)}]")
    rows = []
    for i in range(U.shape[0]):
        acc = Interval(float(x0[i]), float(x0[i]))
        for j in range(U.shape[1]):
            uij = U[i, j]
            if uij != 0.0:
                acc = acc + uij * box[j]
        rows.append(acc)
    return IntervalVector(rows)
