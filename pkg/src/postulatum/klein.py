"""Beltrami-Klein model of the hyperbolic plane.

Points live in the open unit disk and lines are Euclidean chords, each of
which carries its two ideal endpoints.  Distances come from the cross-ratio
with those endpoints; angles are measured with the Klein metric tensor since
the model is not conformal.  Perpendiculars are lines through the pole of a
chord.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import DegenerateInput, NoSignChange
from .euclid import AngleValue, EuLine, EuPoint, intersect_lines, vector_angle

INTERIOR_MARGIN = 1e-12
BOUNDARY_TOL = 1e-10
ENDPOINT_TOL = 1e-6
BISECTION_ITERATIONS = 200
BISECTION_WIDTH = 1e-14


@dataclass(frozen=True)
class HPoint:
    x: float
    y: float

    def __post_init__(self):
        if not self.x * self.x + self.y * self.y < 1.0 - INTERIOR_MARGIN:
            raise DegenerateInput(f"({self.x}, {self.y}) is not strictly inside the disk")

    def __iter__(self):
        yield self.x
        yield self.y

    @property
    def norm_sq(self) -> float:
        return self.x * self.x + self.y * self.y


@dataclass(frozen=True)
class IdealPoint:
    x: float
    y: float

    def __post_init__(self):
        if abs(self.x * self.x + self.y * self.y - 1.0) > BOUNDARY_TOL:
            raise DegenerateInput(f"({self.x}, {self.y}) is not on the boundary circle")

    def __iter__(self):
        yield self.x
        yield self.y

    @classmethod
    def at_angle(cls, theta: float) -> "IdealPoint":
        return cls(math.cos(theta), math.sin(theta))

    @classmethod
    def radial(cls, x: float, y: float) -> "IdealPoint":
        """Push a nonzero vector radially onto the boundary."""
        r = math.hypot(x, y)
        return cls(x / r, y / r)


@dataclass(frozen=True)
class HChord:
    """A hyperbolic line, stored by its ideal endpoints in lexicographic order."""

    i1: IdealPoint
    i2: IdealPoint

    def __post_init__(self):
        if math.hypot(self.i1.x - self.i2.x, self.i1.y - self.i2.y) <= BOUNDARY_TOL:
            raise DegenerateInput("chord endpoints coincide")
        if (self.i2.x, self.i2.y) < (self.i1.x, self.i1.y):
            first, second = self.i2, self.i1
            object.__setattr__(self, "i1", first)
            object.__setattr__(self, "i2", second)

    @property
    def endpoints(self) -> tuple[IdealPoint, IdealPoint]:
        return (self.i1, self.i2)

    def euclidean_line(self) -> EuLine:
        dx, dy = self.i2.x - self.i1.x, self.i2.y - self.i1.y
        # normal . i1 and normal . i2 agree exactly only up to rounding; average them
        off = 0.5 * ((-dy * self.i1.x + dx * self.i1.y) + (-dy * self.i2.x + dx * self.i2.y))
        return EuLine.from_normal(-dy, dx, off)

    def contains(self, p, tol: float = BOUNDARY_TOL) -> bool:
        return abs(self.euclidean_line().signed_distance(EuPoint(p.x, p.y))) <= tol


@dataclass(frozen=True)
class HRay:
    origin: HPoint
    toward: IdealPoint

    @classmethod
    def through(cls, origin: HPoint, point: HPoint) -> "HRay":
        """The ray from ``origin`` through ``point``, ending at the ideal point beyond it."""
        d = (point.x - origin.x, point.y - origin.y)
        if math.hypot(*d) <= INTERIOR_MARGIN:
            raise DegenerateInput("ray through its own origin")
        _, ahead = _boundary_hits(origin, d)
        return cls(origin, ahead)

    def chord(self) -> HChord:
        d = (self.toward.x - self.origin.x, self.toward.y - self.origin.y)
        behind, _ = _boundary_hits(self.origin, d)
        return HChord(behind, self.toward)


@dataclass(frozen=True)
class HSegment:
    start: HPoint
    end: HPoint

    def __post_init__(self):
        if math.hypot(self.start.x - self.end.x, self.start.y - self.end.y) <= INTERIOR_MARGIN:
            raise DegenerateInput("segment endpoints coincide")

    @property
    def endpoints(self) -> tuple[HPoint, HPoint]:
        return (self.start, self.end)

    def at(self, t: float) -> HPoint:
        return HPoint(self.start.x + t * (self.end.x - self.start.x),
                      self.start.y + t * (self.end.y - self.start.y))


class Pole(NamedTuple):
    point: Optional[EuPoint]
    # tangent direction, reported only when the chord is a diameter
    direction: Optional[tuple[float, float]]


def _boundary_hits(p, d) -> tuple[IdealPoint, IdealPoint]:
    """Where the Euclidean line ``p + s d`` leaves the disk: ``(behind, ahead)``."""
    a = d[0] * d[0] + d[1] * d[1]
    b = p.x * d[0] + p.y * d[1]
    c = p.x * p.x + p.y * p.y - 1.0
    root = math.sqrt(b * b - a * c)
    # stable roots of a s^2 + 2 b s + c = 0; c < 0 so the roots have opposite signs
    q = -(b + math.copysign(root, b))
    s1, s2 = q / a, c / q
    lo, hi = min(s1, s2), max(s1, s2)
    return (IdealPoint.radial(p.x + lo * d[0], p.y + lo * d[1]),
            IdealPoint.radial(p.x + hi * d[0], p.y + hi * d[1]))


def chord_through(p: HPoint, direction: tuple[float, float]) -> HChord:
    if math.hypot(*direction) == 0.0:
        raise DegenerateInput("zero direction")
    return HChord(*_boundary_hits(p, direction))


def h_line_through(a: HPoint, b: HPoint) -> HChord:
    d = (b.x - a.x, b.y - a.y)
    if math.hypot(*d) <= INTERIOR_MARGIN:
        raise DegenerateInput("line through coincident points")
    return chord_through(a, d)


def h_distance(a: HPoint, b: HPoint) -> float:
    """Hyperbolic distance as half the log of the cross-ratio with the chord's ideal endpoints."""
    dx, dy = b.x - a.x, b.y - a.y
    n = math.hypot(dx, dy)
    if n == 0.0:
        return 0.0
    # the direction is normalised so that nearly coincident points still span a chord
    i1, i2 = _boundary_hits(a, (dx / n, dy / n))

    def dist(p, q):
        return math.hypot(p.x - q.x, p.y - q.y)

    ratio = (dist(a, i2) * dist(b, i1)) / (dist(a, i1) * dist(b, i2))
    return 0.5 * abs(math.log(ratio))


def klein_inner(v: HPoint, u: tuple[float, float], w: tuple[float, float]) -> float:
    """Klein metric inner product of tangent vectors u, w at v."""
    s = 1.0 - v.norm_sq
    vu = v.x * u[0] + v.y * u[1]
    vw = v.x * w[0] + v.y * w[1]
    return (u[0] * w[0] + u[1] * w[1]) / s + vu * vw / (s * s)


def _metric_frame(v: HPoint, u: tuple[float, float]) -> tuple[float, float]:
    # square root of the metric, up to a positive scalar: stretch the radial
    # component by 1/sqrt(1 - |v|^2) and leave the orthogonal one alone
    s = 1.0 - v.norm_sq
    rs = math.sqrt(s)
    k = 1.0 / (rs * (1.0 + rs))
    vu = v.x * u[0] + v.y * u[1]
    return (u[0] + k * vu * v.x, u[1] + k * vu * v.y)


def h_angle_at(a: HPoint, v: HPoint, b: HPoint) -> AngleValue:
    """Angle AVB under the Klein metric at V."""
    u = (a.x - v.x, a.y - v.y)
    w = (b.x - v.x, b.y - v.y)
    if math.hypot(*u) <= INTERIOR_MARGIN or math.hypot(*w) <= INTERIOR_MARGIN:
        raise DegenerateInput("angle with an undefined ray")
    return vector_angle(_metric_frame(v, u), _metric_frame(v, w))


def _pole_homogeneous(c: HChord) -> tuple[float, float, float]:
    # cross product of the tangent lines i.p = 1 at both endpoints
    i1, i2 = c.i1, c.i2
    return (i2.y - i1.y, i1.x - i2.x, i1.x * i2.y - i1.y * i2.x)


def pole_of(c: HChord) -> Pole:
    hx, hy, hw = _pole_homogeneous(c)
    if abs(hw) <= INTERIOR_MARGIN:
        d = (hx, hy) if (hx, hy) > (-hx, -hy) else (-hx, -hy)
        n = math.hypot(*d)
        return Pole(None, (d[0] / n + 0.0, d[1] / n + 0.0))
    return Pole(EuPoint(hx / hw + 0.0, hy / hw + 0.0), None)


def h_perpendicular(p: HPoint, c: HChord) -> HChord:
    """The chord through p perpendicular to c: the Euclidean line joining p to c's pole.

    Well defined for p on c as well.
    """
    hx, hy, hw = _pole_homogeneous(c)
    return chord_through(p, (hx - hw * p.x, hy - hw * p.y))


def intersect_chords(c1: HChord, c2: HChord) -> Optional[HPoint]:
    """Interior crossing of two chords, or None when they are parallel or limiting parallel."""
    if c1 == c2:
        raise DegenerateInput("chords coincide")
    meet = intersect_lines(c1.euclidean_line(), c2.euclidean_line())
    if meet.point is None:
        if meet.coincident:
            raise DegenerateInput("chords coincide")
        return None
    x, y = meet.point.x, meet.point.y
    if x * x + y * y < 1.0 - INTERIOR_MARGIN:
        return HPoint(x, y)
    return None


def h_foot(p: HPoint, c: HChord) -> HPoint:
    """Foot of the perpendicular from p to c."""
    foot = intersect_chords(h_perpendicular(p, c), c)
    if foot is None:  # pragma: no cover - a perpendicular always meets its chord
        raise DegenerateInput("perpendicular misses its chord")
    return foot


def solve_circle_segment(center: HPoint, radius: float, seg: HSegment) -> HPoint:
    """Point of ``seg`` at hyperbolic distance ``radius`` from ``center``.

    Bisection on the segment parameter; only a sign change of
    ``d(center, X) - radius`` between the endpoints is required.
    """
    def f(t):
        return h_distance(center, seg.at(t)) - radius

    lo, hi = 0.0, 1.0
    f_lo, f_hi = f(lo), f(hi)
    if abs(f_lo) <= INTERIOR_MARGIN or abs(f_hi) <= INTERIOR_MARGIN or (f_lo > 0) == (f_hi > 0):
        raise NoSignChange(f"no sign change along the segment ({f_lo:.3g}, {f_hi:.3g})")
    for _ in range(BISECTION_ITERATIONS):
        if hi - lo < BISECTION_WIDTH:
            break
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            lo = hi = mid
            break
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return seg.at(0.5 * (lo + hi))


def is_limiting_parallel(r: HRay, c: HChord, tol: float = ENDPOINT_TOL) -> bool:
    """True iff the ray heads to one of c's ideal endpoints and its chord never crosses c inside.

    A crossing within ``tol`` of the shared endpoint counts as meeting at infinity.
    """
    if c.contains(r.origin, INTERIOR_MARGIN):
        raise DegenerateInput("ray origin lies on the chord")
    shared = min(c.endpoints, key=lambda e: math.hypot(e.x - r.toward.x, e.y - r.toward.y))
    if math.hypot(shared.x - r.toward.x, shared.y - r.toward.y) > tol:
        return False
    crossing = intersect_chords(r.chord(), c)
    if crossing is None:
        return True
    return math.hypot(crossing.x - shared.x, crossing.y - shared.y) <= tol


def klein_to_poincare(a: HPoint) -> tuple[float, float]:
    s = 1.0 + math.sqrt(1.0 - a.norm_sq)
    return (a.x / s, a.y / s)


def poincare_to_klein(p: tuple[float, float]) -> HPoint:
    s = 1.0 + p[0] * p[0] + p[1] * p[1]
    return HPoint(2.0 * p[0] / s, 2.0 * p[1] / s)
