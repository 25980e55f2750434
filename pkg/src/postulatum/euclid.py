"""Euclidean plane primitives: points, lines in normal form, circles, angles.

Lines are stored as ``normal . p = offset`` with a unit normal, canonicalised
so that parallelism is a comparison of normals.  Every operation is a pure
function of its arguments and a :class:`Tolerance` context.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import CoincidentCircles, DegenerateInput, NotATransversal


@dataclass(frozen=True)
class Tolerance:
    degenerate: float = 1e-12  # degeneracy and coincidence tests
    residual: float = 1e-10  # post-condition residuals


DEFAULT_TOL = Tolerance()


class AngleValue(float):
    """An undirected angle in radians, restricted to ``[0, pi]``."""

    def __new__(cls, radians):
        value = float(radians)
        if not 0.0 <= value <= math.pi:
            raise ValueError(f"angle {value!r} outside [0, pi]")
        return super().__new__(cls, value)

    @property
    def radians(self) -> float:
        return float(self)

    def __repr__(self):
        return f"AngleValue({float(self)!r})"


RIGHT = AngleValue(math.pi / 2)
STRAIGHT = AngleValue(math.pi)


@dataclass(frozen=True)
class EuPoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DegenerateInput(f"non-finite point ({self.x}, {self.y})")

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True)
class EuLine:
    """The line ``{p : normal . p = offset}``.

    Construct through :meth:`from_normal` (or :func:`line_through`) to get
    the canonical sign; the raw constructor only validates.
    """

    normal: tuple[float, float]
    offset: float

    def __post_init__(self):
        nx, ny = self.normal
        if abs(math.hypot(nx, ny) - 1.0) > 1e-12:
            raise DegenerateInput(f"line normal {self.normal} is not a unit vector")
        if not math.isfinite(self.offset):
            raise DegenerateInput("non-finite line offset")

    @classmethod
    def from_normal(cls, nx: float, ny: float, offset: float) -> "EuLine":
        norm = math.hypot(nx, ny)
        if norm <= 0.0:
            raise DegenerateInput("zero normal")
        nx, ny, offset = nx / norm, ny / norm, offset / norm
        # keep the lexicographically larger of (n, -n); +0.0 clears signed zeros
        if (nx, ny) < (-nx, -ny):
            nx, ny, offset = -nx, -ny, -offset
        return cls((nx + 0.0, ny + 0.0), offset + 0.0)

    @property
    def direction(self) -> tuple[float, float]:
        """Canonical direction: the normal turned a quarter turn counterclockwise."""
        nx, ny = self.normal
        return (-ny + 0.0, nx)

    def signed_distance(self, p: EuPoint) -> float:
        return self.normal[0] * p.x + self.normal[1] * p.y - self.offset

    def contains(self, p: EuPoint, tol: Tolerance = DEFAULT_TOL) -> bool:
        return abs(self.signed_distance(p)) <= tol.residual

    def project(self, p: EuPoint) -> EuPoint:
        h = self.signed_distance(p)
        return EuPoint(p.x - h * self.normal[0], p.y - h * self.normal[1])


@dataclass(frozen=True)
class EuRay:
    origin: EuPoint
    direction: tuple[float, float]

    def __post_init__(self):
        if abs(math.hypot(*self.direction) - 1.0) > 1e-12:
            raise DegenerateInput(f"ray direction {self.direction} is not a unit vector")

    @classmethod
    def through(cls, origin: EuPoint, through: EuPoint, tol: Tolerance = DEFAULT_TOL) -> "EuRay":
        dx, dy = through.x - origin.x, through.y - origin.y
        n = math.hypot(dx, dy)
        if n <= tol.degenerate:
            raise DegenerateInput("ray through its own origin")
        return cls(origin, (dx / n, dy / n))

    def at(self, t: float) -> EuPoint:
        return EuPoint(self.origin.x + t * self.direction[0], self.origin.y + t * self.direction[1])

    def line(self) -> EuLine:
        dx, dy = self.direction
        return EuLine.from_normal(dy, -dx, dy * self.origin.x - dx * self.origin.y)


@dataclass(frozen=True)
class EuSegment:
    start: EuPoint
    end: EuPoint

    def __post_init__(self):
        if _dist(self.start, self.end) <= 1e-12:
            raise DegenerateInput("segment endpoints coincide")

    @property
    def endpoints(self) -> tuple[EuPoint, EuPoint]:
        return (self.start, self.end)


@dataclass(frozen=True)
class EuCircle:
    center: EuPoint
    radius: float

    def __post_init__(self):
        if not self.radius > 1e-12:
            raise DegenerateInput(f"circle radius {self.radius!r} is not positive")


class LineMeet(NamedTuple):
    point: Optional[EuPoint]
    coincident: bool


def _dist(p: EuPoint, q: EuPoint) -> float:
    return math.hypot(p.x - q.x, p.y - q.y)


def _sorted_points(points):
    return tuple(sorted(points, key=lambda p: (p.x, p.y)))


def line_through(a: EuPoint, b: EuPoint, tol: Tolerance = DEFAULT_TOL) -> EuLine:
    """The line through two distinct points; symmetric in its arguments bit for bit."""
    dx, dy = b.x - a.x, b.y - a.y
    length = math.hypot(dx, dy)
    if length <= tol.degenerate:
        raise DegenerateInput("line through coincident points")
    nx, ny = -dy / length, dx / length
    # summing both projections keeps the offset independent of argument order
    offset = 0.5 * ((nx * a.x + ny * a.y) + (nx * b.x + ny * b.y))
    return EuLine.from_normal(nx, ny, offset)


def circle_from(center: EuPoint, through: EuPoint, tol: Tolerance = DEFAULT_TOL) -> EuCircle:
    r = _dist(center, through)
    if r <= tol.degenerate:
        raise DegenerateInput("circle through its own center")
    return EuCircle(center, r)


def _parallel_normals(l1: EuLine, l2: EuLine, tol: Tolerance) -> bool:
    (ax, ay), (bx, by) = l1.normal, l2.normal
    return abs(ax * by - ay * bx) <= tol.degenerate


def _aligned_offset(l1: EuLine, l2: EuLine) -> float:
    """l2's offset expressed against l1's normal (normals assumed parallel)."""
    s = l1.normal[0] * l2.normal[0] + l1.normal[1] * l2.normal[1]
    return l2.offset if s >= 0 else -l2.offset


def intersect_lines(l1: EuLine, l2: EuLine, tol: Tolerance = DEFAULT_TOL) -> LineMeet:
    (a1, b1), (a2, b2) = l1.normal, l2.normal
    det = a1 * b2 - b1 * a2
    if abs(det) <= tol.degenerate:
        coincident = abs(l1.offset - _aligned_offset(l1, l2)) <= tol.degenerate
        return LineMeet(None, coincident)
    x = (l1.offset * b2 - b1 * l2.offset) / det
    y = (a1 * l2.offset - l1.offset * a2) / det
    return LineMeet(EuPoint(x, y), False)


def intersect_line_circle(line: EuLine, circle: EuCircle, tol: Tolerance = DEFAULT_TOL) -> tuple[EuPoint, ...]:
    """Zero, one (tangency) or two points, two points sorted lexicographically."""
    h = line.signed_distance(circle.center)
    r = circle.radius
    if abs(abs(h) - r) <= tol.degenerate:
        return (line.project(circle.center),)
    if abs(h) > r:
        return ()
    foot = line.project(circle.center)
    half = math.sqrt((r - h) * (r + h))
    dx, dy = line.direction
    return _sorted_points([EuPoint(foot.x - half * dx, foot.y - half * dy),
                           EuPoint(foot.x + half * dx, foot.y + half * dy)])


def intersect_circles(c1: EuCircle, c2: EuCircle, tol: Tolerance = DEFAULT_TOL) -> tuple[EuPoint, ...]:
    dx, dy = c2.center.x - c1.center.x, c2.center.y - c1.center.y
    d = math.hypot(dx, dy)
    if d <= tol.degenerate:
        if abs(c1.radius - c2.radius) <= tol.degenerate:
            raise CoincidentCircles("circles coincide")
        return ()
    r1, r2 = c1.radius, c2.radius
    if abs(d - (r1 + r2)) <= tol.degenerate or abs(d - abs(r1 - r2)) <= tol.degenerate:
        s = r1 / d if abs(d - (r1 + r2)) <= tol.degenerate or r1 > r2 else -r1 / d
        return (EuPoint(c1.center.x + s * dx, c1.center.y + s * dy),)
    if d > r1 + r2 or d < abs(r1 - r2):
        return ()
    a = (d * d + r1 * r1 - r2 * r2) / (2 * d)
    h = math.sqrt(max(r1 * r1 - a * a, 0.0))
    ux, uy = dx / d, dy / d
    mx, my = c1.center.x + a * ux, c1.center.y + a * uy
    return _sorted_points([EuPoint(mx - h * uy, my + h * ux), EuPoint(mx + h * uy, my - h * ux)])


def vector_angle(u: tuple[float, float], v: tuple[float, float]) -> AngleValue:
    cross = u[0] * v[1] - u[1] * v[0]
    dot = u[0] * v[0] + u[1] * v[1]
    return AngleValue(math.atan2(abs(cross), dot))


def angle_at(a: EuPoint, v: EuPoint, b: EuPoint, tol: Tolerance = DEFAULT_TOL) -> AngleValue:
    """Undirected angle between rays VA and VB."""
    u = (a.x - v.x, a.y - v.y)
    w = (b.x - v.x, b.y - v.y)
    if math.hypot(*u) <= tol.degenerate or math.hypot(*w) <= tol.degenerate:
        raise DegenerateInput("angle with an undefined ray")
    return vector_angle(u, w)


def _crossings(b: EuLine, a: EuLine, c: EuLine, tol: Tolerance):
    """Crossings of transversal c with b and a, ordered along c's canonical direction.

    Returns ``(first, second)`` where each entry is ``(point, crossed_line)``.
    """
    if _parallel_normals(a, c, tol) or _parallel_normals(b, c, tol):
        raise NotATransversal("c does not cross both lines")
    pa = intersect_lines(a, c, tol).point
    pb = intersect_lines(b, c, tol).point
    if _dist(pa, pb) <= tol.degenerate:
        raise NotATransversal("c crosses a and b at the same point")
    t = c.direction
    ta = t[0] * pa.x + t[1] * pa.y
    tb = t[0] * pb.x + t[1] * pb.y
    return ((pb, b), (pa, a)) if tb < ta else ((pa, a), (pb, b))


def _side_ray(line: EuLine, side: tuple[float, float]) -> tuple[float, float]:
    d = line.direction
    return d if d[0] * side[0] + d[1] * side[1] > 0 else (-d[0], -d[1])


def interior_angles(b: EuLine, a: EuLine, c: EuLine, tol: Tolerance = DEFAULT_TOL):
    """Interior angles made by transversal c, as ``{side: (at_first, at_second)}``.

    ``side`` is +1 for the half-plane ``c.normal . p > c.offset`` (to the right
    of c's canonical direction) and -1 for the other one.
    """
    (p1, l1), (p2, l2) = _crossings(b, a, c, tol)
    t = c.direction
    back = (-t[0], -t[1])
    out = {}
    for side in (1, -1):
        s = (side * c.normal[0], side * c.normal[1])
        out[side] = (vector_angle(t, _side_ray(l1, s)), vector_angle(back, _side_ray(l2, s)))
    return out, (p1, p2)


def alternate_angles(b: EuLine, a: EuLine, c: EuLine, tol: Tolerance = DEFAULT_TOL) -> tuple[AngleValue, AngleValue]:
    """Alternate interior angles of transversal c across a and b.

    With the crossings ordered along c's canonical direction, the pair is the
    angle on the right of c at the first crossing and the angle on the left
    at the second.
    """
    if _parallel_normals(a, b, tol) and abs(a.offset - _aligned_offset(a, b)) <= tol.degenerate:
        raise NotATransversal("a and b coincide")
    angles, _ = interior_angles(b, a, c, tol)
    return angles[1][0], angles[-1][1]


def is_parallel(a: EuLine, b: EuLine, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Distinct lines that never meet; coincident lines are not parallel."""
    meet = intersect_lines(a, b, tol)
    return meet.point is None and not meet.coincident


def foot(p: EuPoint, line: EuLine) -> EuPoint:
    """Foot of the perpendicular from p to the line."""
    return line.project(p)
