"""Seeded randomized trials for the Euclidean and hyperbolic propositions.

Each proposition has a sampler and a check.  Trial ``i`` of a run draws its
scene from a stream keyed by ``(seed, i)`` alone, so a report does not depend
on the order in which trials are executed.  Every check also reports a signed
margin, its distance to the pass/fail boundary, and the report keeps the
smallest one.

Sampling, per proposition:

* ``i27_i29``, ``fp``: lines with uniform normal angle and offset in [-2, 2];
  the transversal joins points drawn on a and b at least 0.1 apart and makes
  an angle of at least 1e-3 with both.  ``i27_i29`` draws a parallel pair
  half of the time; ``fp`` always draws a and b at least 1e-3 rad apart.
* ``i30``: b as above, then two I.31 constructions through points drawn
  uniformly in [-3, 3]^2 whose distances to b differ by at least 0.1.
* ``4.1``: vertices uniform in the disk of radius 0.95, rejected unless the
  Euclidean area is at least 1e-3.
* ``4.2``: base P uniform in radius 0.6, a random chord through it and its
  perpendicular; Q and S are drawn on them, R is where the perpendiculars at
  Q and S meet.  All four vertices within radius 0.95, PQ and PS >= 0.05.
* ``4.3``, ``bolyai``: chord a with Euclidean distance <= 0.8 from the centre,
  P uniform in radius 0.95 with PQ >= 0.05, R on a within radius 0.95 with
  QR >= 0.05.  Both propositions share this sampler, so equal seeds give
  equal scenes.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import euclid as eu
from . import klein as kl
from .construct import BolyaiScene, prog_bolyai, prog_parallel_i31, run_program
from .errors import (DegenerateInput, DegenerateScene, DegenerateTriangle, GeometryError,
                     Inconclusive, NotATransversal, NotLambert, PreconditionUnmet, UnknownProposition)
from .scenes import Scene

MAX_ATTEMPTS = 1000
SAMPLE_RADIUS = 0.95


# -- Euclidean checks -------------------------------------------------------

@dataclass(frozen=True)
class TransversalScene:
    """Lines a, b and a transversal c that falls on both at distinct points."""

    a: eu.EuLine
    b: eu.EuLine
    c: eu.EuLine

    def __post_init__(self):
        eu.interior_angles(self.b, self.a, self.c)  # raises NotATransversal


def _alternate_margin(s: TransversalScene, tol: float):
    first, second = eu.alternate_angles(s.b, s.a, s.c)
    gap = abs(first - second)
    if eu.is_parallel(s.a, s.b):
        return gap <= tol, tol - gap
    return gap > tol, gap - tol


def check_alternate_angle_criterion(s: TransversalScene, tol: float = 1e-9) -> bool:
    """Equal alternate angles if and only if a is parallel to b (I.27 and I.29 together)."""
    return _alternate_margin(s, tol)[0]


def _fp_margin(s: TransversalScene, tol: float):
    angles, _ = eu.interior_angles(s.b, s.a, s.c)
    sums = {side: pair[0] + pair[1] for side, pair in angles.items()}
    short = [side for side, total in sums.items() if total < math.pi - tol]
    if not short:
        raise Inconclusive("interior angles sum to two right angles on both sides")
    side = short[0]
    meet = eu.intersect_lines(s.a, s.b).point
    if meet is None:
        return False, -math.inf
    depth = side * s.c.signed_distance(meet)
    return depth > 0, depth


def check_fp_meeting_side(s: TransversalScene, tol: float = 1e-9) -> bool:
    """a and b meet on the side where the interior angles fall short of two right angles."""
    return _fp_margin(s, tol)[0]


def _transitivity_margin(a: eu.EuLine, b: eu.EuLine, c: eu.EuLine, tol: eu.Tolerance):
    if not (eu.is_parallel(a, b, tol) and eu.is_parallel(c, b, tol)):
        raise PreconditionUnmet("a and c must both be parallel to b")
    meet = eu.intersect_lines(a, c, tol)
    if meet.coincident:
        raise PreconditionUnmet("a and c coincide")
    if meet.point is not None:
        return False, -1.0
    (ax, ay), (cx, cy) = a.normal, c.normal
    gap = abs(a.offset - eu._aligned_offset(a, c))
    return True, min(tol.degenerate - abs(ax * cy - ay * cx), gap - tol.degenerate)


def check_parallel_transitivity(a: eu.EuLine, b: eu.EuLine, c: eu.EuLine,
                                tol: eu.Tolerance = eu.DEFAULT_TOL) -> bool:
    """I.30: two lines parallel to the same line are parallel to each other."""
    return _transitivity_margin(a, b, c, tol)[0]


# -- hyperbolic checks ------------------------------------------------------

def check_hyperbolic_angle_sum(a: kl.HPoint, b: kl.HPoint, c: kl.HPoint) -> float:
    """Defect ``pi - (angle sum)`` of triangle ABC; the proposition holds when it is positive."""
    for p, q in ((a, b), (b, c), (c, a)):
        if kl.h_distance(p, q) <= 1e-6:
            raise DegenerateTriangle("two vertices coincide")
    if abs((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)) <= 1e-12:
        raise DegenerateTriangle("vertices lie on one chord")
    return math.pi - (kl.h_angle_at(b, a, c) + kl.h_angle_at(a, b, c) + kl.h_angle_at(a, c, b))


def _lambert_margin(p, q, r, s, tol: float):
    try:
        right = (kl.h_angle_at(q, p, s), kl.h_angle_at(p, q, r), kl.h_angle_at(p, s, r))
    except DegenerateInput as exc:
        raise NotLambert(str(exc)) from None
    if any(abs(angle - math.pi / 2) > tol for angle in right):
        raise NotLambert("angles at P, Q and S must be right")
    fourth = kl.h_angle_at(q, r, s)
    margins = (math.pi / 2 - tol - fourth,
               kl.h_distance(q, r) - kl.h_distance(p, s) - 1e-12,
               kl.h_distance(s, r) - kl.h_distance(p, q) - 1e-12)
    return all(m > 0 for m in margins), min(margins)


def check_lambert(p: kl.HPoint, q: kl.HPoint, r: kl.HPoint, s: kl.HPoint, tol: float = 1e-9) -> bool:
    """Lambert quadrilateral PQRS (right angles at P, Q, S): acute angle at R, QR > PS, SR > PQ."""
    return _lambert_margin(p, q, r, s, tol)[0]


def _far_endpoint(a: kl.HChord, q: kl.HPoint, r: kl.HPoint) -> kl.IdealPoint:
    """The ideal endpoint of ``a`` lying beyond R as seen from Q."""
    return max(a.endpoints, key=lambda e: (e.x - q.x) * (r.x - q.x) + (e.y - q.y) * (r.y - q.y))


def _segment_meet(p1, p2, q1, q2):
    """Intersection of segment q1q2 with the Euclidean line p1p2, as (point, parameter on q)."""
    rx, ry = p2.x - p1.x, p2.y - p1.y
    sx, sy = q2.x - q1.x, q2.y - q1.y
    det = rx * sy - ry * sx
    if det == 0.0:
        return None, math.nan
    u = ((q1.x - p1.x) * ry - (q1.y - p1.y) * rx) / det
    return (q1.x + u * sx, q1.y + u * sy), u


def hypothesis_scene(a: kl.HChord, p: kl.HPoint, r: kl.HPoint) -> BolyaiScene:
    """Bolyai's figure with X taken from the limiting ray itself rather than constructed.

    The ray runs from P to the ideal endpoint of ``a`` on R's side of the foot Q.
    """
    if a.contains(p):
        raise DegenerateScene("P lies on a")
    q = kl.h_foot(p, a)
    if math.hypot(r.x - q.x, r.y - q.y) <= 1e-9:
        raise DegenerateScene("R coincides with the foot Q")
    m = kl.h_perpendicular(p, kl.h_line_through(p, q))
    s = kl.h_foot(r, m)
    ray = kl.HRay(p, _far_endpoint(a, q, r))
    meet, u = _segment_meet(p, ray.toward, r, s)
    if meet is None or not -1e-9 <= u <= 1 + 1e-9:
        raise DegenerateScene("limiting ray misses segment RS")
    return BolyaiScene(a, p, q, m, r, s, kl.HPoint(*meet), ray)


def _px_qr_margin(scene: BolyaiScene, tol: float):
    qr = kl.h_distance(scene.Q, scene.R)
    slack = tol * max(1.0, qr) - abs(kl.h_distance(scene.P, scene.X) - qr)
    return slack >= 0, slack


def check_px_equals_qr(scene: BolyaiScene, tol: float = 1e-7) -> bool:
    """If the limiting ray from P meets RS at X then PX = QR."""
    return _px_qr_margin(scene, tol)[0]


def _bolyai_margin(a, p, r, tol: float):
    trace = run_program(prog_bolyai(), Scene("klein", {"a": a, "P": p, "R": r}))
    if not trace.ok:
        if isinstance(trace.failure, DegenerateScene):
            raise trace.failure
        return False, -math.inf
    ray = trace.result_value
    miss = min(math.hypot(e.x - ray.toward.x, e.y - ray.toward.y) for e in a.endpoints)
    return kl.is_limiting_parallel(ray, a, tol), tol - miss


def check_bolyai(a: kl.HChord, p: kl.HPoint, r: kl.HPoint, tol: float = kl.ENDPOINT_TOL) -> bool:
    """Run Bolyai's construction; True iff it succeeds and yields a limiting parallel to a."""
    return _bolyai_margin(a, p, r, tol)[0]


def _meets_ahead(p: kl.HPoint, d, a: kl.HChord) -> bool:
    """Whether the ray from p in Euclidean direction d crosses chord a inside the disk."""
    ray = kl.chord_through(p, d)
    meet = None if ray == a else kl.intersect_chords(ray, a)
    return meet is not None and (meet.x - p.x) * d[0] + (meet.y - p.y) * d[1] > 0


def check_limiting_angle(ray: kl.HRay, a: kl.HChord, eps: float = 1e-4) -> bool:
    """The angle form of a limiting parallel.

    Turning the ray by ``eps`` towards the perpendicular from its origin to
    ``a`` makes it meet ``a``; turning it by ``eps`` away does not.
    """
    p = ray.origin
    q = kl.h_foot(p, a)
    d = (ray.toward.x - p.x, ray.toward.y - p.y)
    c, s = math.cos(eps), math.sin(eps)
    turned = [(c * d[0] - sign * s * d[1], sign * s * d[0] + c * d[1]) for sign in (1, -1)]
    # the turn whose direction leans more towards Q
    pq = (q.x - p.x, q.y - p.y)
    turned.sort(key=lambda v: -(v[0] * pq[0] + v[1] * pq[1]) / math.hypot(*v))
    inward, outward = turned
    return _meets_ahead(p, inward, a) and not _meets_ahead(p, outward, a)


def bolyai_agreement(a: kl.HChord, p: kl.HPoint, r: kl.HPoint) -> float:
    """Euclidean gap between the constructed X and the X cut out by the limiting ray."""
    built = BolyaiScene.from_trace(
        run_program(prog_bolyai(), Scene("klein", {"a": a, "P": p, "R": r}), strict=True))
    assumed = hypothesis_scene(a, p, r)
    return math.hypot(built.X.x - assumed.X.x, built.X.y - assumed.X.y)


# -- samplers ---------------------------------------------------------------

def _rejection(draw):
    def sampler(rng):
        for _ in range(MAX_ATTEMPTS):
            scene = draw(rng)
            if scene is not None:
                return scene
        raise RuntimeError("sampler exhausted its attempts")  # pragma: no cover
    sampler.__doc__ = draw.__doc__
    return sampler


def _random_line(rng, theta=None):
    if theta is None:
        theta = rng.uniform(0.0, 2 * math.pi)
    return eu.EuLine.from_normal(math.cos(theta), math.sin(theta), rng.uniform(-2.0, 2.0))


def _point_on(line: eu.EuLine, t: float) -> eu.EuPoint:
    base = line.project(eu.EuPoint(0.0, 0.0))
    d = line.direction
    return eu.EuPoint(base.x + t * d[0], base.y + t * d[1])


def _cross(l1, l2):
    return abs(l1.normal[0] * l2.normal[1] - l1.normal[1] * l2.normal[0])


def _transversal(rng, a, b):
    pa, pb = _point_on(a, rng.uniform(-3, 3)), _point_on(b, rng.uniform(-3, 3))
    if math.hypot(pa.x - pb.x, pa.y - pb.y) < 0.1:
        return None
    c = eu.line_through(pa, pb)
    if _cross(c, a) < 1e-3 or _cross(c, b) < 1e-3:
        return None
    return TransversalScene(a, b, c)


@_rejection
def sample_transversal(rng):
    b = _random_line(rng)
    if rng.uniform() < 0.5:
        a = eu.EuLine(b.normal, b.offset + rng.choice([-1, 1]) * rng.uniform(0.1, 2.0))
    else:
        a = _random_line(rng)
        if _cross(a, b) < 1e-3:
            return None
    return _transversal(rng, a, b)


@_rejection
def sample_fp_scene(rng):
    a, b = _random_line(rng), _random_line(rng)
    if _cross(a, b) < 1e-3:
        return None
    return _transversal(rng, a, b)


@_rejection
def sample_parallel_triple(rng):
    b = _random_line(rng)
    pa = eu.EuPoint(rng.uniform(-3, 3), rng.uniform(-3, 3))
    pc = eu.EuPoint(rng.uniform(-3, 3), rng.uniform(-3, 3))
    ha, hc = b.signed_distance(pa), b.signed_distance(pc)
    if min(abs(ha), abs(hc)) < 0.1 or abs(ha - hc) < 0.1:
        return None
    program = prog_parallel_i31()
    a = run_program(program, Scene("euclidean", {"b": b, "A": pa}), strict=True).result_value
    c = run_program(program, Scene("euclidean", {"b": b, "A": pc}), strict=True).result_value
    return (a, b, c)


def _disk_point(rng, radius=SAMPLE_RADIUS) -> kl.HPoint:
    r = radius * math.sqrt(rng.uniform())
    t = rng.uniform(0.0, 2 * math.pi)
    return kl.HPoint(r * math.cos(t), r * math.sin(t))


@_rejection
def sample_triangle(rng):
    a, b, c = (_disk_point(rng) for _ in range(3))
    area = 0.5 * abs((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x))
    if area < 1e-3:
        return None
    return (a, b, c)


def _along(p: kl.HPoint, toward: kl.IdealPoint, u: float) -> kl.HPoint:
    return kl.HPoint(p.x + u * (toward.x - p.x), p.y + u * (toward.y - p.y))


def _inside(*points) -> bool:
    return all(math.hypot(pt.x, pt.y) <= SAMPLE_RADIUS for pt in points)


@_rejection
def sample_lambert(rng):
    p = _disk_point(rng, 0.6)
    theta = rng.uniform(0.0, math.pi)
    side1 = kl.chord_through(p, (math.cos(theta), math.sin(theta)))
    side2 = kl.h_perpendicular(p, side1)
    q = _along(p, side1.endpoints[rng.integers(2)], rng.uniform(0.05, 0.9))
    s = _along(p, side2.endpoints[rng.integers(2)], rng.uniform(0.05, 0.9))
    if not _inside(q, s) or min(kl.h_distance(p, q), kl.h_distance(p, s)) < 0.05:
        return None
    r = kl.intersect_chords(kl.h_perpendicular(q, side1), kl.h_perpendicular(s, side2))
    if r is None or not _inside(r):
        return None
    return (p, q, r, s)


@_rejection
def sample_bolyai_givens(rng):
    t1 = rng.uniform(0.0, 2 * math.pi)
    t2 = t1 + rng.uniform(0.0, 2 * math.pi)
    if math.cos(0.5 * (t2 - t1)) ** 2 > 0.8 ** 2:
        return None
    a = kl.HChord(kl.IdealPoint.at_angle(t1), kl.IdealPoint.at_angle(t2))
    p = _disk_point(rng)
    if a.contains(p, 1e-6):
        return None
    q = kl.h_foot(p, a)
    if kl.h_distance(p, q) < 0.05:
        return None
    u = rng.uniform(0.02, 0.98)
    r = kl.HPoint(a.i1.x + u * (a.i2.x - a.i1.x), a.i1.y + u * (a.i2.y - a.i1.y))
    if not _inside(r) or kl.h_distance(q, r) < 0.05:
        return None
    return (a, p, r)


# -- trial harness ----------------------------------------------------------

def _trial_i27_i29(rng, tol):
    return _alternate_margin(sample_transversal(rng), tol)


def _trial_fp(rng, tol):
    return _fp_margin(sample_fp_scene(rng), tol)


def _trial_i30(rng, tol):
    return _transitivity_margin(*sample_parallel_triple(rng), eu.Tolerance(degenerate=tol))


def _trial_angle_sum(rng, tol):
    defect = check_hyperbolic_angle_sum(*sample_triangle(rng))
    return defect > tol, defect - tol


def _trial_lambert(rng, tol):
    return _lambert_margin(*sample_lambert(rng), tol)


def _trial_px_qr(rng, tol):
    return _px_qr_margin(hypothesis_scene(*sample_bolyai_givens(rng)), tol)


def _trial_bolyai(rng, tol):
    return _bolyai_margin(*sample_bolyai_givens(rng), tol)


@dataclass(frozen=True)
class Proposition:
    trial: Callable
    tolerance: float
    summary: str


PROPOSITIONS = {
    "i27_i29": Proposition(_trial_i27_i29, 1e-9, "equal alternate angles iff parallel"),
    "fp": Proposition(_trial_fp, 1e-9, "lines meet on the side of the deficient angle sum"),
    "i30": Proposition(_trial_i30, 1e-12, "parallelism is transitive"),
    "4.1": Proposition(_trial_angle_sum, 1e-9, "hyperbolic triangles have angle sum below pi"),
    "4.2": Proposition(_trial_lambert, 1e-9, "fourth angle of a Lambert quadrilateral is acute"),
    "4.3": Proposition(_trial_px_qr, 1e-7, "limiting ray meets RS at X with PX = QR"),
    "bolyai": Proposition(_trial_bolyai, kl.ENDPOINT_TOL, "Bolyai's construction yields the limiting parallel"),
}


@dataclass(frozen=True)
class TrialConfig:
    proposition: str
    trials: int
    seed: int = 0
    tolerance: Optional[float] = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trial count must be at least 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class VerificationReport:
    proposition: str
    trials: int
    failures: int
    invalid_samples: int
    worst_margin: float
    seed: int
    elapsed: float = field(default=0.0, compare=False)
    margins: tuple = field(default=(), compare=False, repr=False)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_text(self) -> str:
        return (f"proposition: {self.proposition}\n"
                f"trials: {self.trials}\n"
                f"failures: {self.failures}\n"
                f"invalid_samples: {self.invalid_samples}\n"
                f"worst_margin: {self.worst_margin!r}\n"
                f"seed: {self.seed}\n")


def trial_rng(seed: int, index: int, attempt: int = 0) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index, attempt)))


_INVALID = (PreconditionUnmet, Inconclusive, NotATransversal, NotLambert, DegenerateTriangle, DegenerateScene)


def run_one(prop: Proposition, seed: int, index: int, tol: float):
    """Outcome of trial ``index``: ``(passed, margin, invalid_draws)``."""
    invalid = 0
    for attempt in range(MAX_ATTEMPTS):
        try:
            passed, margin = prop.trial(trial_rng(seed, index, attempt), tol)
        except _INVALID:
            invalid += 1
            continue
        except GeometryError:
            return False, -math.inf, invalid
        return passed, margin, invalid
    raise RuntimeError(f"trial {index} never produced a valid scene")  # pragma: no cover


def run_trials(cfg: TrialConfig) -> VerificationReport:
    try:
        prop = PROPOSITIONS[cfg.proposition]
    except KeyError:
        raise UnknownProposition(cfg.proposition) from None
    tol = prop.tolerance if cfg.tolerance is None else cfg.tolerance
    start = time.perf_counter()
    outcomes = [run_one(prop, cfg.seed, i, tol) for i in range(cfg.trials)]
    margins = tuple(m for _, m, _ in outcomes)
    return VerificationReport(
        proposition=cfg.proposition,
        trials=cfg.trials,
        failures=sum(1 for ok, _, _ in outcomes if not ok),
        invalid_samples=sum(n for _, _, n in outcomes),
        worst_margin=min(margins),
        seed=cfg.seed,
        elapsed=time.perf_counter() - start,
        margins=margins,
    )
