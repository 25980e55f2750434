"""Closed-form cross-checks that share no code path with the Klein kernel.

These are used by the test-suite and the acceptance run to validate the
cross-ratio distance and the metric-tensor angle.
"""

import cmath
import math


def cosh_distance(a, b) -> float:
    """Distance from ``cosh d = (1 - a.b) / sqrt((1-|a|^2)(1-|b|^2))``.

    ``cosh d - 1`` is formed without cancellation, so the arccosh stays
    accurate for nearby points.
    """
    ax, ay = a
    bx, by = b
    d2 = (ax - bx) ** 2 + (ay - by) ** 2
    cross = ax * by - ay * bx
    denom = (1.0 - ax * ax - ay * ay) * (1.0 - bx * bx - by * by)
    root = math.sqrt(denom)
    delta = (d2 - cross * cross) / (root * (1.0 - (ax * bx + ay * by) + root))
    delta = max(delta, 0.0)
    # acosh(1 + delta)
    return math.log1p(delta + math.sqrt(delta * (delta + 2.0)))


def poincare_distance(p, q) -> float:
    """Poincare-disk distance ``2 artanh |p - q| / |1 - p conj(q)|``."""
    zp, zq = complex(*p), complex(*q)
    return 2.0 * math.atanh(abs(zp - zq) / abs(1.0 - zp * zq.conjugate()))


def _to_poincare(a):
    x, y = a
    s = 1.0 + math.sqrt(1.0 - x * x - y * y)
    return complex(x / s, y / s)


def poincare_angle(a, v, b) -> float:
    """Angle AVB computed conformally in the Poincare disk.

    The Mobius map sending V's image to 0 turns geodesics through V into
    diameters, so the angle is the Euclidean angle between the mapped images.
    """
    za, zv, zb = _to_poincare(a), _to_poincare(v), _to_poincare(b)

    def to_origin(z):
        return (z - zv) / (1.0 - zv.conjugate() * z)

    return abs(cmath.phase(to_origin(zb) / to_origin(za)))


def klein_radius_to_distance(r: float) -> float:
    """Distance from the origin to a Klein point at Euclidean radius r."""
    return math.atanh(r)
