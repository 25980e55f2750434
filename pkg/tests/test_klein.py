import math

import pytest

from postulatum import oracles
from postulatum.errors import DegenerateInput, NoSignChange
from postulatum.euclid import EuPoint
from postulatum.klein import (
    HChord, HPoint, HRay, HSegment, IdealPoint, h_angle_at, h_distance, h_foot, h_line_through,
    h_perpendicular, intersect_chords, is_limiting_parallel, klein_to_poincare, pole_of,
    poincare_to_klein, solve_circle_segment,
)

H = HPoint
I = IdealPoint
R75 = math.sqrt(0.75)
DIAMETER = HChord(I(-1, 0), I(1, 0))
UPPER = HChord(I(-R75, 0.5), I(R75, 0.5))

# frozen at build time from the arccosh and Poincare oracles (see test_oracles_agree_on_frozen_values)
HALF_LN3 = 0.5493061443340549
ATANH_06 = 0.6931471805599453


def test_frozen_values_match_closed_forms():
    assert HALF_LN3 == pytest.approx(0.5 * math.log(3), abs=1e-16)
    assert ATANH_06 == pytest.approx(math.log(2), abs=1e-16)


def test_points_reject_boundary():
    with pytest.raises(DegenerateInput):
        H(1.0, 0.0)
    with pytest.raises(DegenerateInput):
        I(0.5, 0.0)


def test_line_through_centre_is_diameter():
    chord = h_line_through(H(0, 0), H(0.5, 0))
    assert chord.endpoints == (I(-1, 0), I(1, 0))


def test_line_through_horizontal_chord():
    chord = h_line_through(H(0, 0.5), H(0.5, 0.5))
    (a, b) = chord.endpoints
    assert (a.x, a.y) == pytest.approx((-R75, 0.5), abs=1e-15)
    assert (b.x, b.y) == pytest.approx((R75, 0.5), abs=1e-15)


def test_line_through_coincident():
    with pytest.raises(DegenerateInput):
        h_line_through(H(0.1, 0.2), H(0.1, 0.2))


def test_distance_zero():
    assert h_distance(H(0, 0), H(0, 0)) == 0.0


def test_distance_half_ln3():
    assert h_distance(H(0, 0), H(0.5, 0)) == pytest.approx(HALF_LN3, abs=1e-15)


def test_oracles_agree_on_frozen_values():
    assert oracles.cosh_distance(H(0, 0), H(0.5, 0)) == pytest.approx(HALF_LN3, abs=1e-15)
    p = klein_to_poincare(H(0.5, 0))
    assert oracles.poincare_distance((0, 0), p) == pytest.approx(HALF_LN3, abs=1e-15)
    assert oracles.klein_radius_to_distance(0.6) == pytest.approx(ATANH_06, abs=1e-15)


@pytest.mark.parametrize("b, expected", [(H(0, 0.5), math.pi / 2), (H(0.5, 0.5), math.pi / 4)])
def test_angle_at_centre_is_euclidean(b, expected):
    assert h_angle_at(H(0.5, 0), H(0, 0), b) == pytest.approx(expected, abs=1e-15)


def test_angle_off_centre_differs_from_euclidean():
    # Klein angles are not conformal away from the centre
    a, v, b = H(0.9, 0.0), H(0.5, 0.0), H(0.5, 0.3)
    assert h_angle_at(a, v, b) == pytest.approx(math.pi / 2, abs=1e-12)
    a, v, b = H(0.5, 0.3), H(0.5, 0.0), H(0.8, 0.3)
    assert abs(h_angle_at(a, v, b) - math.pi / 4) > 1e-2
    assert h_angle_at(a, v, b) == pytest.approx(oracles.poincare_angle(a, v, b), abs=1e-12)


def test_pole_of_quarter_chord():
    pole = pole_of(HChord(I(1, 0), I(0, 1)))
    assert pole.direction is None
    assert (pole.point.x, pole.point.y) == pytest.approx((1, 1), abs=1e-15)


def test_pole_of_horizontal_chord():
    pole = pole_of(UPPER)
    assert (pole.point.x, pole.point.y) == pytest.approx((0, 2), abs=1e-14)


def test_pole_of_diameter_is_a_direction():
    pole = pole_of(DIAMETER)
    assert pole.point is None
    assert pole.direction == (0.0, 1.0)


def test_perpendicular_to_diameter():
    chord = h_perpendicular(H(0, 0.5), DIAMETER)
    assert [(e.x, e.y) for e in chord.endpoints] == [pytest.approx((0, -1)), pytest.approx((0, 1))]


def test_perpendicular_through_pole():
    chord = h_perpendicular(H(0.6, 0), UPPER)
    line = chord.euclidean_line()
    assert line.signed_distance(EuPoint(0.6, 0)) == pytest.approx(0, abs=1e-14)
    assert line.signed_distance(EuPoint(0, 2)) == pytest.approx(0, abs=1e-14)
    assert h_angle_at(H(0.6, 0), h_foot(H(0.6, 0), UPPER), H(0.8, 0.5)) == pytest.approx(math.pi / 2, abs=1e-9)


def test_intersect_diameters():
    assert intersect_chords(DIAMETER, HChord(I(0, -1), I(0, 1))) == H(0, 0)


def test_intersect_disjoint_chords():
    assert intersect_chords(UPPER, DIAMETER) is None


def test_chords_sharing_an_endpoint_do_not_meet():
    assert intersect_chords(DIAMETER, HChord(I(1, 0), I(0, 1))) is None


def test_solve_circle_segment():
    x = solve_circle_segment(H(0, 0), HALF_LN3, HSegment(H(0.2, 0), H(0.9, 0)))
    assert (x.x, x.y) == pytest.approx((0.5, 0), abs=1e-12)


def test_solve_circle_segment_orientation_free():
    seg = HSegment(H(0.2, 0.1), H(-0.7, 0.6))
    centre, r = H(0.1, 0.0), 0.8
    x1 = solve_circle_segment(centre, r, seg)
    x2 = solve_circle_segment(centre, r, HSegment(seg.end, seg.start))
    assert math.hypot(x1.x - x2.x, x1.y - x2.y) <= 1e-10
    assert h_distance(centre, x1) == pytest.approx(r, abs=1e-10)


def test_solve_circle_segment_without_sign_change():
    with pytest.raises(NoSignChange):
        solve_circle_segment(H(0, 0), HALF_LN3, HSegment(H(0.1, 0), H(0.2, 0)))


def test_limiting_parallel_shared_endpoint():
    assert is_limiting_parallel(HRay(H(0, 0.5), I(1, 0)), DIAMETER)


def test_crossing_ray_is_not_limiting():
    assert not is_limiting_parallel(HRay(H(0, 0.5), I(0, -1)), DIAMETER)


def test_ultraparallel_ray_is_not_limiting():
    assert not is_limiting_parallel(HRay(H(0, 0.5), I(0, 1)), DIAMETER)


def test_klein_to_poincare():
    assert klein_to_poincare(H(0, 0)) == (0.0, 0.0)
    x, y = klein_to_poincare(H(0.5, 0))
    assert x == pytest.approx(0.5 / (1 + R75), abs=1e-16) and y == 0.0
    assert x == pytest.approx(0.2679491924311227, abs=1e-15)


def test_poincare_round_trip():
    p = H(-0.31, 0.72)
    back = poincare_to_klein(klein_to_poincare(p))
    assert (back.x, back.y) == pytest.approx((p.x, p.y), abs=1e-15)


def test_ray_through_points_at_far_end():
    ray = HRay.through(H(0, 0), H(0.5, 0))
    assert ray.toward == I(1, 0)
