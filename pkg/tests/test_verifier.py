import math
from pathlib import Path

import pytest

from postulatum import oracles
from postulatum.construct import run_bolyai
from postulatum.errors import DegenerateScene, Inconclusive, NotLambert, PreconditionUnmet, UnknownProposition
from postulatum.euclid import EuLine
from postulatum.klein import HChord, HPoint, HRay, IdealPoint, is_limiting_parallel
from postulatum.verifier import (
    PROPOSITIONS, TransversalScene, TrialConfig, bolyai_agreement, check_alternate_angle_criterion,
    check_bolyai, check_fp_meeting_side, check_hyperbolic_angle_sum, check_lambert, check_limiting_angle,
    check_parallel_transitivity, check_px_equals_qr, hypothesis_scene, run_trials, sample_bolyai_givens, sample_lambert, trial_rng,
)

GOLDEN = Path(__file__).parent / "golden"
DIAMETER = HChord(IdealPoint(-1, 0), IdealPoint(1, 0))


def line(m, k):
    """y = m x + k"""
    return EuLine.from_normal(-m, 1, k)


def vertical(x):
    return EuLine.from_normal(1, 0, x)


def law_of_cosines_defect(a, b, c):
    # side lengths from the closed-form distance, angles from the hyperbolic law of cosines
    ab, bc, ca = oracles.cosh_distance(a, b), oracles.cosh_distance(b, c), oracles.cosh_distance(c, a)

    def angle(opposite, s1, s2):
        return math.acos((math.cosh(s1) * math.cosh(s2) - math.cosh(opposite)) / (math.sinh(s1) * math.sinh(s2)))

    return math.pi - angle(bc, ab, ca) - angle(ca, ab, bc) - angle(ab, bc, ca)


def test_alternate_criterion_parallel():
    assert check_alternate_angle_criterion(TransversalScene(line(0, 1), line(0, 0), line(1, 0)))


def test_alternate_criterion_crossing():
    assert check_alternate_angle_criterion(TransversalScene(line(1, 1), line(0, 0), vertical(0)))


def test_fp_meeting_side():
    assert check_fp_meeting_side(TransversalScene(line(-0.1, 1), line(0, 0), vertical(0)))


def test_fp_parallel_is_inconclusive():
    with pytest.raises(Inconclusive):
        check_fp_meeting_side(TransversalScene(line(0, 1), line(0, 0), vertical(0)))


def test_parallel_transitivity():
    assert check_parallel_transitivity(line(0, 0), line(0, 1), line(0, 2))


def test_parallel_transitivity_needs_distinct_lines():
    with pytest.raises(PreconditionUnmet):
        check_parallel_transitivity(line(0, 0), line(0, 1), line(0, 0))


def test_angle_sum_against_law_of_cosines():
    a, b, c = HPoint(0, 0), HPoint(0.5, 0), HPoint(0, 0.5)
    defect = check_hyperbolic_angle_sum(a, b, c)
    assert defect > 0
    assert defect == pytest.approx(law_of_cosines_defect(a, b, c), abs=1e-12)


def test_small_triangle_is_nearly_euclidean():
    defect = check_hyperbolic_angle_sum(HPoint(0, 0), HPoint(5e-4, 0), HPoint(0, 5e-4))
    assert 0 < defect < 1e-5
    # to leading order the defect is the area
    assert defect == pytest.approx(0.5 * 5e-4 ** 2, rel=1e-3)


def test_lambert_example():
    p, q, r, s = HPoint(0, 0), HPoint(0.4, 0), HPoint(0.4, 0.3), HPoint(0, 0.3)
    assert check_lambert(p, q, r, s)


def test_lambert_degenerate():
    with pytest.raises(NotLambert):
        check_lambert(HPoint(0, 0), HPoint(0, 0), HPoint(0.4, 0.3), HPoint(0, 0.3))


def test_lambert_rejects_non_right_angles():
    with pytest.raises(NotLambert):
        check_lambert(HPoint(0, 0), HPoint(0.4, 0), HPoint(0.5, 0.3), HPoint(0, 0.3))


def test_px_equals_qr_diameter_scene():
    scene = hypothesis_scene(DIAMETER, HPoint(0, 0.5), HPoint(0.6, 0))
    assert check_px_equals_qr(scene)


def test_px_equals_qr_degenerate():
    with pytest.raises(DegenerateScene):
        hypothesis_scene(DIAMETER, HPoint(0, 0.5), HPoint(0, 0))


def test_bolyai_diameter_scene():
    assert check_bolyai(DIAMETER, HPoint(0, 0.5), HPoint(0.6, 0))
    assert bolyai_agreement(DIAMETER, HPoint(0, 0.5), HPoint(0.6, 0)) <= 1e-7


def test_bolyai_degenerate_is_not_a_failure():
    with pytest.raises(DegenerateScene):
        check_bolyai(DIAMETER, HPoint(0, 0.5), HPoint(0, 0))


def test_single_trial_report():
    report = run_trials(TrialConfig("4.1", 1, 42))
    assert report.trials == 1 and report.failures == 0


def test_reports_are_deterministic():
    cfg = TrialConfig("bolyai", 50, 7)
    assert run_trials(cfg).to_text() == run_trials(cfg).to_text()


def test_report_key_order():
    keys = [line.split(":")[0] for line in run_trials(TrialConfig("fp", 5, 1)).to_text().splitlines()]
    assert keys == ["proposition", "trials", "failures", "invalid_samples", "worst_margin", "seed"]


def test_golden_prop_4_3_report():
    report = run_trials(TrialConfig("4.3", 500, 42))
    assert report.failures == 0
    assert report.to_text() == (GOLDEN / "verify_4.3_n500_seed42.txt").read_text()


def test_trial_streams_are_order_independent():
    # trial i depends only on (seed, i): a prefix run reproduces the prefix margins
    long = run_trials(TrialConfig("4.2", 40, 3))
    short = run_trials(TrialConfig("4.2", 10, 3))
    assert short.margins == long.margins[:10]


def test_trial_rng_distinct_streams():
    draws = {float(trial_rng(5, i).uniform()) for i in range(20)}
    assert len(draws) == 20


def test_tolerance_override_can_fail():
    report = run_trials(TrialConfig("4.1", 20, 0, tolerance=10.0))
    assert report.failures == 20 and report.worst_margin < 0


def test_unknown_proposition():
    with pytest.raises(UnknownProposition):
        run_trials(TrialConfig("nope", 1))


def test_config_validation():
    with pytest.raises(ValueError):
        TrialConfig("4.1", 0)
    with pytest.raises(ValueError):
        TrialConfig("4.1", 1, seed=2 ** 64)


@pytest.mark.parametrize("prop", sorted(PROPOSITIONS))
def test_shipped_samplers_draw_no_invalid_scenes(prop):
    report = run_trials(TrialConfig(prop, 100, 11))
    assert report.failures == 0 and report.invalid_samples == 0


def test_samplers_respect_margins():
    for i in range(50):
        p, q, r, s = sample_lambert(trial_rng(9, i))
        assert all(math.hypot(v.x, v.y) <= 0.95 for v in (p, q, r, s))
        a, p, r = sample_bolyai_givens(trial_rng(9, i))
        assert a.contains(r, 1e-9) and not a.contains(p, 1e-6)


def test_limiting_angle_diameter_scene():
    scene = run_bolyai(DIAMETER, HPoint(0, 0.5), HPoint(0.6, 0))
    assert check_limiting_angle(scene.result, DIAMETER)
    # a ray that already meets a fails the angle form
    assert not check_limiting_angle(HRay(HPoint(0, 0.5), IdealPoint(0.6, -0.8)), DIAMETER)


def test_endpoint_test_agrees_with_angle_form():
    # the ideal-endpoint test used by the kernel and the angle condition agree on sampled scenes
    for i in range(200):
        a, p, r = sample_bolyai_givens(trial_rng(21, i))
        ray = run_bolyai(a, p, r).result
        assert is_limiting_parallel(ray, a) and check_limiting_angle(ray, a)
