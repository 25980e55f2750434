"""Construction programs: ordered primitive steps run against one of the kernels.

A program names its givens, then lists steps; each step applies one
primitive to earlier objects and may carry an assertion.  Every reference is
checked when the program is built, so a step can only use what has already
been constructed.  :func:`run_program` produces a :class:`Trace` that records
every input and output, which makes a trace replayable and self-certifying.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import euclid as eu
from . import klein as kl
from .errors import (AssertionFailed, DegenerateInput, DegenerateScene, GeometryError,
                     KindMismatch, PointOnLine, StepFailed, UnresolvedReference)
from .scenes import Scene, format_object, kind_of

ASSERT_TOL = 1e-9


@dataclass(frozen=True)
class Check:
    predicate: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class ConstructionStep:
    op: str
    inputs: tuple[str, ...] = ()
    outputs: tuple[str, ...] = ()
    check: Optional[Check] = None


@dataclass(frozen=True)
class Op:
    func: Callable
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]


@dataclass(frozen=True)
class Predicate:
    func: Callable[..., bool]
    kinds: tuple[str, ...]
    error: type = AssertionFailed


# -- euclidean vocabulary ---------------------------------------------------

def _meet_lines(l1, l2):
    meet = eu.intersect_lines(l1, l2)
    if meet.point is None:
        raise DegenerateInput("lines do not meet")
    return meet.point


def _two(points):
    if not points:
        raise DegenerateInput("no intersection")
    return (points[0], points[-1])


def _meet_ray_circle(ray, circle):
    """The crossing of the ray's line with the circle that lies furthest along the ray."""
    pts = eu.intersect_line_circle(ray.line(), circle)
    if not pts:
        raise DegenerateInput("ray misses circle")
    return max(pts, key=lambda p: p.x * ray.direction[0] + p.y * ray.direction[1])


def _turn(o, p, q):
    return (p.x - o.x) * (q.y - o.y) - (p.y - o.y) * (q.x - o.x)


def _orient_like(x1, x2, o, a2, v, a, b):
    """Whichever candidate turns from O->A2 the same way B turns from V->A."""
    want = _turn(v, a, b) >= 0
    return x1 if (_turn(o, a2, x1) >= 0) == want else x2


EUCLIDEAN_OPS = {
    "line_through": Op(eu.line_through, ("point", "point"), ("line",)),
    "circle_from": Op(eu.circle_from, ("point", "point"), ("circle",)),
    "circle_transfer": Op(lambda c, p, q: eu.circle_from(c, eu.EuPoint(c.x + q.x - p.x, c.y + q.y - p.y)),
                          ("point", "point", "point"), ("circle",)),
    "foot": Op(eu.foot, ("point", "line"), ("point",)),
    "ray_through": Op(eu.EuRay.through, ("point", "point"), ("ray",)),
    "line_of_ray": Op(lambda r: r.line(), ("ray",), ("line",)),
    "meet_lines": Op(_meet_lines, ("line", "line"), ("point",)),
    "meet_line_circle": Op(lambda l, c: _two(eu.intersect_line_circle(l, c)), ("line", "circle"), ("point", "point")),
    "meet_ray_circle": Op(_meet_ray_circle, ("ray", "circle"), ("point",)),
    "meet_circles": Op(lambda c1, c2: _two(eu.intersect_circles(c1, c2)), ("circle", "circle"), ("point", "point")),
    "orient_like": Op(_orient_like, ("point",) * 7, ("point",)),
}


def _nonzero_angle(a, v, b):
    if eu.angle_at(a, v, b) <= ASSERT_TOL:
        raise DegenerateInput("cannot copy a zero angle")
    return True


def _alternate_equal(b, a, c):
    first, second = eu.alternate_angles(b, a, c)
    return abs(first - second) <= ASSERT_TOL


EUCLIDEAN_PREDICATES = {
    "off_line": Predicate(lambda p, l: abs(l.signed_distance(p)) > ASSERT_TOL, ("point", "line"), PointOnLine),
    "on_ray_line": Predicate(lambda p, r: abs(r.line().signed_distance(p)) <= ASSERT_TOL, ("point", "ray")),
    "nonzero_angle": Predicate(_nonzero_angle, ("point",) * 3),
    "angle_equal": Predicate(lambda p, o, q, a, v, b: abs(eu.angle_at(p, o, q) - eu.angle_at(a, v, b)) <= ASSERT_TOL,
                             ("point",) * 6),
    "alternate_equal": Predicate(_alternate_equal, ("line",) * 3),
    "parallel": Predicate(eu.is_parallel, ("line", "line")),
}


# -- klein vocabulary -------------------------------------------------------

def _meet_chords(c1, c2):
    p = kl.intersect_chords(c1, c2)
    if p is None:
        raise DegenerateInput("chords do not meet inside the disk")
    return p


def _ecp_hypothesis(p, s, r, radius):
    # S inside and R outside the circle (P, radius)
    return kl.h_distance(p, s) < radius - ASSERT_TOL and radius < kl.h_distance(p, r) - ASSERT_TOL


KLEIN_OPS = {
    "h_line_through": Op(kl.h_line_through, ("point", "point"), ("chord",)),
    "h_perpendicular": Op(kl.h_perpendicular, ("point", "chord"), ("chord",)),
    "meet_chords": Op(_meet_chords, ("chord", "chord"), ("point",)),
    "h_distance": Op(kl.h_distance, ("point", "point"), ("length",)),
    "segment": Op(kl.HSegment, ("point", "point"), ("segment",)),
    "solve_circle_segment": Op(kl.solve_circle_segment, ("point", "length", "segment"), ("point",)),
    "h_ray_through": Op(kl.HRay.through, ("point", "point"), ("ray",)),
}

KLEIN_PREDICATES = {
    "off_chord": Predicate(lambda p, c: not c.contains(p, ASSERT_TOL), ("point", "chord"), DegenerateScene),
    "on_chord": Predicate(lambda p, c: c.contains(p, ASSERT_TOL), ("point", "chord"), DegenerateScene),
    "distinct": Predicate(lambda p, q: math.hypot(p.x - q.x, p.y - q.y) > ASSERT_TOL, ("point", "point"),
                          DegenerateScene),
    "ecp_hypothesis": Predicate(_ecp_hypothesis, ("point", "point", "point", "length")),
    "limiting_parallel": Predicate(kl.is_limiting_parallel, ("ray", "chord")),
}

VOCABULARY = {
    "euclidean": (EUCLIDEAN_OPS, EUCLIDEAN_PREDICATES),
    "klein": (KLEIN_OPS, KLEIN_PREDICATES),
}


@dataclass(frozen=True)
class ConstructionProgram:
    name: str
    model: str
    givens: tuple[tuple[str, str], ...]
    steps: tuple[ConstructionStep, ...]
    result: Optional[str] = None

    def __post_init__(self):
        ops, predicates = VOCABULARY[self.model]
        known = {}
        for name, kind in self.givens:
            if name in known:
                raise UnresolvedReference(f"given {name!r} declared twice")
            known[name] = kind
        for index, step in enumerate(self.steps):
            where = f"{self.name} step {index}"
            if step.op == "check":
                if step.inputs or step.outputs or step.check is None:
                    raise KindMismatch(f"{where}: a check step takes no inputs or outputs")
            else:
                if step.op not in ops:
                    raise UnresolvedReference(f"{where}: unknown operation {step.op!r}")
                op_def = ops[step.op]
                self._expect(where, step.inputs, op_def.inputs, known)
                if len(step.outputs) != len(op_def.outputs):
                    raise KindMismatch(f"{where}: {step.op} yields {len(op_def.outputs)} objects")
                for name, kind in zip(step.outputs, op_def.outputs):
                    if name in known:
                        raise UnresolvedReference(f"{where}: {name!r} is already defined")
                    known[name] = kind
            if step.check is not None:
                if step.check.predicate not in predicates:
                    raise UnresolvedReference(f"{where}: unknown predicate {step.check.predicate!r}")
                self._expect(where, step.check.args, predicates[step.check.predicate].kinds, known)
        if self.result is not None and self.result not in known:
            raise UnresolvedReference(f"{self.name}: result {self.result!r} is never constructed")

    @staticmethod
    def _expect(where, names, kinds, known):
        if len(names) != len(kinds):
            raise KindMismatch(f"{where}: expected {len(kinds)} arguments, got {len(names)}")
        for name, kind in zip(names, kinds):
            if name not in known:
                raise UnresolvedReference(f"{where}: {name!r} is not constructed yet")
            if known[name] != kind:
                raise KindMismatch(f"{where}: {name!r} is a {known[name]}, expected a {kind}")


@dataclass(frozen=True)
class StepRecord:
    index: int
    op: str
    inputs: tuple[tuple[str, object], ...]
    outputs: tuple[tuple[str, object], ...]
    check: Optional[Check] = None
    check_passed: Optional[bool] = None


@dataclass(frozen=True)
class Trace:
    program: str
    model: str
    givens: Scene
    records: tuple[StepRecord, ...]
    result: Optional[str]
    failure: Optional[GeometryError] = None
    objects: dict = field(default_factory=dict, compare=False)

    @property
    def ok(self) -> bool:
        return self.failure is None

    @property
    def step_count(self) -> int:
        return len(self.records)

    @property
    def result_value(self):
        if self.result is None or not self.ok:
            return None
        return self.objects[self.result]

    def __getitem__(self, name):
        return self.objects[name]

    def to_text(self) -> str:
        lines = [f"program {self.program}", f"model {self.model}"]
        for name, obj in self.givens.objects.items():
            lines.append("given " + format_object(name, obj))
        for rec in self.records:
            head = f"step {rec.index} {rec.op}"
            if rec.inputs:
                head += " " + " ".join(name for name, _ in rec.inputs)
            if rec.outputs:
                head += " -> " + " ".join(name for name, _ in rec.outputs)
            lines.append(head)
            for name, obj in rec.outputs:
                lines.append("  " + format_object(name, obj))
            if rec.check is not None:
                status = {True: "pass", False: "FAIL", None: "error"}[rec.check_passed]
                lines.append(f"  assert {rec.check.predicate}({', '.join(rec.check.args)}): {status}")
        if self.failure is not None:
            lines.append(f"failure {type(self.failure).__name__}: {self.failure}")
        lines.append(f"result {self.result if self.ok and self.result else '-'}")
        lines.append(f"steps {self.step_count}")
        lines.append(f"status {'ok' if self.ok else 'failed'}")
        return "\n".join(lines) + "\n"


def run_program(program: ConstructionProgram, givens: Scene, *, strict: bool = False) -> Trace:
    """Execute ``program`` on ``givens``.

    Execution halts at the first failing step or assertion; the failure is
    recorded on the trace and, with ``strict=True``, raised.
    """
    if givens.model != program.model:
        raise KindMismatch(f"{program.name} needs a {program.model} scene, got {givens.model}")
    for name, kind in program.givens:
        if name not in givens:
            raise UnresolvedReference(f"{program.name} needs a given {kind} named {name!r}")
        if givens.kind(name) != kind:
            raise KindMismatch(f"given {name!r} is a {givens.kind(name)}, expected a {kind}")
    ops, predicates = VOCABULARY[program.model]
    env = dict(givens.objects)
    records = []
    failure = None
    for index, step in enumerate(program.steps):
        inputs = tuple((n, env[n]) for n in step.inputs)
        outputs = ()
        if step.op != "check":
            try:
                produced = ops[step.op].func(*(obj for _, obj in inputs))
            except GeometryError as exc:
                failure = StepFailed(index, step.op, exc)
                failure.__cause__ = exc
                records.append(StepRecord(index, step.op, inputs, ()))
                break
            if len(step.outputs) == 1:
                produced = (produced,)
            outputs = tuple(zip(step.outputs, produced))
            env.update(outputs)
        passed = None
        if step.check is not None:
            pred = predicates[step.check.predicate]
            try:
                passed = bool(pred.func(*(env[n] for n in step.check.args)))
            except GeometryError as exc:
                failure = exc
            else:
                if not passed:
                    failure = pred.error(f"step {index}: {step.check.predicate}"
                                         f"({', '.join(step.check.args)}) does not hold")
        records.append(StepRecord(index, step.op, inputs, outputs, step.check, passed))
        if failure is not None:
            break
    trace = Trace(program.name, program.model, givens, tuple(records), program.result, failure, env)
    if strict and failure is not None:
        raise failure
    return trace


def replay(trace: Trace) -> bool:
    """Re-run every recorded step on its recorded inputs; True iff all outputs match exactly."""
    ops, _ = VOCABULARY[trace.model]
    for rec in trace.records:
        if rec.op == "check" or not rec.outputs:
            continue
        produced = ops[rec.op].func(*(obj for _, obj in rec.inputs))
        if len(rec.outputs) == 1:
            produced = (produced,)
        if tuple(produced) != tuple(obj for _, obj in rec.outputs):
            return False
    return True


def _inline(program: ConstructionProgram, prefix: str, binding: dict) -> tuple[list, str]:
    """Copy ``program``'s steps with givens renamed by ``binding`` and internals prefixed."""
    def rename(name):
        return binding.get(name, prefix + name)

    steps = []
    for step in program.steps:
        check = step.check and Check(step.check.predicate, tuple(map(rename, step.check.args)))
        steps.append(ConstructionStep(step.op, tuple(map(rename, step.inputs)),
                                      tuple(map(rename, step.outputs)), check))
    return steps, rename(program.result)


def prog_copy_angle() -> ConstructionProgram:
    """I.23: lay off angle AVB at O, starting from ray ``r`` and turning the same way."""
    steps = (
        ConstructionStep("check", check=Check("on_ray_line", ("O", "r"))),
        ConstructionStep("check", check=Check("nonzero_angle", ("A", "V", "B"))),
        ConstructionStep("circle_from", ("V", "A"), ("kV",)),
        ConstructionStep("ray_through", ("V", "B"), ("rVB",)),
        ConstructionStep("meet_ray_circle", ("rVB", "kV"), ("B1",)),
        ConstructionStep("circle_transfer", ("O", "V", "A"), ("kO",)),
        ConstructionStep("meet_ray_circle", ("r", "kO"), ("A2",)),
        ConstructionStep("circle_transfer", ("A2", "A", "B1"), ("kA2",)),
        ConstructionStep("meet_circles", ("kO", "kA2"), ("X1", "X2")),
        ConstructionStep("orient_like", ("X1", "X2", "O", "A2", "V", "A", "B"), ("B2",)),
        ConstructionStep("ray_through", ("O", "B2"), ("result",),
                         Check("angle_equal", ("A2", "O", "B2", "A", "V", "B"))),
    )
    givens = (("r", "ray"), ("O", "point"), ("A", "point"), ("V", "point"), ("B", "point"))
    return ConstructionProgram("copy_angle", "euclidean", givens, steps, "result")


def prog_parallel_i31() -> ConstructionProgram:
    """I.31: the line a through A making equal alternate angles with b along transversal c = AD."""
    head = [
        ConstructionStep("check", check=Check("off_line", ("A", "b"))),
        ConstructionStep("foot", ("A", "b"), ("D",)),
        ConstructionStep("line_through", ("A", "D"), ("c",)),
        ConstructionStep("circle_from", ("D", "A"), ("kD",)),
        ConstructionStep("meet_line_circle", ("b", "kD"), ("E", "E_")),
        ConstructionStep("ray_through", ("A", "D"), ("rAD",)),
    ]
    # the alternate angle at A is the point reflection of angle ADE, so copying
    # it with the same turning direction lands on the far side of c
    copied, ray = _inline(prog_copy_angle(), "cp_", {"r": "rAD", "O": "A", "A": "A", "V": "D", "B": "E"})
    tail = [
        ConstructionStep("line_of_ray", (ray,), ("a",), Check("alternate_equal", ("b", "a", "c"))),
        ConstructionStep("check", check=Check("parallel", ("a", "b"))),
    ]
    return ConstructionProgram("parallel_i31", "euclidean", (("b", "line"), ("A", "point")),
                               tuple(head + copied + tail), "a")



def prog_bolyai() -> ConstructionProgram:
    """Bolyai's limiting parallel to chord ``a`` through ``P``, using ``R`` on ``a``."""
    steps = (
        ConstructionStep("check", check=Check("off_chord", ("P", "a"))),
        ConstructionStep("check", check=Check("on_chord", ("R", "a"))),
        ConstructionStep("h_perpendicular", ("P", "a"), ("PQ",)),
        ConstructionStep("meet_chords", ("PQ", "a"), ("Q",), Check("distinct", ("R", "Q"))),
        ConstructionStep("h_perpendicular", ("P", "PQ"), ("m",)),
        ConstructionStep("h_perpendicular", ("R", "m"), ("RS_line",)),
        ConstructionStep("meet_chords", ("RS_line", "m"), ("S",)),
        ConstructionStep("h_distance", ("Q", "R"), ("QR",)),
        ConstructionStep("segment", ("R", "S"), ("RS",), Check("ecp_hypothesis", ("P", "S", "R", "QR"))),
        ConstructionStep("solve_circle_segment", ("P", "QR", "RS"), ("X",)),
        ConstructionStep("h_ray_through", ("P", "X"), ("result",), Check("limiting_parallel", ("result", "a"))),
    )
    givens = (("a", "chord"), ("P", "point"), ("R", "point"))
    return ConstructionProgram("bolyai", "klein", givens, steps, "result")


PROGRAMS = {
    "copy_angle": prog_copy_angle,
    "parallel_i31": prog_parallel_i31,
    "bolyai": prog_bolyai,
}


@dataclass(frozen=True)
class BolyaiScene:
    a: kl.HChord
    P: kl.HPoint
    Q: kl.HPoint
    m: kl.HChord
    R: kl.HPoint
    S: kl.HPoint
    X: kl.HPoint
    result: kl.HRay

    @classmethod
    def from_trace(cls, trace: Trace) -> "BolyaiScene":
        if trace.program != "bolyai" or not trace.ok:
            raise ValueError("needs a successful bolyai trace")
        return cls(*(trace[name] for name in ("a", "P", "Q", "m", "R", "S", "X", "result")))


def run_bolyai(a: kl.HChord, p: kl.HPoint, r: kl.HPoint) -> BolyaiScene:
    trace = run_program(prog_bolyai(), Scene("klein", {"a": a, "P": p, "R": r}), strict=True)
    return BolyaiScene.from_trace(trace)
