"""Named collections of geometric objects and their line-oriented text format.

One object per line::

    model klein
    chord a -1 0 1 0        # ideal endpoints
    point P 0 0.5
    line b 0 1 0            # euclidean: nx ny d
    ray r 0 0 1 0           # euclidean: origin + direction; klein: origin + ideal point

``circle``, ``segment`` and ``length`` lines are accepted too, so that traces
can be written in the same vocabulary.  Blank lines and ``#`` comments are
ignored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from .errors import GeometryError, KindMismatch, SceneFormatError
from .euclid import EuCircle, EuLine, EuPoint, EuRay, EuSegment
from .klein import HChord, HPoint, HRay, HSegment, IdealPoint

MODELS = ("euclidean", "klein")

_KINDS = {
    "euclidean": {EuPoint: "point", EuLine: "line", EuCircle: "circle", EuRay: "ray",
                  EuSegment: "segment", float: "length"},
    "klein": {HPoint: "point", HChord: "chord", HRay: "ray", HSegment: "segment", float: "length"},
}


def kind_of(obj, model: str) -> str:
    try:
        return _KINDS[model][type(obj)]
    except KeyError:
        raise KindMismatch(f"{type(obj).__name__} does not belong to the {model} model") from None


@dataclass(frozen=True)
class Scene:
    model: str
    objects: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.model not in MODELS:
            raise KindMismatch(f"unknown model {self.model!r}")
        objects = dict(self.objects)
        for obj in objects.values():
            kind_of(obj, self.model)
        object.__setattr__(self, "objects", MappingProxyType(objects))

    def __getitem__(self, name):
        return self.objects[name]

    def __contains__(self, name):
        return name in self.objects

    def __len__(self):
        return len(self.objects)

    def kind(self, name: str) -> str:
        return kind_of(self.objects[name], self.model)

    def with_objects(self, **named) -> "Scene":
        merged = dict(self.objects)
        merged.update(named)
        return Scene(self.model, merged)


def _floats(words, count, lineno):
    if len(words) != count:
        raise SceneFormatError(lineno, f"expected {count} numbers, got {len(words)}")
    try:
        values = [float(w) for w in words]
    except ValueError as exc:
        raise SceneFormatError(lineno, str(exc)) from None
    if not all(math.isfinite(v) for v in values):
        raise SceneFormatError(lineno, "non-finite number")
    return values


def _build(model, directive, nums):
    if model == "euclidean":
        if directive == "point":
            return EuPoint(*nums)
        if directive == "line":
            return EuLine.from_normal(*nums)
        if directive == "circle":
            return EuCircle(EuPoint(nums[0], nums[1]), nums[2])
        if directive == "ray":
            n = math.hypot(nums[2], nums[3])
            return EuRay(EuPoint(nums[0], nums[1]), (nums[2] / n, nums[3] / n))
        if directive == "segment":
            return EuSegment(EuPoint(nums[0], nums[1]), EuPoint(nums[2], nums[3]))
    else:
        if directive == "point":
            return HPoint(*nums)
        if directive == "chord":
            return HChord(IdealPoint(nums[0], nums[1]), IdealPoint(nums[2], nums[3]))
        if directive == "ray":
            return HRay(HPoint(nums[0], nums[1]), IdealPoint(nums[2], nums[3]))
        if directive == "segment":
            return HSegment(HPoint(nums[0], nums[1]), HPoint(nums[2], nums[3]))
    if directive == "length":
        return nums[0]
    raise KindMismatch(f"{directive} is not available in the {model} model")


_ARITY = {"point": 2, "line": 3, "circle": 3, "ray": 4, "segment": 4, "chord": 4, "length": 1}


def parse_scene(text: str) -> Scene:
    model = None
    pending = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        directive = words[0]
        if directive == "model":
            if len(words) != 2 or words[1] not in MODELS:
                raise SceneFormatError(lineno, "model must be 'euclidean' or 'klein'")
            if model is not None and model != words[1]:
                raise SceneFormatError(lineno, "conflicting model declarations")
            model = words[1]
            continue
        if directive not in _ARITY:
            raise SceneFormatError(lineno, f"unknown directive {directive!r}")
        if len(words) < 2:
            raise SceneFormatError(lineno, "missing object name")
        pending.append((lineno, directive, words[1], _floats(words[2:], _ARITY[directive], lineno)))
    if model is None:
        model = "euclidean"
    objects = {}
    for lineno, directive, name, nums in pending:
        if name in objects:
            raise SceneFormatError(lineno, f"duplicate name {name!r}")
        try:
            objects[name] = _build(model, directive, nums)
        except GeometryError as exc:
            raise SceneFormatError(lineno, str(exc)) from None
    return Scene(model, objects)


def format_object(name: str, obj) -> str:
    """One scene-format line for ``obj``; floats use repr so the text round-trips exactly."""
    r = repr
    if isinstance(obj, (EuPoint, HPoint)):
        return f"point {name} {r(obj.x)} {r(obj.y)}"
    if isinstance(obj, EuLine):
        return f"line {name} {r(obj.normal[0])} {r(obj.normal[1])} {r(obj.offset)}"
    if isinstance(obj, EuCircle):
        return f"circle {name} {r(obj.center.x)} {r(obj.center.y)} {r(obj.radius)}"
    if isinstance(obj, EuRay):
        return f"ray {name} {r(obj.origin.x)} {r(obj.origin.y)} {r(obj.direction[0])} {r(obj.direction[1])}"
    if isinstance(obj, HRay):
        return f"ray {name} {r(obj.origin.x)} {r(obj.origin.y)} {r(obj.toward.x)} {r(obj.toward.y)}"
    if isinstance(obj, (EuSegment, HSegment)):
        s, e = obj.start, obj.end
        return f"segment {name} {r(s.x)} {r(s.y)} {r(e.x)} {r(e.y)}"
    if isinstance(obj, HChord):
        return f"chord {name} {r(obj.i1.x)} {r(obj.i1.y)} {r(obj.i2.x)} {r(obj.i2.y)}"
    if isinstance(obj, float):
        return f"length {name} {r(obj)}"
    raise KindMismatch(f"cannot format {type(obj).__name__}")


def format_scene(scene: Scene) -> str:
    lines = [f"model {scene.model}"]
    lines += [format_object(name, obj) for name, obj in scene.objects.items()]
    return "\n".join(lines) + "\n"
