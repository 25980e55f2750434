"""Exception hierarchy shared by the kernels, the interpreter and the verifier."""


class GeometryError(Exception):
    """Base class for every error raised by postulatum."""


class DegenerateInput(GeometryError):
    pass


class CoincidentCircles(GeometryError):
    pass


class NotATransversal(GeometryError):
    pass


class NoSignChange(GeometryError):
    """Segment endpoints are not on opposite sides of the circle."""


class DegenerateScene(GeometryError):
    pass


class DegenerateTriangle(GeometryError):
    pass


class NotLambert(GeometryError):
    pass


class PreconditionUnmet(GeometryError):
    pass


class Inconclusive(GeometryError):
    """The check's hypothesis sits inside the tolerance band."""


class UnknownProposition(GeometryError, KeyError):
    pass


# construction programs

class ProgramError(GeometryError):
    pass


class UnresolvedReference(ProgramError):
    pass


class KindMismatch(ProgramError):
    pass


class StepFailed(ProgramError):
    """A kernel error raised while executing a step; the original is ``__cause__``."""

    def __init__(self, index, op, cause):
        super().__init__(f"step {index} ({op}) failed: {type(cause).__name__}: {cause}")
        self.index = index
        self.op = op
        self.cause = cause


class AssertionFailed(ProgramError):
    pass


class PointOnLine(AssertionFailed):
    pass


class SceneFormatError(GeometryError):
    def __init__(self, lineno, reason):
        super().__init__(f"line {lineno}: {reason}")
        self.lineno = lineno
        self.reason = reason


class EmptyScene(GeometryError):
    pass
