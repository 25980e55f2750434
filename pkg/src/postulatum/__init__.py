"""Executable models of Euclid's parallel theory and its hyperbolic alternative.

Subpackages are plain modules:

* ``euclid`` and ``klein``: geometry kernels for the Euclidean plane and the
  Beltrami-Klein disk.
* ``construct``: a straightedge-and-compass interpreter with replayable traces.
* ``verifier``: seeded randomized checks of the propositions.
* ``kgraph``: the dependency-graph checker for the constructive principles.
* ``svg`` and ``cli``: figures and the ``postulatum`` command.
"""

from .errors import GeometryError

__version__ = "0.1.0"

__all__ = ["GeometryError", "__version__"]
