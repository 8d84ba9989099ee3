"""Exception hierarchy shared by all hopf4d modules.

Every math-domain failure derives from ``Hopf4dError`` so the CLI and the
scene service can map the whole family to one exit code / HTTP status while
still reporting the concrete error name.
"""

from __future__ import annotations


class Hopf4dError(Exception):
    """Base class for all domain errors raised by hopf4d."""


# geometry-core
class NotOnSphere(Hopf4dError):
    """Input point is not on the expected unit sphere."""


class BadSampleCount(Hopf4dError):
    """Too few samples requested for a curve."""


# projection
class AtProjectionCenter(Hopf4dError):
    """Point coincides with the stereographic projection center N."""


class SingularDenominator(Hopf4dError):
    """Closed-form stereographic denominator vanishes (image at infinity)."""


class PassesThroughCenter(Hopf4dError):
    """A latitude sphere passes through N; its stereographic image is a plane."""


# surfaces
class DegenerateTorus(Hopf4dError):
    """Torus collapsed to a single fiber circle (psi at a pole)."""


class BadCount(Hopf4dError):
    """Invalid family member count."""


class DisconnectedArcs(Hopf4dError):
    """Arc chain endpoints do not meet within tolerance."""


# arrangements
class UnknownKind(Hopf4dError):
    """Unknown polyhedron kind."""


class BadPhaseCount(Hopf4dError):
    """Phase count for a constellation must be >= 1."""


class RadiusTooLarge(Hopf4dError):
    """Disk radius would make neighboring disks overlap."""


# analysis
class CollinearInput(Hopf4dError):
    """Circle fit requires non-collinear points."""


class CurvesTooClose(Hopf4dError):
    """Curves are too close for a reliable linking integral."""


class DimensionMismatch(Hopf4dError):
    """Operands live in spaces of different dimensions."""


class DegenerateInput(Hopf4dError):
    """Input set is degenerate for the requested fit."""


# scene-io
class ParseError(Hopf4dError):
    """Scene document could not be parsed."""


class UnknownVersion(Hopf4dError):
    """Scene document version is not recognized."""


class EmptySelection(Hopf4dError):
    """Export filter matched no exportable object."""


class UnknownRequest(Hopf4dError):
    """Scene build request kind is not recognized."""
