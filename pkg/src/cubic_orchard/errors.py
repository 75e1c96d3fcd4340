"""Exception hierarchy shared by every layer of the package."""


class GeometryError(ValueError):
    """Base class for all domain errors raised by cubic_orchard."""


class UndefinedGcdError(GeometryError):
    pass


class NotARootError(GeometryError):
    pass


class DegenerateError(GeometryError):
    """Coincident points, collinear spans, zero vectors and the like."""


class NotOnSurfaceError(GeometryError):
    pass


class ContainedLineError(GeometryError):
    """The line through the given points lies inside the surface or curve."""


class SingularPointError(GeometryError):
    pass


class DegenerateSurfaceError(GeometryError):
    pass


class PlaneInSurfaceError(GeometryError):
    pass


class NotOnCurveError(GeometryError):
    pass


class ExcludedCurveError(GeometryError):
    """Pushforward of the tangent-plane curve, which is contracted to a point."""


class IsotropicCenterError(GeometryError):
    pass


class ChartError(GeometryError):
    pass


class SizeGuardError(GeometryError):
    pass


class WellDefinednessError(GeometryError):
    pass


class GoodnessError(GeometryError):
    pass


class ScanRefusedError(GeometryError):
    pass


class FixtureError(GeometryError):
    pass
