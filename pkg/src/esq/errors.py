"""Exception hierarchy shared by every index and oracle."""


class GeometryError(ValueError):
    pass


class DegenerateInput(GeometryError):
    pass


class CollinearInput(DegenerateInput):
    pass


class IdenticalCircles(DegenerateInput):
    pass


class NotConvex(GeometryError):
    pass


class NotSimple(GeometryError):
    pass


class OutsidePolygon(GeometryError):
    pass


class OutsideRegion(GeometryError):
    pass


class PreconditionViolated(GeometryError):
    pass


class PlacementFailed(GeometryError):
    pass
