"""Exception types raised by projconf."""


class ProjconfError(ValueError):
    """Base class for all library errors."""


class MapsToInfinity(ProjconfError):
    pass


class SingularMatrix(ProjconfError):
    pass


class DegenerateConfiguration(ProjconfError):
    pass


class NotACircle(ProjconfError):
    pass


class AffineMap(ProjconfError):
    """The operation needs a map that moves the line at infinity."""


# the coefficient-level name for the same condition
AffineInput = AffineMap


class NotAffine(ProjconfError):
    pass


class AlphaZero(ProjconfError):
    """Non-affine map whose Beltrami coefficient has constant modulus."""


class OnPreimageOfInfinity(ProjconfError):
    pass


class NotOrientationPreserving(ProjconfError):
    pass


OrientationViolation = NotOrientationPreserving


class InvalidTriangle(ProjconfError):
    pass


class InvalidMesh(ProjconfError):
    pass


class BoundaryEdge(ProjconfError):
    pass


class MissingPositions(ProjconfError):
    pass


class PoleTooClose(ProjconfError):
    pass


class OrientationFlip(ProjconfError):
    pass


class DependentDirections(ProjconfError):
    pass


class OutsideMesh(ProjconfError):
    pass
