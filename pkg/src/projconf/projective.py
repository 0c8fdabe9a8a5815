"""Homogeneous plane geometry: projective maps, conics and generalized circles.

Points of the affine chart are complex numbers ``z = x + iy`` standing for the
homogeneous vector ``[x, y, 1]``.  All functions accept scalars or numpy arrays
of complex points and broadcast.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Union

import numpy as np

from .errors import (
    AffineMap,
    DegenerateConfiguration,
    MapsToInfinity,
    NotACircle,
    SingularMatrix,
)

DET_TOL = 1e-12
INFINITY_TOL = 1e-12
COLLINEAR_TOL = 1e-10

# imaginary circle point K = [1, i, 0]; its conjugate is the other one
CIRCLE_POINT = np.array([1.0, 1.0j, 0.0])


def homogenize(z):
    z = np.asarray(z, dtype=complex)
    return np.stack([z.real, z.imag, np.ones(z.shape)], axis=-1)


def dehomogenize(h):
    h = np.asarray(h)
    return (h[..., 0] + 1j * h[..., 1]) / h[..., 2]


def frobenius_normalize(m):
    m = np.asarray(m, dtype=float)
    return m / np.linalg.norm(m)


@dataclass(frozen=True, eq=False)
class ProjectiveMap:
    """Invertible 3x3 real matrix acting on homogeneous coordinates.

    The matrix is kept as given; :meth:`normalized` gives the representative
    with unit Frobenius norm and positive determinant, which is what all
    scale-dependent tolerances are measured against.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (3, 3):
            raise ValueError(f"expected a 3x3 matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("matrix has non-finite entries")
        norm = np.linalg.norm(m)
        if norm == 0 or abs(np.linalg.det(m / norm)) <= DET_TOL:
            raise SingularMatrix("projective map matrix is singular")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def det_sign(self) -> int:
        return 1 if np.linalg.det(self.matrix) > 0 else -1

    def normalized(self) -> np.ndarray:
        return self.det_sign * frobenius_normalize(self.matrix)

    def inverse(self) -> "ProjectiveMap":
        return ProjectiveMap(np.linalg.inv(self.matrix))

    def __matmul__(self, other: "ProjectiveMap") -> "ProjectiveMap":
        return ProjectiveMap(self.matrix @ other.matrix)

    def is_affine(self, tol: float = DET_TOL) -> bool:
        m = frobenius_normalize(self.matrix)
        return bool(abs(m[2, 0]) <= tol and abs(m[2, 1]) <= tol)

    def __call__(self, z):
        return apply(self, z)

    def __repr__(self):
        rows = ", ".join(str(r) for r in self.matrix.tolist())
        return f"ProjectiveMap([{rows}])"


def apply(m: ProjectiveMap, z):
    """Image of the point(s) ``z`` under ``m``.

    Raises MapsToInfinity if any image lies on the line at infinity.
    """
    h = homogenize(z) @ np.asarray(m.matrix).T
    scale = np.linalg.norm(m.matrix) * np.linalg.norm(homogenize(z), axis=-1)
    if np.any(np.abs(h[..., 2]) <= INFINITY_TOL * scale):
        raise MapsToInfinity("point is mapped to the line at infinity")
    out = dehomogenize(h)
    return out[()] if out.ndim == 0 else out


def _normalizing_transform(pts):
    """Similarity sending the points to centroid 0 and RMS radius sqrt(2)."""
    c = pts.mean(axis=-1, keepdims=True)
    rms = np.sqrt(np.mean(np.abs(pts - c) ** 2, axis=-1, keepdims=True))
    return (pts - c) * (np.sqrt(2) / np.where(rms > 0, rms, 1.0))


def check_general_position(pts, tol: float = COLLINEAR_TOL):
    """Raise DegenerateConfiguration if three of the four points are collinear."""
    pts = np.asarray(pts, dtype=complex)
    h = homogenize(_normalizing_transform(pts))
    for triple in combinations(range(4), 3):
        if abs(np.linalg.det(h[list(triple)])) <= tol:
            raise DegenerateConfiguration(f"points {triple} are collinear")


def _frame(h):
    # columns lambda_i p_i with sum = p_4: sends e1, e2, e3, (1,1,1) to the points
    basis = np.swapaxes(h[..., :3, :], -1, -2)
    lam = np.linalg.solve(basis, h[..., 3, :][..., None])[..., 0]
    return basis * lam[..., None, :]


def homography_matrices(src, dst):
    """Batched 4-point homographies, no validity checks.

    ``src`` and ``dst`` are complex arrays of shape (..., 4); returns matrices
    of shape (..., 3, 3) normalized to unit Frobenius norm.
    """
    ms = _frame(homogenize(src))
    md = _frame(homogenize(dst))
    h = md @ np.linalg.inv(ms)
    return h / np.linalg.norm(h, axis=(-2, -1), keepdims=True)


def homography_from_correspondences(src, dst) -> ProjectiveMap:
    """The unique projective map sending four points ``src`` to ``dst``."""
    src = np.asarray(src, dtype=complex).reshape(4)
    dst = np.asarray(dst, dtype=complex).reshape(4)
    check_general_position(src)
    check_general_position(dst)
    return ProjectiveMap(homography_matrices(src, dst))


@dataclass(frozen=True, eq=False)
class Conic:
    """Real symmetric 3x3 matrix up to scale: the set x^T q x = 0."""

    q: np.ndarray

    def __post_init__(self):
        q = np.array(self.q, dtype=float)
        if q.shape != (3, 3):
            raise ValueError("conic matrix must be 3x3")
        if not np.allclose(q, q.T, rtol=0, atol=1e-12 * max(np.abs(q).max(), 1.0)):
            raise ValueError("conic matrix must be symmetric")
        if not np.any(q):
            raise ValueError("conic matrix must not be zero")
        q = (q + q.T) / 2
        q.setflags(write=False)
        object.__setattr__(self, "q", q)

    def normalized(self) -> np.ndarray:
        """Unit Frobenius norm, first nonzero entry positive."""
        q = frobenius_normalize(self.q)
        flat = q.ravel()
        first = flat[np.flatnonzero(np.abs(flat) > 1e-14)[0]]
        return q if first > 0 else -q

    def evaluate(self, z):
        h = homogenize(z)
        return np.einsum("...i,ij,...j->...", h, self.q, h)

    def circle_point_residual(self) -> complex:
        """K^T q K for K = [1, i, 0], on the normalized matrix."""
        q = frobenius_normalize(self.q)
        return complex(q[0, 0] - q[1, 1], 2 * q[0, 1])

    def equals(self, other: "Conic", tol: float = 1e-9) -> bool:
        return conic_distance(self, other) <= tol


def conic_distance(c1: Conic, c2: Conic) -> float:
    """Distance between conics as points of projective space."""
    a, b = frobenius_normalize(c1.q), frobenius_normalize(c2.q)
    return float(min(np.linalg.norm(a - b), np.linalg.norm(a + b)))


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("circle radius must be positive")
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))

    def points(self, n: int, phase: float = 0.0):
        theta = phase + 2 * np.pi * np.arange(n) / n
        return self.center + self.radius * np.exp(1j * theta)


@dataclass(frozen=True)
class Line:
    """The line {z : Re(conj(normal) * z) = offset} with a unit normal."""

    normal: complex
    offset: float

    def __post_init__(self):
        n = complex(self.normal)
        if abs(abs(n) - 1) > 1e-12:
            raise ValueError("line normal must have unit length")
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def from_equation(cls, a: float, b: float, c: float) -> "Line":
        """The line a*x + b*y + c = 0."""
        length = np.hypot(a, b)
        if length == 0:
            raise ValueError("not a line")
        return cls(complex(a, b) / length, -c / length)

    @property
    def foot(self) -> complex:
        """Point of the line closest to the origin."""
        return self.offset * self.normal

    def signed_distance(self, z):
        z = np.asarray(z, dtype=complex)
        return (np.conj(self.normal) * z).real - self.offset

    def points(self, n: int, spacing: float = 1.0):
        s = spacing * (np.arange(n) - (n - 1) / 2)
        return self.foot + 1j * self.normal * s


GeneralizedCircle = Union[Circle, Line]


def conic_from_circle(gc: GeneralizedCircle) -> Conic:
    if isinstance(gc, Circle):
        cx, cy, r = gc.center.real, gc.center.imag, gc.radius
        return Conic([[1.0, 0.0, -cx], [0.0, 1.0, -cy], [-cx, -cy, cx * cx + cy * cy - r * r]])
    # the line together with the line at infinity
    n = gc.normal
    return Conic([[0.0, 0.0, n.real / 2], [0.0, 0.0, n.imag / 2], [n.real / 2, n.imag / 2, -gc.offset]])


def is_circle(c: Conic, tol: float = 1e-8) -> bool:
    """True if ``c`` passes through both imaginary circle points and has real points.

    Lines (paired with the line at infinity) count as generalized circles.
    """
    if abs(c.circle_point_residual()) >= tol:
        return False
    q = frobenius_normalize(c.q)
    s = (q[0, 0] + q[1, 1]) / 2
    lin2 = q[0, 2] ** 2 + q[1, 2] ** 2
    if abs(s) < tol:
        return bool(np.sqrt(lin2) >= tol)
    # s^2 r^2 = |linear part|^2 - s q33
    return bool(lin2 - s * q[2, 2] > tol * tol)


def circle_from_conic(c: Conic, tol: float = 1e-8) -> GeneralizedCircle:
    if not is_circle(c, tol):
        raise NotACircle("conic does not pass through the circle points or has no real points")
    q = frobenius_normalize(c.q)
    s = (q[0, 0] + q[1, 1]) / 2
    if abs(s) < tol:
        return Line.from_equation(2 * q[0, 2], 2 * q[1, 2], q[2, 2])
    center = complex(-q[0, 2] / s, -q[1, 2] / s)
    r2 = abs(center) ** 2 - q[2, 2] / s
    return Circle(center, np.sqrt(r2))


def pushforward_conic(m: ProjectiveMap, c: Conic) -> Conic:
    """Image conic A^-T Q A^-1."""
    inv = np.linalg.inv(frobenius_normalize(m.matrix))
    q = inv.T @ c.q @ inv
    return Conic((q + q.T) / 2)


def preimage_of_infinity(m: ProjectiveMap) -> Line:
    """The line mapped to the line at infinity."""
    if m.is_affine():
        raise AffineMap("affine maps preserve the line at infinity")
    a, b, c = frobenius_normalize(m.matrix)[2]
    return Line.from_equation(a, b, c)


def line_through(z1: complex, z2: complex) -> Line:
    d = complex(z2) - complex(z1)
    if d == 0:
        raise DegenerateConfiguration("points coincide")
    n = 1j * d / abs(d)
    return Line(n, (np.conj(n) * complex(z1)).real)
