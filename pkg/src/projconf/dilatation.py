"""Beltrami coefficient, eccentricity and dilatation of projective maps.

A projective map written in the complex coordinate ``z`` reads

    z -> (a z + b conj(z) + c) / (p z + conj(p) conj(z) + q)

with complex ``a, b, c, p`` and real ``q``.  Its Beltrami coefficient is a
quotient of affine functions of ``z`` and ``conj(z)``, so the level sets of
its modulus are the Apollonius circles of two limit points.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AffineInput,
    AffineMap,
    AlphaZero,
    NotAffine,
    NotOrientationPreserving,
    OnPreimageOfInfinity,
    SingularMatrix,
)
from .projective import (
    CIRCLE_POINT,
    Circle,
    GeneralizedCircle,
    Line,
    ProjectiveMap,
    frobenius_normalize,
    homogenize,
)

AFFINE_TOL = 1e-12


@dataclass(frozen=True)
class HalfCoefficients:
    a: complex
    b: complex
    c: complex
    p: complex
    q: float

    def __post_init__(self):
        for name in "abcp":
            object.__setattr__(self, name, complex(getattr(self, name)))
        object.__setattr__(self, "q", float(self.q))

    @property
    def scale(self) -> float:
        return float(np.linalg.norm(_matrix_array(self)))

    @property
    def is_affine(self) -> bool:
        return abs(self.p) <= AFFINE_TOL * self.scale

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        num = self.a * z + self.b * np.conj(z) + self.c
        den = self.p * z + np.conj(self.p) * np.conj(z) + self.q
        return num / den


def coefficient_arrays(mats):
    """(a, b, c, p, q) for a stack of matrices of shape (..., 3, 3)."""
    m = np.asarray(mats, dtype=float)
    a = (m[..., 0, 0] + m[..., 1, 1]) / 2 + 1j * (m[..., 1, 0] - m[..., 0, 1]) / 2
    b = (m[..., 0, 0] - m[..., 1, 1]) / 2 + 1j * (m[..., 1, 0] + m[..., 0, 1]) / 2
    c = m[..., 0, 2] + 1j * m[..., 1, 2]
    p = m[..., 2, 0] / 2 - 1j * m[..., 2, 1] / 2
    q = m[..., 2, 2]
    return a, b, c, p, q


def coefficients_from_matrix(m: ProjectiveMap) -> HalfCoefficients:
    return HalfCoefficients(*(x[()] for x in coefficient_arrays(m.matrix)))


def _matrix_array(h: HalfCoefficients) -> np.ndarray:
    a, b, c, p = h.a, h.b, h.c, h.p
    return np.array(
        [
            [a.real + b.real, -a.imag + b.imag, c.real],
            [a.imag + b.imag, a.real - b.real, c.imag],
            [2 * p.real, -2 * p.imag, h.q],
        ]
    )


def matrix_from_coefficients(h: HalfCoefficients) -> ProjectiveMap:
    m = _matrix_array(h)
    if not np.any(m):
        raise SingularMatrix("all coefficients vanish")
    return ProjectiveMap(m)


def beltrami_arrays(mats):
    """(alpha, beta, gamma) for a stack of matrices; valid for affine maps too."""
    a, b, c, p, q = coefficient_arrays(mats)
    pc = np.conj(p)
    return b * p - a * pc, b * q - c * pc, a * q - c * p


def beltrami_coefficient(m, z):
    """mu_f(z) = f_zbar / f_z of the projective map ``m`` (any, affine allowed)."""
    mat = m.matrix if isinstance(m, ProjectiveMap) else np.asarray(m)
    alpha, beta, gamma = beltrami_arrays(frobenius_normalize(mat) if mat.ndim == 2 else mat)
    z = np.asarray(z, dtype=complex)
    return (alpha * z + beta) / (-alpha * np.conj(z) + gamma)


@dataclass(frozen=True)
class HyperbolicPencil:
    """Apollonius circles |z - limit_zero| = k |z - limit_inf|, k in (0, inf)."""

    limit_zero: complex
    limit_inf: complex

    def __post_init__(self):
        object.__setattr__(self, "limit_zero", complex(self.limit_zero))
        object.__setattr__(self, "limit_inf", complex(self.limit_inf))
        if self.limit_zero == self.limit_inf:
            raise ValueError("limit points must be distinct")

    def ratio(self, z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore"):
            return np.abs(z - self.limit_zero) / np.abs(z - self.limit_inf)

    def contour(self, k: float) -> GeneralizedCircle:
        return contour_circle(self, k)


@dataclass(frozen=True)
class BeltramiField:
    alpha: complex
    beta: complex
    gamma: complex

    @property
    def z_zero(self) -> complex:
        return -self.beta / self.alpha

    @property
    def z_inf(self) -> complex:
        return np.conj(self.gamma / self.alpha)

    @property
    def pencil(self) -> HyperbolicPencil:
        return HyperbolicPencil(self.z_zero, self.z_inf)

    def mu(self, z):
        z = np.asarray(z, dtype=complex)
        return (self.alpha * z + self.beta) / (-self.alpha * np.conj(z) + self.gamma)

    def determinant(self) -> complex:
        """det [[alpha, beta], [-conj(alpha), conj(gamma)]]."""
        return self.alpha * np.conj(self.gamma) + self.beta * np.conj(self.alpha)


def beltrami_field(h: HalfCoefficients) -> BeltramiField:
    if h.is_affine:
        raise AffineInput("affine map has constant Beltrami coefficient")
    alpha = h.b * h.p - h.a * np.conj(h.p)
    beta = h.b * h.q - h.c * np.conj(h.p)
    gamma = h.a * h.q - h.c * h.p
    if abs(alpha) <= AFFINE_TOL * h.scale**2:
        raise AlphaZero("alpha vanishes; |mu| is constant")
    return BeltramiField(complex(alpha), complex(beta), complex(gamma))


def beltrami_constant_affine(h: HalfCoefficients) -> complex:
    if not h.is_affine:
        raise NotAffine("map moves the line at infinity")
    if h.a == 0:
        return complex(np.inf)
    return h.b / h.a


def eccentricity_at(field: BeltramiField, z) -> float:
    """|mu_f(z)|, computed as the ratio of distances to the two limit points."""
    out = field.pencil.ratio(z)
    return out[()] if np.ndim(out) == 0 else out


def jacobian(m: ProjectiveMap, z):
    """Real derivative of the dehomogenized map at ``z``, shape (..., 2, 2)."""
    mat = frobenius_normalize(m.matrix)
    h = homogenize(z)
    img = h @ mat.T
    w = img[..., 2]
    scale = np.linalg.norm(h, axis=-1)
    if np.any(np.abs(w) <= 1e-12 * scale):
        raise OnPreimageOfInfinity("point lies on the preimage of the line at infinity")
    f = img[..., :2] / w[..., None]
    return (mat[:2, :2] - f[..., :, None] * mat[2, :2]) / w[..., None, None]


def signed_dilatation_at(m: ProjectiveMap, z):
    """sign(det df) * lambda_1 / lambda_2; +inf where df is singular."""
    jac = jacobian(m, z)
    s = np.linalg.svd(jac, compute_uv=False)
    sign = np.sign(np.linalg.det(jac))
    with np.errstate(divide="ignore", invalid="ignore"):
        d = np.where(s[..., 1] > 0, sign * s[..., 0] / s[..., 1], np.inf)
    return d[()] if d.ndim == 0 else d


def contour_circle(pencil: HyperbolicPencil, k: float) -> GeneralizedCircle:
    if not k > 0:
        raise ValueError("contour level must be positive")
    z0, zi = pencil.limit_zero, pencil.limit_inf
    if k == 1:
        n = (zi - z0) / abs(zi - z0)
        return Line(n, (np.conj(n) * (z0 + zi) / 2).real)
    k2 = k * k
    return Circle((z0 - k2 * zi) / (1 - k2), k * abs(z0 - zi) / abs(1 - k2))


def _real_meet(line):
    """Real point on a complex line and on its conjugate."""
    pt = np.cross(line, np.conj(line))
    return complex((pt[0] / pt[2]).real, (pt[1] / pt[2]).real)


def circles_mapped_to_circles(m: ProjectiveMap) -> HyperbolicPencil:
    """Pencil of circles through K, conj(K), f^-1(K), f^-1(conj(K)).

    Its point circles are where the lines joining K to the preimages of the
    circle points meet their conjugates.
    """
    if m.is_affine():
        raise AffineMap("affine maps send all or no circles to circles")
    inv = np.linalg.inv(frobenius_normalize(m.matrix))
    k = CIRCLE_POINT
    pre_k, pre_kbar = inv @ k, inv @ np.conj(k)
    # conformal points see K and f^-1(K) on one isotropic line
    zero = _real_meet(np.cross(k, pre_k))
    inf = _real_meet(np.cross(k, pre_kbar))
    return HyperbolicPencil(zero, inf)


def orientation_preserving_on(field: BeltramiField, vertices) -> bool:
    """True if the closed triangle lies in the open region where |mu| < 1."""
    vertices = np.asarray(vertices, dtype=complex)
    if np.any(eccentricity_at(field, vertices) >= 1):
        return False
    axis = contour_circle(field.pencil, 1.0)
    return bool(np.all(axis.signed_distance(vertices) < 0))


def max_eccentricity_on_triangle(field: BeltramiField, tri) -> tuple[float, int]:
    vertices = np.asarray(getattr(tri, "vertices", tri), dtype=complex)
    if len(set(vertices.tolist())) < 3:
        raise ValueError("triangle vertices must be distinct")
    if not orientation_preserving_on(field, vertices):
        raise NotOrientationPreserving("map is not orientation preserving on the triangle")
    ecc = eccentricity_at(field, vertices)
    i = int(np.argmax(ecc))
    return float(ecc[i]), i
