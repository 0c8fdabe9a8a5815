"""Triangle centers and the exponent-t family of projective maps between triangles."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .dilatation import beltrami_arrays, beltrami_coefficient
from .errors import (
    DependentDirections,
    InvalidTriangle,
    OrientationViolation,
)
from .projective import (
    Circle,
    ProjectiveMap,
    conic_from_circle,
    conic_distance,
    homography_from_correspondences,
    homogenize,
    is_circle,
    pushforward_conic,
)

AREA_TOL = 1e-12


def _cross(u, v):
    return (np.conj(u) * v).imag


@dataclass(frozen=True)
class Triangle:
    """Positively oriented, non-degenerate triangle with vertices A, B, C."""

    A: complex
    B: complex
    C: complex

    def __post_init__(self):
        for name in "ABC":
            object.__setattr__(self, name, complex(getattr(self, name)))
        a, b, c = self.sides
        diam = max(a, b, c)
        if not np.isfinite(diam) or self.signed_area <= AREA_TOL * diam * diam:
            raise InvalidTriangle("triangle is degenerate or negatively oriented")
        if not (a < b + c and b < c + a and c < a + b):
            raise InvalidTriangle("side lengths violate the triangle inequality")

    @classmethod
    def from_points(cls, pts) -> "Triangle":
        pts = np.asarray(pts)
        if pts.dtype.kind != "c":
            pts = pts[:, 0] + 1j * pts[:, 1]
        return cls(*pts)

    @property
    def vertices(self) -> np.ndarray:
        return np.array([self.A, self.B, self.C])

    @property
    def sides(self) -> tuple[float, float, float]:
        """Lengths opposite A, B, C."""
        return abs(self.B - self.C), abs(self.C - self.A), abs(self.A - self.B)

    @property
    def signed_area(self) -> float:
        return 0.5 * _cross(self.B - self.A, self.C - self.A)

    @property
    def inradius(self) -> float:
        return 2 * self.signed_area / sum(self.sides)

    @property
    def incenter(self) -> complex:
        return exponent_t_center(1.0, self)

    def barycentric_point(self, weights) -> complex:
        w = np.asarray(weights, dtype=float)
        return complex(np.dot(w, self.vertices) / w.sum())

    def barycentric(self, z):
        """Barycentric coordinates of z, last axis of length 3."""
        h = homogenize(z)
        return h @ np.linalg.inv(homogenize(self.vertices))

    def contains(self, z, tol: float = 1e-12):
        return np.all(self.barycentric(z) >= -tol, axis=-1)


def circumcircle(tri: Triangle) -> Circle:
    A, B, C = tri.vertices
    b, c = B - A, C - A
    d = 2 * _cross(b, c)
    center = A + 1j * (b * abs(c) ** 2 - c * abs(b) ** 2) / d
    return Circle(center, abs(center - A))


def exponent_t_center(t_param: float, tri: Triangle) -> complex:
    """Point with barycentric coordinates [a^t, b^t, c^t]."""
    sides = np.array(tri.sides)
    return tri.barycentric_point((sides / sides.max()) ** t_param)


def incircle(tri: Triangle) -> Circle:
    return Circle(tri.incenter, tri.inradius)


@dataclass(frozen=True)
class TriangleMapFamily:
    source: Triangle
    target: Triangle
    t: float
    map: ProjectiveMap

    def __call__(self, z):
        return self.map(z)

    @cached_property
    def inverse(self) -> ProjectiveMap:
        return self.map.inverse()

    def vertex_eccentricities(self) -> np.ndarray:
        return np.abs(beltrami_coefficient(self.map, self.source.vertices))


def _orientation_preserving(mat, tri: Triangle) -> bool:
    # det of the derivative at z has the sign of det(A) * w(z)
    w = homogenize(tri.vertices) @ mat[2]
    return bool(np.all(w * np.linalg.det(mat) > 0))


def family_map(src: Triangle, dst: Triangle, t_param: float) -> TriangleMapFamily:
    """Projective map sending vertices and exponent-t-centers to each other."""
    s = np.append(src.vertices, exponent_t_center(t_param, src))
    d = np.append(dst.vertices, exponent_t_center(t_param, dst))
    m = homography_from_correspondences(s, d)
    if not _orientation_preserving(m.matrix, src):
        raise OrientationViolation("exponent-t map is not orientation preserving on the source")
    return TriangleMapFamily(src, dst, float(t_param), m)


def app_map(src: Triangle, dst: Triangle) -> TriangleMapFamily:
    """Angle bisector preserving map: sends incenter to incenter."""
    return family_map(src, dst, 1.0)


def cpp_map(src: Triangle, dst: Triangle) -> TriangleMapFamily:
    """Circumcircle preserving map: sends symmedian point to symmedian point."""
    return family_map(src, dst, 2.0)


def affine_map(src: Triangle, dst: Triangle) -> tuple[ProjectiveMap, complex]:
    """Affine map between the triangles and its constant Beltrami coefficient."""
    s = homogenize(src.vertices)
    d = homogenize(dst.vertices)
    mat = np.linalg.solve(s, d).T
    mat[2] = (0.0, 0.0, 1.0)
    lin = mat[:2, :2]
    fz = ((lin[0, 0] + lin[1, 1]) + 1j * (lin[1, 0] - lin[0, 1])) / 2
    fzbar = ((lin[0, 0] - lin[1, 1]) + 1j * (lin[1, 0] + lin[0, 1])) / 2
    return ProjectiveMap(mat), complex(fzbar / fz)


def collapsed_square_grid(tri: Triangle, n: int = 50) -> np.ndarray:
    """n*n interior points A + s(B - A) + s u (C - B), s, u at cell midpoints."""
    s, u = np.meshgrid((np.arange(n) + 0.5) / n, (np.arange(n) + 0.5) / n, indexing="ij")
    return (tri.A + s * (tri.B - tri.A) + s * u * (tri.C - tri.B)).ravel()


def verify_cpp_vertex_eccentricity(
    src: Triangle, dst: Triangle, tol: float = 1e-8, grid_tol: float = 1e-9, grid: int = 50
) -> dict:
    """Check that the circumcircle preserving map has equal vertex eccentricities
    matching the affine map, and that no interior point exceeds them."""
    f = cpp_map(src, dst)
    _, mu_h = affine_map(src, dst)
    vert = f.vertex_eccentricities()
    values = np.append(vert, abs(mu_h))
    spread = float(values.max() - values.min())
    interior = np.abs(beltrami_coefficient(f.map, collapsed_square_grid(src, grid)))
    excess = float(interior.max() - vert.max())
    pointwise = float((interior - abs(mu_h)).max())
    return {
        "claim": "cpp_vertex_eccentricity",
        "n_samples": grid * grid,
        "vertex_eccentricity": vert.tolist(),
        "mu_h": abs(mu_h),
        "spread": spread,
        "grid_excess": excess,
        "pointwise_excess": pointwise,
        "argmax_vertex": int(np.argmax(vert)),
        "worst_margin": max(spread, excess),
        "passed": spread <= tol and excess <= grid_tol and pointwise <= grid_tol,
        "witnesses": [],
    }


def vertex_fixing_matrices(src: Triangle, dst: Triangle, images):
    """Projective maps with g(A), g(B), g(C) = target vertices and g(incenter) = images.

    In barycentric coordinates such a map is diagonal, scaling coordinate k by
    x_k / i_k where x and i are the barycentric coordinates of the image and
    of the source incenter.
    """
    images = np.asarray(images, dtype=complex)
    s = homogenize(src.vertices).T
    d = homogenize(dst.vertices).T
    x = dst.barycentric(images)
    lam = x / src.barycentric(src.incenter)
    mats = (d * lam[..., None, :]) @ np.linalg.inv(s)
    return mats / np.linalg.norm(mats, axis=(-2, -1), keepdims=True)


def _vertex_eccentricities(src: Triangle, dst: Triangle, images):
    """|mu_g| at the source vertices for maps g sending incenter to ``images``."""
    alpha, beta, gamma = beltrami_arrays(vertex_fixing_matrices(src, dst, images))
    z = src.vertices
    mu = (alpha[..., None] * z + beta[..., None]) / (-alpha[..., None] * np.conj(z) + gamma[..., None])
    return np.abs(mu)


def _golden_refine(func, grid):
    values = np.array([func(x) for x in grid])
    j = int(np.clip(np.argmin(values), 1, len(grid) - 2))
    res = minimize_scalar(func, bracket=(grid[j - 1], grid[j], grid[j + 1]), method="golden",
                          options={"xtol": 1e-12, "maxiter": 500})
    return float(res.x), float(res.fun)


def optimality_search(
    src: Triangle, dst: Triangle, n_samples: int, seed: int, margin: float = 0.02,
    tol: float = 1e-9, line_search: bool = True,
) -> dict:
    """Sample projective maps fixing the vertex correspondence and compare their
    vertex eccentricities with the angle bisector preserving map."""
    rng = np.random.default_rng(seed)
    app = app_map(src, dst)
    best = app.vertex_eccentricities()
    inc = dst.incenter
    # shrinking about the incenter keeps every image margin*inradius from the sides
    shrunk = inc + (1 - margin) * (dst.vertices - inc)
    images = rng.dirichlet(np.ones(3), size=n_samples) @ shrunk
    ecc = _vertex_eccentricities(src, dst, images)
    margins = ecc - best
    worst = float(margins.min()) if n_samples else 0.0
    witnesses = []
    if worst < -tol:
        k = np.unravel_index(np.argmin(margins), margins.shape)
        witnesses.append({"image": [images[k[0]].real, images[k[0]].imag], "vertex": int(k[1]),
                          "margin": float(margins[k])})
    report = {
        "claim": "app_simultaneous_minimum",
        "n_samples": int(n_samples),
        "app_vertex_eccentricity": best.tolist(),
        "worst_margin": worst,
        "witnesses": witnesses,
    }
    if line_search:
        report["line_search_offsets"] = median_line_search(src, dst)
    report["passed"] = worst >= -tol and (
        not line_search or max(map(abs, report["line_search_offsets"])) <= 1e-6
    )
    return report


def median_line_search(src: Triangle, dst: Triangle) -> list[float]:
    """For each vertex, minimize its eccentricity along the line through the
    target incenter parallel to a target median.

    The line is parametrized as ``incenter + s * median`` with the median vector
    running from a vertex to the opposite midpoint; returns the minimizing s
    for each vertex (zero when the incenter image is the minimizer).
    """
    inc, r = dst.incenter, dst.inradius
    verts = dst.vertices
    medians = [(verts[(i + 1) % 3] + verts[(i + 2) % 3]) / 2 - verts[i] for i in range(3)]
    offsets = []
    for i in range(3):
        bis = inc - verts[i]
        # the median least parallel to this vertex's bisector
        d = max(medians, key=lambda m: abs(_cross(m / abs(m), bis / abs(bis))))
        # stay inside the incircle
        reach = 0.45 * r / abs(d)

        def ecc(s, d=d, i=i):
            return float(_vertex_eccentricities(src, dst, inc + s * d)[i])

        s_min, _ = _golden_refine(ecc, np.linspace(-reach, reach, 40))
        offsets.append(s_min)
    return offsets


def _columns(u, v):
    return np.array([[u.real, v.real], [u.imag, v.imag]])


def sl2_family(v, w, vt, wt):
    """The determinant-one maps sending Rv, Rw to Rvt, Rwt, as a function of lambda."""
    v, w, vt, wt = (complex(x) for x in (v, w, vt, wt))
    src, dst = _columns(v, w), _columns(vt, wt)
    for m in (src, dst):
        if abs(np.linalg.det(m)) <= 1e-12 * np.linalg.norm(m) ** 2:
            raise DependentDirections("direction vectors are linearly dependent")
    d = np.linalg.det(dst) / np.linalg.det(src)
    inv = np.linalg.inv(src)

    def family(lam):
        return dst @ np.diag([lam, 1 / (lam * d)]) @ inv

    return family, d


def _dilatation(m) -> float:
    s = np.linalg.svd(m, compute_uv=False)
    return s[0] / s[1]


def _canonical_sign(m):
    tr = np.trace(m)
    if abs(tr) > 1e-14:
        return m * np.sign(tr)
    first = m[:, 0][np.flatnonzero(np.abs(m[:, 0]) > 1e-14)[0]]
    return m * np.sign(first)


def sl2_bisector_minimality(v, w, vt, wt, n_samples: int = 200, tol: float = 1e-6) -> dict:
    """Scan the SL2 maps between two pairs of lines for the least dilatation and
    check that the minimizer maps angle bisectors to angle bisectors."""
    family, d = sl2_family(v, w, vt, wt)
    center = -0.5 * np.log(abs(d))
    grid = center + np.linspace(-12, 12, n_samples)
    values = np.array([_dilatation(family(np.exp(x))) for x in grid])
    j = int(np.clip(np.argmin(values), 1, n_samples - 2))
    # det is +-1 along the family, so K + 1/K = |M|_F^2 and its log-lambda
    # derivative 2<M, lam P - Q/lam> has a simple root at the minimizer
    one, two = family(1.0), family(2.0)
    p_part = (2 * two - one) / 3
    q_part = one - p_part

    def slope(x):
        lam = np.exp(x)
        return float(np.sum((lam * p_part + q_part / lam) * (lam * p_part - q_part / lam)))

    lo, hi = grid[j - 1], grid[j + 1]
    x = brentq(slope, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps) if slope(lo) * slope(hi) < 0 else grid[j]
    logd = np.log(_dilatation(family(np.exp(x))))
    m = _canonical_sign(family(np.exp(x)))
    unit = lambda u: complex(u) / abs(complex(u))  # noqa: E731
    bis = unit(v) + unit(w)
    # w goes to a negative multiple of wt when d < 0, so the image cone is (vt, sign(d) wt)
    target = unit(vt) + np.sign(d) * unit(wt)
    img = m @ np.array([bis.real, bis.imag])
    img = complex(*img)
    residual = abs(_cross(unit(img), unit(target)))
    return {
        "claim": "sl2_bisector_minimality",
        "n_samples": int(n_samples),
        "lambda": float(np.exp(x)),
        "dilatation": float(np.exp(logd)),
        "matrix": m.tolist(),
        "bisector_residual": float(residual),
        "worst_margin": float(residual),
        "passed": residual <= tol,
        "witnesses": [],
    }


def incircle_image_is_circle(src: Triangle, dst: Triangle, tol: float = 1e-6) -> bool:
    f = app_map(src, dst)
    return is_circle(pushforward_conic(f.map, conic_from_circle(incircle(src))), tol)


def circumcircle_preserved(src: Triangle, dst: Triangle, t_param: float = 2.0) -> float:
    """Conic distance between the pushed-forward source circumcircle and the target's."""
    f = family_map(src, dst, t_param)
    image = pushforward_conic(f.map, conic_from_circle(circumcircle(src)))
    return conic_distance(image, conic_from_circle(circumcircle(dst)))
