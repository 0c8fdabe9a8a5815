import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from projconf.dilatation import (
    HalfCoefficients,
    HyperbolicPencil,
    beltrami_coefficient,
    beltrami_constant_affine,
    beltrami_field,
    circles_mapped_to_circles,
    coefficients_from_matrix,
    contour_circle,
    eccentricity_at,
    jacobian,
    matrix_from_coefficients,
    max_eccentricity_on_triangle,
    orientation_preserving_on,
    signed_dilatation_at,
)
from projconf.errors import (
    AffineInput,
    AffineMap,
    AlphaZero,
    NotAffine,
    NotOrientationPreserving,
    OnPreimageOfInfinity,
    SingularMatrix,
)
from projconf.projective import (
    Circle,
    Line,
    ProjectiveMap,
    apply,
    conic_from_circle,
    is_circle,
    preimage_of_infinity,
    pushforward_conic,
)
from projconf.triangles import Triangle, collapsed_square_grid
from projconf.verify import finite_difference_mu, random_nonaffine_map, sample_points

EXAMPLE = HalfCoefficients(1, 0, 0, 1, 1)  # z -> z / (z + conj(z) + 1)


def test_coefficients_examples():
    h = coefficients_from_matrix(ProjectiveMap(np.eye(3)))
    assert (h.a, h.b, h.c, h.p, h.q) == (1, 0, 0, 0, 1)
    h = coefficients_from_matrix(ProjectiveMap(np.diag([1.0, -1.0, 1.0])))
    assert (h.a, h.b, h.c, h.p, h.q) == (0, 1, 0, 0, 1)


def test_coefficient_formula_matches_apply(rng):
    for _ in range(20):
        m = random_nonaffine_map(rng)
        z = sample_points(rng, m, 10)
        h = coefficients_from_matrix(m)
        assert np.allclose(h(z), apply(m, z), rtol=1e-12, atol=1e-12)
        back = matrix_from_coefficients(h)
        assert np.allclose(back.matrix, m.matrix, atol=1e-15)


def test_matrix_from_zero_coefficients():
    with pytest.raises(SingularMatrix):
        matrix_from_coefficients(HalfCoefficients(0, 0, 0, 0, 0))


def test_example_field():
    field = beltrami_field(EXAMPLE)
    assert (field.alpha, field.beta, field.gamma) == (-1, 0, 1)
    assert field.z_zero == 0 and field.z_inf == -1
    assert field.mu(field.z_zero) == 0
    line = preimage_of_infinity(matrix_from_coefficients(EXAMPLE))
    assert abs(line.signed_distance(-0.5)) < 1e-15


def test_beltrami_field_errors():
    with pytest.raises(AffineInput):
        beltrami_field(HalfCoefficients(1, 0.5, 0, 0, 1))
    # b p = a conj(p) with p != 0; the determinant identity makes such
    # coefficients singular, so only raw coefficients can reach this
    with pytest.raises(AlphaZero):
        beltrami_field(HalfCoefficients(1, 1, 0, 1, 3))


def test_beltrami_matches_finite_differences(rng):
    for _ in range(50):
        m = random_nonaffine_map(rng)
        z = sample_points(rng, m, 20)
        mu = beltrami_field(coefficients_from_matrix(m)).mu(z)
        assert np.abs(mu - finite_difference_mu(m, z)).max() <= 1e-6


def test_affine_constant():
    assert beltrami_constant_affine(HalfCoefficients(2j, 0, 3, 0, 1)) == 0
    assert beltrami_constant_affine(HalfCoefficients(1, 0.5, 0, 0, 1)) == 0.5
    with pytest.raises(NotAffine):
        beltrami_constant_affine(EXAMPLE)


def test_affine_constant_finite_differences(rng):
    for _ in range(20):
        m = rng.normal(size=(3, 3))
        m[2] = (0, 0, rng.uniform(0.5, 2))
        pm = ProjectiveMap(m)
        mu = beltrami_constant_affine(coefficients_from_matrix(pm))
        z = rng.normal(size=5) + 1j * rng.normal(size=5)
        assert np.abs(finite_difference_mu(pm, z) - mu).max() <= 1e-6
        assert np.allclose(beltrami_coefficient(pm, z), mu, atol=1e-12)


def test_determinant_identity(rng):
    for _ in range(100):
        m = random_nonaffine_map(rng)
        h = coefficients_from_matrix(m)
        field = beltrami_field(h)
        rhs = -np.conj(h.p) * np.linalg.det(m.matrix)
        assert abs(field.determinant() - rhs) <= 1e-9 * abs(rhs)
        assert abs(abs(field.determinant()) - abs(np.conj(h.p) * np.linalg.det(m.matrix))) <= 1e-9 * abs(rhs)


def test_eccentricity_distance_ratio(rng):
    for _ in range(30):
        m = random_nonaffine_map(rng)
        field = beltrami_field(coefficients_from_matrix(m))
        z = sample_points(rng, m, 10)
        assert np.allclose(eccentricity_at(field, z), np.abs(field.mu(z)), rtol=1e-10, atol=1e-12)
        assert eccentricity_at(field, field.z_zero) == 0
        assert eccentricity_at(field, field.z_inf) == np.inf
        mid = (field.z_zero + field.z_inf) / 2
        assert abs(eccentricity_at(field, mid) - 1) < 1e-12
        assert abs(abs(field.mu(mid)) - 1) < 1e-9
        pts = preimage_of_infinity(m).points(9, 0.2)
        assert np.abs(eccentricity_at(field, pts) - 1).max() < 1e-9


def test_signed_dilatation_examples():
    z = np.array([0.3 + 0.1j, -2 + 5j])
    sim = ProjectiveMap([[2, -1, 3], [1, 2, 0], [0, 0, 1]])
    assert np.allclose(signed_dilatation_at(sim, z), 1)
    assert np.allclose(signed_dilatation_at(ProjectiveMap(np.diag([1.0, -1.0, 1.0])), z), -1)
    with pytest.raises(OnPreimageOfInfinity):
        signed_dilatation_at(matrix_from_coefficients(EXAMPLE), -0.5)


def test_signed_dilatation_vs_mu(rng):
    for _ in range(50):
        m = random_nonaffine_map(rng)
        z = sample_points(rng, m, 10)
        d = signed_dilatation_at(m, z)
        ecc = np.abs(beltrami_coefficient(m, z))
        assert np.all(np.sign(d) == np.sign(1 - ecc))
        # |D| = (1 + |mu|) / |1 - |mu||
        assert np.allclose((np.abs(d) - 1) / (np.abs(d) + 1), np.minimum(ecc, 1 / ecc), rtol=1e-8, atol=1e-10)


def test_jacobian_against_finite_differences(rng):
    m = random_nonaffine_map(rng)
    z = sample_points(rng, m, 5)
    h = 1e-6
    fx = (apply(m, z + h) - apply(m, z - h)) / (2 * h)
    fy = (apply(m, z + 1j * h) - apply(m, z - 1j * h)) / (2 * h)
    jac = jacobian(m, z)
    assert np.allclose(jac[:, 0, 0] + 1j * jac[:, 1, 0], fx, atol=1e-6)
    assert np.allclose(jac[:, 0, 1] + 1j * jac[:, 1, 1], fy, atol=1e-6)


def test_contour_examples():
    pencil = HyperbolicPencil(0, -1)
    c = contour_circle(pencil, 0.5)
    assert isinstance(c, Circle)
    # (z0 - k^2 z_inf) / (1 - k^2) = (1/4) / (3/4), radius k / (1 - k^2) = 2/3
    assert c.center == pytest.approx(1 / 3) and c.radius == pytest.approx(2 / 3)
    assert np.abs(pencil.ratio(c.points(16)) - 0.5).max() < 1e-12
    tiny = contour_circle(pencil, 1e-9)
    assert abs(tiny.center) < 1e-15 and tiny.radius < 1e-8
    line = contour_circle(pencil, 1.0)
    assert isinstance(line, Line) and abs(line.signed_distance(-0.5 + 4j)) < 1e-15
    with pytest.raises(ValueError):
        contour_circle(pencil, 0.0)


def test_contour_line_is_preimage_of_infinity(rng):
    for _ in range(20):
        m = random_nonaffine_map(rng)
        line = contour_circle(beltrami_field(coefficients_from_matrix(m)).pencil, 1.0)
        other = preimage_of_infinity(m)
        sign = np.sign((np.conj(line.normal) * other.normal).real)
        assert abs(line.normal - sign * other.normal) < 1e-9
        assert abs(line.offset - sign * other.offset) < 1e-9 * max(1, abs(line.offset))


@given(st.floats(0.05, 20).filter(lambda k: abs(k - 1) > 1e-3), st.integers(0, 10_000))
def test_contour_constancy(k, seed):
    rng = np.random.default_rng(seed)
    m = random_nonaffine_map(rng)
    field = beltrami_field(coefficients_from_matrix(m))
    pts = contour_circle(field.pencil, k).points(64)
    vals = np.abs(field.mu(pts))
    assert vals.std() <= 1e-9 * max(1.0, k)
    assert np.abs(vals - k).max() <= 1e-9 * max(1.0, k)


def test_circles_to_circles(rng):
    for _ in range(30):
        m = random_nonaffine_map(rng)
        pencil = circles_mapped_to_circles(m)
        field = beltrami_field(coefficients_from_matrix(m))
        assert abs(pencil.limit_zero - field.z_zero) < 1e-9
        assert abs(pencil.limit_inf - field.z_inf) < 1e-9
        for k in (0.5, 1.0, 3.0):
            assert is_circle(pushforward_conic(m, conic_from_circle(contour_circle(pencil, k))), 1e-8)
        # a circle centred off the axis through the limit points
        axis = pencil.limit_inf - pencil.limit_zero
        off = Circle(pencil.limit_zero + 0.5j * axis, 0.3 * abs(axis))
        assert not is_circle(pushforward_conic(m, conic_from_circle(off)), 1e-6)
    with pytest.raises(AffineMap):
        circles_mapped_to_circles(ProjectiveMap(np.eye(3)))


def test_max_at_vertex(rng):
    field = beltrami_field(EXAMPLE)
    # z_zero = 0, z_inf = -1: the region |mu| < 1 is x > -1/2
    tri = Triangle(-0.1 - 0.1j, 0.5 - 0.2j, 0.1 + 0.4j)
    vmax, idx = max_eccentricity_on_triangle(field, tri)
    ratios = eccentricity_at(field, tri.vertices)
    assert idx == int(np.argmax(ratios))
    grid = collapsed_square_grid(tri, 100)
    assert np.abs(field.mu(grid)).max() <= vmax + 1e-9
    # equilateral around z_zero, one vertex on the limit axis
    eq = Triangle(*(0.2 * np.exp(1j * (np.pi + 2 * np.pi * np.arange(3) / 3))))
    vmax, idx = max_eccentricity_on_triangle(field, eq)
    assert idx == 0
    assert np.abs(field.mu(collapsed_square_grid(eq, 100))).max() <= vmax + 1e-9


def test_max_at_vertex_requires_orientation():
    field = beltrami_field(EXAMPLE)
    crossing = Triangle(-1 + 0j, 0.5 - 0.2j, 0.1 + 0.4j)
    assert not orientation_preserving_on(field, crossing.vertices)
    with pytest.raises(NotOrientationPreserving):
        max_eccentricity_on_triangle(field, crossing)
    with pytest.raises(ValueError):
        max_eccentricity_on_triangle(field, [0.1, 0.1, 0.1])
