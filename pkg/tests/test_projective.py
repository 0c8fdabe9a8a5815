from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from projconf.errors import AffineMap, DegenerateConfiguration, MapsToInfinity, NotACircle, SingularMatrix
from projconf.projective import (
    Circle,
    Conic,
    Line,
    ProjectiveMap,
    apply,
    circle_from_conic,
    conic_distance,
    conic_from_circle,
    homography_from_correspondences,
    is_circle,
    preimage_of_infinity,
    pushforward_conic,
)
from projconf.verify import random_nonaffine_map

entries = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
coords = st.floats(-5, 5, allow_nan=False, allow_infinity=False)


@st.composite
def maps(draw):
    m = np.array(draw(st.lists(entries, min_size=9, max_size=9))).reshape(3, 3)
    assume(np.linalg.cond(m) < 1e4)
    return ProjectiveMap(m)


def exact_apply(m, x, y):
    """Rational evaluation of [x, y, 1] -> A [x, y, 1]."""
    a = [[Fraction(v) for v in row] for row in m]
    v = [Fraction(x), Fraction(y), Fraction(1)]
    h = [sum(a[i][k] * v[k] for k in range(3)) for i in range(3)]
    return h[0] / h[2], h[1] / h[2]


def exact_solve(a, b):
    """Gauss-Jordan elimination over the rationals."""
    n = len(a)
    m = [list(row) + [b[i]] for i, row in enumerate(a)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col] / m[col][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[i][n] / m[i][i] for i in range(n)]


def exact_homography(src, dst):
    """The 8x8 direct linear system with h33 = 1, solved exactly."""
    rows, rhs = [], []
    for (x, y), (u, v) in zip(src, dst):
        rows.append([x, y, 1, 0, 0, 0, -u * x, -u * y])
        rhs.append(u)
        rows.append([0, 0, 0, x, y, 1, -v * x, -v * y])
        rhs.append(v)
    h = exact_solve(rows, rhs) + [Fraction(1)]
    return np.array([float(v) for v in h]).reshape(3, 3)


def test_apply_identity_and_scaling():
    assert apply(ProjectiveMap(np.eye(3)), 2 + 3j) == 2 + 3j
    assert apply(ProjectiveMap(np.diag([1.0, 1.0, 2.0])), 2 + 3j) == 1 + 1.5j


def test_apply_matches_rational_arithmetic(rng):
    for _ in range(50):
        m = rng.integers(-9, 10, size=(3, 3)).astype(float)
        if abs(np.linalg.det(m)) < 1:
            continue
        x, y = rng.integers(-20, 21, size=2) / 4
        try:
            got = apply(ProjectiveMap(m), complex(x, y))
        except MapsToInfinity:
            continue
        ex, ey = exact_apply(m, x, y)
        assert got.real == pytest.approx(float(ex), rel=1e-13, abs=1e-13)
        assert got.imag == pytest.approx(float(ey), rel=1e-13, abs=1e-13)


def test_apply_to_infinity_raises():
    m = ProjectiveMap([[1, 0, 0], [0, 1, 0], [2, 0, 1]])
    with pytest.raises(MapsToInfinity):
        apply(m, -0.5 + 3j)


def test_singular_matrix_rejected():
    with pytest.raises(SingularMatrix):
        ProjectiveMap(np.ones((3, 3)))
    with pytest.raises(SingularMatrix):
        ProjectiveMap(np.zeros((3, 3)))


def test_apply_is_vectorized(rng):
    m = random_nonaffine_map(rng)
    z = rng.normal(size=(4, 5)) * 0.1 + 1j * rng.normal(size=(4, 5)) * 0.1
    out = apply(m, z)
    assert out.shape == (4, 5)
    assert out[2, 3] == apply(m, z[2, 3])


def test_homography_identity():
    pts = [0, 1, 1j, 0.3 + 0.4j]
    h = homography_from_correspondences(pts, pts)
    assert np.allclose(h.normalized(), np.eye(3) / np.sqrt(3), atol=1e-12)


def test_homography_square_rotation():
    square = np.array([0, 1, 1 + 1j, 1j])
    h = homography_from_correspondences(square, np.roll(square, -1))
    # rotation by 90 degrees about the center (1+i)/2
    rot = lambda z: 1j * (z - (0.5 + 0.5j)) + (0.5 + 0.5j)  # noqa: E731
    assert h.is_affine()
    z = np.array([0.2 + 0.7j, -3 + 1j, 0.5 + 0.5j])
    assert np.allclose(apply(h, z), rot(z), atol=1e-12)


def test_homography_rational_oracle(rng):
    for _ in range(20):
        src = [tuple(Fraction(int(v), 3) for v in rng.integers(-9, 10, 2)) for _ in range(4)]
        dst = [tuple(Fraction(int(v), 3) for v in rng.integers(-9, 10, 2)) for _ in range(4)]
        zs = [complex(float(x), float(y)) for x, y in src]
        zd = [complex(float(x), float(y)) for x, y in dst]
        try:
            h = homography_from_correspondences(zs, zd)
            expected = exact_homography(src, dst)
        except (DegenerateConfiguration, ZeroDivisionError, StopIteration):
            continue
        assert conic_like_distance(h.matrix, expected) < 1e-10


def conic_like_distance(a, b):
    a, b = a / np.linalg.norm(a), b / np.linalg.norm(b)
    return min(np.linalg.norm(a - b), np.linalg.norm(a + b))


def test_homography_collinear_rejected():
    with pytest.raises(DegenerateConfiguration):
        homography_from_correspondences([0, 1, 2, 1j], [0, 1, 1j, 1 + 1j])
    with pytest.raises(DegenerateConfiguration):
        homography_from_correspondences([0, 1, 1j, 1 + 1j], [0, 1, 1j, 2j])


@given(st.lists(st.tuples(coords, coords), min_size=8, max_size=8))
def test_homography_reproduces_correspondences(pts):
    z = np.array([complex(x, y) for x, y in pts])
    src, dst = z[:4], z[4:]
    try:
        h = homography_from_correspondences(src, dst)
        img = apply(h, src)
    except (DegenerateConfiguration, SingularMatrix, MapsToInfinity):
        return
    scale = max(1.0, np.abs(dst).max())
    assert np.abs(img - dst).max() <= 1e-9 * scale * max(1.0, np.linalg.cond(h.matrix) * 1e-3)


def test_homography_equivariance(rng):
    for _ in range(20):
        g = random_nonaffine_map(rng)
        src = rng.normal(size=4) * 0.3 + 1j * rng.normal(size=4) * 0.3
        dst = rng.normal(size=4) * 0.3 + 1j * rng.normal(size=4) * 0.3
        try:
            h = homography_from_correspondences(src, dst)
            hg = homography_from_correspondences(apply(g, src), apply(g, dst))
        except (DegenerateConfiguration, MapsToInfinity):
            continue
        conj = g.matrix @ h.matrix @ np.linalg.inv(g.matrix)
        assert conic_like_distance(hg.matrix, conj) < 1e-8


@given(maps(), maps(), coords, coords)
def test_composition_and_inverse(m1, m2, x, y):
    z = complex(x, y)
    try:
        direct = apply(m1 @ m2, z)
        stepwise = apply(m1, apply(m2, z))
        back = apply(m2.inverse(), apply(m2, z))
    except MapsToInfinity:
        return
    assume(abs(direct) < 1e6 and abs(apply(m2, z)) < 1e6)
    assert abs(direct - stepwise) <= 1e-7 * max(1.0, abs(direct))
    assert abs(back - z) <= 1e-7 * max(1.0, abs(z))


def test_circle_conic_examples():
    unit = conic_from_circle(Circle(0, 1))
    assert conic_distance(unit, Conic(np.diag([1.0, 1.0, -1.0]))) < 1e-15
    c = conic_from_circle(Circle(1 + 2j, 3))
    assert np.array_equal(c.q, [[1, 0, -1], [0, 1, -2], [-1, -2, 1 + 4 - 9]])
    with pytest.raises(NotACircle):
        circle_from_conic(Conic(np.diag([1.0, 2.0, -1.0])))


def test_is_circle_examples():
    assert is_circle(Conic(np.diag([1.0, 1.0, -1.0])))
    assert not is_circle(Conic(np.diag([1.0, 2.0, -1.0])))
    # no real points
    assert not is_circle(Conic(np.diag([1.0, 1.0, 1.0])))
    assert is_circle(conic_from_circle(Line(1j, 2.0)))


@given(coords, coords, st.floats(0.01, 10))
def test_circle_roundtrip(x, y, r):
    c = Circle(complex(x, y), r)
    conic = conic_from_circle(c)
    assert is_circle(conic)
    back = circle_from_conic(conic)
    assert abs(back.center - c.center) <= 1e-9 * max(1, abs(c.center), r)
    assert abs(back.radius - r) <= 1e-9 * max(1, abs(c.center), r)
    assert np.abs(conic.evaluate(c.points(7))).max() <= 1e-9 * max(1, abs(c.center) ** 2, r * r)


@given(st.floats(-np.pi, np.pi), coords)
def test_line_roundtrip(angle, offset):
    line = Line(np.exp(1j * angle), offset)
    back = circle_from_conic(conic_from_circle(line))
    assert isinstance(back, Line)
    assert abs(back.normal - line.normal) < 1e-12 and abs(back.offset - offset) < 1e-9 * max(1, abs(offset))


def test_pushforward_examples(rng):
    unit = conic_from_circle(Circle(0, 1))
    assert pushforward_conic(ProjectiveMap(np.eye(3)), unit).equals(unit)
    shift = ProjectiveMap([[1, 0, 1], [0, 1, 0], [0, 0, 1]])
    assert pushforward_conic(shift, unit).equals(conic_from_circle(Circle(1, 1)))
    for _ in range(20):
        m = random_nonaffine_map(rng)
        c = Circle(0.1 * rng.normal() + 0.1j * rng.normal(), rng.uniform(0.05, 0.3))
        pts = c.points(20)
        try:
            img_pts = apply(m, pts)
        except MapsToInfinity:
            continue
        img = pushforward_conic(m, conic_from_circle(c))
        vals = img.evaluate(img_pts) / (np.linalg.norm(img.q) * (1 + np.abs(img_pts) ** 2))
        assert np.abs(vals).max() < 1e-9
        back = pushforward_conic(m.inverse(), img)
        assert back.equals(conic_from_circle(c), 1e-9)


def test_preimage_of_infinity(rng):
    m = ProjectiveMap([[1, 0, 0], [0, 1, 0], [2, 0, 1]])
    line = preimage_of_infinity(m)
    assert abs(line.signed_distance(-0.5 + 7j)) < 1e-15
    with pytest.raises(AffineMap):
        preimage_of_infinity(ProjectiveMap(np.eye(3)))
    for _ in range(20):
        m = random_nonaffine_map(rng)
        pts = preimage_of_infinity(m).points(11, 0.3)
        w = (np.column_stack([pts.real, pts.imag, np.ones(11)]) @ m.normalized().T)[:, 2]
        assert np.abs(w).max() < 1e-9


def test_normalized_has_unit_norm_positive_det(rng):
    m = ProjectiveMap(-3 * np.eye(3))
    assert m.det_sign == -1
    n = m.normalized()
    assert np.linalg.det(n) > 0 and abs(np.linalg.norm(n) - 1) < 1e-15
    with pytest.raises(ValueError):
        m.matrix[0, 0] = 1.0
