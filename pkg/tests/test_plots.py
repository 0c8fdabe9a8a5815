import numpy as np
import pytest

from projconf.dilatation import HalfCoefficients, beltrami_field, coefficients_from_matrix, matrix_from_coefficients
from projconf.errors import AffineMap
from projconf.plots import parse_contours, plot_pencil
from projconf.projective import ProjectiveMap
from projconf.verify import random_nonaffine_map

EXAMPLE = matrix_from_coefficients(HalfCoefficients(1, 0, 0, 1, 1))


def test_example_pencil(tmp_path):
    svg = plot_pencil(EXAMPLE, (0.2, 0.5, 1.0, 2.0, 5.0), out=tmp_path / "p.svg")
    assert (tmp_path / "p.svg").read_text(encoding="utf-8") == svg
    assert "|μ_f| = 0" in svg and "|μ_f| = ∞" in svg
    items = parse_contours(svg)
    lines = [c for c in items if c["tag"] == "line"]
    circles = [c for c in items if c["tag"] == "circle"]
    assert len(lines) == 1 and len(circles) == 4
    assert lines[0]["x1"] == pytest.approx(-0.5) and lines[0]["x2"] == pytest.approx(-0.5)
    for c in circles:
        around_zero = c["data-k"] < 1
        # circles with k < 1 enclose 0, the others enclose -1
        inside = 0 if around_zero else -1
        assert abs(complex(c["cx"], c["cy"]) - inside) < c["r"]
        assert (c["cx"] > -0.5) == around_zero


def test_single_level_gives_one_line():
    items = parse_contours(plot_pencil(EXAMPLE, [1]))
    assert [c["tag"] for c in items] == ["line"]


def test_reciprocal_levels_mirror():
    items = {c["data-k"]: c for c in parse_contours(plot_pencil(EXAMPLE, (0.25, 4.0, 0.5, 2.0)))}
    for k in (0.25, 0.5):
        a, b = items[k], items[1 / k]
        assert a["cx"] + b["cx"] == pytest.approx(-1, abs=1e-12)
        assert a["cy"] == pytest.approx(-b["cy"], abs=1e-12)
        assert a["r"] == pytest.approx(b["r"], rel=1e-12)


def test_svg_circles_satisfy_ratio(rng):
    for _ in range(10):
        m = random_nonaffine_map(rng)
        field = beltrami_field(coefficients_from_matrix(m))
        for c in parse_contours(plot_pencil(m)):
            if c["tag"] != "circle":
                continue
            pts = complex(c["cx"], c["cy"]) + c["r"] * np.exp(2j * np.pi * np.arange(32) / 32)
            ratio = np.abs(pts - field.z_zero) / np.abs(pts - field.z_inf)
            assert np.abs(ratio - c["data-k"]).max() <= 1e-9 * max(1, c["data-k"])


def test_affine_rejected():
    with pytest.raises(AffineMap):
        plot_pencil(ProjectiveMap(np.eye(3)))
