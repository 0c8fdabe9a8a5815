"""
Dilatation of a projective map
==============================

A projective map of the plane that is not affine has a Beltrami coefficient
whose modulus is constant on the circles of a hyperbolic pencil.  Those are
also the only circles that the map sends to circles.
"""
import sys
from pathlib import Path

import numpy as np

from projconf import (
    Circle,
    ProjectiveMap,
    beltrami_field,
    circles_mapped_to_circles,
    coefficients_from_matrix,
    contour_circle,
    is_circle,
    pushforward_conic,
)
from projconf.plots import plot_pencil
from projconf.projective import conic_from_circle, preimage_of_infinity

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo_output")
out.mkdir(exist_ok=True)

# a perspective map: the last row makes it non-affine
m = ProjectiveMap([[1.0, 0.3, 0.0], [-0.2, 1.1, 0.1], [0.4, 0.2, 1.0]])
field = beltrami_field(coefficients_from_matrix(m))
print("alpha, beta, gamma:", field.alpha, field.beta, field.gamma)
print("|mu| = 0 at", field.z_zero, " |mu| = inf at", field.z_inf)

# |mu| is constant on each Apollonius circle around the two limit points
for k in (0.25, 0.5, 2.0):
    z = contour_circle(field.pencil, k).points(8)
    print(f"k = {k}: |mu| on the contour", np.round(np.abs(field.mu(z)), 12))

# the k = 1 contour is the line that the map sends to infinity
line = contour_circle(field.pencil, 1.0)
print("k = 1 contour coincides with f^-1(line at infinity):",
      np.abs(preimage_of_infinity(m).signed_distance(line.points(5))).max() < 1e-9)

# pencil circles map to circles, a nearby circle off the pencil does not
pencil = circles_mapped_to_circles(m)
member = contour_circle(pencil, 0.5)
other = Circle(member.center + 0.05, member.radius)
for name, c in (("pencil member", member), ("shifted circle", other)):
    print(name, "-> circle:", is_circle(pushforward_conic(m, conic_from_circle(c))))

svg = plot_pencil(m, (0.25, 0.5, 1.0, 2.0, 4.0), out=out / "pencil.svg")
print("wrote", out / "pencil.svg", f"({len(svg)} bytes)")
