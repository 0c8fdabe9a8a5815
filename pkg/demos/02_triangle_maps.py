"""
Projective maps between two triangles
=====================================

For a pair of triangles there is a one parameter family of projective maps:
the map sends vertices to vertices and the exponent-t center to the
corresponding center.  t = 1 gives the angle bisector preserving map (APP),
t = 2 the circumcircle preserving map (CPP).
"""
import numpy as np

from projconf import Triangle, app_map, cpp_map, exponent_t_center, family_map
from projconf.dilatation import beltrami_coefficient
from projconf.triangles import (
    affine_map,
    circumcircle_preserved,
    collapsed_square_grid,
    optimality_search,
    sl2_bisector_minimality,
)

src = Triangle(0, 1, 0.3 + 0.8j)
dst = Triangle(0, 1.4 + 0.1j, 0.9 + 0.5j)
print("incenter", src.incenter, "= exponent-1 center", exponent_t_center(1, src))

for t in (0.0, 1.0, 2.0):
    f = family_map(src, dst, t)
    print(f"t = {t}: |mu| at the vertices", np.round(f.vertex_eccentricities(), 6))

# the CPP map has the same dilatation at the vertices as the affine map,
# and never more anywhere inside the triangle
cpp = cpp_map(src, dst)
_, mu_affine = affine_map(src, dst)
grid = collapsed_square_grid(src, 50)
print("affine |mu|:", round(abs(mu_affine), 6),
      " CPP max over the triangle:", round(float(np.abs(beltrami_coefficient(cpp.map, grid)).max()), 6))
print("circumcircle goes to circumcircle, residual:", circumcircle_preserved(src, dst))

# random competitors fixing the vertices are never less dilated than the APP
# at any vertex: the smallest excess over the APP value stays >= 0
report = optimality_search(src, dst, n_samples=2000, seed=0)
print("APP vertex |mu|:", np.round(app_map(src, dst).vertex_eccentricities(), 6),
      " smallest competitor excess:", report["worst_margin"])

# the least dilated linear map between two pairs of lines maps bisector to bisector
res = sl2_bisector_minimality(1, 0.2 + 1j, 1 + 0.3j, -0.5 + 1j)
print("SL2 minimizer dilatation", round(res["dilatation"], 6), " bisector residual", res["bisector_residual"])
