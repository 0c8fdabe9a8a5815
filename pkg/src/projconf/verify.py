"""Seeded numerical checks of the dilatation and interpolation theorems.

Every check returns a record ``{"criterion", "value", "threshold", "passed"}``
where ``value`` is the measured worst case; a suite is a list of records.
Randomness comes only from the seed, so reports are reproducible.
"""
from __future__ import annotations

import time

import numpy as np

from .dilatation import (
    beltrami_arrays,
    beltrami_coefficient,
    beltrami_field,
    circles_mapped_to_circles,
    coefficient_arrays,
    coefficients_from_matrix,
    contour_circle,
    max_eccentricity_on_triangle,
    orientation_preserving_on,
)
from .discrete import (
    MeshPair,
    check_equivalence_cross_ratios,
    edge_continuity,
    generate_moebius_pair,
    perturb_vertex,
    planar_grid_mesh,
    solve_scale_factors,
)
from .errors import InvalidMesh, InvalidTriangle
from .projective import (
    Circle,
    Conic,
    ProjectiveMap,
    apply,
    conic_from_circle,
    frobenius_normalize,
    is_circle,
    preimage_of_infinity,
    pushforward_conic,
)
from .triangles import (
    Triangle,
    collapsed_square_grid,
    optimality_search,
    sl2_bisector_minimality,
    verify_cpp_vertex_eccentricity,
)

T_FAMILY = (-1.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0)


def record(criterion: str, value: float, threshold: float, above: bool = False, **extra) -> dict:
    """One check result; ``above`` means the value has to exceed the threshold."""
    value = float(value)
    return {
        "criterion": criterion,
        "value": value,
        "threshold": threshold,
        "compare": ">" if above else "<=",
        "passed": bool(value > threshold if above else value <= threshold),
        **extra,
    }


# ---------------------------------------------------------------- generators


def random_nonaffine_map(rng, max_cond: float = 1e3) -> ProjectiveMap:
    while True:
        m = rng.normal(size=(3, 3))
        if np.linalg.cond(m) < max_cond and np.hypot(m[2, 0], m[2, 1]) > 0.1:
            return ProjectiveMap(frobenius_normalize(m))


def sample_points(rng, m: ProjectiveMap, n: int, box: float = 2.0, min_dist: float = 0.1):
    """n points in [-box, box]^2 at least ``min_dist`` from f^-1(line at infinity)."""
    line = preimage_of_infinity(m)
    out = np.empty(0, dtype=complex)
    while len(out) < n:
        z = rng.uniform(-box, box, 4 * n) + 1j * rng.uniform(-box, box, 4 * n)
        out = np.append(out, z[np.abs(line.signed_distance(z)) >= min_dist])
    return out[:n]


def random_triangle(rng, min_angle_deg: float = 2.0, center=0.0, scale=1.0) -> Triangle:
    """Gaussian triangle, relabeled to positive orientation, without slivers."""
    while True:
        z = center + scale * (rng.normal(size=3) + 1j * rng.normal(size=3))
        if (np.conj(z[1] - z[0]) * (z[2] - z[0])).imag < 0:
            z = z[[0, 2, 1]]
        try:
            tri = Triangle(*z)
        except InvalidTriangle:
            continue
        v = tri.vertices
        angles = [abs(np.angle((v[(i + 1) % 3] - v[i]) / (v[(i + 2) % 3] - v[i]))) for i in range(3)]
        if min(angles) >= np.radians(min_angle_deg):
            return tri


def finite_difference_mu(m: ProjectiveMap, z, rel_step: float = 3e-4):
    """f_zbar / f_z from five-point central differences of the dehomogenized map.

    The step shrinks with the distance to f^-1(line at infinity).  Where f_z is
    small (|mu| >> 1) errors in the derivatives are amplified by about |mu|^2,
    so a second-order stencil at a fixed step is not accurate enough.
    """
    z = np.asarray(z, dtype=complex)
    mn = ProjectiveMap(frobenius_normalize(m.matrix))
    if m.is_affine():
        h = np.full(z.shape, rel_step)
    else:
        h = rel_step * np.minimum(np.abs(preimage_of_infinity(m).signed_distance(z)), 1.0)

    def derivative(u):
        near = apply(mn, z + u * h) - apply(mn, z - u * h)
        far = apply(mn, z + 2 * u * h) - apply(mn, z - 2 * u * h)
        return (8 * near - far) / (12 * h)

    fx, fy = derivative(1), derivative(1j)
    return (fx + 1j * fy) / (fx - 1j * fy)


def pencil_span_distance(conic: Conic, limit_zero: complex, limit_inf: complex) -> float:
    """Projective distance from a conic to the pencil spanned by the Apollonius circles."""
    from .dilatation import HyperbolicPencil

    pencil = HyperbolicPencil(limit_zero, limit_inf)
    basis = [frobenius_normalize(conic_from_circle(contour_circle(pencil, k)).q).ravel() for k in (0.5, 2.0)]
    q, _ = np.linalg.qr(np.column_stack(basis))
    c = frobenius_normalize(conic.q).ravel()
    proj = np.linalg.norm(q.T @ c)
    return float(np.sqrt(max(0.0, 2 - 2 * proj)))


# ---------------------------------------------------------------- suites


def random_maps(seed: int, n: int) -> list[ProjectiveMap]:
    rng = np.random.default_rng([seed, 1])
    return [random_nonaffine_map(rng) for _ in range(n)]


def check_beltrami_fd(seed: int, n_maps: int = 1000, n_points: int = 10) -> dict:
    rng = np.random.default_rng([seed, 2])
    worst = 0.0
    for m in random_maps(seed, n_maps):
        z = sample_points(rng, m, n_points)
        mu = beltrami_field(coefficients_from_matrix(m)).mu(z)
        worst = max(worst, float(np.abs(mu - finite_difference_mu(m, z)).max()))
    return record("beltrami_vs_finite_differences", worst, 1e-6, n=n_maps * n_points)


def check_det_identity(seed: int, n_maps: int = 1000) -> dict:
    """det[[alpha, beta], [-conj(alpha), conj(gamma)]] = -conj(p) det A."""
    mats = np.array([m.matrix for m in random_maps(seed, n_maps)])
    alpha, beta, gamma = beltrami_arrays(mats)
    _, _, _, p, _ = coefficient_arrays(mats)
    lhs = alpha * np.conj(gamma) + beta * np.conj(alpha)
    rhs = -np.conj(p) * np.linalg.det(mats)
    rel = np.abs(lhs - rhs) / np.abs(rhs)
    modulus = np.abs(np.abs(lhs) - np.abs(rhs)) / np.abs(rhs)
    return record("det_identity", rel.max(), 1e-9, n=n_maps, modulus_error=float(modulus.max()))


def check_pencil_contours(seed: int, n_maps: int = 100, levels=(0.25, 0.5, 0.8, 1.5, 3.0),
                          n_samples: int = 64) -> list[dict]:
    rng = np.random.default_rng(seed)
    std = at_zero = on_line = 0.0
    for _ in range(n_maps):
        m = random_nonaffine_map(rng)
        field = beltrami_field(coefficients_from_matrix(m))
        for k in levels:
            c = contour_circle(field.pencil, k)
            # direct Beltrami evaluation, not the distance-ratio shortcut
            ecc = np.abs(field.mu(c.points(n_samples, phase=rng.uniform(0, 2 * np.pi))))
            std = max(std, float(ecc.std()))
        at_zero = max(at_zero, float(abs(field.mu(field.z_zero))))
        line = preimage_of_infinity(m)
        pts = line.points(n_samples, spacing=0.1) + 0.0
        on_line = max(on_line, float(np.abs(np.abs(field.mu(pts)) - 1).max()))
    return [
        record("contour_stddev", std, 1e-9),
        record("mu_at_limit_zero", at_zero, 1e-10),
        record("mu_on_preimage_of_infinity", on_line, 1e-9),
    ]


def check_circles_to_circles(seed: int, n_maps: int = 100, levels=(0.3, 0.7, 1.0, 1.6, 4.0)) -> list[dict]:
    rng = np.random.default_rng(seed)
    member_failures = 0
    worst_member = 0.0
    nonmember_passes = 0
    closest_nonmember = np.inf
    limit_gap = 0.0
    for _ in range(n_maps):
        m = random_nonaffine_map(rng)
        pencil = circles_mapped_to_circles(m)
        field = beltrami_field(coefficients_from_matrix(m))
        limit_gap = max(limit_gap, abs(pencil.limit_zero - field.z_zero), abs(pencil.limit_inf - field.z_inf))
        for k in levels:
            image = pushforward_conic(m, conic_from_circle(contour_circle(pencil, k)))
            worst_member = max(worst_member, abs(image.circle_point_residual()))
            member_failures += not is_circle(image, 1e-8)
        while True:
            c = Circle(rng.normal() + 1j * rng.normal(), rng.uniform(0.2, 2.0))
            conic = conic_from_circle(c)
            if pencil_span_distance(conic, pencil.limit_zero, pencil.limit_inf) >= 1e-3:
                break
        image = pushforward_conic(m, conic)
        closest_nonmember = min(closest_nonmember, abs(image.circle_point_residual()))
        nonmember_passes += is_circle(image, 1e-6)
    return [
        record("pencil_members_map_to_circles", member_failures, 0, worst_residual=worst_member),
        record("non_members_rejected", nonmember_passes, 0, smallest_residual=float(closest_nonmember)),
        record("pencil_matches_beltrami_limits", limit_gap, 1e-9),
    ]


def check_inverse_symmetry(seed: int, n_samples: int = 10_000, per_map: int = 10) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_samples // per_map):
        m = random_nonaffine_map(rng)
        z = sample_points(rng, m, per_map)
        w = apply(m, z)
        lhs = np.abs(beltrami_coefficient(m, z))
        rhs = np.abs(beltrami_coefficient(m.inverse(), w))
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return record("inverse_symmetry", worst, 1e-8, n=n_samples)


def check_cpp(seed: int, n_pairs: int = 500) -> list[dict]:
    rng = np.random.default_rng(seed)
    spread = excess = pointwise = 0.0
    for _ in range(n_pairs):
        rep = verify_cpp_vertex_eccentricity(random_triangle(rng), random_triangle(rng))
        spread = max(spread, rep["spread"])
        excess = max(excess, rep["grid_excess"])
        pointwise = max(pointwise, rep["pointwise_excess"])
    return [
        record("cpp_vertex_equals_affine", spread, 1e-8, n=n_pairs),
        record("cpp_grid_below_vertex", excess, 1e-9, n=n_pairs),
        record("cpp_pointwise_below_affine", pointwise, 1e-9, n=n_pairs),
    ]


def _triangle_in_good_region(rng, field):
    z0, zi = field.z_zero, field.z_inf
    d = abs(z0 - zi)
    while True:
        tri = random_triangle(rng, center=z0 + 0.3 * d * (rng.normal() + 1j * rng.normal()), scale=0.4 * d)
        if orientation_preserving_on(field, tri.vertices):
            return tri


def check_max_at_vertex(seed: int, n_pairs: int = 200, grid: int = 100) -> dict:
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(n_pairs):
        m = random_nonaffine_map(rng)
        field = beltrami_field(coefficients_from_matrix(m))
        tri = _triangle_in_good_region(rng, field)
        vmax, _ = max_eccentricity_on_triangle(field, tri)
        pts = collapsed_square_grid(tri, grid)
        worst = max(worst, float(np.abs(field.mu(pts)).max() - vmax))
    return record("max_at_vertex", worst, 1e-9, n=n_pairs)


def check_app(seed: int, n_pairs: int = 100, n_samples: int = 10_000) -> list[dict]:
    rng = np.random.default_rng(seed)
    margin = np.inf
    offset = 0.0
    for i in range(n_pairs):
        rep = optimality_search(random_triangle(rng), random_triangle(rng), n_samples, seed=seed * 100_003 + i)
        margin = min(margin, rep["worst_margin"])
        offset = max(offset, max(map(abs, rep["line_search_offsets"])))
    return [
        record("app_never_beaten", -margin, 1e-9, worst_margin=float(margin), n=n_pairs * n_samples),
        record("app_line_search_minimum", offset, 1e-6, n=n_pairs),
    ]


def check_sl2(seed: int, n_quads: int = 500) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_quads):
        while True:
            v, w, vt, wt = rng.normal(size=4) + 1j * rng.normal(size=4)
            # keep both pairs at least ~1 degree from parallel
            if min(abs(np.sin(np.angle(w / v))), abs(np.sin(np.angle(wt / vt)))) > 0.02:
                break
        worst = max(worst, sl2_bisector_minimality(v, w, vt, wt)["bisector_residual"])
    return record("sl2_bisector_residual", worst, 1e-6, n=n_quads)


def sample_mesh(seed: int, n: int = 16):
    """Jittered (n x n)-cell grid mesh, 2 n^2 faces."""
    return planar_grid_mesh(n, n, jitter=0.4, seed=seed)


def planted_scaling(rng, mesh, scale: float = 0.1):
    """Random log scale factors u and the rescaled metric, redrawn until it is valid."""
    while True:
        u = rng.normal(scale=scale, size=mesh.n_vertices)
        try:
            return u, mesh.scaled(u)
        except InvalidMesh:
            continue


def check_equivalence(seed: int, n_pairs: int = 50, mesh_cells: int = 16) -> list[dict]:
    rng = np.random.default_rng(seed)
    mesh = sample_mesh(seed, mesh_cells)
    good = {"i": 0.0, "ii": 0.0, "iii": 0.0}
    bad = {"i": np.inf, "ii": np.inf, "iii": np.inf}
    t0 = 0.0
    for k in range(n_pairs):
        pair = generate_moebius_pair(mesh, seed=int(rng.integers(2**31)))
        good["i"] = max(good["i"], solve_scale_factors(pair)[1])
        good["ii"] = max(good["ii"], check_equivalence_cross_ratios(pair)["max_deviation"])
        good["iii"] = max(good["iii"], edge_continuity(pair, 2.0)["max_discrepancy"])
        broken = MeshPair(mesh, perturb_vertex(pair.target, 0.05, seed=int(rng.integers(2**31))))
        bad["i"] = min(bad["i"], solve_scale_factors(broken)[1])
        bad["ii"] = min(bad["ii"], check_equivalence_cross_ratios(broken)["max_deviation"])
        bad["iii"] = min(bad["iii"], edge_continuity(broken, 2.0)["max_discrepancy"])
        t0 = max(t0, edge_continuity(broken, 0.0)["max_discrepancy"])
    u_err = 0.0
    for k in range(n_pairs):
        u, scaled = planted_scaling(rng, mesh)
        u_hat, _ = solve_scale_factors(MeshPair(mesh, scaled))
        u_err = max(u_err, float(np.abs(u_hat - u).max()))
    return [
        record("equivalent_scale_factor_residual", good["i"], 1e-8),
        record("equivalent_cross_ratio_deviation", good["ii"], 1e-10),
        record("equivalent_cpp_continuity", good["iii"], 1e-8),
        record("perturbed_scale_factor_residual", bad["i"], 1e-8, above=True),
        record("perturbed_cross_ratio_deviation", bad["ii"], 1e-10, above=True),
        record("perturbed_cpp_continuity", bad["iii"], 1e-8, above=True),
        record("perturbed_pl_continuity", t0, 1e-12),
        record("planted_scale_factor_roundtrip", u_err, 1e-9),
    ]


def check_t_family(seed: int, n_pairs: int = 5, mesh_cells: int = 16, t_values=T_FAMILY) -> list[dict]:
    rng = np.random.default_rng(seed)
    mesh = sample_mesh(seed + 1, mesh_cells)
    out = []
    pairs = [generate_moebius_pair(mesh, seed=int(rng.integers(2**31))) for _ in range(n_pairs)]
    broken = [MeshPair(mesh, perturb_vertex(p.target, 0.05, seed=int(rng.integers(2**31)))) for p in pairs]
    for t in t_values:
        good = max(edge_continuity(p, t)["max_discrepancy"] for p in pairs)
        bad = min(edge_continuity(p, t)["max_discrepancy"] for p in broken)
        out.append(record(f"continuity_t={t:g}", good, 1e-8))
        out.append(record(f"discontinuity_t={t:g}", bad, 1e-4, above=True))
    return out


SUITES = {
    "pencil": lambda seed, n: [
        check_beltrami_fd(seed, **({"n_maps": n} if n else {})),
        check_det_identity(seed, **({"n_maps": n} if n else {})),
        *check_pencil_contours(seed),
        check_inverse_symmetry(seed),
        check_max_at_vertex(seed),
    ],
    "circles": lambda seed, n: check_circles_to_circles(seed, **({"n_maps": n} if n else {})),
    "cpp": lambda seed, n: check_cpp(seed, **({"n_pairs": n} if n else {})),
    "app": lambda seed, n: check_app(seed, **({"n_samples": n} if n else {})),
    "sl2": lambda seed, n: [check_sl2(seed, **({"n_quads": n} if n else {}))],
    "continuity": lambda seed, n: [*check_equivalence(seed), *check_t_family(seed)],
}


def run_suite(name: str, seed: int, n_samples: int | None = None) -> dict:
    names = list(SUITES) if name == "all" else [name]
    results = {}
    for key in names:
        start = time.perf_counter()
        records = SUITES[key](seed, n_samples)
        if isinstance(records, dict):
            records = [records]
        results[key] = {
            "records": records,
            "passed": all(r["passed"] for r in records),
            "seconds": round(time.perf_counter() - start, 3),
        }
    return {"seed": seed, "suites": results, "passed": all(s["passed"] for s in results.values())}


