"""Triangle meshes with edge lengths and discrete conformal equivalence.

Two combinatorially equivalent meshes are discretely conformally equivalent
when their edge lengths differ by vertex scale factors, equivalently when the
length cross ratios of all interior edges agree, equivalently when the
circumcircle preserving face maps fit together across edges.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import breadth_first_order, connected_components
from scipy.sparse.linalg import spsolve
from scipy.spatial import ConvexHull

from .errors import (
    BoundaryEdge,
    InvalidMesh,
    MissingPositions,
    OrientationFlip,
    OrientationViolation,
    PoleTooClose,
)
from .projective import homography_matrices, homogenize
from .triangles import Triangle

LENGTH_TOL = 1e-9
EQUIVALENCE_TOL = 1e-8
INCONCLUSIVE_TOL = 1e-5


def _key(i, j):
    return (i, j) if i < j else (j, i)


def _signed_areas(pos, faces):
    a, b, c = pos[faces[:, 0]], pos[faces[:, 1]], pos[faces[:, 2]]
    return 0.5 * (np.conj(b - a) * (c - a)).imag


class MetricTriangulation:
    """Oriented triangle mesh with positive edge lengths and optional planar positions.

    ``faces`` is an (F, 3) integer array of consistently oriented vertex
    triples; ``edge_lengths`` maps sorted vertex pairs to lengths.  If only
    positions are given the lengths are measured from them.
    """

    def __init__(self, faces, edge_lengths=None, positions=None, n_vertices=None):
        faces = np.asarray(faces, dtype=np.int64)
        if faces.ndim != 2 or faces.shape[1] != 3 or len(faces) == 0:
            raise InvalidMesh("faces must be a non-empty list of vertex triples")
        if positions is not None:
            positions = np.asarray(positions)
            if positions.dtype.kind != "c":
                positions = positions[:, 0] + 1j * positions[:, 1]
            positions = positions.astype(complex)
        n = int(n_vertices if n_vertices is not None else
                (len(positions) if positions is not None else faces.max() + 1))
        if faces.min() < 0 or faces.max() >= n:
            raise InvalidMesh("face refers to a missing vertex")
        if np.any((faces[:, 0] == faces[:, 1]) | (faces[:, 1] == faces[:, 2]) | (faces[:, 0] == faces[:, 2])):
            raise InvalidMesh("face with repeated vertex")

        halfedges = {}
        for f, (i, j, k) in enumerate(faces.tolist()):
            for u, v in ((i, j), (j, k), (k, i)):
                if (u, v) in halfedges:
                    raise InvalidMesh(f"edge {u}-{v} is used twice in the same direction")
                halfedges[(u, v)] = f
        edges = sorted({_key(u, v) for u, v in halfedges})

        if positions is not None:
            if len(positions) != n:
                raise InvalidMesh("number of positions does not match number of vertices")
            measured = {e: float(abs(positions[e[0]] - positions[e[1]])) for e in edges}
            if edge_lengths is None:
                edge_lengths = measured
            else:
                for e in edges:
                    given = edge_lengths.get(e)
                    if given is None or abs(given - measured[e]) > LENGTH_TOL * max(1.0, measured[e]):
                        raise InvalidMesh(f"edge length of {e} disagrees with positions")
            if np.any(_signed_areas(positions, faces) <= 0):
                raise InvalidMesh("faces must be positively oriented")
        if edge_lengths is None:
            raise InvalidMesh("need edge lengths or positions")
        lengths = {}
        for e in edges:
            length = edge_lengths.get(e, edge_lengths.get(e[::-1]))
            if length is None or not length > 0 or not np.isfinite(length):
                raise InvalidMesh(f"missing or non-positive length for edge {e}")
            lengths[e] = float(length)
        for i, j, k in faces.tolist():
            a, b, c = lengths[_key(j, k)], lengths[_key(k, i)], lengths[_key(i, j)]
            if not (a < b + c and b < c + a and c < a + b):
                raise InvalidMesh(f"face {(i, j, k)} violates the triangle inequality")

        e = np.array(edges)
        adj = sp.coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n))
        if connected_components(adj, directed=False)[0] != 1:
            raise InvalidMesh("mesh must be connected")

        self.n_vertices = n
        self.faces = faces
        self.faces.setflags(write=False)
        self.edge_lengths = lengths
        self.positions = positions
        if positions is not None:
            self.positions.setflags(write=False)
        self.halfedges = halfedges

    @classmethod
    def from_positions(cls, positions, faces) -> "MetricTriangulation":
        return cls(faces, positions=positions)

    @property
    def has_positions(self) -> bool:
        return self.positions is not None

    @cached_property
    def edges(self) -> np.ndarray:
        return np.array(sorted(self.edge_lengths))

    @cached_property
    def interior_edges(self) -> np.ndarray:
        """Rows (i, j, k, m, left face, right face) with i < j, left face (i, j, k)
        and right face (j, i, m) as cyclic orders."""
        rows = []
        for i, j in self.edges.tolist():
            fl, fr = self.halfedges.get((i, j)), self.halfedges.get((j, i))
            if fl is None or fr is None:
                continue
            rows.append((i, j, self._opposite(fl, i, j), self._opposite(fr, j, i), fl, fr))
        return np.array(rows, dtype=np.int64).reshape(-1, 6)

    def _opposite(self, f, i, j):
        return next(v for v in self.faces[f].tolist() if v != i and v != j)

    def length(self, i, j) -> float:
        return self.edge_lengths[_key(i, j)]

    def face_sides(self) -> np.ndarray:
        """(F, 3) lengths opposite each face corner."""
        return np.array([[self.length(j, k), self.length(k, i), self.length(i, j)]
                         for i, j, k in self.faces.tolist()])

    def face_triangle(self, f: int) -> Triangle:
        self.require_positions()
        return Triangle(*self.positions[self.faces[f]])

    def diameter(self) -> float:
        self.require_positions()
        p = self.positions
        if len(p) > 3:
            p = p[ConvexHull(np.column_stack([p.real, p.imag])).vertices]
        return float(np.abs(p[:, None] - p[None, :]).max())

    def require_positions(self):
        if self.positions is None:
            raise MissingPositions("mesh has no vertex positions")

    def scaled(self, u) -> "MetricTriangulation":
        """Mesh with lengths multiplied by exp((u_i + u_j) / 2)."""
        u = np.asarray(u, dtype=float)
        lengths = {(i, j): length * np.exp((u[i] + u[j]) / 2) for (i, j), length in self.edge_lengths.items()}
        return MetricTriangulation(self.faces, lengths, n_vertices=self.n_vertices)


@dataclass(frozen=True)
class MeshPair:
    source: MetricTriangulation
    target: MetricTriangulation

    def __post_init__(self):
        if self.source.n_vertices != self.target.n_vertices or not np.array_equal(
            self.source.faces, self.target.faces
        ):
            raise InvalidMesh("meshes are not combinatorially equivalent")


def length_cross_ratio(mesh: MetricTriangulation, edge) -> float:
    """(l_im l_jk) / (l_mj l_ki) for the interior edge ij, k on the left of i->j."""
    i, j = edge
    fl, fr = mesh.halfedges.get((i, j)), mesh.halfedges.get((j, i))
    if fl is None or fr is None:
        raise BoundaryEdge(f"edge {i}-{j} is not interior")
    k, m = mesh._opposite(fl, i, j), mesh._opposite(fr, j, i)
    ell = mesh.length
    return ell(i, m) * ell(j, k) / (ell(m, j) * ell(k, i))


def log_cross_ratios(mesh: MetricTriangulation) -> np.ndarray:
    """log length cross ratio of every interior edge, in ``mesh.interior_edges`` order."""
    rows = mesh.interior_edges
    if len(rows) == 0:
        return np.zeros(0)
    lengths = mesh.edge_lengths

    def logs(a, b):
        return np.log([lengths[_key(x, y)] for x, y in zip(a, b)])

    i, j, k, m = rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 3]
    return logs(i, m) + logs(j, k) - logs(m, j) - logs(k, i)


def _verdict(value: float, tol: float, inconclusive: float) -> str:
    if value <= tol:
        return "equivalent"
    if value <= inconclusive:
        return "inconclusive"
    return "inequivalent"


def check_equivalence_cross_ratios(pair: MeshPair, tol: float = EQUIVALENCE_TOL,
                                   inconclusive: float = INCONCLUSIVE_TOL) -> dict:
    dev = np.abs(log_cross_ratios(pair.source) - log_cross_ratios(pair.target))
    worst = float(dev.max()) if len(dev) else 0.0
    rows = pair.source.interior_edges
    return {
        "claim": "equal_length_cross_ratios",
        "n_edges": int(len(dev)),
        "max_deviation": worst,
        "worst_edge": rows[int(np.argmax(dev)), :2].tolist() if len(dev) else None,
        "verdict": _verdict(worst, tol, inconclusive),
        "equivalent": worst <= tol,
    }


def two_coloring(n: int, edges) -> np.ndarray | None:
    """+-1 coloring of a connected graph with no monochromatic edge, or None."""
    edges = np.asarray(edges)
    adj = sp.coo_matrix((np.ones(len(edges)), (edges[:, 0], edges[:, 1])), shape=(n, n)).tocsr()
    order, pred = breadth_first_order(adj, 0, directed=False, return_predecessors=True)
    depth = np.zeros(n, dtype=np.int64)
    for v in order[1:]:
        depth[v] = depth[pred[v]] + 1
    color = np.where(depth % 2 == 0, 1.0, -1.0)
    if np.any(color[edges[:, 0]] == color[edges[:, 1]]):
        return None
    return color


def solve_vertex_sums(n: int, edges, rhs) -> np.ndarray:
    """Least-squares u with u_i + u_j = rhs_ij over the given edges.

    On a bipartite graph the alternating vector spans the kernel; the returned
    solution is the one orthogonal to it.
    """
    edges = np.asarray(edges)
    ne = len(edges)
    rows = np.repeat(np.arange(ne), 2)
    inc = sp.csr_matrix((np.ones(2 * ne), (rows, edges.ravel())), shape=(ne, n))
    normal = (inc.T @ inc).tocsc()
    b = inc.T @ np.asarray(rhs, dtype=float)
    color = two_coloring(n, edges)
    if color is None:
        return spsolve(normal, b)
    gauge = sp.csc_matrix(color[:, None])
    kkt = sp.bmat([[normal, gauge], [gauge.T, None]], format="csc")
    return spsolve(kkt, np.append(b, 0.0))[:n]


def solve_scale_factors(pair: MeshPair) -> tuple[np.ndarray, float]:
    """Logarithmic scale factors u with l~_ij = exp((u_i + u_j)/2) l_ij, and the
    largest residual of the equations u_i + u_j = 2 log(l~_ij / l_ij)."""
    edges = pair.source.edges
    rhs = np.array([2 * np.log(pair.target.edge_lengths[e] / pair.source.edge_lengths[e])
                    for e in map(tuple, edges.tolist())])
    u = solve_vertex_sums(pair.source.n_vertices, edges, rhs)
    residual = float(np.abs(u[edges[:, 0]] + u[edges[:, 1]] - rhs).max())
    return u, residual


def exponent_t_centers(mesh: MetricTriangulation, t_param: float) -> np.ndarray:
    mesh.require_positions()
    sides = mesh.face_sides()
    w = (sides / sides.max(axis=1, keepdims=True)) ** t_param
    return np.einsum("fk,fk->f", w, mesh.positions[mesh.faces]) / w.sum(axis=1)


def face_maps(pair: MeshPair, t_param: float) -> np.ndarray:
    """(F, 3, 3) matrices of the exponent-t-center preserving face maps."""
    src, dst = pair.source, pair.target
    src.require_positions()
    dst.require_positions()
    s = np.column_stack([src.positions[src.faces], exponent_t_centers(src, t_param)])
    d = np.column_stack([dst.positions[dst.faces], exponent_t_centers(dst, t_param)])
    mats = homography_matrices(s, d)
    w = np.einsum("fki,fi->fk", homogenize(src.positions[src.faces]), mats[:, 2])
    if np.any(w * np.linalg.det(mats)[:, None] <= 0):
        raise OrientationViolation("a face map is not orientation preserving")
    return mats


def _apply_stack(mats, z):
    h = np.einsum("...ij,...j->...i", mats, homogenize(z))
    return (h[..., 0] + 1j * h[..., 1]) / h[..., 2]


def edge_continuity(pair: MeshPair, t_param: float, samples_per_edge: int = 17,
                    tol: float = EQUIVALENCE_TOL) -> dict:
    """Largest gap between the two face maps along interior edges, relative to
    the target diameter."""
    src = pair.source
    if not (src.has_positions and pair.target.has_positions):
        raise MissingPositions("edge continuity needs positions on both meshes")
    mats = face_maps(pair, t_param)
    rows = src.interior_edges
    s = np.linspace(0.0, 1.0, samples_per_edge)
    pi, pj = src.positions[rows[:, 0]], src.positions[rows[:, 1]]
    pts = pi[:, None] + s[None, :] * (pj - pi)[:, None]
    left = _apply_stack(mats[rows[:, 4]][:, None], pts)
    right = _apply_stack(mats[rows[:, 5]][:, None], pts)
    gap = np.abs(left - right).max(axis=1) / pair.target.diameter()
    worst = float(gap.max()) if len(gap) else 0.0
    return {
        "claim": "edge_continuity",
        "t": float(t_param),
        "n_edges": int(len(rows)),
        "samples_per_edge": int(samples_per_edge),
        "max_discrepancy": worst,
        "worst_edge": rows[int(np.argmax(gap)), :2].tolist() if len(gap) else None,
        "continuous": worst <= tol,
    }


def moebius(params, z):
    a, b, c, d = params
    return (a * z + b) / (c * z + d)


def _segment_distance(p, a, b):
    d = b - a
    s = np.clip(((np.conj(d) * (p - a)).real) / np.abs(d) ** 2, 0, 1)
    return np.abs(p - (a + s * d))


def _check_pole(mesh: MetricTriangulation, params, margin: float):
    a, b, c, d = params
    if abs(a * d - b * c) <= 1e-14 * max(abs(a * d), abs(b * c), 1e-300):
        raise ValueError("Moebius parameters have ad - bc = 0")
    if c == 0:
        return
    pole = -d / c
    pos = mesh.positions
    hull = pos[ConvexHull(np.column_stack([pos.real, pos.imag])).vertices]
    ring = np.roll(hull, -1)
    inside = np.all((np.conj(ring - hull) * (pole - hull)).imag > 0)
    if inside or _segment_distance(pole, hull, ring).min() < margin * mesh.diameter():
        raise PoleTooClose("pole of the Moebius map is too close to the mesh")


def generate_moebius_pair(mesh: MetricTriangulation, moebius_params=None, seed=None,
                          margin: float = 0.1, max_tries: int = 1000) -> MeshPair:
    """Pair (mesh, image of mesh under a Moebius map).

    Without explicit parameters, random ones are drawn from ``seed`` until the
    pole clears the mesh and no face flips.
    """
    mesh.require_positions()
    if moebius_params is not None:
        params = tuple(complex(x) for x in moebius_params)
        _check_pole(mesh, params, margin)
        return _moebius_pair(mesh, params)
    rng = np.random.default_rng(seed)
    center = mesh.positions.mean()
    for _ in range(max_tries):
        a, b, c, d = rng.normal(size=4) + 1j * rng.normal(size=4)
        params = (a, b - a * center, c, d - c * center)
        try:
            _check_pole(mesh, params, margin)
            return _moebius_pair(mesh, params)
        except (PoleTooClose, OrientationFlip):
            continue
    raise PoleTooClose("could not draw an admissible Moebius map")


def _moebius_pair(mesh, params) -> MeshPair:
    image = moebius(params, mesh.positions)
    if np.any(_signed_areas(image, mesh.faces) <= 0):
        raise OrientationFlip("Moebius image of a face is negatively oriented")
    target = MetricTriangulation(mesh.faces, positions=image, n_vertices=mesh.n_vertices)
    return MeshPair(mesh, target)


def angle_bisector_edge_split(tri: Triangle, vertex: int) -> tuple[complex, float]:
    """Foot of the interior bisector from ``vertex`` and the ratio in which it
    divides the opposite side (part at the next vertex over part at the previous)."""
    v = tri.vertices
    apex, nxt, prv = v[vertex], v[(vertex + 1) % 3], v[(vertex - 1) % 3]
    to_next, to_prev = abs(nxt - apex), abs(prv - apex)
    foot = (to_prev * nxt + to_next * prv) / (to_next + to_prev)
    return complex(foot), float(abs(foot - nxt) / abs(foot - prv))


def planar_grid_mesh(nx: int, ny: int, jitter: float = 0.0, seed=None,
                     size: tuple[float, float] = (1.0, 1.0)) -> MetricTriangulation:
    """Triangulated (nx x ny)-cell rectangle, interior vertices jittered by
    ``jitter`` times the cell size."""
    rng = np.random.default_rng(seed)
    x, y = np.meshgrid(np.linspace(0, size[0], nx + 1), np.linspace(0, size[1], ny + 1), indexing="ij")
    pos = (x + 1j * y).ravel()
    interior = ((x > 0) & (x < size[0]) & (y > 0) & (y < size[1])).ravel()
    cell = min(size[0] / nx, size[1] / ny)
    pos[interior] += jitter * cell * (rng.uniform(-0.5, 0.5, interior.sum())
                                      + 1j * rng.uniform(-0.5, 0.5, interior.sum()))
    idx = np.arange((nx + 1) * (ny + 1)).reshape(nx + 1, ny + 1)
    faces = []
    for i in range(nx):
        for j in range(ny):
            v00, v10, v11, v01 = idx[i, j], idx[i + 1, j], idx[i + 1, j + 1], idx[i, j + 1]
            if (i + j) % 2 == 0:
                faces += [(v00, v10, v11), (v00, v11, v01)]
            else:
                faces += [(v00, v10, v01), (v10, v11, v01)]
    return MetricTriangulation.from_positions(pos, faces)


def perturb_vertex(mesh: MetricTriangulation, amount: float, seed=None) -> MetricTriangulation:
    """Move one random interior vertex by ``amount`` times its mean edge length."""
    mesh.require_positions()
    rng = np.random.default_rng(seed)
    boundary = {v for i, j in mesh.halfedges if (j, i) not in mesh.halfedges for v in (i, j)}
    interior = [v for v in range(mesh.n_vertices) if v not in boundary]
    if not interior:
        raise InvalidMesh("mesh has no interior vertex")
    v = interior[rng.integers(len(interior))]
    spokes = [length for e, length in mesh.edge_lengths.items() if v in e]
    pos = mesh.positions.copy()
    pos[v] += amount * np.mean(spokes) * np.exp(2j * np.pi * rng.uniform())
    return MetricTriangulation(mesh.faces, positions=pos, n_vertices=mesh.n_vertices)
