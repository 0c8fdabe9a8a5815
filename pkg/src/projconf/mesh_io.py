"""JSON meshes and plain-text matrix files."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .discrete import MetricTriangulation
from .errors import InvalidMesh
from .projective import ProjectiveMap


def mesh_from_dict(data: dict) -> MetricTriangulation:
    if "faces" not in data:
        raise InvalidMesh("mesh JSON needs a 'faces' entry")
    positions = None
    if data.get("vertices") is not None:
        positions = np.array(data["vertices"], dtype=float)
        if positions.ndim != 2 or positions.shape[1] != 2:
            raise InvalidMesh("'vertices' must be a list of [x, y] pairs")
    lengths = None
    if data.get("lengths") is not None:
        lengths = {}
        for row in data["lengths"]:
            if len(row) != 3:
                raise InvalidMesh("'lengths' entries must be [i, j, length]")
            i, j, length = int(row[0]), int(row[1]), float(row[2])
            lengths[(min(i, j), max(i, j))] = length
    return MetricTriangulation(data["faces"], lengths, positions)


def mesh_to_dict(mesh: MetricTriangulation, include_lengths: bool = False) -> dict:
    out = {}
    if mesh.has_positions:
        out["vertices"] = [[z.real, z.imag] for z in mesh.positions.tolist()]
    out["faces"] = mesh.faces.tolist()
    if include_lengths or not mesh.has_positions:
        out["lengths"] = [[i, j, length] for (i, j), length in sorted(mesh.edge_lengths.items())]
    return out


def load_mesh(path) -> MetricTriangulation:
    with open(path) as fh:
        return mesh_from_dict(json.load(fh))


def save_mesh(mesh: MetricTriangulation, path, include_lengths: bool = False):
    Path(path).write_text(json.dumps(mesh_to_dict(mesh, include_lengths)) + "\n")


def parse_matrix(values) -> ProjectiveMap:
    """Nine row-major numbers, given as strings, floats or one whitespace-separated string."""
    if isinstance(values, str):
        values = values.split()
    flat = [float(v) for v in values]
    if len(flat) != 9:
        raise ValueError(f"expected 9 matrix entries, got {len(flat)}")
    return ProjectiveMap(np.array(flat).reshape(3, 3))


def load_matrix(path) -> ProjectiveMap:
    return parse_matrix(Path(path).read_text())


def save_matrix(m: ProjectiveMap, path):
    Path(path).write_text(" ".join(repr(float(x)) for x in m.matrix.ravel()) + "\n")
