"""The two mesh pairs shipped with the package.

``moebius``: a jittered 8 x 8 grid on the unit square and its image under a
fixed Moebius map, so the pair is discretely conformally equivalent.

``rectangle``: the same combinatorics stretched onto a 2 x 1 rectangle with
its own jitter, a pair that is not equivalent.
"""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from .discrete import MeshPair, generate_moebius_pair, planar_grid_mesh
from .mesh_io import load_mesh, save_mesh

SAMPLE_MOEBIUS = (1.0, 0.1j, 0.35 + 0.25j, 1.1)
NAMES = ("moebius", "rectangle")


def build_sample(name: str) -> MeshPair:
    if name == "moebius":
        src = planar_grid_mesh(8, 8, jitter=0.3, seed=2024)
        return generate_moebius_pair(src, SAMPLE_MOEBIUS)
    if name == "rectangle":
        src = planar_grid_mesh(8, 8, jitter=0.3, seed=2024)
        dst = planar_grid_mesh(8, 8, jitter=0.3, seed=7, size=(2.0, 1.0))
        return MeshPair(src, dst)
    raise KeyError(f"unknown sample {name!r}; choose from {NAMES}")


def sample_paths(name: str) -> tuple[Path, Path]:
    if name not in NAMES:
        raise KeyError(f"unknown sample {name!r}; choose from {NAMES}")
    root = resources.files("projconf") / "data"
    return Path(str(root / f"{name}_src.json")), Path(str(root / f"{name}_dst.json"))


def load_sample(name: str) -> MeshPair:
    src, dst = sample_paths(name)
    return MeshPair(load_mesh(src), load_mesh(dst))


def write_samples(directory):
    directory = Path(directory)
    for name in NAMES:
        pair = build_sample(name)
        save_mesh(pair.source, directory / f"{name}_src.json")
        save_mesh(pair.target, directory / f"{name}_dst.json")
