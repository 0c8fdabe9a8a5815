"""Point location, piecewise projective evaluation and checkerboard pullback rendering."""
from __future__ import annotations

import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .discrete import MeshPair, MetricTriangulation, edge_continuity, face_maps
from .errors import OutsideMesh

OUTSIDE = -1
LIGHT = (0xEE, 0xEE, 0xEE)
DARK = (0x3A, 0x6E, 0xA5)
BACKGROUND = (0xFF, 0xFF, 0xFF)
_CHUNK = 4096


def locate_points(mesh: MetricTriangulation, pts, tol: float = 1e-12) -> np.ndarray:
    """Index of the first face whose closed region contains each point, else OUTSIDE."""
    mesh.require_positions()
    pts = np.asarray(pts, dtype=complex)
    flat = pts.ravel()
    tri = mesh.positions[mesh.faces]
    a, b, c = tri[:, 0], tri[:, 1], tri[:, 2]
    area2 = (np.conj(b - a) * (c - a)).imag
    scale = np.abs(tri - tri.mean(axis=1, keepdims=True)).max(axis=1)
    out = np.full(flat.shape, OUTSIDE, dtype=np.int64)
    for start in range(0, len(flat), _CHUNK):
        p = flat[start:start + _CHUNK, None]
        # sub-areas opposite each corner, relative to the face area
        la = (np.conj(b - p) * (c - p)).imag / area2
        lb = (np.conj(c - p) * (a - p)).imag / area2
        lc = (np.conj(a - p) * (b - p)).imag / area2
        eps = tol * np.maximum(1.0, np.abs(p) / scale)
        inside = (la >= -eps) & (lb >= -eps) & (lc >= -eps)
        hit = inside.any(axis=1)
        out[start:start + _CHUNK] = np.where(hit, inside.argmax(axis=1), OUTSIDE)
    return out.reshape(pts.shape)


def locate(mesh: MetricTriangulation, p) -> int:
    """Face containing ``p``; shared edges go to the lowest face index."""
    return int(locate_points(mesh, complex(p)))


def _apply_faces(mats, faces, z):
    m = mats[faces]
    x = m[..., 0, 0] * z.real + m[..., 0, 1] * z.imag + m[..., 0, 2]
    y = m[..., 1, 0] * z.real + m[..., 1, 1] * z.imag + m[..., 1, 2]
    w = m[..., 2, 0] * z.real + m[..., 2, 1] * z.imag + m[..., 2, 2]
    return (x + 1j * y) / w


class PiecewiseProjectiveMap:
    """Face-wise exponent-t-center preserving maps from source to target mesh."""

    def __init__(self, pair: MeshPair, t: float):
        self.pair = pair
        self.t = float(t)
        self.matrices = face_maps(pair, self.t)
        self.inverse_matrices = np.linalg.inv(self.matrices)

    @cached_property
    def continuity(self) -> dict:
        return edge_continuity(self.pair, self.t)

    def evaluate(self, p, face: int | None = None) -> complex:
        if face is None:
            face = locate(self.pair.source, p)
            if face == OUTSIDE:
                raise OutsideMesh("point is outside the source mesh")
        return complex(_apply_faces(self.matrices, np.asarray(face), np.asarray(complex(p))))

    def evaluate_inverse(self, q, face: int | None = None) -> complex:
        if face is None:
            face = locate(self.pair.target, q)
            if face == OUTSIDE:
                raise OutsideMesh("point is outside the target mesh")
        return complex(_apply_faces(self.inverse_matrices, np.asarray(face), np.asarray(complex(q))))

    def __call__(self, p):
        return self.evaluate(p)


@dataclass(frozen=True)
class RasterJob:
    width: int
    height: int
    view: tuple[float, float, float, float]  # x0, y0, x1, y1 in target coordinates
    cell: float
    supersampling: int = 1

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0 or self.supersampling <= 0:
            raise ValueError("raster dimensions must be positive")
        if not self.cell > 0:
            raise ValueError("checker cell size must be positive")
        x0, y0, x1, y1 = self.view
        if not (x1 > x0 and y1 > y0):
            raise ValueError("view rectangle must have positive extent")

    def sample_points(self, rows: slice) -> np.ndarray:
        """Subpixel sample positions, shape (rows, width, n*n); row 0 is the top."""
        n = self.supersampling
        x0, y0, x1, y1 = self.view
        sub = (np.arange(n) + 0.5) / n
        j = np.arange(self.height)[rows]
        i = np.arange(self.width)
        u = (i[:, None] + sub[None, :]) / self.width  # (W, n)
        v = (j[:, None] + sub[None, :]) / self.height  # (R, n)
        x = x0 + u * (x1 - x0)
        y = y1 - v * (y1 - y0)
        z = x[None, :, None, :] + 1j * y[:, None, :, None]  # (R, W, n, n)
        return z.reshape(len(j), self.width, n * n)


def default_view(mesh: MetricTriangulation, pad: float = 0.05) -> tuple[float, float, float, float]:
    p = mesh.positions
    x0, x1, y0, y1 = p.real.min(), p.real.max(), p.imag.min(), p.imag.max()
    dx, dy = pad * (x1 - x0), pad * (y1 - y0)
    return (x0 - dx, y0 - dy, x1 + dx, y1 + dy)


def _thread_count(threads: int | None) -> int:
    env = os.environ.get("PROJCONF_THREADS")
    cap = int(env) if env else (os.cpu_count() or 1)
    return max(1, min(cap, threads if threads is not None else cap))


def _render_rows(ppm: PiecewiseProjectiveMap, job: RasterJob, rows: slice) -> np.ndarray:
    z = job.sample_points(rows)
    faces = locate_points(ppm.pair.target, z)
    inside = faces != OUTSIDE
    src = _apply_faces(ppm.inverse_matrices, np.where(inside, faces, 0), z)
    parity = (np.floor(src.real / job.cell) + np.floor(src.imag / job.cell)) % 2 == 1
    n_in = inside.sum(axis=-1)
    n_odd = (parity & inside).sum(axis=-1)
    total = z.shape[-1]
    img = np.empty(z.shape[:2] + (3,), dtype=np.uint8)
    img[:] = BACKGROUND
    covered = 2 * n_in >= total
    img[covered & (2 * n_odd <= n_in)] = LIGHT
    img[covered & (2 * n_odd > n_in)] = DARK
    return img


def render_pullback(ppm: PiecewiseProjectiveMap, job: RasterJob, threads: int | None = None) -> np.ndarray:
    """RGB image (height, width, 3) of the source checkerboard pulled back to the target view.

    Each pixel is classified by majority over its subsamples: background if
    fewer than half land in the target mesh, otherwise the majority parity.
    """
    block = 16
    chunks = [slice(r, min(r + block, job.height)) for r in range(0, job.height, block)]
    n = _thread_count(threads)
    if n == 1:
        parts = [_render_rows(ppm, job, s) for s in chunks]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            parts = list(pool.map(lambda s: _render_rows(ppm, job, s), chunks))
    return np.concatenate(parts, axis=0)


def ppm_bytes(img: np.ndarray) -> bytes:
    img = np.ascontiguousarray(img, dtype=np.uint8)
    h, w, _ = img.shape
    return b"P6\n%d %d\n255\n" % (w, h) + img.tobytes()


def write_ppm(path, img: np.ndarray):
    with open(path, "wb") as fh:
        fh.write(ppm_bytes(img))


def read_ppm(path) -> np.ndarray:
    data = open(path, "rb").read()
    header = re.match(rb"P6\s+(\d+)\s+(\d+)\s+255\s", data)
    if header is None:
        raise ValueError("not an 8-bit binary PPM")
    w, h = int(header.group(1)), int(header.group(2))
    return np.frombuffer(data[header.end():header.end() + w * h * 3], dtype=np.uint8).reshape(h, w, 3)


def checkerboard(job: RasterJob) -> np.ndarray:
    """Checkerboard of the view itself, for identity-map comparisons."""
    z = job.sample_points(slice(None))
    parity = (np.floor(z.real / job.cell) + np.floor(z.imag / job.cell)) % 2 == 1
    odd = 2 * parity.sum(axis=-1) > z.shape[-1]
    img = np.empty(z.shape[:2] + (3,), dtype=np.uint8)
    img[:] = LIGHT
    img[odd] = DARK
    return img
