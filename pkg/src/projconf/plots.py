"""SVG drawing of the contour pencil of |mu_f|."""
from __future__ import annotations

import xml.etree.ElementTree as ET
from pathlib import Path
from xml.sax.saxutils import escape

from .dilatation import beltrami_field, coefficients_from_matrix, contour_circle
from .errors import AffineMap
from .projective import Circle, ProjectiveMap

DEFAULT_LEVELS = (0.2, 0.4, 0.6, 0.8, 1.0, 1.25, 1.6667, 2.5, 5.0)


def _num(x: float) -> str:
    return repr(float(x))


def plot_pencil(m: ProjectiveMap, levels=DEFAULT_LEVELS, out=None, size: int = 480) -> str:
    """SVG 1.1 document with the contour circles |mu_f| = k for the given levels.

    Geometry is written in plane coordinates inside a y-flipping group, so
    circle attributes are exact pencil circles.  The level k = 1 is drawn as
    a line element.
    """
    if m.is_affine():
        raise AffineMap("affine maps have constant eccentricity")
    pencil = beltrami_field(coefficients_from_matrix(m)).pencil
    z0, zi = pencil.limit_zero, pencil.limit_inf
    mid, dist = (z0 + zi) / 2, abs(z0 - zi)
    half = 1.5 * dist
    x0, y0 = mid.real - half, mid.imag - half
    stroke = _num(2 * half / size)

    body = []
    for k in levels:
        gc = contour_circle(pencil, k)
        if isinstance(gc, Circle):
            body.append(
                f'<circle class="contour" data-k="{_num(k)}" cx="{_num(gc.center.real)}" '
                f'cy="{_num(gc.center.imag)}" r="{_num(gc.radius)}" fill="none" stroke="#3A6EA5" '
                f'stroke-width="{stroke}"/>'
            )
        else:
            along = 1j * gc.normal * 4 * half
            a, b = gc.foot + along, gc.foot - along
            body.append(
                f'<line class="contour" data-k="{_num(k)}" x1="{_num(a.real)}" y1="{_num(a.imag)}" '
                f'x2="{_num(b.real)}" y2="{_num(b.imag)}" stroke="#A53A3A" stroke-width="{stroke}"/>'
            )
    mark = 0.03 * half
    for z in (z0, zi):
        body.append(
            f'<path class="limit" d="M {_num(z.real - mark)} {_num(z.imag)} L {_num(z.real)} '
            f'{_num(z.imag + mark)} L {_num(z.real + mark)} {_num(z.imag)} L {_num(z.real)} '
            f'{_num(z.imag - mark)} Z" fill="black"/>'
        )
    labels = []
    font = _num(0.06 * half)
    for z, text in ((z0, "|μ_f| = 0"), (zi, "|μ_f| = ∞")):
        labels.append(
            f'<text x="{_num(z.real + 2 * mark)}" y="{_num(-z.imag - 2 * mark)}" '
            f'font-size="{font}" font-family="sans-serif">{escape(text)}</text>'
        )
    # the viewBox is in flipped coordinates (y down), the group flips back
    doc = "\n".join(
        [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
            f'viewBox="{_num(x0)} {_num(-(y0 + 2 * half))} {_num(2 * half)} {_num(2 * half)}">',
            '<g transform="scale(1,-1)">',
            *body,
            "</g>",
            *labels,
            "</svg>",
            "",
        ]
    )
    if out is not None:
        Path(out).write_text(doc, encoding="utf-8")
    return doc


def parse_contours(svg: str) -> list[dict]:
    """Contour elements of a document written by :func:`plot_pencil`."""
    ns = "{http://www.w3.org/2000/svg}"
    root = ET.fromstring(svg.encode("utf-8"))
    out = []
    for el in root.iter():
        if el.get("class") != "contour":
            continue
        attrs = {k: float(v) for k, v in el.attrib.items() if k not in ("class", "fill", "stroke")}
        attrs["tag"] = el.tag.replace(ns, "")
        out.append(attrs)
    return out

