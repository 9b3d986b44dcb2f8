"""SVG pictures of planar decompositions."""
from __future__ import annotations

import numpy as np

from .peeling import PeelDecomposition


class RenderError(ValueError):
    pass


def _polygon(P) -> np.ndarray:
    """Hull-coordinate vertices of a polygon in counterclockwise order."""
    V = P.vertices
    c = V.mean(axis=0)
    ang = np.arctan2(V[:, 1] - c[1], V[:, 0] - c[0])
    return V[np.argsort(ang, kind="stable")]


def _fill(stage: int, last: int) -> str:
    # light-to-dark blue by stage
    t = 0.0 if last <= 1 else (stage - 1) / (last - 1)
    r = int(round(222 - 190 * t))
    g = int(round(235 - 140 * t))
    b = int(round(247 - 60 * t))
    return f"#{r:02x}{g:02x}{b:02x}"


def render_svg(dec: PeelDecomposition, width: int = 600, height: int = 600,
               stroke_scale: float = 1.0) -> str:
    """One closed path per piece, filled by stage, plus each cut plane drawn
    as a segment across the polytope."""
    if dec.source.dim != 2:
        raise RenderError(f"rendering needs a 2-dimensional hull, got dimension {dec.source.dim}")
    if width <= 0 or height <= 0 or stroke_scale <= 0:
        raise RenderError("width, height and stroke scale must be positive")
    V = dec.source.vertices
    lo, hi = V.min(axis=0), V.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    pad = 0.05 * span
    s = min(width, height) / (span + 2 * pad)

    def xy(p):
        return (p[0] - lo[0] + pad) * s, height - (p[1] - lo[1] + pad) * s

    last = max(pc.stage for pc in dec.pieces)
    sw = 0.5 * stroke_scale
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           '<g id="pieces">']
    for pc in dec.pieces:
        pts = [xy(p) for p in _polygon(pc.body)] if pc.body.dim == 2 else [xy(p) for p in pc.body.vertices]
        d = "M " + " L ".join(f"{x:.4f} {y:.4f}" for x, y in pts) + " Z"
        out.append(f'<path d="{d}" fill="{_fill(pc.stage, last)}" stroke="#1b2a41" '
                   f'stroke-width="{sw:.3f}" data-stage="{pc.stage}" data-order="{pc.order_index}"/>')
    out.append("</g>")
    out.append('<g id="cuts">')
    for pc in dec.pieces:
        h = pc.cut_plane
        if h is None:
            continue
        # the plane restricted to the piece it cut off is the shared edge
        on = pc.body.vertices[np.abs(pc.body.vertices @ h.normal - h.offset) <= 1e-7]
        if len(on) < 2:
            continue
        d = on @ np.array([-h.normal[1], h.normal[0]])
        p, q = on[int(np.argmin(d))], on[int(np.argmax(d))]
        (x1, y1), (x2, y2) = xy(p), xy(q)
        out.append(f'<line x1="{x1:.4f}" y1="{y1:.4f}" x2="{x2:.4f}" y2="{y2:.4f}" '
                   f'stroke="#c0392b" stroke-width="{sw:.3f}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
