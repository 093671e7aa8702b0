"""
SVG diagnostics for separation and inscribed-circle results
"""
from typing import IO, Optional, Sequence, Union

import numpy as np
import svgwrite
from loguru import logger

from circsep.geom_core import Circle2, Line2, Point2, Polygon
from circsep.witness import Witness

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")
_LABEL_COLORS = {"P": _COLORS[0], "Q": _COLORS[1]}


def _bounds(polygons: Sequence[Polygon], circle: Optional[Circle2], witness: Optional[Witness]):
    xy = np.vstack([p.coords for p in polygons])
    lo, hi = xy.min(axis=0), xy.max(axis=0)
    for c in (circle, witness.circle if witness is not None else None):
        if c is not None:
            lo = np.minimum(lo, [c.center.x - c.radius, c.center.y - c.radius])
            hi = np.maximum(hi, [c.center.x + c.radius, c.center.y + c.radius])
    pad = 0.1 * max(float((hi - lo).max()), 1e-9)
    return lo - pad, hi + pad


def render_svg(output: Union[str, IO[str]], polygons: Sequence[Polygon], circle: Optional[Circle2] = None,
               line: Optional[Line2] = None, witness: Optional[Witness] = None) -> None:
    """
    Draw polygons with an optional circle, line or witness

    Args:
        output: file path or open text stream
        polygons: drawn as one closed path each
        circle: separating or inscribed circle
        line: degenerate separating circle, clipped to the view
        witness: circle with its four labeled points
    """
    lo, hi = _bounds(polygons, circle, witness)
    size = hi - lo
    width = float(size.max())
    dwg = svgwrite.Drawing(size=("800px", "800px"), profile="full", debug=False)
    dwg.viewbox(float(lo[0]), float(-hi[1]), float(size[0]), float(size[1]))
    stroke = width / 400.0
    # y up
    root = dwg.g(transform="scale(1,-1)")
    dwg.add(root)

    for k, poly in enumerate(polygons):
        root.add(dwg.path("M" + " L".join(f"{x},{y}" for x, y in poly.coords) + " Z",
                          fill=_COLORS[k % len(_COLORS)], fill_opacity=0.25,
                          stroke=_COLORS[k % len(_COLORS)], stroke_width=stroke))

    if circle is not None:
        root.add(dwg.circle(center=(circle.center.x, circle.center.y), r=circle.radius,
                            fill="none", stroke="black", stroke_width=stroke))

    if line is not None:
        foot = line.foot(Point2(float(0.5 * (lo[0] + hi[0])), float(0.5 * (lo[1] + hi[1]))))
        mid = np.array([foot.x, foot.y])
        d = np.array([line.direction.x, line.direction.y]) * 2.0 * width
        a, b = mid - d, mid + d
        root.add(dwg.line(start=(float(a[0]), float(a[1])), end=(float(b[0]), float(b[1])),
                          stroke="black", stroke_width=stroke, stroke_dasharray=f"{4 * stroke},{2 * stroke}"))

    if witness is not None:
        group = dwg.g(id="witness")
        wc = witness.circle
        group.add(dwg.circle(center=(wc.center.x, wc.center.y), r=wc.radius,
                             fill="none", stroke="black", stroke_width=stroke))
        for p, label in zip(witness.points, witness.labels):
            group.add(dwg.circle(center=(p.x, p.y), r=3.0 * stroke, fill=_LABEL_COLORS.get(label, "black")))
        root.add(group)

    if hasattr(output, "write"):
        dwg.write(output)
    else:
        dwg.saveas(output)
    logger.debug(f"SVG with {len(polygons)} polygons written")
