"""SVG 1.1 figures of scenes and construction traces.

Output is plain text assembled with fixed number formatting, so identical
inputs give byte-identical documents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .construct import Trace
from .errors import EmptyScene
from .euclid import EuCircle, EuLine, EuPoint, EuRay, EuSegment
from .klein import HChord, HPoint, HRay, HSegment
from .scenes import Scene

_CSS = """
    .given { stroke: #1f3b73; fill: none; }
    .step { stroke: #8c8c8c; fill: none; stroke-dasharray: 4 3; }
    .result { stroke: #b22222; fill: none; }
    .disk { stroke: #000000; fill: #f6f6f6; }
    circle.marker { stroke: none; }
    circle.marker.given { fill: #1f3b73; }
    circle.marker.step { fill: #8c8c8c; }
    circle.marker.result { fill: #b22222; }
    text { font-family: sans-serif; font-size: 12px; fill: #202020; stroke: none; }
"""


@dataclass(frozen=True)
class RenderStyle:
    size: int = 480
    stroke_width: float = 1.2
    result_width: float = 2.4
    disk: bool = True
    labels: bool = True

    def __post_init__(self):
        if self.size < 64:
            raise ValueError("canvas must be at least 64 px")


def _items(obj):
    """(name, object, role) triples in drawing order."""
    if isinstance(obj, Scene):
        return obj.model, [(n, o, "given") for n, o in obj.objects.items()]
    if isinstance(obj, Trace):
        items = [(n, o, "given") for n, o in obj.givens.objects.items()]
        for rec in obj.records:
            for n, o in rec.outputs:
                items.append((n, o, "result" if obj.ok and n == obj.result else "step"))
        return obj.model, items
    raise TypeError(f"cannot render {type(obj).__name__}")


def _bounds(items):
    xs, ys = [], []
    for _, o, _ in items:
        if isinstance(o, EuPoint):
            xs.append(o.x)
            ys.append(o.y)
        elif isinstance(o, EuCircle):
            xs += [o.center.x - o.radius, o.center.x + o.radius]
            ys += [o.center.y - o.radius, o.center.y + o.radius]
        elif isinstance(o, EuSegment):
            xs += [o.start.x, o.end.x]
            ys += [o.start.y, o.end.y]
        elif isinstance(o, (EuRay, EuLine)):
            p = o.origin if isinstance(o, EuRay) else o.project(EuPoint(0.0, 0.0))
            xs.append(p.x)
            ys.append(p.y)
    lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
    span = max(hi_x - lo_x, hi_y - lo_y)
    if span <= 1e-9:
        span = 2.0
    cx, cy = 0.5 * (lo_x + hi_x), 0.5 * (lo_y + hi_y)
    half = 0.5 * span * 1.2  # 10% margin on each side
    return cx - half, cy - half, 2 * half


def _clip(px, py, dx, dy, box, t_min):
    """Parameter interval of ``p + t d`` inside the square box, starting no earlier than t_min."""
    x0, y0, w = box
    lo, hi = t_min, math.inf
    for p, d, a, b in ((px, dx, x0, x0 + w), (py, dy, y0, y0 + w)):
        if abs(d) < 1e-15:
            if not a <= p <= b:
                return None
            continue
        t1, t2 = sorted(((a - p) / d, (b - p) / d))
        lo, hi = max(lo, t1), min(hi, t2)
    if lo >= hi:
        return None
    return lo, hi


def render_svg(obj, style: RenderStyle = RenderStyle()) -> str:
    model, items = _items(obj)
    items = [it for it in items if not isinstance(it[1], float)]
    if not items:
        raise EmptyScene("nothing to draw")
    box = (-1.1, -1.1, 2.2) if model == "klein" else _bounds(items)
    x0, y0, w = box
    k = style.size / w

    def px(x, y):
        return f'{(x - x0) * k:.3f}', f'{(y0 + w - y) * k:.3f}'

    def width(role):
        return style.result_width if role == "result" else style.stroke_width

    def seg(p, q, role, name):
        (ax, ay), (bx, by) = px(*p), px(*q)
        return (f'  <line class="{role}" x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" '
                f'stroke-width="{width(role)}"><title>{escape(name)}</title></line>')

    shapes, markers = [], []
    for name, o, role in items:
        if isinstance(o, (EuPoint, HPoint)):
            cx, cy = px(o.x, o.y)
            markers.append(f'  <circle class="marker {role}" cx="{cx}" cy="{cy}" r="3"/>')
            if style.labels:
                lx, ly = px(o.x, o.y)
                markers.append(f'  <text x="{float(lx) + 5:.3f}" y="{float(ly) - 5:.3f}">{escape(name)}</text>')
        elif isinstance(o, (HChord, HSegment)):
            a, b = o.endpoints
            shapes.append(seg((a.x, a.y), (b.x, b.y), role, name))
        elif isinstance(o, HRay):
            shapes.append(seg((o.origin.x, o.origin.y), (o.toward.x, o.toward.y), role, name))
        elif isinstance(o, EuSegment):
            shapes.append(seg((o.start.x, o.start.y), (o.end.x, o.end.y), role, name))
        elif isinstance(o, EuCircle):
            cx, cy = px(o.center.x, o.center.y)
            shapes.append(f'  <circle class="{role}" cx="{cx}" cy="{cy}" r="{o.radius * k:.3f}" '
                          f'stroke-width="{width(role)}"><title>{escape(name)}</title></circle>')
        elif isinstance(o, (EuLine, EuRay)):
            if isinstance(o, EuRay):
                base, d, t_min = o.origin, o.direction, 0.0
            else:
                base, d, t_min = o.project(EuPoint(0.0, 0.0)), o.direction, -math.inf
            span = _clip(base.x, base.y, d[0], d[1], box, t_min)
            if span is not None:
                lo, hi = span
                shapes.append(seg((base.x + lo * d[0], base.y + lo * d[1]),
                                  (base.x + hi * d[0], base.y + hi * d[1]), role, name))
    size = style.size
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">',
           f'  <style type="text/css"><![CDATA[{_CSS}  ]]></style>',
           f'  <rect x="0" y="0" width="{size}" height="{size}" fill="#ffffff"/>']
    if model == "klein" and style.disk:
        cx, cy = px(0.0, 0.0)
        out.append(f'  <circle class="disk" cx="{cx}" cy="{cy}" r="{k:.3f}" stroke-width="{style.stroke_width}"/>')
    out += shapes + markers
    out.append("</svg>")
    return "\n".join(out) + "\n"
