"""Deterministic SVG rendering of plane tropical curves."""

from __future__ import annotations

from fractions import Fraction
from xml.sax.saxutils import escape

from tropell.plane_curve import CycleReport, TropicalPlaneCurve

SIZE = 480
MARGIN = 32


def _fmt(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render_svg(curve: TropicalPlaneCurve, cycle: CycleReport | None = None, title: str = "") -> str:
    """Edges as lines, rays as unit stubs, the cycle (if any) highlighted.

    The viewport is the bounding box of the vertices and of the ray stub
    endpoints (base + primitive direction), padded by one lattice unit.
    """
    stubs = []
    for r in curve.rays:
        bx, by = curve.vertices[r.v]
        stubs.append(((bx, by), (bx + r.direction[0], by + r.direction[1])))
    pts = list(curve.vertices) + [s[1] for s in stubs]
    if not pts:
        pts = [(Fraction(0), Fraction(0))]
    xmin = min(p[0] for p in pts) - 1
    xmax = max(p[0] for p in pts) + 1
    ymin = min(p[1] for p in pts) - 1
    ymax = max(p[1] for p in pts) + 1
    span = max(xmax - xmin, ymax - ymin)
    scale = Fraction(SIZE - 2 * MARGIN) / span

    def tx(p):
        x = MARGIN + (p[0] - xmin) * scale
        y = MARGIN + (ymax - p[1]) * scale
        return _fmt(float(x)), _fmt(float(y))

    in_cycle = set()
    if cycle is not None:
        in_cycle = {e.v for e in cycle.edges}

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
    ]
    if title:
        lines.append(f"  <title>{escape(title)}</title>")
    lines.append('  <rect x="0" y="0" width="100%" height="100%" fill="white"/>')
    lines.append('  <g stroke="black" stroke-width="2" stroke-linecap="round">')
    for (a, b) in stubs:
        (x1, y1), (x2, y2) = tx(a), tx(b)
        lines.append(f'    <line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke-dasharray="6 4"/>')
    for e in curve.edges:
        (x1, y1), (x2, y2) = tx(curve.vertices[e.v[0]]), tx(curve.vertices[e.v[1]])
        extra = ' stroke="crimson" stroke-width="4"' if e.v in in_cycle else ""
        lines.append(f'    <line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"{extra}/>')
    lines.append("  </g>")
    lines.append('  <g fill="black">')
    for v in curve.vertices:
        x, y = tx(v)
        lines.append(f'    <circle cx="{x}" cy="{y}" r="3"/>')
    lines.append("  </g>")
    if cycle is not None:
        lines.append(
            f'  <text x="{MARGIN}" y="{MARGIN // 2 + 4}" font-family="monospace" font-size="14">'
            f"cycle length {cycle.total_lattice_length}</text>"
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
