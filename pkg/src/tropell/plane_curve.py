"""Plane tropical curves from the regular subdivision of the Newton polygon.

The curve of a bivariate tropical polynomial ``F`` is built from the lower
hull of the lifted points ``(exponent, coefficient)``: each 2-cell of the
induced subdivision gives a vertex, each interior edge a bounded edge and
each boundary edge a ray.  Everything is exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from tropell.errors import DegenerateInput, MultipleCycles, ZeroLengthEdge
from tropell.kernels import lower_faces
from tropell.tropical import TropicalPolynomial, argmin_terms

Point = Tuple[Fraction, Fraction]
Lattice = Tuple[int, int]


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Sequence[Lattice]) -> Tuple[Lattice, ...]:
    """Strict convex hull vertices, counterclockwise, starting at the lowest-leftmost."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return tuple(pts)
    lower: List[Lattice] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Lattice] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return (hull[0],)
    return tuple(hull)


def primitive(vector) -> Tuple[Tuple[int, int], Fraction]:
    """Split a nonzero rational vector as ``lam * w`` with ``w`` primitive integral."""
    a, b = Fraction(vector[0]), Fraction(vector[1])
    if a == 0 and b == 0:
        raise ZeroLengthEdge("zero vector has no primitive direction")
    scale = math.lcm(a.denominator, b.denominator)
    ia, ib = int(a * scale), int(b * scale)
    g = math.gcd(ia, ib)
    w = (ia // g, ib // g)
    lam = Fraction(g, scale)
    return w, lam


def lattice_length(p: Sequence, q: Sequence) -> Fraction:
    """Lattice length of the segment from ``p`` to ``q``."""
    return primitive((Fraction(q[0]) - Fraction(p[0]), Fraction(q[1]) - Fraction(p[1])))[1]


@dataclass(frozen=True)
class Cell:
    vertices: Tuple[Lattice, ...]  # counterclockwise hull vertices
    points: Tuple[Lattice, ...]  # every term exponent on the lower face
    plane: Tuple[Fraction, Fraction, Fraction]  # height = a*x + b*y + c

    @property
    def edges(self) -> List[Tuple[Lattice, Lattice]]:
        vs = self.vertices
        if len(vs) < 3:
            return [(vs[0], vs[-1])] if len(vs) == 2 else []
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]


def _edge_key(e):
    return tuple(sorted(e))


@dataclass(frozen=True)
class DualSubdivision:
    cells: Tuple[Cell, ...]
    dimension: int  # dimension of the Newton polygon

    def edge_cells(self) -> Dict[Tuple[Lattice, Lattice], List[int]]:
        out: Dict[Tuple[Lattice, Lattice], List[int]] = {}
        for idx, cell in enumerate(self.cells):
            for e in cell.edges:
                out.setdefault(_edge_key(e), []).append(idx)
        return out

    def interior_edges(self):
        return sorted(e for e, cs in self.edge_cells().items() if len(cs) == 2)

    def boundary_edges(self):
        return sorted(e for e, cs in self.edge_cells().items() if len(cs) == 1)

    def is_unimodular(self) -> bool:
        """True when every cell is a lattice triangle of normalized area one."""
        for cell in self.cells:
            if len(cell.vertices) != 3 or len(cell.points) != 3:
                return False
            a, b, c = cell.vertices
            if abs(_cross(a, b, c)) != 1:
                return False
        return True


def dual_subdivision(F: TropicalPolynomial) -> DualSubdivision:
    """Regular subdivision of the Newton polygon induced by the coefficients."""
    if F.nvars != 2:
        raise DegenerateInput(f"expected a bivariate polynomial, got {F.nvars} variables")
    pts = list(F.terms)
    heights = [F.terms[p] for p in pts]
    hull = convex_hull(pts)
    if len(hull) == 1:
        return DualSubdivision((Cell(hull, hull, (Fraction(0), Fraction(0), heights[0])),), 0)
    if len(hull) == 2:
        return DualSubdivision(_segment_cells(pts, heights), 1)
    scale = 1
    for h in heights:
        scale = math.lcm(scale, h.denominator)
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    hs = [int(h * scale) for h in heights]
    cells = []
    for on, (i, j, k) in lower_faces(xs, ys, hs):
        plane = _plane(pts[i], pts[j], pts[k], heights[i], heights[j], heights[k])
        face_pts = tuple(sorted(pts[m] for m in on))
        cells.append(Cell(convex_hull(face_pts), face_pts, plane))
    cells.sort(key=lambda c: c.vertices)
    return DualSubdivision(tuple(cells), 2)


def _plane(p, q, r, hp, hq, hr):
    det = (q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1])
    dq, dr = hq - hp, hr - hp
    a = Fraction(dq * (r[1] - p[1]) - dr * (q[1] - p[1]), det)
    b = Fraction((q[0] - p[0]) * dr - (r[0] - p[0]) * dq, det)
    c = hp - a * p[0] - b * p[1]
    return a, b, c


def _segment_cells(pts, heights):
    # one-dimensional Newton polygon: lower hull of (position along line, height)
    origin = min(pts)
    far = max(pts)
    direction = (far[0] - origin[0], far[1] - origin[1])
    g = math.gcd(*direction)
    step = (direction[0] // g, direction[1] // g)
    def pos(p):
        return (p[0] - origin[0]) // step[0] if step[0] else (p[1] - origin[1]) // step[1]
    lifted = sorted((pos(p), h, p) for p, h in zip(pts, heights))
    chain: list = []
    for item in lifted:
        while len(chain) >= 2:
            (x1, h1, _), (x2, h2, _) = chain[-2], chain[-1]
            if (h2 - h1) * (item[0] - x1) >= (item[1] - h1) * (x2 - x1):
                chain.pop()
            else:
                break
        chain.append(item)
    cells = []
    for (x1, h1, p1), (x2, h2, p2) in zip(chain, chain[1:]):
        slope = (h2 - h1) / (x2 - x1)
        on = tuple(sorted(p for (x, h, p) in lifted if h == h1 + slope * (x - x1) and x1 <= x <= x2))
        cells.append(Cell((p1, p2), on, (Fraction(0), Fraction(0), Fraction(0))))
    return tuple(cells)


@dataclass(frozen=True)
class BoundedEdge:
    v: Tuple[int, int]
    direction: Tuple[int, int]  # primitive, pointing from v[0] to v[1]
    lattice_length: Fraction
    weight: int
    dual: Tuple[Lattice, Lattice]


@dataclass(frozen=True)
class Ray:
    v: int
    direction: Tuple[int, int]
    weight: int
    dual: Tuple[Lattice, Lattice]


@dataclass(frozen=True)
class TropicalPlaneCurve:
    polynomial: TropicalPolynomial
    subdivision: DualSubdivision
    vertices: Tuple[Point, ...]
    edges: Tuple[BoundedEdge, ...]
    rays: Tuple[Ray, ...]

    def incident(self, i: int):
        """``(weight, primitive outgoing direction)`` of every edge and ray at vertex ``i``."""
        out = []
        for e in self.edges:
            if e.v[0] == i:
                out.append((e.weight, e.direction))
            elif e.v[1] == i:
                out.append((e.weight, (-e.direction[0], -e.direction[1])))
        for r in self.rays:
            if r.v == i:
                out.append((r.weight, r.direction))
        return out

    def balancing_defect(self, i: int) -> Tuple[int, int]:
        sx = sum(w * d[0] for w, d in self.incident(i))
        sy = sum(w * d[1] for w, d in self.incident(i))
        return sx, sy

    def to_json(self) -> dict:
        return curve_to_json(self)

    def contains(self, p) -> bool:
        return contains_point(self, p)


def curve_of(F: TropicalPolynomial) -> TropicalPlaneCurve:
    """Corner locus of ``F`` as a rational polyhedral complex."""
    if len(F) < 2:
        raise DegenerateInput("a tropical curve needs at least two terms")
    sub = dual_subdivision(F)
    if sub.dimension < 2:
        raise DegenerateInput("Newton polygon is not two-dimensional; the curve has no vertices")
    vertices = []
    for cell in sub.cells:
        a, b, _ = cell.plane
        vertex = (-a, -b)
        # overdetermined system: all cell terms must tie at the vertex
        values = {F.terms[p] + p[0] * vertex[0] + p[1] * vertex[1] for p in cell.points}
        assert len(values) == 1, "inconsistent vertex system"
        vertices.append(vertex)

    edges = []
    rays = []
    for key, owners in sorted(sub.edge_cells().items()):
        (p1, p2) = key
        dx, dy = p2[0] - p1[0], p2[1] - p1[1]
        weight = math.gcd(dx, dy)
        normal = (-dy // weight, dx // weight)
        if len(owners) == 2:
            i, j = sorted(owners)
            diff = (vertices[j][0] - vertices[i][0], vertices[j][1] - vertices[i][1])
            w, lam = primitive(diff)
            assert w == normal or w == (-normal[0], -normal[1]), "edge not orthogonal to dual"
            edges.append(BoundedEdge((i, j), w, lam, weight, key))
        else:
            (i,) = owners
            cell = sub.cells[i]
            inner = next(q for q in cell.vertices if _cross(p1, p2, q) != 0)
            side = normal[0] * (inner[0] - p1[0]) + normal[1] * (inner[1] - p1[1])
            if side < 0:
                normal = (-normal[0], -normal[1])
            rays.append(Ray(i, normal, weight, key))
    return TropicalPlaneCurve(F, sub, tuple(vertices), tuple(edges), tuple(rays))


# -- membership ---------------------------------------------------------------


def _on_segment(p, a, b) -> bool:
    if (b[0] - a[0]) * (p[1] - a[1]) != (b[1] - a[1]) * (p[0] - a[0]):
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def _on_ray(p, base, d) -> bool:
    rx, ry = p[0] - base[0], p[1] - base[1]
    if d[0] * ry != d[1] * rx:
        return False
    return rx * d[0] + ry * d[1] >= 0


def contains_point(curve: TropicalPlaneCurve, p) -> bool:
    p = (Fraction(p[0]), Fraction(p[1]))
    if any(p == v for v in curve.vertices):
        return True
    for e in curve.edges:
        if _on_segment(p, curve.vertices[e.v[0]], curve.vertices[e.v[1]]):
            return True
    return any(_on_ray(p, curve.vertices[r.v], r.direction) for r in curve.rays)


def on_hypersurface(F: TropicalPolynomial, p) -> bool:
    """Pointwise definition: the minimum is attained at least twice."""
    return len(argmin_terms(F, p)) >= 2


# -- cycles -------------------------------------------------------------------


@dataclass(frozen=True)
class CycleReport:
    edges: Tuple[BoundedEdge, ...]
    vertices: Tuple[int, ...]  # in traversal order
    total_lattice_length: Fraction = field(default=Fraction(0))

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [list(e.v) for e in self.edges],
            "length": str(self.total_lattice_length),
        }


def find_cycle(curve: TropicalPlaneCurve) -> Optional[CycleReport]:
    """The leafless, connected, Betti-one part of the bounded edges, if any."""
    alive = set(range(len(curve.edges)))
    adj: Dict[int, set] = {}
    for idx, e in enumerate(curve.edges):
        for v in e.v:
            adj.setdefault(v, set()).add(idx)
    changed = True
    while changed:
        changed = False
        for v, inc in adj.items():
            live = inc & alive
            if len(live) == 1:
                alive -= live
                changed = True
    if not alive:
        return None
    verts = {v for idx in alive for v in curve.edges[idx].v}
    # connected components among surviving edges
    parent = {v: v for v in verts}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for idx in alive:
        a, b = curve.edges[idx].v
        parent[find(a)] = find(b)
    components = len({find(v) for v in verts})
    betti = len(alive) - len(verts) + components
    if betti >= 2 or components > 1:
        raise MultipleCycles(f"bounded part has first Betti number {betti}")
    # walk the cycle starting from its smallest vertex
    start = min(verts)
    order_v = [start]
    order_e = []
    prev_edge = None
    current = start
    while True:
        nxt = sorted(i for i in adj[current] & alive if i != prev_edge)
        idx = nxt[0]
        e = curve.edges[idx]
        order_e.append(e)
        current = e.v[1] if e.v[0] == current else e.v[0]
        prev_edge = idx
        if current == start:
            break
        order_v.append(current)
    total = sum((e.lattice_length for e in order_e), Fraction(0))
    return CycleReport(tuple(order_e), tuple(order_v), total)


# -- serialization ------------------------------------------------------------


def _q(x: Fraction) -> str:
    return str(Fraction(x))


def curve_to_json(curve: TropicalPlaneCurve) -> dict:
    return {
        "vertices": [[_q(x), _q(y)] for x, y in curve.vertices],
        "edges": [
            {"v": list(e.v), "dir": list(e.direction), "len": _q(e.lattice_length), "weight": e.weight}
            for e in curve.edges
        ],
        "rays": [{"v": r.v, "dir": list(r.direction), "weight": r.weight} for r in curve.rays],
    }


CURVE_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["vertices", "edges", "rays"],
    "additionalProperties": False,
    "definitions": {
        "rational": {"type": "string", "pattern": r"^-?\d+(/\d+)?$"},
        "dir": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
    },
    "properties": {
        "vertices": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"$ref": "#/definitions/rational"},
                "minItems": 2,
                "maxItems": 2,
            },
        },
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["v", "dir", "len", "weight"],
                "additionalProperties": False,
                "properties": {
                    "v": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
                    "dir": {"$ref": "#/definitions/dir"},
                    "len": {"$ref": "#/definitions/rational"},
                    "weight": {"type": "integer", "minimum": 1},
                },
            },
        },
        "rays": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["v", "dir", "weight"],
                "additionalProperties": False,
                "properties": {
                    "v": {"type": "integer", "minimum": 0},
                    "dir": {"$ref": "#/definitions/dir"},
                    "weight": {"type": "integer", "minimum": 1},
                },
            },
        },
    },
}
