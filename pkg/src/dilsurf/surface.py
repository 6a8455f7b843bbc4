"""Polygonal presentations of dilation surfaces.

A surface is a finite list of disjoint simple polygons, each carrying its own
chart of the plane, together with edge gluings z -> a*z + b with real a != 0.
A gluing identifies its source edge with its destination edge so that the
source traversal maps onto the *reversed* destination traversal; with all
polygons counterclockwise this puts the two interiors on opposite sides of
the identified edge.

Validation checks the three things that make such data an actual dilation
surface: every edge is glued exactly once, every vertex class has cone angle
an integer multiple of pi, and the scaling holonomy around every vertex
class is trivial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geom import (
    TOL,
    AffineMap,
    DilationError,
    Mat2,
    NonPositiveDeterminant,
    Vec2,
    angle_ccw,
    near,
)


class MalformedInput(DilationError):
    """Structurally broken surface data (bad indices, doubly glued edges)."""


class NotClosedSurface(DilationError):
    """Operation requires every edge to be glued."""


class NonConvexQuad(DilationError):
    """Edge flip attempted across a non-convex or degenerate quadrilateral."""


class BoundaryEdge(DilationError):
    """Edge reference has no gluing."""


@dataclass(frozen=True)
class EdgeRef:
    poly: int
    edge: int

    def __str__(self) -> str:
        return f"{self.poly}.{self.edge}"


@dataclass
class Polygon:
    vertices: list[Vec2]

    def __len__(self) -> int:
        return len(self.vertices)

    def vertex(self, i: int) -> Vec2:
        return self.vertices[i % len(self.vertices)]

    def edge_start(self, i: int) -> Vec2:
        return self.vertex(i)

    def edge_end(self, i: int) -> Vec2:
        return self.vertex(i + 1)

    def edge_vector(self, i: int) -> Vec2:
        return self.vertex(i + 1) - self.vertex(i)

    def signed_area(self) -> float:
        s = 0.0
        for i, v in enumerate(self.vertices):
            w = self.vertex(i + 1)
            s += v.cross(w)
        return 0.5 * s

    def interior_angle(self, i: int) -> float:
        """Angle swept counterclockwise through the interior at vertex i."""
        out = self.edge_vector(i)
        back = self.vertex(i - 1) - self.vertex(i)
        return angle_ccw(out, back)

    def diameter(self) -> float:
        xs = [v.x for v in self.vertices]
        ys = [v.y for v in self.vertices]
        return math.hypot(max(xs) - min(xs), max(ys) - min(ys))

    def centroid(self) -> Vec2:
        # area-weighted centroid; robust for non-convex polygons
        a = 0.0
        cx = cy = 0.0
        for i, v in enumerate(self.vertices):
            w = self.vertex(i + 1)
            c = v.cross(w)
            a += c
            cx += (v.x + w.x) * c
            cy += (v.y + w.y) * c
        if a == 0.0:
            raise DilationError("degenerate polygon")
        return Vec2(cx / (3.0 * a), cy / (3.0 * a))

    def is_simple(self, tol: float = TOL) -> bool:
        n = len(self.vertices)
        scale = max(1.0, self.diameter())
        for i in range(n):
            a, b = self.vertex(i), self.vertex(i + 1)
            if (b - a).norm() <= tol * scale:
                return False
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue
                c, d = self.vertex(j), self.vertex(j + 1)
                if _segments_cross(a, b, c, d, tol * scale):
                    return False
        return True

    def contains(self, p: Vec2, tol: float = TOL) -> bool:
        """True for interior points and points within tol of the boundary."""
        scale = max(1.0, self.diameter())
        n = len(self.vertices)
        for i in range(n):
            if _point_segment_dist(p, self.vertex(i), self.vertex(i + 1)) <= tol * scale:
                return True
        inside = False
        for i in range(n):
            a, b = self.vertex(i), self.vertex(i + 1)
            if (a.y > p.y) != (b.y > p.y):
                x_at = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y)
                if p.x < x_at:
                    inside = not inside
        return inside


def _point_segment_dist(p: Vec2, a: Vec2, b: Vec2) -> float:
    ab = b - a
    denom = ab.dot(ab)
    if denom == 0.0:
        return (p - a).norm()
    t = max(0.0, min(1.0, (p - a).dot(ab) / denom))
    return (p - (a + ab * t)).norm()


def _segments_cross(a: Vec2, b: Vec2, c: Vec2, d: Vec2, eps: float) -> bool:
    # proper crossing of open segments; shared endpoints do not count
    d1 = (b - a).cross(c - a)
    d2 = (b - a).cross(d - a)
    d3 = (d - c).cross(a - c)
    d4 = (d - c).cross(b - c)
    return (d1 > eps) != (d2 > eps) and (d1 < -eps) != (d2 < -eps) and \
           (d3 > eps) != (d4 > eps) and (d3 < -eps) != (d4 < -eps)


@dataclass
class Gluing:
    src: EdgeRef
    dst: EdgeRef
    map: AffineMap


@dataclass
class DilationSurface:
    polygons: list[Polygon]
    gluings: list[Gluing]
    tolerance: float = TOL

    def __post_init__(self):
        self._edge_table: dict[EdgeRef, tuple[int, bool]] | None = None

    def edge_table(self) -> dict[EdgeRef, tuple[int, bool]]:
        """Map each glued edge to (gluing index, appears as source).

        Raises MalformedInput for out-of-range references or an edge that
        appears in two gluings.
        """
        if self._edge_table is not None:
            return self._edge_table
        table: dict[EdgeRef, tuple[int, bool]] = {}
        for gi, g in enumerate(self.gluings):
            for ref, as_src in ((g.src, True), (g.dst, False)):
                if not (0 <= ref.poly < len(self.polygons)):
                    raise MalformedInput(f"gluing {gi}: polygon {ref.poly} out of range")
                if not (0 <= ref.edge < len(self.polygons[ref.poly])):
                    raise MalformedInput(f"gluing {gi}: edge {ref} out of range")
                if ref in table:
                    raise MalformedInput(f"edge {ref} glued twice")
                table[ref] = (gi, as_src)
        self._edge_table = table
        return table

    def all_edges(self):
        for pi, poly in enumerate(self.polygons):
            for ei in range(len(poly)):
                yield EdgeRef(pi, ei)

    def unglued_edges(self) -> list[EdgeRef]:
        table = self.edge_table()
        return [e for e in self.all_edges() if e not in table]

    def cross(self, ref: EdgeRef) -> tuple[EdgeRef, AffineMap, int, bool]:
        """Cross the gluing at ref, leaving through that copy of the edge.

        Returns (partner edge, chart map onto the partner polygon's chart,
        gluing index, forward).  forward is True when ref is the gluing's
        source copy.
        """
        hit = self.edge_table().get(ref)
        if hit is None:
            raise BoundaryEdge(f"edge {ref} is not glued")
        gi, as_src = hit
        g = self.gluings[gi]
        if as_src:
            return g.dst, g.map, gi, True
        return g.src, g.map.invert(), gi, False

    def corner_count(self) -> int:
        return sum(len(p) for p in self.polygons)


# -- vertex classes and the walk around them ---------------------------------


@dataclass
class VertexClass:
    corners: list[tuple[int, int]]       # (poly, vertex) in link order
    angle: float                         # total cone angle
    angle_multiple: int | None           # n with angle == n*pi, if it is one
    link_scale: float                    # scaling holonomy around the vertex

    def is_marked_point(self) -> bool:
        return self.angle_multiple == 2


def _corner_partner(s: DilationSurface, pi: int, vi: int) -> tuple[int, int, float]:
    """Cross the incoming edge at corner (pi, vi); return the next corner
    counterclockwise around the vertex plus the crossing's scale factor."""
    n = len(s.polygons[pi])
    ref = EdgeRef(pi, (vi - 1) % n)
    partner, _, gi, forward = s.cross(ref)
    g = s.gluings[gi]
    a = abs(g.map.scale)
    factor = 1.0 / a if forward else a
    # source end and destination start are the identified corner
    return partner.poly, partner.edge, factor


def vertex_classes(s: DilationSurface) -> list[VertexClass]:
    """Group corners into vertex classes by walking each link to closure.

    Corners are visited counterclockwise starting from the lowest unvisited
    corner, so the result is deterministic.  Requires every edge incident to
    the visited corners to be glued.
    """
    seen: set[tuple[int, int]] = set()
    classes: list[VertexClass] = []
    for pi, poly in enumerate(s.polygons):
        for vi in range(len(poly)):
            if (pi, vi) in seen:
                continue
            corners = []
            angle = 0.0
            scale = 1.0
            cp, cv = pi, vi
            while True:
                corners.append((cp, cv))
                seen.add((cp, cv))
                angle += s.polygons[cp].interior_angle(cv)
                cp, cv, factor = _corner_partner(s, cp, cv)
                scale *= factor
                if (cp, cv) == (pi, vi):
                    break
                if (cp, cv) in seen:
                    raise MalformedInput(
                        f"vertex link through corner {pi}.{vi} does not close"
                    )
            mult = None
            k = round(angle / math.pi)
            if k >= 1 and near(angle, k * math.pi, s.tolerance * 10):
                mult = k
            classes.append(VertexClass(corners, angle, mult, scale))
    return classes


# -- validation ---------------------------------------------------------------


@dataclass
class ValidationReport:
    ok: bool
    violations: list[str] = field(default_factory=list)
    vertex_classes: list[VertexClass] = field(default_factory=list)
    unpaired: list[EdgeRef] = field(default_factory=list)

    def summary(self) -> str:
        lines = []
        status = "ok" if self.ok else "FAIL"
        lines.append(f"validation: {status}")
        for v in self.violations:
            lines.append(f"  violation: {v}")
        for i, vc in enumerate(self.vertex_classes):
            mult = f"{vc.angle_multiple}*pi" if vc.angle_multiple else f"{vc.angle:.6g} rad"
            lines.append(
                f"  vertex class {i}: {len(vc.corners)} corners, angle {mult}, "
                f"link scale {vc.link_scale:.12g}"
            )
        return "\n".join(lines)


def validate(s: DilationSurface) -> ValidationReport:
    tol = s.tolerance
    violations: list[str] = []

    for pi, poly in enumerate(s.polygons):
        if len(poly) < 3:
            violations.append(f"polygon {pi} has fewer than 3 vertices")
            continue
        if poly.signed_area() <= 0.0:
            violations.append(f"polygon {pi} is not counterclockwise")
        if not poly.is_simple(tol):
            violations.append(f"polygon {pi} is not simple")

    table = s.edge_table()  # raises MalformedInput for structural breakage

    for gi, g in enumerate(s.gluings):
        sp = s.polygons[g.src.poly]
        dp = s.polygons[g.dst.poly]
        a, b = sp.edge_start(g.src.edge), sp.edge_end(g.src.edge)
        c, d = dp.edge_start(g.dst.edge), dp.edge_end(g.dst.edge)
        scale = max(1.0, sp.diameter(), dp.diameter())
        if (g.map.apply(a) - d).norm() > tol * scale or (g.map.apply(b) - c).norm() > tol * scale:
            violations.append(
                f"gluing {gi}: map does not carry edge {g.src} onto reversed edge {g.dst}"
            )

    unpaired = s.unglued_edges()
    for e in unpaired:
        violations.append(f"edge {e} is unpaired")

    classes: list[VertexClass] = []
    if not unpaired:
        classes = vertex_classes(s)
        for i, vc in enumerate(classes):
            if vc.angle_multiple is None:
                violations.append(
                    f"vertex class {i} has cone angle {vc.angle:.12g}, "
                    f"not an integer multiple of pi"
                )
            if not near(vc.link_scale, 1.0, tol * 10):
                violations.append(
                    f"vertex class {i} has nontrivial link scaling {vc.link_scale:.12g}"
                )

    return ValidationReport(ok=not violations, violations=violations,
                            vertex_classes=classes, unpaired=unpaired)


def euler_genus(s: DilationSurface) -> tuple[int, int, int, int]:
    """Count (vertex classes, edge pairs, faces, genus) of the closed
    surface."""
    if s.unglued_edges():
        raise NotClosedSurface("surface has unpaired edges")
    v = len(vertex_classes(s))
    e = len(s.gluings)
    f = len(s.polygons)
    chi = v - e + f
    if chi % 2 != 0:
        raise NotClosedSurface(f"odd euler characteristic {chi}")
    return v, e, f, (2 - chi) // 2


# -- group action -------------------------------------------------------------


def apply_matrix(s: DilationSurface, m: Mat2) -> DilationSurface:
    """Act on every chart by m; gluing scales are untouched.

    In the new charts a gluing z -> a*z + b becomes z -> a*z + m(b), since m
    commutes with real scalings.
    """
    if m.det() <= 0.0:
        raise NonPositiveDeterminant(f"determinant {m.det()} is not positive")
    polys = [Polygon([m.apply(v) for v in p.vertices]) for p in s.polygons]
    gluings = [Gluing(g.src, g.dst, AffineMap(g.map.scale, m.apply(g.map.shift)))
               for g in s.gluings]
    return DilationSurface(polys, gluings, s.tolerance)


# -- triangulation ------------------------------------------------------------


def _ear_clip(poly: Polygon, tol: float) -> list[tuple[int, int, int]]:
    """Triangulate a simple ccw polygon; returns index triples."""
    n = len(poly)
    idx = list(range(n))
    tris: list[tuple[int, int, int]] = []
    scale = max(1.0, poly.diameter())
    guard = 0
    while len(idx) > 3:
        guard += 1
        if guard > 4 * n * n:
            raise MalformedInput("ear clipping failed; polygon may not be simple")
        clipped = False
        for k in range(len(idx)):
            i0 = idx[(k - 1) % len(idx)]
            i1 = idx[k]
            i2 = idx[(k + 1) % len(idx)]
            a, b, c = poly.vertices[i0], poly.vertices[i1], poly.vertices[i2]
            if (b - a).cross(c - b) <= tol * scale * scale:
                continue  # reflex or straight corner cannot be an ear apex
            if any(_in_triangle(poly.vertices[j], a, b, c, tol * scale)
                   for j in idx if j not in (i0, i1, i2)):
                continue
            tris.append((i0, i1, i2))
            idx.pop(k)
            clipped = True
            break
        if not clipped:
            raise MalformedInput("no ear found; polygon may not be simple")
    tris.append((idx[0], idx[1], idx[2]))
    return tris


def _in_triangle(p: Vec2, a: Vec2, b: Vec2, c: Vec2, eps: float) -> bool:
    d1 = (b - a).cross(p - a)
    d2 = (c - b).cross(p - b)
    d3 = (a - c).cross(p - c)
    return d1 >= -eps and d2 >= -eps and d3 >= -eps


def triangulate(s: DilationSurface) -> DilationSurface:
    """Cut every polygon into triangles along interior diagonals.

    Diagonals become identity gluings; the original gluings are carried over
    to the triangle edges they now live on.  Vertex classes are unchanged.
    """
    new_polys: list[Polygon] = []
    boundary_map: dict[EdgeRef, EdgeRef] = {}
    diag_gluings: list[Gluing] = []

    for pi, poly in enumerate(s.polygons):
        n = len(poly)
        tris = _ear_clip(poly, s.tolerance)
        diag_owner: dict[tuple[int, int], EdgeRef] = {}
        for tri in tris:
            ti = len(new_polys)
            new_polys.append(Polygon([poly.vertices[i] for i in tri]))
            for e in range(3):
                u, v = tri[e], tri[(e + 1) % 3]
                if (u + 1) % n == v:
                    boundary_map[EdgeRef(pi, u)] = EdgeRef(ti, e)
                else:
                    key = (min(u, v), max(u, v))
                    if key in diag_owner:
                        diag_gluings.append(
                            Gluing(diag_owner[key], EdgeRef(ti, e), AffineMap.identity())
                        )
                    else:
                        diag_owner[key] = EdgeRef(ti, e)

    gluings = [Gluing(boundary_map[g.src], boundary_map[g.dst], g.map)
               for g in s.gluings]
    return DilationSurface(new_polys, gluings + diag_gluings, s.tolerance)


# -- edge flips ---------------------------------------------------------------


def flip_edge(s: DilationSurface, g) -> DilationSurface:
    """Flip the diagonal of the quadrilateral spanned by the two triangles
    adjacent to gluing g (an index into s.gluings, an EdgeRef, or a Gluing).

    The destination triangle is developed across the edge into the source
    chart; the flip requires the resulting quadrilateral to be strictly
    convex and the two faces to be distinct.
    """
    if isinstance(g, EdgeRef):
        hit = s.edge_table().get(g)
        if hit is None:
            raise BoundaryEdge(f"edge {g} is not glued")
        gi = hit[0]
    elif isinstance(g, Gluing):
        hit = s.edge_table().get(g.src)
        if hit is None or s.gluings[hit[0]] is not g and s.gluings[hit[0]] != g:
            raise MalformedInput("gluing does not belong to this surface")
        gi = hit[0]
    else:
        gi = int(g)
        if not (0 <= gi < len(s.gluings)):
            raise MalformedInput(f"gluing index {gi} out of range")
    glu = s.gluings[gi]
    p_idx, q_idx = glu.src.poly, glu.dst.poly
    P, Q = s.polygons[p_idx], s.polygons[q_idx]
    if len(P) != 3 or len(Q) != 3:
        raise MalformedInput("flip requires triangle faces on both sides")
    if p_idx == q_idx:
        raise NonConvexQuad("edge is glued to its own face")

    dev = glu.map.invert()  # dst chart -> continuation across the src edge

    ea = glu.src.edge
    A = P.vertex(ea)
    B = P.vertex(ea + 1)
    C = P.vertex(ea + 2)
    eb = glu.dst.edge
    F = dev.apply(Q.vertex(eb + 2))

    # ccw quad around the old diagonal A-B
    quad = [A, F, B, C]
    scale = max((quad[i] - quad[j]).norm() for i in range(4) for j in range(i))
    for i in range(4):
        u = quad[(i + 1) % 4] - quad[i]
        v = quad[(i + 2) % 4] - quad[(i + 1) % 4]
        if u.cross(v) <= s.tolerance * scale * scale:
            raise NonConvexQuad("developed quadrilateral is not strictly convex")

    t1 = Polygon([A, F, C])
    t2 = Polygon([F, B, C])

    # where each outer edge went: old ref -> (new ref, chart adjustment)
    moved: dict[EdgeRef, tuple[EdgeRef, AffineMap]] = {
        EdgeRef(p_idx, (ea + 1) % 3): (EdgeRef(q_idx, 1), AffineMap.identity()),  # B->C
        EdgeRef(p_idx, (ea + 2) % 3): (EdgeRef(p_idx, 2), AffineMap.identity()),  # C->A
        EdgeRef(q_idx, (eb + 1) % 3): (EdgeRef(p_idx, 0), dev),                   # E->F
        EdgeRef(q_idx, (eb + 2) % 3): (EdgeRef(q_idx, 0), dev),                   # F->D
    }

    polys = list(s.polygons)
    polys[p_idx] = t1
    polys[q_idx] = t2

    gluings: list[Gluing] = []
    for i, old in enumerate(s.gluings):
        if i == gi:
            continue
        new_src, adj_src = moved.get(old.src, (old.src, AffineMap.identity()))
        new_dst, adj_dst = moved.get(old.dst, (old.dst, AffineMap.identity()))
        new_map = adj_dst.compose(old.map).compose(adj_src.invert())
        gluings.append(Gluing(new_src, new_dst, new_map))
    # the new diagonal F-C: edge 1 of t1 against edge 2 of t2
    gluings.append(Gluing(EdgeRef(p_idx, 1), EdgeRef(q_idx, 2), AffineMap.identity()))

    return DilationSurface(polys, gluings, s.tolerance)
