"""Straight-line flow: ray tracing, separatrices, cylinder decompositions,
and certification of parabolic elements as Dehn multitwists.

Directions live mod pi: gluing maps have real linear part, so a line field
of slope theta is globally well defined even though individual charts may
flip its orientation (negative scales rotate by 180 degrees).

Tracing bookkeeping: the accumulated scale of a trace is the derivative of
the developing map that pulls every chart back to the chart the trace
started in.  Crossing a gluing whose applied map has linear part c
multiplies the accumulated scale by 1/|c|; a closed trace's accumulated
scale therefore equals the holonomy of its crossing word.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geom import (
    TOL,
    AffineMap,
    DilationError,
    Mat2,
    TraceClass,
    Vec2,
    angle_ccw,
    classify_trace,
    near,
)
from .holonomy import LoopWord
from .surface import (
    BoundaryEdge,
    DilationSurface,
    EdgeRef,
    Gluing,
    MalformedInput,
    Polygon,
    VertexClass,
    _corner_partner,
    vertex_classes,
)


class DegenerateStart(DilationError):
    """Trace started on a vertex without saying which sector to leave by."""


class NotParabolic(DilationError):
    """Multitwist certification requires a parabolic matrix."""


@dataclass(frozen=True)
class Direction:
    """A direction mod pi, normalized to [0, pi)."""

    theta: float

    @classmethod
    def of(cls, theta: float) -> "Direction":
        t = math.fmod(theta, math.pi)
        if t < 0:
            t += math.pi
        return cls(t)

    def vector(self) -> Vec2:
        return Vec2(math.cos(self.theta), math.sin(self.theta))

    def normal(self) -> Vec2:
        return self.vector().perp()


def _theta_of(theta: float | Direction) -> float:
    return theta.theta if isinstance(theta, Direction) else theta


@dataclass(frozen=True)
class PointStart:
    poly: int
    point: Vec2


@dataclass(frozen=True)
class SectorStart:
    vertex_class: int
    sector: int


@dataclass
class Segment:
    poly: int
    start: Vec2
    end: Vec2
    scale: float  # accumulated developing scale while this segment was drawn

    def chart_length(self) -> float:
        return (self.end - self.start).norm()


@dataclass
class TraceState:
    poly: int
    point: Vec2
    heading: Vec2
    accumulated_scale: float


@dataclass
class SaddleConnection:
    end_class: int  # -1 when the surface has boundary and no class data
    length: float   # developed length in the chart the trace started in
    segments: list[Segment]
    steps: int


@dataclass
class ClosedOrbit:
    alpha: float           # first-return scale ratio: > 1 repelling, < 1 attracting
    kind: str              # "periodic" | "attracting" | "repelling"
    core: LoopWord
    poly: int              # polygon entered at both visits of the return crossing
    first_point: Vec2
    return_point: Vec2
    heading: Vec2
    first_scale: float     # accumulated scale at the first visit
    sign: int              # holonomy sign of the core word
    core_length: float     # developed length of one pass, in the first-visit chart
    segments: list[Segment]

    def fixed_point(self) -> Vec2 | None:
        """Fixed point of the first-return map on the crossed edge, in the
        chart of the return polygon.  The chart derivative of the return map
        is sign/alpha; a periodic family (derivative 1) has no isolated
        fixed point."""
        d = self.sign / self.alpha
        if abs(1.0 - d) < 1e-12:
            return None
        return self.first_point + (self.return_point - self.first_point) * (1.0 / (1.0 - d))


@dataclass
class Budget:
    steps: int
    segments: list[Segment]


TraceOutcome = SaddleConnection | ClosedOrbit | Budget


# -- sector rays around a vertex class ---------------------------------------


@dataclass
class _Ray:
    poly: int
    vertex: int
    direction: Vec2
    developed_angle: float  # offset of this ray in the developed link


def _class_rays(s: DilationSurface, vc: VertexClass, theta: float) -> list[_Ray]:
    """The rays of direction theta (mod pi) leaving the vertex class, ordered
    by developed angle around the link.  A class of cone angle n*pi carries
    exactly n of them."""
    corners = vc.corners
    angles = [s.polygons[p].interior_angle(v) for p, v in corners]
    p0, v0 = corners[0]
    a0 = s.polygons[p0].edge_vector(v0).angle()
    total = sum(angles)

    first = math.fmod(theta - a0, math.pi)
    if first < -1e-12:
        first += math.pi
    elif first < 0.0:
        first = 0.0
    rays: list[_Ray] = []
    t = first
    while t < total - 1e-9:
        acc = 0.0
        for (p, v), phi in zip(corners, angles):
            if t < acc + phi - 1e-12 or t - acc < 1e-12:
                local = s.polygons[p].edge_vector(v).angle() + (t - acc)
                rays.append(_Ray(p, v, Vec2(math.cos(local), math.sin(local)), t))
                break
            acc += phi
        else:
            p, v = corners[-1]
            local = s.polygons[p].edge_vector(v).angle() + (t - (total - angles[-1]))
            rays.append(_Ray(p, v, Vec2(math.cos(local), math.sin(local)), t))
        t += math.pi
    return rays


def _walk_factor(s: DilationSurface, vc: VertexClass, from_corner: tuple[int, int],
                 to_corner: tuple[int, int]) -> float:
    """Developing scale picked up walking the link counterclockwise from one
    corner of the class to another.  Well defined because the full link
    product is 1."""
    factor = 1.0
    cp, cv = from_corner
    for _ in range(len(vc.corners) + 1):
        if (cp, cv) == to_corner:
            return factor
        cp, cv, f = _corner_partner(s, cp, cv)
        factor *= f
    raise DilationError("corners not in the same vertex class")


# -- single-polygon ray geometry ----------------------------------------------


def _ray_exit(poly: Polygon, p: Vec2, h: Vec2, eps: float,
              hit_thr: float) -> tuple[str, int, Vec2, float]:
    """March the ray p + t*h (t > 0) to the polygon boundary.

    Returns ("vertex", vertex index, vertex point, t) when the ray passes
    within hit_thr of a vertex, else ("edge", edge index, crossing point, t).
    """
    n = len(poly)
    t_exit = math.inf
    e_exit = -1
    q_exit = None
    for i in range(n):
        u, w = poly.vertex(i), poly.vertex(i + 1)
        d = w - u
        denom = h.cross(d)
        if abs(denom) < 1e-14 * max(1.0, d.norm()):
            continue
        t = (u - p).cross(d) / denom
        sp = (u - p).cross(h) / denom
        if t > eps and -1e-9 <= sp <= 1 + 1e-9 and t < t_exit:
            t_exit, e_exit, q_exit = t, i, p + h * t
    tv_best = math.inf
    v_best = -1
    for i in range(n):
        v = poly.vertex(i)
        tv = (v - p).dot(h)
        if tv <= eps:
            continue
        if abs((v - p).cross(h)) <= hit_thr and tv < tv_best:
            tv_best, v_best = tv, i
    if v_best >= 0 and tv_best <= (t_exit if t_exit < math.inf else tv_best) + hit_thr:
        return "vertex", v_best, poly.vertex(v_best), tv_best
    if q_exit is None:
        raise DilationError("ray found no exit; point may be outside its polygon")
    return "edge", e_exit, q_exit, t_exit


# -- the tracer ----------------------------------------------------------------


def trace_ray(s: DilationSurface, start, theta: float | Direction,
              max_steps: int = 2000, eps_hit: float = 1e-7,
              through_marked: bool = False, tol: float | None = None) -> TraceOutcome:
    """Flow a straight ray until it hits a vertex, closes up, or runs out of
    budget.

    start is a PointStart or a SectorStart.  For point starts theta fixes the
    actual heading; for sector starts theta is taken mod pi and the sector
    index picks one of the n rays of the vertex class.  With through_marked
    the ray continues straight through vertex classes of angle exactly 2*pi
    (marked points are not flow singularities) and only genuine cone points
    stop it.
    """
    tol = s.tolerance if tol is None else tol
    try:
        classes = vertex_classes(s)
    except (KeyError, MalformedInput, DilationError):
        classes = []  # surface with boundary: vertex hits report class -1
    class_of: dict[tuple[int, int], int] = {}
    for ci, vc in enumerate(classes):
        for c in vc.corners:
            class_of[c] = ci

    th = _theta_of(theta)
    if isinstance(start, SectorStart):
        if not classes:
            raise DegenerateStart("sector starts need a closed surface")
        vc = classes[start.vertex_class]
        rays = _class_rays(s, vc, th)
        if not (0 <= start.sector < len(rays)):
            raise DegenerateStart(
                f"class {start.vertex_class} has {len(rays)} sectors, "
                f"asked for {start.sector}")
        ray = rays[start.sector]
        state = TraceState(ray.poly, s.polygons[ray.poly].vertex(ray.vertex),
                           ray.direction, 1.0)
    elif isinstance(start, PointStart):
        poly = s.polygons[start.poly]
        thr = eps_hit * max(1.0, poly.diameter())
        for i in range(len(poly)):
            if (start.point - poly.vertex(i)).norm() <= thr:
                raise DegenerateStart(
                    f"start point sits on vertex {i} of polygon {start.poly}; "
                    f"use a SectorStart")
        state = TraceState(start.poly, start.point,
                           Vec2(math.cos(th), math.sin(th)), 1.0)
    else:
        raise TypeError("start must be PointStart or SectorStart")

    segments: list[Segment] = []
    word: list[tuple[int, bool]] = []
    visits: dict[tuple[int, bool, int], tuple[float, Vec2, int, float, int]] = {}
    dir_vec = Direction.of(th).vector()
    length = 0.0
    sign_acc = 1

    for step in range(max_steps):
        poly = s.polygons[state.poly]
        local = max(1.0, poly.diameter())
        kind, idx, q, _ = _ray_exit(poly, state.point, state.heading,
                                    1e-12 * local, eps_hit * local)
        seg = Segment(state.poly, state.point, q, state.accumulated_scale)
        segments.append(seg)
        length += seg.chart_length() * state.accumulated_scale

        if kind == "vertex":
            ci = class_of.get((state.poly, idx), -1)
            if not (through_marked and ci >= 0 and classes[ci].angle_multiple == 2):
                return SaddleConnection(ci, length, segments, step + 1)
            # pass straight through the marked point: re-enter the link at
            # the developed angle opposite the arrival
            vc = classes[ci]
            corners = vc.corners
            angs = [s.polygons[p].interior_angle(v) for p, v in corners]
            k = corners.index((state.poly, idx))
            delta = angle_ccw(s.polygons[state.poly].edge_vector(idx), -state.heading)
            if delta > angs[k] + 1e-6:
                if 2 * math.pi - delta < 1e-6:
                    delta = 0.0
                else:
                    return SaddleConnection(ci, length, segments, step + 1)
            t_cont = (sum(angs[:k]) + delta + math.pi) % sum(angs)
            acc = 0.0
            cont = None
            for (pj, vj), phj in zip(corners, angs):
                if t_cont < acc + phj - 1e-12 or t_cont - acc < 1e-12:
                    loc = s.polygons[pj].edge_vector(vj).angle() + (t_cont - acc)
                    cont = (pj, vj, Vec2(math.cos(loc), math.sin(loc)))
                    break
                acc += phj
            if cont is None:
                return SaddleConnection(ci, length, segments, step + 1)
            pj, vj, hdg = cont
            factor = _walk_factor(s, vc, (state.poly, idx), (pj, vj))
            state = TraceState(pj, s.polygons[pj].vertex(vj), hdg,
                               state.accumulated_scale * factor)
            continue

        ref = EdgeRef(state.poly, idx)
        partner, applied, gi, fwd = s.cross(ref)  # raises BoundaryEdge if unglued
        c = applied.scale
        new_point = applied.apply(q)
        new_heading = state.heading if c > 0 else -state.heading
        new_scale = state.accumulated_scale / abs(c)
        sign_acc *= 1 if c > 0 else -1
        word.append((gi, fwd))
        hsign = 1 if new_heading.dot(dir_vec) >= 0 else -1
        key = (gi, fwd, hsign)
        if key in visits:
            s0, p0, i0, len0, sg0 = visits[key]
            alpha = new_scale / s0
            closed = True
            if near(alpha, 1.0, tol):
                # a parallel family: closed only when the point itself returns
                kind_str = "periodic"
                part = s.polygons[partner.poly]
                closed = (new_point - p0).norm() <= eps_hit * max(1.0, part.diameter())
            else:
                kind_str = "attracting" if alpha < 1.0 else "repelling"
            if closed:
                return ClosedOrbit(alpha, kind_str, core=LoopWord(tuple(word[i0 + 1:])),
                                   poly=partner.poly, first_point=p0,
                                   return_point=new_point, heading=new_heading,
                                   first_scale=s0, sign=sign_acc * sg0,
                                   core_length=(length - len0) / s0, segments=segments)
        else:
            visits[key] = (new_scale, new_point, len(word) - 1, length, sign_acc)
        state = TraceState(partner.poly, new_point, new_heading, new_scale)

    return Budget(max_steps, segments)


def separatrices(s: DilationSurface, theta: float | Direction,
                 max_steps: int = 2000, eps_hit: float = 1e-7,
                 through_marked: bool = False) -> list[tuple[int, int, TraceOutcome]]:
    """Trace every ray of direction theta from every vertex class, ordered by
    (class, sector)."""
    th = _theta_of(theta)
    out = []
    for ci, vc in enumerate(vertex_classes(s)):
        for k in range(len(_class_rays(s, vc, th))):
            outcome = trace_ray(s, SectorStart(ci, k), th, max_steps, eps_hit,
                                through_marked=through_marked)
            out.append((ci, k, outcome))
    return out


# -- cylinders and decomposition ------------------------------------------------


@dataclass
class Cylinder:
    kind: str                    # "euclidean" | "dilation"
    core: LoopWord               # crossing word in the original surface's gluings
    polygons: list[int]          # original polygons this cylinder meets
    modulus: float | None = None
    circumference: float | None = None
    height: float | None = None
    lam: float | None = None     # dilation factor of the core, reported >= 1
    angle_multiple: int | None = None


@dataclass
class Decomposition:
    direction: Direction
    cuts: list[tuple[int, int, SaddleConnection]]
    cylinders: list[Cylinder]


@dataclass
class NotDecomposable:
    reason: str                  # "infinite-separatrix" | "budget" | "component"
    vertex_class: int | None = None
    sector: int | None = None
    detail: str = ""


@dataclass
class _Piece:
    vertices: list[Vec2]
    origins: list[tuple[tuple[int, int], float, float] | None]
    # per edge: ((orig poly, orig edge), t0, t1), or None for a cut bank

    def polygon(self) -> Polygon:
        return Polygon(self.vertices)


def _split_edges(poly: Polygon, pi: int, splits: dict[int, list[float]]) -> _Piece:
    verts: list[Vec2] = []
    origins = []
    for e in range(len(poly)):
        a, b = poly.vertex(e), poly.vertex(e + 1)
        cur = 0.0
        verts.append(a)
        for t in sorted(splits.get(e, [])):
            origins.append(((pi, e), cur, t))
            verts.append(a + (b - a) * t)
            cur = t
        origins.append(((pi, e), cur, 1.0))
    return _Piece(verts, origins)


def _find_vertex(piece: _Piece, p: Vec2, tol: float) -> int | None:
    for i, v in enumerate(piece.vertices):
        if (v - p).norm() <= tol:
            return i
    return None


def _split_piece(piece: _Piece, ia: int, ib: int) -> tuple[_Piece, _Piece]:
    """Cut along the chord from vertex ia to vertex ib; both chord banks are
    left unglued (origin None)."""
    n = len(piece.vertices)

    def arc(i, j):
        vs, os = [], []
        k = i
        while k != j:
            vs.append(piece.vertices[k])
            os.append(piece.origins[k])
            k = (k + 1) % n
        vs.append(piece.vertices[j])
        return vs, os

    va, oa = arc(ia, ib)
    vb, ob = arc(ib, ia)
    return _Piece(va, oa + [None]), _Piece(vb, ob + [None])


def _cut_surface(s: DilationSurface, cut_edges: set[tuple[int, int]],
                 chords: dict[int, list[tuple[Vec2, Vec2]]]
                 ) -> tuple[list[_Piece], list[int], list[tuple[Gluing, int]]]:
    """Cut along singular leaves: drop the gluings of edges lying on leaves
    and slice polygons along interior chords.  Returns the pieces, the
    original polygon of each piece, and the surviving gluings tagged with
    their original index."""
    splits: dict[tuple[int, int], list[float]] = {}

    def note_split(pi: int, p: Vec2):
        poly = s.polygons[pi]
        scale = max(1.0, poly.diameter())
        for e in range(len(poly)):
            a, b = poly.vertex(e), poly.vertex(e + 1)
            d = b - a
            t = (p - a).dot(d) / d.dot(d)
            if -1e-12 <= t <= 1 + 1e-12 and abs((p - a).cross(d)) <= 1e-9 * scale * d.norm():
                if 1e-9 < t < 1 - 1e-9:
                    splits.setdefault((pi, e), []).append(t)
                return

    for pi, segs in chords.items():
        for a, b in segs:
            note_split(pi, a)
            note_split(pi, b)
    # push split points across gluings so sub-edges pair up exactly
    for g in s.gluings:
        sp, dp = s.polygons[g.src.poly], s.polygons[g.dst.poly]
        for t in list(splits.get((g.src.poly, g.src.edge), [])):
            p = sp.edge_start(g.src.edge) + sp.edge_vector(g.src.edge) * t
            note_split(g.dst.poly, g.map.apply(p))
        for t in list(splits.get((g.dst.poly, g.dst.edge), [])):
            p = dp.edge_start(g.dst.edge) + dp.edge_vector(g.dst.edge) * t
            note_split(g.src.poly, g.map.invert().apply(p))

    def dedup(ts: list[float]) -> list[float]:
        out: list[float] = []
        for t in sorted(ts):
            if not out or t - out[-1] > 1e-9:
                out.append(t)
        return out

    pieces: list[_Piece] = []
    piece_poly: list[int] = []
    for pi, poly in enumerate(s.polygons):
        per_edge = {e: dedup(ts) for (p, e), ts in splits.items() if p == pi}
        work = [_split_edges(poly, pi, per_edge)]
        for a, b in chords.get(pi, []):
            tol = 1e-9 * max(1.0, poly.diameter())
            placed = False
            for k, piece in enumerate(work):
                ia = _find_vertex(piece, a, tol)
                ib = _find_vertex(piece, b, tol)
                if ia is None or ib is None or ia == ib:
                    continue
                if not piece.polygon().contains((a + b) * 0.5, 1e-9):
                    continue
                p1, p2 = _split_piece(piece, ia, ib)
                work[k:k + 1] = [p1, p2]
                placed = True
                break
            if not placed:
                raise DilationError(f"could not place cut chord in polygon {pi}")
        pieces.extend(work)
        piece_poly.extend([pi] * len(work))

    sub_edges: dict[tuple[int, int], list[tuple[float, float, int, int]]] = {}
    for qi, piece in enumerate(pieces):
        for ei, org in enumerate(piece.origins):
            if org is None:
                continue
            (pi, e), t0, t1 = org
            sub_edges.setdefault((pi, e), []).append((t0, t1, qi, ei))
    for v in sub_edges.values():
        v.sort()

    gluings: list[tuple[Gluing, int]] = []
    for gi, g in enumerate(s.gluings):
        if (g.src.poly, g.src.edge) in cut_edges or (g.dst.poly, g.dst.edge) in cut_edges:
            continue
        srcs = sub_edges[(g.src.poly, g.src.edge)]
        dsts = sub_edges[(g.dst.poly, g.dst.edge)]
        if len(srcs) != len(dsts):
            raise DilationError(
                f"gluing {gi}: edge subdivisions disagree ({len(srcs)} vs {len(dsts)})")
        k = len(srcs)
        for i, (_, _, qi, ei) in enumerate(srcs):
            _, _, qj, ej = dsts[k - 1 - i]
            gluings.append((Gluing(EdgeRef(qi, ei), EdgeRef(qj, ej), g.map), gi))
    return pieces, piece_poly, gluings


def _components(n: int, gluings: list[tuple[Gluing, int]]) -> list[list[int]]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g, _ in gluings:
        a, b = find(g.src.poly), find(g.dst.poly)
        if a != b:
            parent[a] = b
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def _develop_component(surf: DilationSurface) -> dict[int, AffineMap]:
    """Chart maps developing every polygon of a connected surface into the
    chart of its polygon 0, along a spanning tree of the dual graph."""
    dev: dict[int, AffineMap] = {0: AffineMap.identity()}
    grew = True
    while grew:
        grew = False
        for g in surf.gluings:
            a, b, m = g.src.poly, g.dst.poly, g.map
            if a in dev and b not in dev:
                dev[b] = dev[a].compose(m.invert())
                grew = True
            elif b in dev and a not in dev:
                dev[a] = dev[b].compose(m)
                grew = True
    return dev


def _lifted_angular_extent(surf: DilationSurface, dev: dict[int, AffineMap],
                           apex: Vec2) -> float:
    """Total angle the developed polygons subtend around the apex, lifted
    continuously across shared edges so windings beyond 2*pi count fully."""
    pos: dict[int, list[Vec2]] = {}
    raw: dict[int, list[float]] = {}
    for qi, m in dev.items():
        pts = [m.apply(v) for v in surf.polygons[qi].vertices]
        pos[qi] = pts
        raw[qi] = [math.atan2(p.y - apex.y, p.x - apex.x) for p in pts]

    def lift_one(args: list[float]) -> list[float]:
        # place all directions on the smallest arc containing them
        srt = sorted(args)
        n = len(srt)
        gap_i, gap = 0, -1.0
        for i in range(n):
            g = (srt[(i + 1) % n] - srt[i]) % (2 * math.pi)
            if g > gap:
                gap, gap_i = g, i
        lo = srt[(gap_i + 1) % n]
        return [a if a >= lo - 1e-12 else a + 2 * math.pi for a in args]

    lift: dict[int, list[float]] = {0: lift_one(raw[0])}
    total_lo = min(lift[0])
    total_hi = max(lift[0])
    grew = True
    while grew:
        grew = False
        for g in surf.gluings:
            for a, b in ((g.src.poly, g.dst.poly), (g.dst.poly, g.src.poly)):
                if a in lift and b not in lift:
                    lb = lift_one(raw[b])
                    best_k, best_err = 0, math.inf
                    for k in range(-4, 5):
                        err, cnt = 0.0, 0
                        for i, p in enumerate(pos[a]):
                            for j, qq in enumerate(pos[b]):
                                if (p - qq).norm() <= 1e-7 * max(1.0, p.norm(), qq.norm()):
                                    err += abs(lift[a][i] - (lb[j] + 2 * math.pi * k))
                                    cnt += 1
                        if cnt and err / cnt < best_err:
                            best_err, best_k = err / cnt, k
                    lifted = [x + 2 * math.pi * best_k for x in lb]
                    lift[b] = lifted
                    total_lo = min(total_lo, min(lifted))
                    total_hi = max(total_hi, max(lifted))
                    grew = True
    return total_hi - total_lo


def directional_decomposition(s: DilationSurface, theta: float | Direction,
                              max_steps: int = 4000, eps_hit: float = 1e-7
                              ) -> Decomposition | NotDecomposable:
    """Cut the surface along the singular leaves of direction theta and
    classify the resulting annuli.

    Only genuine cone points (angle != 2*pi) emit singular leaves; leaves run
    straight through marked points.  Succeeds when every singular leaf is a
    saddle connection; the cut pieces then assemble into annuli, reported as
    Euclidean cylinders (with modulus) or dilation cylinders (with core
    holonomy and the cone angle of the underlying dilation cone).
    """
    d = theta if isinstance(theta, Direction) else Direction.of(theta)
    classes = vertex_classes(s)

    cuts: list[tuple[int, int, SaddleConnection]] = []
    for ci, vc in enumerate(classes):
        if vc.angle_multiple == 2:
            continue
        for k in range(len(_class_rays(s, vc, d.theta))):
            out = trace_ray(s, SectorStart(ci, k), d.theta, max_steps, eps_hit,
                            through_marked=True)
            if isinstance(out, ClosedOrbit):
                return NotDecomposable(
                    "infinite-separatrix", ci, k,
                    f"separatrix spirals, return scale {out.alpha:.6g}")
            if isinstance(out, Budget):
                return NotDecomposable(
                    "budget", ci, k,
                    f"no saddle connection within {max_steps} steps")
            cuts.append((ci, k, out))

    # split saddle segments into "runs along an edge" vs "interior chord"
    cut_edges: set[tuple[int, int]] = set()
    chords: dict[int, list[tuple[Vec2, Vec2]]] = {}
    for _, _, sc in cuts:
        for seg in sc.segments:
            poly = s.polygons[seg.poly]
            tol = 1e-9 * max(1.0, poly.diameter())
            on_edge = False
            for e in range(len(poly)):
                a, b = poly.vertex(e), poly.vertex(e + 1)
                if ((seg.start - a).norm() <= tol and (seg.end - b).norm() <= tol) or \
                   ((seg.start - b).norm() <= tol and (seg.end - a).norm() <= tol):
                    hit = s.edge_table().get(EdgeRef(seg.poly, e))
                    if hit is not None:
                        g = s.gluings[hit[0]]
                        cut_edges.add((g.src.poly, g.src.edge))
                        cut_edges.add((g.dst.poly, g.dst.edge))
                    on_edge = True
                    break
            if on_edge:
                continue
            known = chords.setdefault(seg.poly, [])
            if not any(((seg.start - a).norm() <= tol and (seg.end - b).norm() <= tol) or
                       ((seg.start - b).norm() <= tol and (seg.end - a).norm() <= tol)
                       for a, b in known):
                known.append((seg.start, seg.end))

    pieces, piece_poly, tagged = _cut_surface(s, cut_edges, chords)

    cylinders: list[Cylinder] = []
    for comp in _components(len(pieces), tagged):
        index = {qi: i for i, qi in enumerate(comp)}
        polys = [pieces[qi].polygon() for qi in comp]
        gl: list[Gluing] = []
        origin_of: list[int] = []
        for g, gi in tagged:
            if g.src.poly in index:
                gl.append(Gluing(EdgeRef(index[g.src.poly], g.src.edge),
                                 EdgeRef(index[g.dst.poly], g.dst.edge), g.map))
                origin_of.append(gi)
        sub = DilationSurface(polys, gl, s.tolerance)

        orbit = None
        base = polys[0]
        c0 = base.centroid()
        nrm = d.normal()
        for k in (0, 1, -1, 2, -2, 3, -3):
            p0 = c0 + nrm * (k * 0.07 * max(1.0, base.diameter()))
            if not base.contains(p0, 1e-9) or any(
                    (p0 - v).norm() < 1e-6 for v in base.vertices):
                continue
            try:
                out = trace_ray(sub, PointStart(0, p0), d.theta, max_steps, eps_hit)
            except (BoundaryEdge, DilationError):
                continue
            if isinstance(out, ClosedOrbit):
                orbit = out
                break
        if orbit is None:
            return NotDecomposable(
                "component", detail="could not close up a leaf inside a component")
        core = LoopWord(tuple((origin_of[gi], fwd) for gi, fwd in orbit.core))
        met = sorted({piece_poly[qi] for qi in comp})

        if near(orbit.alpha, 1.0, s.tolerance * 100):
            # a flat cylinder has area = circumference * height exactly, so
            # the height follows from the developed area even when leaves wrap
            # a polygon several times
            dev = _develop_component(sub)
            area = sum(dev[qi].scale ** 2 * sub.polygons[qi].signed_area()
                       for qi in dev)
            circ = orbit.core_length * orbit.first_scale  # back to chart-0 units
            height = area / circ
            cylinders.append(Cylinder("euclidean", core, met,
                                      modulus=height / circ,
                                      circumference=circ, height=height))
        else:
            lam = orbit.alpha if orbit.alpha > 1.0 else 1.0 / orbit.alpha
            # developed deck map of the core, in the return polygon's chart
            hol = AffineMap.identity()
            for gi, fwd in orbit.core:
                g = sub.gluings[gi]
                applied = g.map if fwd else g.map.invert()
                hol = hol.compose(applied.invert())
            n_mult = None
            if abs(1.0 - hol.scale) > 1e-12:
                apex = Vec2(hol.shift.x / (1.0 - hol.scale),
                            hol.shift.y / (1.0 - hol.scale))
                dev = _develop_component(sub)
                base_map = dev[orbit.poly].invert()
                rel = {qi: base_map.compose(m) for qi, m in dev.items()}
                extent = _lifted_angular_extent(sub, rel, apex)
                n_mult = max(1, round(extent / math.pi))
            cylinders.append(Cylinder("dilation", core, met, lam=lam,
                                      angle_multiple=n_mult))

    return Decomposition(d, cuts, cylinders)


# -- multitwist certification ---------------------------------------------------


@dataclass
class Certificate:
    matrix: Mat2
    direction: Direction
    shear: float
    decomposition: Decomposition
    twists: list[int | None]  # per cylinder; None for dilation cylinders


@dataclass
class Fail:
    reason: str
    decomposition: Decomposition | NotDecomposable | None = None
    details: list[str] = field(default_factory=list)


def shear_data(m: Mat2, tol: float = TOL) -> tuple[Direction, float]:
    """Eigendirection and shear amount of a parabolic matrix: with A its
    determinant-normalized copy of trace +2, A - I = mu * v * perp(v)^T for
    a unit vector v.  Returns (direction of v, mu)."""
    det = m.det()
    if det <= 0:
        raise NotParabolic(f"determinant {det:.6g} not positive")
    r = 1.0 / math.sqrt(det)
    a = Mat2(m.a * r, m.b * r, m.c * r, m.d * r)
    if a.trace() < 0:
        a = Mat2(-a.a, -a.b, -a.c, -a.d)
    if not near(a.trace(), 2.0, max(tol, 1e-9)):
        raise NotParabolic(f"normalized trace {a.trace():.12g} != 2")
    n11, n12, n21, n22 = a.a - 1.0, a.b, a.c, a.d - 1.0
    col1, col2 = Vec2(n11, n21), Vec2(n12, n22)
    v = col1 if col1.norm() >= col2.norm() else col2
    if v.norm() <= 1e-14:
        raise NotParabolic("matrix is the identity; no shear direction")
    v = v.unit()
    if v.y < 0 or (abs(v.y) < 1e-15 and v.x < 0):
        v = -v
    n = v.perp()
    mu = v.x * (n11 * n.x + n12 * n.y) + v.y * (n21 * n.x + n22 * n.y)
    res = max(abs(n11 - mu * v.x * n.x), abs(n12 - mu * v.x * n.y),
              abs(n21 - mu * v.y * n.x), abs(n22 - mu * v.y * n.y))
    if res > 1e-8:
        raise NotParabolic(f"not a shear: rank-1 residue {res:.3g}")
    return Direction.of(math.atan2(v.y, v.x)), mu


def certify_multitwist(s: DilationSurface, m: Mat2, max_steps: int = 4000,
                       eps_hit: float = 1e-7, tol: float = 1e-9) -> Certificate | Fail:
    """Certify a parabolic matrix as a Dehn multitwist along the cylinders in
    its eigendirection.

    Every Euclidean cylinder must be twisted a nonzero integer number of
    times (shear times modulus); dilation cylinders are carried into
    themselves by the shear with their boundary leaves fixed, so they impose
    no integrality condition.
    """
    if classify_trace(m, max(tol, TOL)) is not TraceClass.PARABOLIC:
        raise NotParabolic(f"classify_trace gives {classify_trace(m, max(tol, TOL)).name}")
    direction, mu = shear_data(m, tol)
    dec = directional_decomposition(s, direction, max_steps, eps_hit)
    if isinstance(dec, NotDecomposable):
        return Fail(f"decomposition failed: {dec.reason}", dec, [dec.detail])

    twists: list[int | None] = []
    problems: list[str] = []
    for i, cyl in enumerate(dec.cylinders):
        if cyl.kind == "dilation":
            twists.append(None)
            continue
        k = mu * cyl.modulus
        ki = round(k)
        if ki == 0 or abs(k - ki) > max(tol, 1e-9) * max(1.0, abs(k)):
            problems.append(f"cylinder {i}: twist amount {k:.12g} is not a nonzero integer")
            twists.append(None)
        else:
            twists.append(ki)
    if problems:
        return Fail("non-integral twist", dec, problems)
    return Certificate(m, direction, mu, dec, twists)
