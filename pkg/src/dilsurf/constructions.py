"""Stock surfaces used throughout the package and its tests."""

from __future__ import annotations

import math

from .geom import TOL, AffineMap, DilationError, Mat2, Vec2
from .holonomy import LoopWord
from .isom import Witness, WitnessPiece, _area, _clean, _split
from .surface import (DilationSurface, EdgeRef, Gluing, MalformedInput,
                      Polygon, apply_matrix)
from .thurston import CurveSystem


class SlitThroughVertex(DilationError):
    """The cut line of a slit runs into a vertex of the glued surface."""


class NonParallelSlits(DilationError):
    """Slits joined by a connect sum must point in the same direction."""


def square_torus(width: float = 1.0, height: float = 1.0) -> DilationSurface:
    """Rectangle with opposite sides glued by translations (genus 1)."""
    if width <= 0 or height <= 0:
        raise ValueError("torus dimensions must be positive")
    w, h = float(width), float(height)
    sq = Polygon([Vec2(0, 0), Vec2(w, 0), Vec2(w, h), Vec2(0, h)])
    gluings = [
        Gluing(EdgeRef(0, 0), EdgeRef(0, 2), AffineMap.translation(Vec2(0, h))),
        Gluing(EdgeRef(0, 1), EdgeRef(0, 3), AffineMap.translation(Vec2(-w, 0))),
    ]
    return DilationSurface([sq], gluings)


def hopf_torus(lam: float = 2.0) -> DilationSurface:
    """Dilation torus with scaling holonomy lam, as the annulus between the
    squares of half-side 1 and lam with boundaries identified by z -> z/lam.

    The annulus is split into four trapezoids.  Each outer side is the
    source of its radial gluing, so a loop leaving through it reports the
    expansion lam rather than 1/lam.  The four trapezoid corner classes are
    regular (angle 2*pi) marked points.
    """
    if lam <= 1.0:
        raise ValueError("expansion factor must exceed 1")
    t = lam
    top = Polygon([Vec2(1, 1), Vec2(t, t), Vec2(-t, t), Vec2(-1, 1)])
    left = Polygon([Vec2(-1, 1), Vec2(-t, t), Vec2(-t, -t), Vec2(-1, -1)])
    bottom = Polygon([Vec2(-1, -1), Vec2(-t, -t), Vec2(t, -t), Vec2(1, -1)])
    right = Polygon([Vec2(1, -1), Vec2(t, -t), Vec2(t, t), Vec2(1, 1)])
    ident = AffineMap.identity()
    radial = AffineMap(1.0 / lam, Vec2(0, 0))
    gluings = [
        # slant cuts, glued back by the identity
        Gluing(EdgeRef(0, 0), EdgeRef(3, 2), ident),
        Gluing(EdgeRef(0, 2), EdgeRef(1, 0), ident),
        Gluing(EdgeRef(1, 2), EdgeRef(2, 0), ident),
        Gluing(EdgeRef(2, 2), EdgeRef(3, 0), ident),
        # outer boundary contracted onto the inner one
        Gluing(EdgeRef(0, 1), EdgeRef(0, 3), radial),
        Gluing(EdgeRef(1, 1), EdgeRef(1, 3), radial),
        Gluing(EdgeRef(2, 1), EdgeRef(2, 3), radial),
        Gluing(EdgeRef(3, 1), EdgeRef(3, 3), radial),
    ]
    return DilationSurface([top, left, bottom, right], gluings)


def staircase_surface() -> DilationSurface:
    """Genus-2 dilation surface from a staircase octagon with four gluings.

    Each horizontal side is glued to a horizontal side and each vertical
    side to a vertical side, with scale 2 or 1/2; the eight corners form a
    single vertex class of cone angle 6*pi.
    """
    octagon = Polygon([
        Vec2(1, 0), Vec2(3, 0), Vec2(3, 2), Vec2(2, 2),
        Vec2(2, 3), Vec2(0, 3), Vec2(0, 1), Vec2(1, 1),
    ])
    gluings = [
        Gluing(EdgeRef(0, 4), EdgeRef(0, 6), AffineMap(0.5, Vec2(0.0, -0.5))),
        Gluing(EdgeRef(0, 3), EdgeRef(0, 5), AffineMap(2.0, Vec2(-4.0, -3.0))),
        Gluing(EdgeRef(0, 2), EdgeRef(0, 0), AffineMap(2.0, Vec2(-3.0, -4.0))),
        Gluing(EdgeRef(0, 1), EdgeRef(0, 7), AffineMap(0.5, Vec2(-0.5, 0.0))),
    ]
    return DilationSurface([octagon], gluings)


def _cut_slit(s: DilationSurface, a: Vec2, b: Vec2, tol: float
              ) -> tuple[DilationSurface, EdgeRef, EdgeRef]:
    """Open the surface along the interior segment from a to b.

    The segment must sit strictly inside one polygon.  That polygon is cut
    along the full chord of the line through the segment, the two halves
    are re-glued to each other away from the segment, and every boundary
    edge the chord lands on (through a gluing) is re-paired atom by atom.
    Returns the cut surface plus the two exposed slit edges: the copy
    running a -> b on the left half and the copy running b -> a on the
    right half.
    """
    d = b - a
    length = d.norm()
    if length <= tol:
        raise MalformedInput("slit endpoints coincide")
    u = d * (1.0 / length)

    mid = (a + b) * 0.5
    k = None
    for i, p in enumerate(s.polygons):
        if p.contains(a, tol) and p.contains(b, tol) and p.contains(mid, tol):
            k = i
            break
    if k is None:
        raise MalformedInput("slit does not lie inside a single polygon")

    poly = s.polygons[k]
    vtol = tol * max(1.0, poly.diameter())
    h = [u.cross(v - a) for v in poly.vertices]
    if any(abs(x) <= vtol for x in h):
        raise SlitThroughVertex(
            f"cut line through the slit meets a vertex of polygon {k}")

    n = len(poly)
    crossings = []
    for e in range(n):
        ha, hb = h[e], h[(e + 1) % n]
        if (ha > 0) == (hb > 0):
            continue
        va, vb = poly.vertex(e), poly.vertex(e + 1)
        x = va + (vb - va) * (ha / (ha - hb))
        if (x - va).norm() <= vtol or (x - vb).norm() <= vtol:
            raise SlitThroughVertex(
                f"cut line meets polygon {k} next to a vertex of edge {e}")
        crossings.append(((x - a).dot(u), e, x))
    crossings.sort(key=lambda c: c[0])

    # Along the sorted chord the line alternates outside/inside, so inside
    # stretches are the even-indexed consecutive pairs.  The slit needs one
    # of them with room to spare at both ends.
    pq = None
    for i in range(0, len(crossings) - 1, 2):
        if crossings[i][0] < -vtol and crossings[i + 1][0] > length + vtol:
            pq = (crossings[i], crossings[i + 1])
            break
    if pq is None:
        raise MalformedInput(
            f"slit reaches the boundary of polygon {k}")
    (_, ep, xp), (_, eq, xq) = pq

    # Where the chord splits an edge, the glued partner splits at the image
    # point.  Collect every split, expressed on the source side of its
    # gluing, then spread to both sides.
    cut_at = {ep: xp, eq: xq}
    inserts: dict[tuple[int, int], list[tuple[float, Vec2]]] = {}
    for g in s.gluings:
        pts: list[Vec2] = []
        if g.src.poly == k and g.src.edge in cut_at:
            pts.append(cut_at[g.src.edge])
        if g.dst.poly == k and g.dst.edge in cut_at:
            pts.append(g.map.invert().apply(cut_at[g.dst.edge]))
        if not pts:
            continue
        sp = s.polygons[g.src.poly]
        sa = sp.edge_start(g.src.edge)
        sv = sp.edge_vector(g.src.edge)
        pts.sort(key=lambda p: (p - sa).dot(sv))
        kept: list[Vec2] = []
        for p in pts:
            if not kept or (p - kept[-1]).norm() > vtol:
                kept.append(p)
        for ref, side in ((g.src, kept),
                          (g.dst, [g.map.apply(p) for p in kept])):
            pr = s.polygons[ref.poly]
            ea = pr.edge_start(ref.edge)
            ev = pr.edge_vector(ref.edge)
            for p in side:
                t = (p - ea).dot(ev) / ev.dot(ev)
                if (p - ea).norm() <= vtol or (p - ea - ev).norm() <= vtol:
                    raise SlitThroughVertex(
                        f"slit cut point lands on a vertex of edge {ref}")
                inserts.setdefault((ref.poly, ref.edge), []).append((t, p))

    # Snap the chord points back to their exact objects so the halves and
    # the re-paired gluings share coordinates bit for bit.
    for e, x in cut_at.items():
        lst = inserts.setdefault((k, e), [])
        for j, (t, p) in enumerate(lst):
            if (p - x).norm() <= vtol:
                lst[j] = (t, x)
                break
        else:
            ea = poly.edge_start(e)
            ev = poly.edge_vector(e)
            lst.append(((x - ea).dot(ev) / ev.dot(ev), x))

    # Full boundary walk of the cut polygon with all split points in place.
    walk: list[Vec2] = []
    walk_oe: list[int] = []
    for e in range(n):
        walk.append(poly.vertex(e))
        walk_oe.append(e)
        for _, p in sorted(inserts.get((k, e), []), key=lambda tp: tp[0]):
            walk.append(p)
            walk_oe.append(e)
    nw = len(walk)
    ip = next(i for i, p in enumerate(walk) if p is xp)
    iq = next(i for i, p in enumerate(walk) if p is xq)

    def run(frm: int, to: int) -> list[int]:
        out = []
        i = (frm + 1) % nw
        while i != to:
            out.append(i)
            i = (i + 1) % nw
        return out

    upper = run(iq, ip)           # boundary arc left of the chord
    lower = run(ip, iq)
    rindex = len(s.polygons)
    npolys = list(s.polygons)
    npolys[k] = Polygon([xp, a, b, xq] + [walk[i] for i in upper])
    npolys.append(Polygon([xq, b, a, xp] + [walk[i] for i in lower]))

    atom_of: dict[tuple[int, int], list[EdgeRef]] = {}
    new_ref = {iq: EdgeRef(k, 3), ip: EdgeRef(rindex, 3)}
    for t, i in enumerate(upper):
        new_ref[i] = EdgeRef(k, 4 + t)
    for t, i in enumerate(lower):
        new_ref[i] = EdgeRef(rindex, 4 + t)
    for e in range(n):
        atom_of[(k, e)] = [new_ref[i] for i in range(nw) if walk_oe[i] == e]

    for j, pj in enumerate(s.polygons):
        if j == k:
            continue
        if not any((j, e) in inserts for e in range(len(pj))):
            for e in range(len(pj)):
                atom_of[(j, e)] = [EdgeRef(j, e)]
            continue
        verts: list[Vec2] = []
        for e in range(len(pj)):
            start = len(verts)
            verts.append(pj.vertex(e))
            for _, p in sorted(inserts.get((j, e), []), key=lambda tp: tp[0]):
                verts.append(p)
            atom_of[(j, e)] = [EdgeRef(j, i) for i in range(start, len(verts))]
        npolys[j] = Polygon(verts)

    nglue: list[Gluing] = []
    for g in s.gluings:
        sa_ = atom_of[(g.src.poly, g.src.edge)]
        da_ = atom_of[(g.dst.poly, g.dst.edge)]
        # the gluing reverses edge direction, so atom i pairs with the
        # partner's atom counted from the other end
        for i in range(len(sa_)):
            nglue.append(Gluing(sa_[i], da_[len(da_) - 1 - i], g.map))
    ident = AffineMap.identity()
    nglue.append(Gluing(EdgeRef(k, 0), EdgeRef(rindex, 2), ident))
    nglue.append(Gluing(EdgeRef(k, 2), EdgeRef(rindex, 0), ident))
    return (DilationSurface(npolys, nglue),
            EdgeRef(k, 1), EdgeRef(rindex, 1))


def slit_connect_sum(s1: DilationSurface, slit1: tuple[Vec2, Vec2],
                     s2: DilationSurface, slit2: tuple[Vec2, Vec2],
                     tol: float = TOL) -> DilationSurface:
    """Connect sum along parallel slits, one cut into each surface.

    Each side of a slit is glued to the opposite side of the other one by
    the dilation matching their lengths.  The endpoints become two cone
    points of angle 4*pi; the genus of the result is the sum of the input
    genera.
    """
    a1, b1 = slit1
    a2, b2 = slit2
    d1 = b1 - a1
    d2 = b2 - a2
    if d1.norm() <= tol or d2.norm() <= tol:
        raise MalformedInput("slit endpoints coincide")
    if abs(d1.cross(d2)) > tol * d1.norm() * d2.norm():
        raise NonParallelSlits(
            f"slit directions {d1} and {d2} are not parallel")
    if d1.dot(d2) < 0:
        a2, b2 = b2, a2

    c1, left1, right1 = _cut_slit(s1, a1, b1, tol)
    c2, left2, right2 = _cut_slit(s2, a2, b2, tol)
    off = len(c1.polygons)
    polys = list(c1.polygons) + list(c2.polygons)
    gluings = list(c1.gluings)
    for g in c2.gluings:
        gluings.append(Gluing(EdgeRef(g.src.poly + off, g.src.edge),
                              EdgeRef(g.dst.poly + off, g.dst.edge), g.map))

    r = (b2 - a2).norm() / (b1 - a1).norm()
    mu = AffineMap(r, a2 - a1 * r)
    gluings.append(Gluing(left1, EdgeRef(right2.poly + off, right2.edge), mu))
    gluings.append(Gluing(right1, EdgeRef(left2.poly + off, left2.edge), mu))
    return DilationSurface(polys, gluings)


def hopf_slit_sum(lam: float = 2.0) -> DilationSurface:
    """Connect sum of two scaling tori along matching horizontal slits.

    The slits sit on the fixed horizontal axis at the same radial span, so
    every unit-determinant upper-triangular matrix acts as an affine
    automorphism: shears fix the axis pointwise and stretches slide the
    slits along their own scaling orbit.
    """
    lo = 1.0 + 0.2 * (lam - 1.0)
    hi = 1.0 + 0.8 * (lam - 1.0)
    slit = (Vec2(lo, 0.0), Vec2(hi, 0.0))
    return slit_connect_sum(hopf_torus(lam), slit, hopf_torus(lam), slit)


def exotic_dehn_surface(g: int) -> tuple[DilationSurface, Mat2, Witness,
                                         list[LoopWord]]:
    """Genus-g surface on which the unimodular stretch diag(2, 1) acts as a
    Dehn multitwist around dilation cylinder cores.

    The surface is the lam = 2 scaling torus, built from concentric square
    annuli, with g - 1 pairs of slits cut along the horizontal and vertical
    axes and each pair glued crosswise.  diag(2, 1) preserves the axes and
    the slit set, so it descends to an affine automorphism; the returned
    witness certifies this with pieces moved by powers of the covering
    scaling z -> z/2.  The returned words are the four diagonal core loops,
    one per quadrant sector; each crosses the outer gluing once and so has
    holonomy scale exactly 2.
    """
    if g < 3:
        raise ValueError("need genus 3 or more")
    lam = 2.0
    pairs = g - 1
    nh = (pairs + 1) // 2       # slit pairs on the horizontal axis
    nv = pairs // 2             # and on the vertical one
    rings = max(nh, nv)
    radii = [1.0 + i / rings for i in range(rings + 1)]

    def rot(p: Vec2, srs: int) -> Vec2:
        for _ in range(srs):
            p = Vec2(-p.y, p.x)
        return p

    # One cell per (quarter, ring).  Cells carrying a slit are stored as an
    # upper and a lower half, already cut along the axis chord; the other
    # cells keep the axis points as plain collinear vertices so that every
    # radial boundary is split the same way.
    polys: list[Polygon] = []
    outer_cw: dict[tuple[int, int], EdgeRef] = {}
    outer_ccw: dict[tuple[int, int], EdgeRef] = {}
    inner_cw: dict[tuple[int, int], EdgeRef] = {}
    inner_ccw: dict[tuple[int, int], EdgeRef] = {}
    slant_cw: dict[tuple[int, int], EdgeRef] = {}
    slant_ccw: dict[tuple[int, int], EdgeRef] = {}
    upper_of: dict[tuple[int, int], int] = {}
    lower_of: dict[tuple[int, int], int] = {}
    span_of: dict[tuple[int, int], tuple[float, float]] = {}

    for srs in range(4):
        cuts = nh if srs % 2 == 0 else nv
        for ring in range(rings):
            r0, r1 = radii[ring], radii[ring + 1]
            if ring >= cuts:
                i = len(polys)
                polys.append(Polygon([rot(p, srs) for p in (
                    Vec2(r0, -r0), Vec2(r1, -r1), Vec2(r1, 0.0),
                    Vec2(r1, r1), Vec2(r0, r0), Vec2(r0, 0.0))]))
                slant_cw[srs, ring] = EdgeRef(i, 0)
                outer_cw[srs, ring] = EdgeRef(i, 1)
                outer_ccw[srs, ring] = EdgeRef(i, 2)
                slant_ccw[srs, ring] = EdgeRef(i, 3)
                inner_ccw[srs, ring] = EdgeRef(i, 4)
                inner_cw[srs, ring] = EdgeRef(i, 5)
                continue
            aa = r0 + 0.2 * (r1 - r0)
            bb = r0 + 0.8 * (r1 - r0)
            span_of[srs, ring] = (aa, bb)
            iu = len(polys)
            polys.append(Polygon([rot(p, srs) for p in (
                Vec2(r0, 0.0), Vec2(aa, 0.0), Vec2(bb, 0.0), Vec2(r1, 0.0),
                Vec2(r1, r1), Vec2(r0, r0))]))
            il = len(polys)
            polys.append(Polygon([rot(p, srs) for p in (
                Vec2(r1, 0.0), Vec2(bb, 0.0), Vec2(aa, 0.0), Vec2(r0, 0.0),
                Vec2(r0, -r0), Vec2(r1, -r1))]))
            upper_of[srs, ring] = iu
            lower_of[srs, ring] = il
            outer_ccw[srs, ring] = EdgeRef(iu, 3)
            slant_ccw[srs, ring] = EdgeRef(iu, 4)
            inner_ccw[srs, ring] = EdgeRef(iu, 5)
            inner_cw[srs, ring] = EdgeRef(il, 3)
            slant_cw[srs, ring] = EdgeRef(il, 4)
            outer_cw[srs, ring] = EdgeRef(il, 5)

    ident = AffineMap.identity()
    glue: list[Gluing] = []
    for srs in range(4):
        for ring in range(rings):
            glue.append(Gluing(slant_ccw[srs, ring],
                               slant_cw[(srs + 1) % 4, ring], ident))
    iface_ccw: dict[tuple[int, int], int] = {}
    for srs in range(4):
        for ring in range(rings - 1):
            iface_ccw[srs, ring] = len(glue)
            glue.append(Gluing(outer_ccw[srs, ring],
                               inner_ccw[srs, ring + 1], ident))
            glue.append(Gluing(outer_cw[srs, ring],
                               inner_cw[srs, ring + 1], ident))
    radial = AffineMap(1.0 / lam, Vec2(0.0, 0.0))
    radial_ccw: dict[int, int] = {}
    for srs in range(4):
        radial_ccw[srs] = len(glue)
        glue.append(Gluing(outer_ccw[srs, rings - 1],
                           inner_ccw[srs, 0], radial))
        glue.append(Gluing(outer_cw[srs, rings - 1],
                           inner_cw[srs, 0], radial))
    for (srs, ring), iu in upper_of.items():
        il = lower_of[srs, ring]
        glue.append(Gluing(EdgeRef(iu, 0), EdgeRef(il, 2), ident))
        glue.append(Gluing(EdgeRef(iu, 2), EdgeRef(il, 0), ident))
    for srs in (0, 1):
        for ring in range(nh if srs == 0 else nv):
            aa, bb = span_of[srs, ring]
            mu = AffineMap.translation(rot(Vec2(-(aa + bb), 0.0), srs))
            glue.append(Gluing(EdgeRef(upper_of[srs, ring], 1),
                               EdgeRef(upper_of[srs + 2, ring], 1), mu))
            glue.append(Gluing(EdgeRef(lower_of[srs, ring], 1),
                               EdgeRef(lower_of[srs + 2, ring], 1), mu))
    surf = DilationSurface(polys, glue)

    words = []
    for srs in range(4):
        steps = [(iface_ccw[srs, ring], True) for ring in range(rings - 1)]
        steps.append((radial_ccw[srs], True))
        words.append(LoopWord(tuple(steps)))

    mat = Mat2.from_rows([[2.0, 0.0], [0.0, 1.0]])
    moved = apply_matrix(surf, mat)
    pieces: list[WitnessPiece] = []
    for i, sp in enumerate(moved.polygons):
        for j in (-1, 0, 1, 2):
            f = 2.0 ** j
            back = AffineMap(2.0 ** (-j), Vec2(0.0, 0.0))
            for q, tp in enumerate(surf.polygons):
                region = list(sp.vertices)
                for e in range(len(tp)):
                    region, _ = _split(region, tp.vertex(e) * f,
                                       tp.edge_vector(e) * f, 1e-12)
                    if len(region) < 3:
                        break
                if len(region) < 3:
                    continue
                cleaned = _clean(region, 1e-9)
                if cleaned is None or _area(cleaned) <= 1e-9:
                    continue
                pieces.append(WitnessPiece(i, Polygon(cleaned), q, back))
    return surf, mat, Witness(ident, pieces), words


def octagon_curve_system() -> CurveSystem:
    """Filling pair on the genus-2 surface: one curve of each family through
    four intersection points, all transitions equal to 1."""
    pts = ["p1", "p2", "p3", "p4"]
    return CurveSystem([pts], [["p1", "p3", "p2", "p4"]],
                       {p: 1.0 for p in pts})


def l_curve_system(a: float) -> CurveSystem:
    """Curve meeting a two-component multicurve in three points.

    The single curve crosses both components of the multicurve; the two
    points on the longer component carry transition a, the remaining one
    carries 1.  At a = 1 everything degenerates to trivial holonomy.
    """
    if a <= 0:
        raise MalformedInput("transition scalar must be positive")
    return CurveSystem([["p1", "p3", "p2"]], [["p1", "p2"], ["p3"]],
                       {"p1": float(a), "p3": float(a), "p2": 1.0})
