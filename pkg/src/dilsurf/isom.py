"""Equivalence certificates for dilation surfaces.

Two surfaces are the same when one can be cut into finitely many polygonal
pieces that reassemble into the other, every piece moved by a single real
affine map z -> a z + b.  A Witness records such a correspondence; verifying
one is deterministic arithmetic, while finding one is a bounded search with
no completeness promise (NotFound is inconclusive, never a proof of
distinctness).

The search develops the first surface into the second: starting from a root
placement it clips each placed region against the target's polygons,
carries overhanging parts across the target's gluings, and spreads to
neighboring source polygons through the source's gluings.  Every budget is
explicit and exhaustion is reported with statistics.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .geom import AffineMap, NonPositiveDeterminant, Vec2
from .surface import (DilationSurface, EdgeRef, Polygon, apply_matrix,
                      triangulate, vertex_classes)


@dataclass(frozen=True)
class WitnessPiece:
    src: int            # polygon index in the source surface
    piece: Polygon      # region of that polygon, in its chart
    dst: int            # polygon index in the target surface
    map: AffineMap      # chart of src -> chart of dst


@dataclass
class Witness:
    global_map: AffineMap
    pieces: list[WitnessPiece]

    def invert(self) -> "Witness":
        """The same correspondence read target-to-source."""
        inv = []
        for pc in self.pieces:
            moved = Polygon([pc.map.apply(v) for v in pc.piece.vertices])
            inv.append(WitnessPiece(pc.dst, moved, pc.src, pc.map.invert()))
        return Witness(self.global_map.invert(), inv)


def identity_witness(s: DilationSurface) -> Witness:
    ident = AffineMap.identity()
    return Witness(ident, [WitnessPiece(i, Polygon(list(p.vertices)), i, ident)
                           for i, p in enumerate(s.polygons)])


@dataclass
class WitnessReport:
    ok: bool
    reasons: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class NotFound:
    reason: str
    roots_tried: int = 0
    nodes: int = 0
    moves: int = 0

    def __bool__(self) -> bool:
        return False


@dataclass
class Verified:
    witness: Witness

    def __bool__(self) -> bool:
        return True


# -- polygon clipping helpers (convex pieces only) -------------------------------


def _area(pts: list[Vec2]) -> float:
    s = 0.0
    for i, p in enumerate(pts):
        q = pts[(i + 1) % len(pts)]
        s += p.cross(q)
    return 0.5 * s


def _clean(pts: list[Vec2], eps: float) -> list[Vec2] | None:
    out: list[Vec2] = []
    for p in pts:
        if not out or (p - out[-1]).norm() > eps:
            out.append(p)
    if len(out) >= 2 and (out[0] - out[-1]).norm() <= eps:
        out.pop()
    if len(out) < 3:
        return None
    return out


def _seg_dist(p: Vec2, a: Vec2, b: Vec2) -> float:
    ab = b - a
    l2 = ab.dot(ab)
    if l2 <= 0.0:
        return (p - a).norm()
    t = max(0.0, min(1.0, (p - a).dot(ab) / l2))
    return (p - (a + ab * t)).norm()


def _split(pts: list[Vec2], a: Vec2, d: Vec2, eps: float
           ) -> tuple[list[Vec2], list[Vec2]]:
    """Cut a convex CCW polygon by the oriented line through a along d.
    Returns (left-or-on part, right-or-on part)."""
    ins: list[Vec2] = []
    outs: list[Vec2] = []
    n = len(pts)
    for i in range(n):
        p, q = pts[i], pts[(i + 1) % n]
        dp = d.cross(p - a)
        dq = d.cross(q - a)
        if dp >= -eps:
            ins.append(p)
        if dp <= eps:
            outs.append(p)
        if (dp > eps and dq < -eps) or (dp < -eps and dq > eps):
            x = p + (q - p) * (dp / (dp - dq))
            ins.append(x)
            outs.append(x)
    return ins, outs


# -- witness verification ---------------------------------------------------------


def _on_edge(p: Vec2, a: Vec2, b: Vec2, eps: float) -> bool:
    ab = b - a
    L = ab.norm()
    if L <= eps:
        return (p - a).norm() <= eps
    t = (p - a).dot(ab) / (L * L)
    if t < -eps / L or t > 1 + eps / L:
        return False
    return abs(ab.cross(p - a)) / L <= eps


def _near_vertex(s: DilationSurface, j: int, p: Vec2, eps: float) -> bool:
    return any((p - v).norm() <= eps for v in s.polygons[j].vertices)


def _identified(s: DilationSurface, ja: int, pa: Vec2, jb: int, pb: Vec2,
                eps: float) -> bool:
    """Same point of the glued surface: equal in one chart or matched across
    a single gluing."""
    if ja == jb and (pa - pb).norm() <= eps:
        return True
    for g in s.gluings:
        if g.src.poly == ja and _on_edge(pa, s.polygons[ja].edge_start(g.src.edge),
                                         s.polygons[ja].edge_end(g.src.edge), eps):
            if g.dst.poly == jb and (g.map.apply(pa) - pb).norm() <= eps:
                return True
        if g.dst.poly == ja and _on_edge(pa, s.polygons[ja].edge_start(g.dst.edge),
                                         s.polygons[ja].edge_end(g.dst.edge), eps):
            if g.src.poly == jb and (g.map.invert().apply(pa) - pb).norm() <= eps:
                return True
    return False


_EDGE_TS = (0.30317, 0.55049, 0.73413)


def verify_witness(s1: DilationSurface, s2: DilationSurface, w: Witness,
                   tol: float = 1e-6) -> WitnessReport:
    """Deterministic check of an equivalence certificate.

    Pieces must sit inside their source polygons and together account for
    each polygon's area; their placements must sit inside the target
    polygons and account for the target's area; and sampled points on piece
    boundaries and on source gluing edges must land on identified points of
    the target.  Truthy iff every check passes; failures carry reasons.
    """
    reasons: list[str] = []
    d1 = max((p.diameter() for p in s1.polygons), default=1.0)
    d2 = max((p.diameter() for p in s2.polygons), default=1.0)
    eps1 = tol * max(1.0, d1)
    eps2 = tol * max(1.0, d2)

    by_src: dict[int, list[WitnessPiece]] = {}
    placed_area: dict[int, float] = {}
    for n, pc in enumerate(w.pieces):
        if not (0 <= pc.src < len(s1.polygons)) or not (0 <= pc.dst < len(s2.polygons)):
            reasons.append(f"piece {n}: polygon index out of range")
            continue
        if pc.piece.signed_area() <= 0:
            reasons.append(f"piece {n}: not positively oriented")
            continue
        srcp = s1.polygons[pc.src]
        if not all(srcp.contains(v, tol) for v in pc.piece.vertices):
            reasons.append(f"piece {n}: leaves source polygon {pc.src}")
        dstp = s2.polygons[pc.dst]
        moved = [pc.map.apply(v) for v in pc.piece.vertices]
        if not all(dstp.contains(v, tol) for v in moved):
            reasons.append(f"piece {n}: placement leaves target polygon {pc.dst}")
        by_src.setdefault(pc.src, []).append(pc)
        placed_area[pc.dst] = placed_area.get(pc.dst, 0.0) + abs(_area(moved))

    # Area bookkeeping only needs to catch gross errors (double covers,
    # missing regions); long developments leak ~1e-6 of relative area to
    # clip slivers, so this check gets its own coarser tolerance while the
    # pointwise checks below stay at ``tol``.
    area_rtol = max(tol, 1e-4)
    for i, poly in enumerate(s1.polygons):
        have = sum(abs(pc.piece.signed_area()) for pc in by_src.get(i, []))
        want = abs(poly.signed_area())
        if abs(have - want) > area_rtol * max(want, 1e-12):
            reasons.append(f"source polygon {i}: piece areas {have:.12g} != {want:.12g}")
    for j, poly in enumerate(s2.polygons):
        have = placed_area.get(j, 0.0)
        want = abs(poly.signed_area())
        if abs(have - want) > area_rtol * max(want, 1e-12):
            reasons.append(f"target polygon {j}: placed areas {have:.12g} != {want:.12g}")
    if reasons:
        return WitnessReport(False, reasons)

    boxes: dict[int, list[tuple[WitnessPiece, float, float, float, float]]] = {}
    for i, lst in by_src.items():
        rows = []
        for pc in lst:
            xs = [v.x for v in pc.piece.vertices]
            ys = [v.y for v in pc.piece.vertices]
            rows.append((pc, min(xs) - 2 * eps1, min(ys) - 2 * eps1,
                         max(xs) + 2 * eps1, max(ys) + 2 * eps1))
        boxes[i] = rows

    def pieces_at(i: int, p: Vec2) -> list[WitnessPiece]:
        return [pc for (pc, x0, y0, x1, y1) in boxes.get(i, ())
                if x0 <= p.x <= x1 and y0 <= p.y <= y1
                and pc.piece.contains(p, tol)]

    def placements_agree(i1: int, p: Vec2, i2: int, q: Vec2, what: str) -> None:
        for pa in pieces_at(i1, p):
            P = pa.map.apply(p)
            if _near_vertex(s2, pa.dst, P, eps2):
                continue
            for pb in pieces_at(i2, q):
                Q = pb.map.apply(q)
                if _near_vertex(s2, pb.dst, Q, eps2):
                    continue
                if not _identified(s2, pa.dst, P, pb.dst, Q, eps2):
                    reasons.append(f"{what}: placements disagree "
                                   f"({pa.dst}:{P} vs {pb.dst}:{Q})")
                    return

    # points on source gluing edges must stay identified after placement
    for gi, g in enumerate(s1.gluings):
        a = s1.polygons[g.src.poly].edge_start(g.src.edge)
        b = s1.polygons[g.src.poly].edge_end(g.src.edge)
        for t in _EDGE_TS:
            p = a + (b - a) * t
            q = g.map.apply(p)
            placements_agree(g.src.poly, p, g.dst.poly, q, f"gluing {gi} at t={t}")

    # interior piece boundaries must be seamless
    for i, poly in enumerate(s1.polygons):
        on_bnd = lambda p: any(_on_edge(p, poly.edge_start(e), poly.edge_end(e), eps1)
                               for e in range(len(poly)))
        for pc in by_src.get(i, []):
            for e in range(len(pc.piece)):
                a, b = pc.piece.edge_start(e), pc.piece.edge_end(e)
                for t in _EDGE_TS[:2]:
                    p = a + (b - a) * t
                    if on_bnd(p):
                        continue
                    others = [o for o in pieces_at(i, p) if o is not pc]
                    if not others:
                        reasons.append(f"piece boundary gap in polygon {i} at {p}")
                        break
                    placements_agree(i, p, i, p, f"cut in polygon {i}")
    return WitnessReport(not reasons, reasons)


# -- search -----------------------------------------------------------------------


def _triangulated(s: DilationSurface) -> tuple[DilationSurface, list[int], int]:
    """Triangle form, triangle-to-parent map, and the index of the first
    triangulation diagonal among the gluings (originals precede diagonals)."""
    if all(len(p) == 3 for p in s.polygons):
        return s, list(range(len(s.polygons))), len(s.gluings)
    t = triangulate(s)
    parents: list[int] = []
    for pi, poly in enumerate(s.polygons):
        parents.extend([pi] * (len(poly) - 2))
    return t, parents, len(s.gluings)


def _map_key(m: AffineMap, scale_ref: float) -> tuple[int, int, int]:
    return (round(m.scale * 1e9), round(m.shift.x / scale_ref * 1e9),
            round(m.shift.y / scale_ref * 1e9))


def _root_candidates(s1: DilationSurface, s2: DilationSurface,
                     cap: int = 72) -> list[AffineMap]:
    """Deterministic root placements, canonical ones first: pure scalings
    (identity leading), then maps anchoring a source corner on a target
    corner.  Scale magnitudes come from target/source edge-length ratios."""
    e0 = s1.polygons[0].edge_vector(0).norm()
    scales = [1.0]
    for poly in s2.polygons:
        for e in range(len(poly)):
            r = poly.edge_vector(e).norm() / e0
            if all(abs(r - x) > 1e-9 * max(r, x) for x in scales):
                scales.append(r)
    scales = [1.0] + sorted(x for x in scales if x != 1.0)[:11]

    roots: list[AffineMap] = []
    for r in scales:
        for sg in (1.0, -1.0):
            roots.append(AffineMap(sg * r, Vec2(0.0, 0.0)))

    cone1 = [vc for vc in vertex_classes(s1) if not vc.is_marked_point()]
    if cone1:
        pi, vi = cone1[0].corners[0]
        p0 = s1.polygons[pi].vertex(vi)
    else:
        p0 = s1.polygons[0].vertex(0)
    cone2 = [vc for vc in vertex_classes(s2) if not vc.is_marked_point()]
    anchors: list[Vec2] = []
    if cone2:
        for vc in cone2:
            for (pj, vj) in vc.corners:
                anchors.append(s2.polygons[pj].vertex(vj))
    else:
        for poly in s2.polygons:
            anchors.extend(poly.vertices)
    anchors = anchors[:16]

    for r in scales:
        for sg in (1.0, -1.0):
            for q in anchors:
                roots.append(AffineMap(sg * r, q - p0 * (sg * r)))

    dref = max(1.0, max(p.diameter() for p in s2.polygons))
    seen: set[tuple[int, int, int]] = set()
    out: list[AffineMap] = []
    for m in roots:
        k = _map_key(m, dref)
        if k not in seen:
            seen.add(k)
            out.append(m)
        if len(out) >= cap:
            break
    return out


def _develop(s1: DilationSurface, s2: DilationSurface, root: AffineMap,
             max_moves: int, node_budget: int, diag2: int | None = None
             ) -> tuple[list[tuple[int, list[Vec2], int, AffineMap]] | None, int, int]:
    """Grow a piece correspondence from one root placement.  Returns
    (pieces, nodes, moves); pieces is None when the root contradicts itself,
    leaves gaps, or runs out of budget.  diag2 marks where triangulation
    diagonals start among s2's gluings; they get transport priority over
    bare line crossings when a part overshoots every edge span."""
    if diag2 is None:
        diag2 = len(s2.gluings)
    diam = max(1.0, max(p.diameter() for p in s1.polygons),
               max(p.diameter() for p in s2.polygons)) * max(1.0, abs(root.scale))
    band = 1e-9 * diam
    drop = 1e-10 * diam * diam

    def signif(pts: list[Vec2], sq: float) -> bool:
        # clip residue is a ribbon of width ~band in whatever chart it was
        # cut, so junk is judged by thickness rather than area: a shear
        # arbitrarily close to the identity still leaves overlap wedges far
        # fatter than the band, and those must be carried, not dropped
        ar = abs(_area(pts))
        if ar <= drop * sq:
            return False
        base = max((pts[i] - pts[i - 1]).norm() for i in range(len(pts)))
        return ar > 4.0 * band * base
    need = [abs(p.signed_area()) for p in s1.polygons]
    cover = [0.0] * len(need)

    img0 = [root.apply(v) for v in s1.polygons[0].vertices]
    best, j0 = 0.0, 0
    for j, poly in enumerate(s2.polygons):
        pts = img0
        for e in range(len(poly)):
            pts, _ = _split(pts, poly.vertex(e), poly.edge_vector(e), band)
            if len(pts) < 3:
                break
        a = abs(_area(pts)) if len(pts) >= 3 else 0.0
        if a > best:
            best, j0 = a, j

    queue: deque = deque()
    queue.append((tuple(s1.polygons[0].vertices), 0, j0, root))
    # one development per source polygon: a second germ would differ by a
    # target deck transformation and re-emit the same pieces
    seeded: set[int] = {0}
    deferred: list[tuple[int, int, AffineMap]] = []
    pieces: list[tuple[int, list[Vec2], int, AffineMap]] = []
    nodes = moves = hops = 0

    def covered() -> bool:
        return all(c >= n * (1.0 - 2e-5) for c, n in zip(cover, need))

    while queue or deferred:
        if not queue:
            pk, pj, pm2 = deferred.pop()
            if pk in seeded:
                continue
            seeded.add(pk)
            queue.append((tuple(s1.polygons[pk].vertices), pk, pj, pm2))
            continue
        nodes += 1
        if nodes > node_budget:
            return None, nodes, moves
        region, k, j, m = queue.popleft()
        minv = m.invert()
        rem = [m.apply(v) for v in region]
        Q = s2.polygons[j]
        junk: list[tuple[list[Vec2], int, AffineMap, int, int]] = []
        for e in range(len(Q)):
            if len(rem) < 3:
                break
            rem, out = _split(rem, Q.vertex(e), Q.edge_vector(e), band)
            out = _clean(out, band) if out else None
            if out is not None and signif(out, max(1.0, m.scale * m.scale)):
                junk.append((out, j, m, 0, -1))
        # Transport each outside part across edges until it comes to rest in
        # some target polygon, then charge one move for the placement; the
        # intermediate hops are bookkeeping.  A crossing hands over only the
        # portion facing the edge's own span: one boundary line may carry
        # several gluings side by side (the collinear edges left by a slit),
        # and a part handed to whichever of them is examined first can come
        # to rest inside the wrong chart.  Parts overshooting every span are
        # corner junk: they pivot around the vertex they touch by crossing
        # an incident edge, ranked by distance to the edge segment; a part
        # whose hops have carried it far from the charts is steered by how
        # close each crossing leaves it to the next chart, and at a genuine
        # corner pivot the tie falls to unscaled crossings (a scaled one
        # rebooks the part in another deck level), then to a triangulation
        # diagonal over a bare gluing line whose span lies elsewhere.
        # Re-crossing the arrival edge is penalized so wedged
        # parts fan forward instead of ping-ponging.  Parts still in flight
        # past the depth guard are abandoned; the cover check catches the
        # gap if they were real.
        while junk:
            x, jj, mm, depth, came = junk.pop()
            if depth > 256:
                continue
            sq = max(1.0, mm.scale * mm.scale)
            Qj = s2.polygons[jj]
            best = None
            for e in range(len(Qj)):
                a, dv = Qj.vertex(e), Qj.edge_vector(e)
                ins_e, out_e = _split(x, a, dv, band)
                out_e = _clean(out_e, band) if out_e else None
                if out_e is None or not signif(out_e, sq):
                    continue
                over: list[Vec2] | None = out_e
                spill: list[list[Vec2]] = []
                for anchor, nrm in ((a, Vec2(dv.y, -dv.x)),
                                    (Qj.vertex(e + 1), dv.perp())):
                    if over is None:
                        break
                    over, off = _split(over, anchor, nrm, band)
                    over = _clean(over, band) if over else None
                    off = _clean(off, band) if off else None
                    if off is not None and signif(off, sq):
                        spill.append(off)
                if over is not None and signif(over, sq):
                    tier, part, next_d, sc, real = 0, over, 0.0, 0, 0
                else:
                    partner2, mu2, gi2, _ = s2.cross(EdgeRef(jj, e))
                    tier, part, spill = 1, out_e, []
                    real = 0 if gi2 >= diag2 else 1
                    sc = 0 if abs(abs(mu2.scale) - 1.0) <= 1e-12 else 1
                    # look one chart ahead: how far from the next chart does
                    # this crossing leave the part?  Corner junk pivoting in
                    # place scores zero on every incident edge, but a part
                    # carried far outside the charts is steered toward them,
                    # and that is what routes it through the contracting
                    # gluings that bring an inflated deck level back down.
                    Pq = s2.polygons[partner2.poly]
                    mapped = [mu2.apply(p) for p in part]
                    clipped = mapped
                    for e3 in range(len(Pq)):
                        if len(clipped) < 3:
                            break
                        clipped, _ = _split(clipped, Pq.vertex(e3),
                                            Pq.edge_vector(e3), band)
                    if len(clipped) >= 3 and abs(_area(clipped)) > 0.0:
                        next_d = 0.0
                    else:
                        next_d = min(_seg_dist(p, Pq.vertex(e4),
                                               Pq.vertex(e4 + 1))
                                     for p in mapped for e4 in range(len(Pq)))
                dist = min(_seg_dist(p, a, a + dv) for p in part)
                cand = (tier, dist, 1 if e == came else 0, next_d, sc, real,
                        e, part, ins_e, spill)
                if best is None:
                    best = cand
                elif cand[0] != best[0]:
                    if cand[0] < best[0]:
                        best = cand
                elif abs(cand[1] - best[1]) > band:
                    if cand[1] < best[1]:
                        best = cand
                elif cand[2] != best[2]:
                    if cand[2] < best[2]:
                        best = cand
                elif abs(cand[3] - best[3]) > band:
                    if cand[3] < best[3]:
                        best = cand
                elif cand[4:7] < best[4:7]:
                    best = cand
            if best is None:
                x2 = _clean(x, band)
                # a part at rest is kept down to the placement floor, with
                # no thickness test: it has arrived, placing it costs nothing
                if x2 is None or abs(_area(x2)) <= drop * sq:
                    continue
                moves += 1
                if moves > max_moves:
                    return None, nodes, moves
                inv = mm.invert()
                queue.append((tuple(inv.apply(p) for p in x2), k, jj, mm))
                continue
            e, part, ins_e, spill = best[6:]
            hops += 1
            if hops > 8 * max_moves:
                return None, nodes, moves
            partner, mu, _, _ = s2.cross(EdgeRef(jj, e))
            junk.append(([mu.apply(p) for p in part], partner.poly,
                         mu.compose(mm), depth + 1, partner.edge))
            for off in spill:
                junk.append((off, jj, mm, depth + 1, came))
            ins_e = _clean(ins_e, band) if ins_e else None
            if ins_e is not None and signif(ins_e, sq):
                junk.append((ins_e, jj, mm, depth, came))
        rem = _clean(rem, band) if rem else None
        if rem is None or abs(_area(rem)) <= drop * max(1.0, m.scale * m.scale):
            continue
        src_piece = [minv.apply(p) for p in rem]
        pieces.append((k, src_piece, j, m))
        cover[k] += abs(_area(src_piece))
        if cover[k] > need[k] * (1.0 + 1e-4):
            return None, nodes, moves   # wrapped onto itself
        # Spread to source neighbors touching this piece.  Identity gluings
        # (triangulation diagonals and untwisted chart boundaries) go first:
        # a germ continued through them lands in place, while one continued
        # through a scaled self-gluing must be hauled back by transport.
        T = s1.polygons[k]
        cands = []
        for e1 in range(len(T)):
            a, b = T.edge_start(e1), T.edge_end(e1)
            elen = (b - a).norm()
            touch = [((p - a).dot(b - a) / elen) for p in src_piece
                     if abs((b - a).cross(p - a)) / elen <= 10 * band]
            if len(touch) < 2 or max(touch) - min(touch) < 1e-6 * elen:
                continue
            if s1.edge_table().get(EdgeRef(k, e1)) is None:
                continue
            partner1, mu1, _, _ = s1.cross(EdgeRef(k, e1))
            plain = mu1.scale == 1.0 and mu1.shift.norm() <= band
            # Hint the germ at the chart across the matching target edge.  A
            # merely nearby hint is not enough when distinct charts occupy
            # the same coordinates (the two sides of a slit): transport from
            # the wrong start books the germ through whichever branch it
            # meets first, and no local test can tell them apart afterwards.
            mid = a + (b - a) * ((min(touch) + max(touch)) / (2.0 * elen))
            P = m.apply(mid)
            j2, hop = j, None
            Qj2 = s2.polygons[j]
            for E in range(len(Qj2)):
                if not _on_edge(P, Qj2.edge_start(E), Qj2.edge_end(E),
                                10 * band):
                    continue
                if s2.edge_table().get(EdgeRef(j, E)) is None:
                    continue
                partner2, mu2, _, _ = s2.cross(EdgeRef(j, E))
                j2, hop = partner2.poly, mu2
                break
            cands.append((0 if plain else 1, e1, partner1, mu1, j2, hop))
        cands.sort(key=lambda c: (c[0], c[1]))
        for pri, e1, partner1, mu1, j2, hop in cands:
            if partner1.poly in seeded:
                continue
            m2 = m.compose(mu1.invert())
            if hop is not None:
                m2 = hop.compose(m2)
            if pri == 0:
                seeded.add(partner1.poly)
                queue.append((tuple(s1.polygons[partner1.poly].vertices),
                              partner1.poly, j2, m2))
            else:
                deferred.append((partner1.poly, j2, m2))
    # No early exit on cover: the cover test carries slack, and a rest germ
    # still queued may hold exactly the sliver the slack is hiding.  The
    # tail is cheap, every chart seeds at most once.
    return (pieces if covered() else None), nodes, moves


def search_isomorphism(s1: DilationSurface, s2: DilationSurface,
                       max_flips: int = 64, max_nodes: int = 100000
                       ) -> Witness | NotFound:
    """Bounded search for a cut-and-paste equivalence.

    Root placements are tried in a fixed order; each one is developed with a
    budget of max_flips cut-and-paste moves (region placements in target
    polygons) per source corner, and a worklist cap of 4x that many nodes
    so one bad root cannot starve the rest; max_nodes bounds the whole scan.
    The first development that covers the source and survives
    verify_witness wins.  NotFound reports the consumed budgets and is
    inconclusive, never a proof that no equivalence exists.
    """
    t1, par1, _ = _triangulated(s1)
    t2, par2, diag2 = _triangulated(s2)
    roots = _root_candidates(t1, t2)
    move_budget = max_flips * sum(len(p) for p in t1.polygons)
    nodes_total = moves_total = 0
    for ri, root in enumerate(roots):
        if nodes_total >= max_nodes:
            return NotFound("node budget exhausted", ri, nodes_total, moves_total)
        cap = min(max_nodes - nodes_total, 4 * move_budget)
        raw, nodes, moves = _develop(t1, t2, root, move_budget, cap, diag2)
        nodes_total += nodes
        moves_total += moves
        if raw is None:
            continue
        pieces = []
        ok = True
        for (k, pts, j, m) in raw:
            cl = _clean(pts, 1e-12)
            if cl is None:
                ok = False
                break
            pieces.append(WitnessPiece(par1[k], Polygon(cl), par2[j], m))
        if not ok:
            continue
        w = Witness(root, pieces)
        if verify_witness(s1, s2, w):
            return w
    return NotFound("no root produced a verifiable witness",
                    len(roots), nodes_total, moves_total)


def is_affine_automorphism(s: DilationSurface, m, w: Witness | None = None,
                           max_flips: int = 64, max_nodes: int = 100000
                           ) -> Verified | NotFound:
    """Certify that m acts as an affine automorphism: the matrix image of
    the surface must be cut-and-paste equivalent to the surface itself."""
    if m.det() <= 0:
        raise NonPositiveDeterminant(f"determinant {m.det()} must be positive")
    moved = apply_matrix(s, m)
    if w is not None:
        rep = verify_witness(moved, s, w)
        return Verified(w) if rep else NotFound("provided witness rejected: "
                                                + "; ".join(rep.reasons[:3]))
    res = search_isomorphism(moved, s, max_flips, max_nodes)
    if isinstance(res, Witness):
        return Verified(res)
    return res
