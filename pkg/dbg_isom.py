import random
from dilsurf.constructions import hopf_torus
from dilsurf.geom import Mat2, AffineMap, Vec2
from dilsurf.surface import apply_matrix
from dilsurf.isom import _triangulated, _develop, _root_candidates, Witness, WitnessPiece, verify_witness
from dilsurf.surface import Polygon

hp = hopf_torus(2.0)
rng = random.Random(7)
a = rng.uniform(0.5, 2.0) * rng.choice([1, -1])
b = rng.uniform(-1.5, 1.5)
c = rng.uniform(-1.5, 1.5)
d = (1 + b * c) / a
m = Mat2(a, b, c, d)
print("matrix", m, "det", m.det())

s1 = apply_matrix(hp, m)
t1, par1 = _triangulated(s1)
t2, par2 = _triangulated(hp)
print("tris:", len(t1.polygons), len(t2.polygons))

root = AffineMap(1.0, Vec2(0, 0))
raw, nodes, moves = _develop(t1, t2, root, max_moves=100000, node_budget=100000)
print("root id: pieces", None if raw is None else len(raw), "nodes", nodes, "moves", moves)
if raw is None:
    # instrument: rerun with tracking inside a copy
    import dilsurf.isom as iso
    need = [abs(p.signed_area()) for p in t1.polygons]
    print("need", [round(x,4) for x in need])
    # try with generous per-call budgets and print cover progression
    from collections import deque
    diam = max(1.0, max(p.diameter() for p in t1.polygons), max(p.diameter() for p in t2.polygons))
    band = 1e-9*diam; drop = 1e-10*diam*diam
    cover = [0.0]*len(need)
    dref = max(1.0, max(p.diameter() for p in t2.polygons))
    img0 = [root.apply(v) for v in t1.polygons[0].vertices]
    best, j0 = 0.0, 0
    for j, poly in enumerate(t2.polygons):
        pts = img0
        for e in range(len(poly)):
            pts, _ = iso._split(pts, poly.vertex(e), poly.edge_vector(e), band)
            if len(pts) < 3: break
        aa = abs(iso._area(pts)) if len(pts) >= 3 else 0.0
        if aa > best: best, j0 = aa, j
    print("start chart", j0, "overlap", best)
    queue = deque([(tuple(t1.polygons[0].vertices), 0, j0, root)])
    seen = {(0, iso._map_key(root, dref))}
    pieces = []
    nodes = 0
    from dilsurf.surface import EdgeRef
    while queue and nodes < 3000:
        nodes += 1
        region, k, j, mm = queue.popleft()
        minv = mm.invert()
        rem = [mm.apply(v) for v in region]
        Q = t2.polygons[j]
        for e in range(len(Q)):
            if len(rem) < 3: break
            rem, out = iso._split(rem, Q.vertex(e), Q.edge_vector(e), band)
            out = iso._clean(out, band) if out else None
            if out is not None and abs(iso._area(out)) > drop:
                partner, mu, _, _ = t2.cross(EdgeRef(j, e))
                queue.append((tuple(minv.apply(p) for p in out), k, partner.poly, mu.compose(mm)))
        rem = iso._clean(rem, band) if rem else None
        if rem is None or abs(iso._area(rem)) <= drop: continue
        src_piece = [minv.apply(p) for p in rem]
        pieces.append((k, src_piece, j, mm))
        cover[k] += abs(iso._area(src_piece))
        if cover[k] > need[k]*1.0001:
            print(f"OVERFLOW poly {k}: cover {cover[k]:.6f} need {need[k]:.6f} at node {nodes}")
            print("  piece maps for k:", [(round(mp.scale,4), round(mp.shift.x,3), round(mp.shift.y,3)) for (kk,_,_,mp) in pieces if kk==k])
            break
        T = t1.polygons[k]
        for e1 in range(len(T)):
            aa2, bb2 = T.edge_start(e1), T.edge_end(e1)
            elen = (bb2-aa2).norm()
            touch = [((p-aa2).dot(bb2-aa2)/elen) for p in src_piece if abs((bb2-aa2).cross(p-aa2))/elen <= 10*band]
            if len(touch) < 2 or max(touch)-min(touch) < 1e-6*elen: continue
            hit = t1.edge_table().get(EdgeRef(k, e1))
            if hit is None: continue
            partner1, mu1, _, _ = t1.cross(EdgeRef(k, e1))
            m2 = mm.compose(mu1.invert())
            key = (partner1.poly, iso._map_key(m2, dref))
            if key in seen: continue
            seen.add(key)
            queue.append((tuple(t1.polygons[partner1.poly].vertices), partner1.poly, j, m2))
    print("end: nodes", nodes, "queue", len(queue), "pieces", len(pieces))
    print("cover:", [f"{c:.4f}/{n:.4f}" for c, n in zip(cover, need)])
else:
    pieces = [WitnessPiece(par1[k], Polygon(iso_pts), par2[j], mp) for (k, iso_pts, j, mp) in raw]
    w = Witness(root, pieces)
    rep = verify_witness(s1, hp, w)
    print("verify:", bool(rep), rep.reasons[:5])
