import random, time
from dilsurf.constructions import hopf_torus, square_torus, staircase_surface
from dilsurf.geom import Mat2, Vec2, AffineMap
from dilsurf.surface import apply_matrix, Polygon
from dilsurf.isom import (identity_witness, verify_witness, search_isomorphism,
                          is_affine_automorphism, Witness, WitnessPiece, NotFound)

sq = square_torus(1, 1)
hp = hopf_torus(2.0)
st = staircase_surface()

# identity witnesses
for name, s in (("square", sq), ("hopf", hp), ("staircase", st)):
    rep = verify_witness(s, s, identity_witness(s))
    print(f"identity witness {name}:", bool(rep), rep.reasons[:2])
    assert rep

# corrupted witness
w = identity_witness(sq)
bad = Witness(w.global_map, [WitnessPiece(0, w.pieces[0].piece, 0,
                                          AffineMap(1.0, Vec2(0.3, 0)))])
rep = verify_witness(sq, sq, bad)
print("corrupted witness:", bool(rep), rep.reasons[:2])
assert not rep

# search: s vs s
t0 = time.time()
res = search_isomorphism(sq, sq)
print("sq vs sq:", type(res).__name__,
      "" if isinstance(res, NotFound) else f"{len(res.pieces)} pieces, scale {res.global_map.scale}")
assert not isinstance(res, NotFound)

# scaled torus
sq3 = apply_matrix(sq, Mat2(3, 0, 0, 3))
res = search_isomorphism(sq, sq3)
print("sq vs 3*sq:", type(res).__name__,
      "" if isinstance(res, NotFound) else f"scale {res.global_map.scale}")
assert not isinstance(res, NotFound) and abs(res.global_map.scale - 3) < 1e-9
inv = res.invert()
rep = verify_witness(sq3, sq, inv)
print("inverted witness:", bool(rep), rep.reasons[:2])
assert rep

# torus generators
for m in (Mat2(1, 1, 0, 1), Mat2(1, 0, 1, 1)):
    t0 = time.time()
    r = is_affine_automorphism(sq, m)
    print(f"square torus {m}: {type(r).__name__}  ({time.time()-t0:.2f}s)")
    assert bool(r), r

# hopf under random det-1 matrices
rng = random.Random(7)
tstart = time.time()
for trial in range(6):
    a = rng.uniform(0.5, 2.0) * rng.choice([1, -1])
    b = rng.uniform(-1.5, 1.5)
    c = rng.uniform(-1.5, 1.5)
    d = (1 + b * c) / a
    m = Mat2(a, b, c, d)
    t0 = time.time()
    r = is_affine_automorphism(hp, m, max_flips=64)
    ok = bool(r)
    np = len(r.witness.pieces) if ok else 0
    print(f"hopf {trial}: det={m.det():.3f} -> {type(r).__name__} pieces={np} ({time.time()-t0:.2f}s)")
    if not ok:
        print("   reason:", r.reason, r.roots_tried, r.nodes, r.moves)
    assert ok
print(f"hopf total {time.time()-tstart:.2f}s")
print("ALL ISOM SMOKE OK")
