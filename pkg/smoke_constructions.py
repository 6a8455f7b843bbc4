import time

from dilsurf.constructions import (exotic_dehn_surface, hopf_slit_sum,
                                   hopf_torus, l_curve_system,
                                   octagon_curve_system, slit_connect_sum,
                                   square_torus, staircase_surface)
from dilsurf.geom import Mat2, TraceClass, Vec2, classify_trace
from dilsurf.holonomy import holonomy_basis, loop_holonomy
from dilsurf.isom import is_affine_automorphism, verify_witness, Verified
from dilsurf.surface import apply_matrix, euler_genus, validate, vertex_classes
from dilsurf.thurston import thurston_construct

import math


def angles(s):
    out = []
    for vc in vertex_classes(s):
        tot = sum(s.polygons[p].interior_angle(v) for p, v in vc.corners)
        out.append(tot / math.pi)
    return sorted(out)


def check(label, cond):
    print(("ok  " if cond else "FAIL") + " " + label)
    if not cond:
        raise SystemExit(1)


# --- two square tori ---
t1 = square_torus(3.0, 2.0)
slit = (Vec2(1.0, 1.0), Vec2(2.0, 1.0))
s = slit_connect_sum(t1, slit, square_torus(3.0, 2.0), slit)
rep = validate(s)
check("sq sum validates: " + "; ".join(rep.violations), bool(rep))
v, e, f, g = euler_genus(s)
check(f"sq sum genus 2 (v={v} e={e} f={f} g={g})", g == 2)
ang = angles(s)
check(f"sq sum angles {ang}", ang.count(4.0) == 2)

# --- slit lengths 1 and 2 (dilation gluing) ---
t2 = square_torus(6.0, 4.0)
s12 = slit_connect_sum(t1, slit, t2, (Vec2(2.0, 2.0), Vec2(4.0, 2.0)))
rep = validate(s12)
check("len-1/len-2 sum validates: " + "; ".join(rep.violations), bool(rep))
check("len-1/len-2 genus 2", euler_genus(s12)[3] == 2)
check("len-1/len-2 two 4pi", angles(s12).count(4.0) == 2)

# --- vertical slits, anti-parallel input ---
sv = slit_connect_sum(t1, (Vec2(1.0, 0.5), Vec2(1.0, 1.5)),
                      square_torus(3.0, 2.0), (Vec2(2.0, 1.5), Vec2(2.0, 0.5)))
check("vertical anti-parallel validates", bool(validate(sv)))
check("vertical genus 2", euler_genus(sv)[3] == 2)

# --- hopf slit sum ---
h = hopf_slit_sum(2.0)
rep = validate(h)
check("hopf sum validates: " + "; ".join(rep.violations), bool(rep))
check("hopf sum genus 2", euler_genus(h)[3] == 2)
check(f"hopf sum angles {angles(h)}", angles(h).count(4.0) == 2)

# --- upper-triangular action on the hopf slit sum ---
import random
rng = random.Random(7)
t0 = time.time()
for n in range(10):
    a = rng.uniform(0.5, 2.0)
    b = rng.uniform(-1.0, 1.0)
    m = Mat2.from_rows([[a, b], [0.0, 1.0 / a]])
    r = is_affine_automorphism(h, m)
    ok = isinstance(r, Verified)
    print(f"   sample {n}: a={a:.3f} b={b:.3f} -> {type(r).__name__}"
          + ("" if ok else f" {r.reason} roots={r.roots_tried} nodes={r.nodes}"))
    if not ok:
        raise SystemExit(1)
print(f"ok   upper-triangular 10 samples in {time.time()-t0:.1f}s")

# --- exotic surfaces ---
for g in (3, 4, 5, 6):
    t0 = time.time()
    surf, mat, wit, words = exotic_dehn_surface(g)
    rep = validate(surf)
    check(f"exotic({g}) validates: " + "; ".join(rep.violations), bool(rep))
    gg = euler_genus(surf)[3]
    check(f"exotic({g}) genus {gg}", gg == g)
    na = angles(surf)
    check(f"exotic({g}) cone angles: {na.count(4.0)} x 4pi", na.count(4.0) == 2 * (g - 1))
    check(f"exotic({g}) trace class", classify_trace(mat) is TraceClass.HYPERBOLIC)
    scales = [loop_holonomy(surf, w) for w in words]
    check(f"exotic({g}) words {scales}", len(words) == 4
          and all(sc == 2.0 and sg == 1 for sc, sg in scales))
    moved = apply_matrix(surf, mat)
    repw = verify_witness(moved, surf, wit)
    check(f"exotic({g}) witness ({len(wit.pieces)} pieces): "
          + "; ".join(repw.reasons[:3]), bool(repw))
    r = is_affine_automorphism(surf, mat, wit)
    check(f"exotic({g}) certify {type(r).__name__} in {time.time()-t0:.2f}s",
          isinstance(r, Verified))

# --- curve systems ---
cs = octagon_curve_system()
res = thurston_construct(cs)
check(f"octagon system lambda {res.pf.lambda_pf}", abs(res.pf.lambda_pf - 4.0) < 1e-12)
so = res.surface
check("octagon system surface validates", bool(validate(so)))
check(f"octagon system genus {euler_genus(so)[3]}", euler_genus(so)[3] == 2)

res1 = thurston_construct(l_curve_system(1.0))
hb = holonomy_basis(res1.surface)
check(f"l(1) holonomy {sorted(hb.value_multiset())}",
      all(abs(x - 1.0) < 1e-12 for x in hb.value_multiset()))
res2 = thurston_construct(l_curve_system(2.0))
hb2 = holonomy_basis(res2.surface)
vals = sorted(hb2.value_multiset())
check(f"l(2) holonomy {vals}",
      any(abs(x - 2.0) < 1e-9 for x in vals) and any(abs(x - 0.5) < 1e-9 for x in vals))

print("all construction checks passed")
