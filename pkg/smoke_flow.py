import math
from dilsurf.geom import Vec2, Mat2
from dilsurf.constructions import square_torus, hopf_torus, staircase_surface
from dilsurf.flow import (
    PointStart, SectorStart, trace_ray, separatrices, directional_decomposition,
    certify_multitwist, ClosedOrbit, SaddleConnection, Budget, Decomposition,
    NotDecomposable, Certificate, Fail,
)
from dilsurf.holonomy import loop_holonomy

sq = square_torus()
out = trace_ray(sq, PointStart(0, Vec2(0.3, 0.45)), 0.0)
print("square generic h:", type(out).__name__, getattr(out, "alpha", None),
      getattr(out, "kind", None), "core_len", getattr(out, "core_length", None))
out = trace_ray(sq, SectorStart(0, 0), 0.0)
print("square sector0:", type(out).__name__, "len", getattr(out, "length", None),
      "end_class", getattr(out, "end_class", None))
out = trace_ray(sq, PointStart(0, Vec2(0.3, 0.45)), math.atan2(1.0, 2.0))
print("square slope 1/2:", type(out).__name__, getattr(out, "alpha", None),
      "core_len", getattr(out, "core_length", None))

h = hopf_torus(2.0)
out = trace_ray(h, PointStart(0, Vec2(0.1, 1.3)), math.pi / 2)
print("hopf vertical:", type(out).__name__, getattr(out, "alpha", None),
      getattr(out, "kind", None), "fixed", out.fixed_point() if isinstance(out, ClosedOrbit) else None)
out2 = trace_ray(h, PointStart(0, Vec2(0.1, 1.3)), -math.pi / 2)
print("hopf vertical rev:", type(out2).__name__, getattr(out2, "alpha", None),
      getattr(out2, "kind", None))
assert isinstance(out, ClosedOrbit) and isinstance(out2, ClosedOrbit)
sc, sg = loop_holonomy(h, out.core)
print("hopf alpha vs loop_holonomy:", out.alpha, sc, sg)

dec = directional_decomposition(h, 0.0)
print("hopf theta=0 decomposition:", type(dec).__name__)
if isinstance(dec, Decomposition):
    for c in dec.cylinders:
        print("  cyl:", c.kind, "lam", c.lam, "n", c.angle_multiple, "polys", c.polygons,
              "mod", c.modulus)

dec = directional_decomposition(sq, 0.0)
print("square decomposition:", type(dec).__name__)
if isinstance(dec, Decomposition):
    for c in dec.cylinders:
        print("  cyl:", c.kind, "mod", c.modulus, "circ", c.circumference, "h", c.height)

cert = certify_multitwist(sq, Mat2(1, 1, 0, 1))
print("square certify [[1,1],[0,1]]:", type(cert).__name__,
      getattr(cert, "twists", None), getattr(cert, "reason", None))
cert = certify_multitwist(sq, Mat2(1, 0, 1, 1))
print("square certify [[1,0],[1,1]]:", type(cert).__name__, getattr(cert, "twists", None))
cert = certify_multitwist(sq, Mat2(1, 0.5, 0, 1))
print("square certify half shear:", type(cert).__name__, getattr(cert, "reason", None))

st = staircase_surface()
seps = separatrices(st, 0.0)
print("staircase separatrices theta=0:", [(ci, k, type(o).__name__,
      round(getattr(o, 'length', -1), 6)) for ci, k, o in seps])
dec = directional_decomposition(st, 0.0)
print("staircase theta=0:", type(dec).__name__)
if isinstance(dec, Decomposition):
    for c in dec.cylinders:
        print("  cyl:", c.kind, "lam", c.lam, "n", c.angle_multiple, "mod", c.modulus,
              "polys", c.polygons)
elif isinstance(dec, NotDecomposable):
    print("  reason:", dec.reason, dec.detail)

from dilsurf.surface import euler_genus, validate
print("sq euler:", euler_genus(sq), "hopf:", euler_genus(h), "stair:", euler_genus(st))
print("2x3 torus valid:", validate(square_torus(2, 3)).ok)
