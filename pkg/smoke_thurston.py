import itertools, math
from dilsurf.thurston import (CurveSystem, ModulusSpec, build_U, power_iteration,
                              assemble_surface, thurston_construct, twist_action,
                              compatible_holonomy_space, check_compatible_prop,
                              NotIrreducible)
from dilsurf.surface import euler_genus, validate, vertex_classes
from dilsurf.holonomy import holonomy_basis, loop_holonomy
from dilsurf.flow import Certificate, Fail, directional_decomposition, Direction

P = ["p1", "p2", "p3", "p4"]

# --- find the beta cyclic order giving genus 2 ---
print("== octagon beta order search ==")
good = []
for perm in itertools.permutations(P[1:]):
    order = [P[0], *perm]
    cs = CurveSystem([P], [order], {p: 1.0 for p in P})
    u = build_U(cs)
    pf = power_iteration(u)
    try:
        s = assemble_surface(cs, pf)
    except Exception as e:
        print(order, "assemble fail:", e)
        continue
    rep = validate(s)
    if not rep.ok:
        print(order, "invalid")
        continue
    v, e, f, g = euler_genus(s)
    angs = sorted(round(vc.angle / math.pi, 6) for vc in vertex_classes(s))
    print(order, "genus", g, "angles(pi)", angs)
    if g == 2:
        good.append(order)
print("genus-2 orders:", good)

# --- U and PF oracle ---
beta_order = good[0]
cs = CurveSystem([P], [list(beta_order)], {p: 1.0 for p in P})
u = build_U(cs)
print("U =", u)
assert u == [[0.0, 4.0], [4.0, 0.0]]
pf = power_iteration(u)
print("lambda", pf.lambda_pf, "v", pf.widths, "res", pf.residual, "it", pf.iterations)
assert abs(pf.lambda_pf - 4.0) < 1e-12
assert max(abs(x - 1.0) for x in pf.widths) < 1e-12

# --- full construction ---
out = thurston_construct(cs)
print("mu =", out.mu)
v, e, f, g = euler_genus(out.surface)
print("V,E,F,genus:", v, e, f, g)
print("cone angles/pi:", sorted(round(vc.angle / math.pi, 9) for vc in vertex_classes(out.surface)))
for tag, c in zip(("t_alpha", "t_beta"), out.certificates):
    if isinstance(c, Certificate):
        print(tag, "CERT twists", c.twists, "shear", c.shear,
              "ncyl", len(c.decomposition.cylinders),
              "kinds", [cyl.kind for cyl in c.decomposition.cylinders],
              "moduli", [cyl.modulus for cyl in c.decomposition.cylinders])
    else:
        print(tag, "FAIL", c.reason, c.details)

hb = holonomy_basis(out.surface)
print("holonomy basis:", sorted(hb.values))

# one cylinder in each direction
d0 = directional_decomposition(out.surface, Direction.of(0.0))
d1 = directional_decomposition(out.surface, Direction.of(math.pi / 2))
print("ncyl horiz:", len(d0.cylinders), "vert:", len(d1.cylinders))

# --- L-shaped system ---
print("\n== L system ==")
for a in (0.5, 1.0, 2.0, 5.0):
    cs = CurveSystem([["p1", "p3", "p2"]], [["p1", "p2"], ["p3"]],
                     {"p1": a, "p3": a, "p2": 1.0})
    u = build_U(cs)
    exp = [[0.0, 1 + 1 / a, 1 / a], [1 + a, 0.0, 0.0], [a, 0.0, 0.0]]
    assert all(abs(u[i][j] - exp[i][j]) < 1e-12 for i in range(3) for j in range(3)), u
    pf = power_iteration(u)
    lam_exp = math.sqrt((a * a + 3 * a + 1) / a)
    print(f"a={a}: lambda={pf.lambda_pf:.12f} expect {lam_exp:.12f}  v={pf.widths}")
    assert abs(pf.lambda_pf - lam_exp) < 1e-10
    out = thurston_construct(cs)
    v_, e_, f_, g_ = euler_genus(out.surface)
    # normalized so alpha entry = 1: s = v_b1/v_a, t = v_b2/v_a
    va, vb1, vb2 = pf.widths
    s_val, t_val = vb1 / va, vb2 / va
    s_exp = math.sqrt(a) * (1 + a) / math.sqrt(a * a + 3 * a + 1)
    print(f"   genus {g_}, s={s_val:.12f} expect {s_exp:.12f}, t/s={t_val/s_val:.12f} expect {a/(1+a):.12f}")
    assert abs(s_val - s_exp) < 1e-9
    assert abs(t_val / s_val - a / (1 + a)) < 1e-9
    print("   mu =", out.mu, "expect", lam_exp)
    for tag, c in zip(("t_alpha", "t_beta"), out.certificates):
        if isinstance(c, Certificate):
            print("  ", tag, "CERT twists", c.twists)
        else:
            print("  ", tag, "FAIL", c.reason, getattr(c, "details", None))
    hv = sorted(holonomy_basis(out.surface).values)
    print("   holonomy basis:", [round(x, 9) for x in hv])

# --- twist_action / compatible space oracles ---
print("\n== homology ==")
Jstd = [[0, -1], [1, 0]]
m = twist_action([(([1, 0]), 1)], Jstd)
vv = [m[0][0] * 0 + m[0][1] * 1, m[1][0] * 0 + m[1][1] * 1]
print("T_alpha(beta) =", vv)
assert vv == [1, 1]

J_O = [[0, 1, -1, -1], [-1, 0, -1, -1], [1, 1, 0, -1], [1, 1, 1, 0]]
al, be = [0, 0, 1, 1], [1, 1, 0, 0]
rep = check_compatible_prop(al, be, J_O)
print("octagon: i =", rep.intersection, "dims", rep.compatible.dim, rep.annihilator.dim,
      "equal", rep.equal)
assert rep.intersection == 4 and rep.compatible.dim == 2 and rep.equal

J_L = [[0, 0, -1, -1], [0, 0, 0, -1], [1, 0, 0, -1], [1, 1, 1, 0]]
al, b1, b2 = [0, 0, 1, 1], [1, 0, 0, 0], [0, 1, 0, 0]
psi = twist_action([(al, 1), (b1, -1), (b2, -1)], J_L)
sp = compatible_holonomy_space(psi)
print("L psi fixed space dim", sp.dim, "basis", sp.basis)

# genus-1: standard classes, dim 0
rep1 = check_compatible_prop([1, 0], [0, 1], Jstd)
print("genus-1:", rep1.intersection, rep1.compatible.dim, rep1.equal)
assert rep1.compatible.dim == 0 and rep1.equal

# disconnected system
try:
    cs_bad = CurveSystem([["q1"], ["q2"]], [["q1"], ["q2"]], {"q1": 1.0, "q2": 1.0})
    power_iteration(build_U(cs_bad))
    print("disconnected: NO ERROR (bad)")
except NotIrreducible as e:
    print("disconnected -> NotIrreducible:", e)

print("\nALL THURSTON SMOKE OK")
