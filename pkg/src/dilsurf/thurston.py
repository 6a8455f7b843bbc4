"""Building dilation surfaces from intersecting multicurves.

Two transverse families of simple closed curves, together with a positive
transition weight at every intersection point, determine a surface tiled by
one rectangle per intersection.  Solving a Perron-Frobenius problem for the
rectangle dimensions makes all horizontal cylinders and all vertical
cylinders share one modulus, which turns the horizontal and vertical shears
into a pair of certified Dehn multitwists.

The homology half of the module checks which scaling holonomies survive the
combined twist: transvection matrices, the exact rational space of
functionals fixed by a mapping class, and the comparison of that space with
the annihilator of the twisting curves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .flow import Certificate, Fail, certify_multitwist
from .geom import AffineMap, DilationError, Mat2, Vec2
from .surface import DilationSurface, EdgeRef, Gluing, Polygon, validate


class NotIrreducible(DilationError):
    """The curve system does not connect; no Perron-Frobenius data."""


class NoConvergence(DilationError):
    """Power iteration missed the requested residual within its budget."""


class DimensionMismatch(DilationError):
    pass


# -- curve systems --------------------------------------------------------------


@dataclass
class CurveSystem:
    """Two families of closed curves given by the cyclic orders in which they
    visit their intersection points.

    Every point id must appear exactly once among the alpha curves and
    exactly once among the beta curves.  weights[p] is the positive
    transition scalar t_p at p; signs[p] is +1 when the beta curve crosses
    the rectangle of p upward and -1 when downward (alpha crossings are
    normalized rightward).
    """

    alpha_curves: list[list[str]]
    beta_curves: list[list[str]]
    weights: dict[str, float]
    signs: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        for p in self.point_ids():
            self.signs.setdefault(p, 1)

    def point_ids(self) -> list[str]:
        out = []
        for c in self.alpha_curves:
            out.extend(c)
        return out

    def alpha_of(self, p: str) -> int:
        for i, c in enumerate(self.alpha_curves):
            if p in c:
                return i
        raise DimensionMismatch(f"point {p!r} on no alpha curve")

    def beta_of(self, p: str) -> int:
        for j, c in enumerate(self.beta_curves):
            if p in c:
                return j
        raise DimensionMismatch(f"point {p!r} on no beta curve")

    def check(self) -> None:
        if not self.alpha_curves or not self.beta_curves:
            raise DimensionMismatch("need at least one curve of each family")
        seen_a: set[str] = set()
        for c in self.alpha_curves:
            if not c:
                raise DimensionMismatch("empty curve")
            for p in c:
                if p in seen_a:
                    raise DimensionMismatch(f"point {p!r} repeated among alpha curves")
                seen_a.add(p)
        seen_b: set[str] = set()
        for c in self.beta_curves:
            if not c:
                raise DimensionMismatch("empty curve")
            for p in c:
                if p in seen_b:
                    raise DimensionMismatch(f"point {p!r} repeated among beta curves")
                seen_b.add(p)
        if seen_a != seen_b:
            raise DimensionMismatch("alpha and beta curves meet different point sets")
        for p in seen_a:
            if self.weights.get(p, 0.0) <= 0.0:
                raise DimensionMismatch(f"point {p!r} needs a positive weight")
            if self.signs.get(p, 1) not in (1, -1):
                raise DimensionMismatch(f"point {p!r} has sign outside {{1,-1}}")


@dataclass
class ModulusSpec:
    """Target moduli, one per curve (alphas first, then betas)."""

    m: list[float] | None = None

    def resolve(self, n: int) -> list[float]:
        if self.m is None:
            return [1.0] * n
        if len(self.m) != n:
            raise DimensionMismatch(f"expected {n} moduli, got {len(self.m)}")
        if any(x <= 0 for x in self.m):
            raise DimensionMismatch("moduli must be positive")
        return [float(x) for x in self.m]


def build_U(cs: CurveSystem, m: ModulusSpec | None = None) -> list[list[float]]:
    """Modulus operator of the curve system: a nonnegative matrix indexed by
    curves (alphas first).  Row of alpha i: m_i * sum of 1/t_p over shared
    points with each beta; row of beta j: m_j * sum of t_p over shared points
    with each alpha.  Same-family blocks are zero."""
    cs.check()
    k, l = len(cs.alpha_curves), len(cs.beta_curves)
    mm = (m or ModulusSpec()).resolve(k + l)
    u = [[0.0] * (k + l) for _ in range(k + l)]
    for i, curve in enumerate(cs.alpha_curves):
        for p in curve:
            j = cs.beta_of(p)
            u[i][k + j] += mm[i] / cs.weights[p]
            u[k + j][i] += mm[k + j] * cs.weights[p]
    return u


# -- Perron-Frobenius -----------------------------------------------------------


@dataclass
class PFResult:
    lambda_pf: float
    widths: list[float]   # normalized to max entry 1
    residual: float
    iterations: int


def _strongly_connected(u: list[list[float]]) -> bool:
    n = len(u)

    def reach(adj) -> set[int]:
        seen = {0}
        todo = [0]
        while todo:
            i = todo.pop()
            for j in range(n):
                if adj(i, j) and j not in seen:
                    seen.add(j)
                    todo.append(j)
        return seen

    fwd = reach(lambda i, j: u[i][j] != 0.0)
    bwd = reach(lambda i, j: u[j][i] != 0.0)
    return len(fwd) == n and len(bwd) == n


def power_iteration(u: list[list[float]], tol: float = 1e-12,
                    max_iter: int = 200000) -> PFResult:
    """Dominant eigenpair of a nonnegative irreducible matrix.

    Iterates on U + I: the shift leaves eigenvectors alone, moves the
    spectrum off the bipartite +/- pairing that makes plain iteration
    oscillate, and guarantees convergence.  Reported residual is
    ||Uv - lambda v||_inf / (lambda ||v||_inf) for the unshifted matrix.
    """
    n = len(u)
    if n == 0 or not _strongly_connected(u):
        raise NotIrreducible("support graph of the operator is not strongly connected")
    x = [1.0] * n
    res = float("inf")
    for it in range(1, max_iter + 1):
        y = [sum(u[i][j] * x[j] for j in range(n)) + x[i] for i in range(n)]
        top = max(abs(v) for v in y)
        x = [v / top for v in y]
        lam = top - 1.0
        res = max(abs(sum(u[i][j] * x[j] for j in range(n)) - lam * x[i])
                  for i in range(n)) / (lam * max(abs(v) for v in x))
        if res <= tol:
            if min(x) <= 0.0:
                raise NotIrreducible("eigenvector failed to come out positive")
            return PFResult(lam, x, res, it)
    raise NoConvergence(f"residual {res:.3g} > {tol:.3g} after {max_iter} iterations")


# -- surface assembly -----------------------------------------------------------


def assemble_surface(cs: CurveSystem, pf: PFResult) -> DilationSurface:
    """One rectangle per intersection point: width the beta curve's
    eigenvector entry, height t_p times the alpha curve's entry.

    Vertical edges are chained along each alpha curve with dilation factor
    t_next/t_p; horizontal edges along each beta curve with factor +1, or -1
    through a negative crossing (a 180 degree turn).  The alpha cylinders end
    up Euclidean because the factors cancel around each cycle.
    """
    cs.check()
    k = len(cs.alpha_curves)
    v = pf.widths
    order = cs.point_ids()
    idx = {p: r for r, p in enumerate(order)}
    width = {p: v[k + cs.beta_of(p)] for p in order}
    height = {p: cs.weights[p] * v[cs.alpha_of(p)] for p in order}

    polys = [Polygon([Vec2(0, 0), Vec2(width[p], 0),
                      Vec2(width[p], height[p]), Vec2(0, height[p])])
             for p in order]
    gluings: list[Gluing] = []

    for curve in cs.alpha_curves:
        r = len(curve)
        for a in range(r):
            p, q = curve[a], curve[(a + 1) % r]
            scale = cs.weights[q] / cs.weights[p]
            gluings.append(Gluing(
                EdgeRef(idx[p], 1), EdgeRef(idx[q], 3),
                AffineMap(scale, Vec2(-scale * width[p], 0.0))))

    for curve in cs.beta_curves:
        r = len(curve)
        for b in range(r):
            p, q = curve[b], curve[(b + 1) % r]
            sp, sq = cs.signs[p], cs.signs[q]
            w, hp, hq = width[p], height[p], height[q]
            if sp > 0 and sq > 0:
                g = Gluing(EdgeRef(idx[p], 2), EdgeRef(idx[q], 0),
                           AffineMap(1.0, Vec2(0.0, -hp)))
            elif sp > 0 and sq < 0:
                g = Gluing(EdgeRef(idx[p], 2), EdgeRef(idx[q], 2),
                           AffineMap(-1.0, Vec2(w, hp + hq)))
            elif sp < 0 and sq < 0:
                g = Gluing(EdgeRef(idx[p], 0), EdgeRef(idx[q], 2),
                           AffineMap(1.0, Vec2(0.0, hq)))
            else:
                g = Gluing(EdgeRef(idx[p], 0), EdgeRef(idx[q], 0),
                           AffineMap(-1.0, Vec2(w, 0.0)))
            gluings.append(g)

    s = DilationSurface(polys, gluings)
    report = validate(s)
    if not report.ok:
        raise DilationError(
            "assembled surface fails validation (unsupported sign pattern?): "
            + "; ".join(report.violations[:4]))
    return s


# -- the full construction ------------------------------------------------------


@dataclass
class ThurstonOutput:
    surface: DilationSurface
    pf: PFResult
    mu: float
    d_talpha: Mat2
    d_tbeta: Mat2
    certificates: tuple[Certificate | Fail, Certificate | Fail]


def thurston_construct(cs: CurveSystem, m: ModulusSpec | None = None,
                       tol: float = 1e-12) -> ThurstonOutput:
    """Run the whole pipeline: modulus operator, Perron-Frobenius solve,
    rectangle surface, and certification of the horizontal and vertical
    shears as Dehn multitwists.

    With every target modulus equal to m, each cylinder of the output has
    modulus m/lambda_pf, so the shear mu = lambda_pf/m twists every cylinder
    exactly once.
    """
    mm = (m or ModulusSpec()).resolve(len(cs.alpha_curves) + len(cs.beta_curves))
    if max(mm) - min(mm) > 1e-15 * max(mm):
        raise DimensionMismatch(
            "a single shear needs one common target modulus; pass constant m")
    u = build_U(cs, ModulusSpec(mm))
    pf = power_iteration(u, tol)
    s = assemble_surface(cs, pf)
    mu = pf.lambda_pf / mm[0]
    d_ta = Mat2(1.0, mu, 0.0, 1.0)
    d_tb = Mat2(1.0, 0.0, -mu, 1.0)
    certs = (certify_multitwist(s, d_ta), certify_multitwist(s, d_tb))
    return ThurstonOutput(s, pf, mu, d_ta, d_tb, certs)


# -- homology: transvections and compatible holonomies ---------------------------


IntMatrix = list[list[int]]


def _mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n = len(a)
    return [[sum(a[i][t] * b[t][j] for t in range(n)) for j in range(n)]
            for i in range(n)]


def twist_action(classes: list[tuple[list[int], int]], J: IntMatrix) -> IntMatrix:
    """Matrix of a multitwist on homology: the twist along gamma with
    multiplicity k sends c to c + k*<c, gamma>*gamma, with <x, y> = x^T J y.
    Twists are composed with the first listed applied first."""
    n = len(J)
    if any(len(row) != n for row in J):
        raise DimensionMismatch("intersection form must be square")
    total = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for gamma, mult in classes:
        if len(gamma) != n:
            raise DimensionMismatch(
                f"class of length {len(gamma)} against a {n}-dimensional form")
        w = [sum(J[i][j] * gamma[j] for j in range(n)) for i in range(n)]
        t = [[(1 if i == j else 0) + mult * gamma[i] * w[j] for j in range(n)]
             for i in range(n)]
        total = _mat_mul(t, total)
    return total


def _rref(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    rows = [list(r) for r in rows]
    if not rows:
        return []
    ncol = len(rows[0])
    out: list[list[Fraction]] = []
    lead = 0
    for col in range(ncol):
        piv = next((i for i in range(lead, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[lead], rows[piv] = rows[piv], rows[lead]
        inv = rows[lead][col]
        rows[lead] = [x / inv for x in rows[lead]]
        for i in range(len(rows)):
            if i != lead and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[lead])]
        lead += 1
        if lead == len(rows):
            break
    return [r for r in rows[:lead]]


def _kernel(rows: list[list[Fraction]], ncol: int) -> list[tuple[Fraction, ...]]:
    """Basis of {x : Rx = 0} from the reduced row echelon form of R."""
    red = _rref(rows)
    pivots = []
    for r in red:
        pivots.append(next(i for i, x in enumerate(r) if x != 0))
    free = [c for c in range(ncol) if c not in pivots]
    basis = []
    for fcol in free:
        vec = [Fraction(0)] * ncol
        vec[fcol] = Fraction(1)
        for r, pcol in zip(red, pivots):
            vec[pcol] = -r[fcol]
        basis.append(tuple(vec))
    return basis


@dataclass
class CompatibleSpace:
    dim: int
    basis: list[tuple[Fraction, ...]]


def compatible_holonomy_space(psi: IntMatrix) -> CompatibleSpace:
    """Exact rational basis of the linear functionals fixed by psi, i.e. the
    log-holonomies rho with rho(psi(c)) = rho(c) for every class c.  Computed
    as the kernel of (psi^T - I)."""
    n = len(psi)
    if any(len(row) != n for row in psi):
        raise DimensionMismatch("psi must be square")
    rows = [[Fraction(psi[j][i]) - (1 if i == j else 0) for j in range(n)]
            for i in range(n)]
    basis = _kernel(rows, n)
    return CompatibleSpace(len(basis), basis)


@dataclass
class CompatibleReport:
    applicable: bool
    intersection: int
    equal: bool | None
    compatible: CompatibleSpace | None
    annihilator: CompatibleSpace | None


def check_compatible_prop(alpha: list[int], beta: list[int], J: IntMatrix
                          ) -> CompatibleReport:
    """For psi the twist along alpha composed with the inverse twist along
    beta: compare the psi-fixed functionals with the annihilator of
    span{alpha, beta}.  The two agree whenever the classes genuinely cross
    (intersection number nonzero); zero intersection is reported as not
    applicable."""
    n = len(J)
    i_ab = sum(alpha[i] * J[i][j] * beta[j] for i in range(n) for j in range(n))
    if i_ab == 0:
        return CompatibleReport(False, 0, None, None, None)
    psi = twist_action([(alpha, 1), (beta, -1)], J)
    comp = compatible_holonomy_space(psi)
    ann_basis = _kernel([[Fraction(x) for x in alpha],
                         [Fraction(x) for x in beta]], n)
    ann = CompatibleSpace(len(ann_basis), ann_basis)
    eq = _rref([list(b) for b in comp.basis]) == _rref([list(b) for b in ann.basis])
    return CompatibleReport(True, i_ab, eq, comp, ann)
