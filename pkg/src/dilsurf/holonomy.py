"""Scaling holonomy of loops.

A loop is recorded as a word of gluing crossings.  Developing the surface
along the loop composes the gluing maps; because their linear parts are real
scalars the result is independent of basepoint details and the word's value
is the pair (scale, sign): scale > 0 is how lengths stretch around the loop,
sign is -1 when the loop's charts come back rotated by 180 degrees.

Crossing a gluing from its source side continues the developed picture by
the *inverse* of the gluing map, so a crossing exiting through the source
copy of an edge with scale a contributes 1/|a|, and the reverse crossing
contributes |a|.  The sign contribution is sign(a) either way.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geom import DilationError, near
from .surface import DilationSurface, EdgeRef, vertex_classes


class BrokenWord(DilationError):
    """Loop word whose crossings do not chain or do not close up."""


@dataclass(frozen=True)
class LoopWord:
    """Ordered gluing crossings; each step is (gluing index, forward).

    forward means the crossing exits through the gluing's source copy of the
    edge and re-enters at the destination copy.
    """

    steps: tuple[tuple[int, bool], ...]

    @classmethod
    def of(cls, *steps: tuple[int, bool]) -> "LoopWord":
        return cls(tuple(steps))

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __add__(self, other: "LoopWord") -> "LoopWord":
        return LoopWord(self.steps + other.steps)

    def reversed(self) -> "LoopWord":
        return LoopWord(tuple((gi, not fwd) for gi, fwd in reversed(self.steps)))


def _step_polys(s: DilationSurface, gi: int, fwd: bool) -> tuple[int, int]:
    g = s.gluings[gi]
    return (g.src.poly, g.dst.poly) if fwd else (g.dst.poly, g.src.poly)


def loop_holonomy(s: DilationSurface, w: LoopWord) -> tuple[float, int]:
    """Return (scale, sign) of the developed map around the closed word w."""
    scale = 1.0
    sign = 1
    prev_exit: int | None = None
    first_entry: int | None = None
    for gi, fwd in w:
        if not (0 <= gi < len(s.gluings)):
            raise BrokenWord(f"gluing index {gi} out of range")
        entry, exit_ = _step_polys(s, gi, fwd)
        if prev_exit is None:
            first_entry = entry
        elif prev_exit != entry:
            raise BrokenWord(
                f"crossing of gluing {gi} starts in polygon {entry}, "
                f"but the previous crossing ended in {prev_exit}"
            )
        prev_exit = exit_
        a = s.gluings[gi].map.scale
        scale *= 1.0 / abs(a) if fwd else abs(a)
        sign *= 1 if a > 0 else -1
    if prev_exit is not None and prev_exit != first_entry:
        raise BrokenWord(f"word ends in polygon {prev_exit}, started in {first_entry}")
    return scale, sign


def is_trivial_on(s: DilationSurface, w: LoopWord, tol: float | None = None) -> bool:
    """True when the loop's scaling holonomy is 1 within tolerance."""
    scale, _ = loop_holonomy(s, w)
    return near(scale, 1.0, s.tolerance if tol is None else tol)


def link_word(s: DilationSurface, corners: list[tuple[int, int]]) -> LoopWord:
    """The crossing word walked counterclockwise around a vertex class,
    given its corners in link order (as produced by vertex_classes)."""
    steps = []
    for pi, vi in corners:
        ref_edge = (vi - 1) % len(s.polygons[pi])
        gi, as_src = s.edge_table()[EdgeRef(pi, ref_edge)]
        steps.append((gi, as_src))
    return LoopWord(tuple(steps))


@dataclass
class HolonomyRep:
    """The holonomy homomorphism presented on dual-graph generators.

    tree: gluing indices forming a spanning tree of the dual graph.
    generators: one loop per remaining gluing, lowest index first.
    values / sign_values: (scale, sign) of each generator loop.
    h1_values: scales on a basis of first homology, obtained by quotienting
    the generator lattice by the vertex-link relations (Smith reduction).
    The multiset of h1_values is the basis-independent fingerprint of the
    scaling holonomy.
    """

    tree: list[int]
    generator_gluings: list[int]
    generators: list[LoopWord]
    values: list[float]
    sign_values: list[int]
    h1_values: list[float]

    def value_multiset(self) -> list[float]:
        return sorted(self.values)

    def h1_multiset(self) -> list[float]:
        return sorted(self.h1_values)


def holonomy_basis(s: DilationSurface) -> HolonomyRep:
    """Present the scaling holonomy on loops dual to the non-tree gluings.

    The spanning tree of the dual graph is grown from polygon 0, always
    taking the lowest-index gluing that reaches a new polygon, so the
    presentation is deterministic.
    """
    nf = len(s.polygons)
    parent: dict[int, tuple[int, int, bool] | None] = {0: None}  # face -> (face, gluing, fwd into this face)
    tree: list[int] = []
    changed = True
    while changed and len(parent) < nf:
        changed = False
        for gi, g in enumerate(s.gluings):
            a, b = g.src.poly, g.dst.poly
            if a in parent and b not in parent:
                parent[b] = (a, gi, True)
                tree.append(gi)
                changed = True
            elif b in parent and a not in parent:
                parent[a] = (b, gi, False)
                tree.append(gi)
                changed = True
    if len(parent) < nf:
        raise DilationError("polygons are not connected by gluings")

    def path_from_root(face: int) -> list[tuple[int, bool]]:
        steps = []
        while parent[face] is not None:
            up, gi, fwd = parent[face]
            steps.append((gi, fwd))
            face = up
        steps.reverse()
        return steps

    tree_set = set(tree)
    gen_gluings = [gi for gi in range(len(s.gluings)) if gi not in tree_set]
    generators: list[LoopWord] = []
    values: list[float] = []
    signs: list[int] = []
    for gi in gen_gluings:
        g = s.gluings[gi]
        to_src = path_from_root(g.src.poly)
        back = [(i, not f) for i, f in reversed(path_from_root(g.dst.poly))]
        w = LoopWord(tuple(to_src + [(gi, True)] + back))
        sc, sg = loop_holonomy(s, w)
        generators.append(w)
        values.append(sc)
        signs.append(sg)

    h1 = _h1_values(s, gen_gluings, values)
    return HolonomyRep(tree, gen_gluings, generators, values, signs, h1)


def _h1_values(s: DilationSurface, gen_gluings: list[int],
               values: list[float]) -> list[float]:
    """Quotient the generator lattice by vertex-link relations and evaluate
    the holonomy on the free coordinates that survive."""
    index_of = {gi: k for k, gi in enumerate(gen_gluings)}
    n = len(gen_gluings)
    relations: list[list[int]] = []
    for vc in vertex_classes(s):
        w = link_word(s, vc.corners)
        row = [0] * n
        for gi, fwd in w:
            k = index_of.get(gi)
            if k is not None:
                row[k] += 1 if fwd else -1
        relations.append(row)

    if n == 0:
        return []
    # columns of M generate the relation sublattice of Z^n
    m = [[relations[j][i] for j in range(len(relations))] for i in range(n)]
    diag, uinv = _smith_left(m)
    out = []
    for j in range(n):
        d = diag[j] if j < len(diag) else 0
        if d == 0:
            rho = 1.0
            for i in range(n):
                e = uinv[i][j]
                if e:
                    rho *= values[i] ** e
            out.append(rho)
    return out


def _smith_left(m: list[list[int]]) -> tuple[list[int], list[list[int]]]:
    """Diagonalize the integer matrix m by unimodular row and column
    operations; return the diagonal and the inverse of the row-operation
    matrix U (so m_diag = U m V for some unimodular V).
    """
    m = [row[:] for row in m]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    uinv = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        for r in uinv:
            r[i], r[j] = r[j], r[i]

    def add_row(i, j, k):
        # row_j += k*row_i  =>  col_i of uinv -= k*col_j
        for c in range(cols):
            m[j][c] += k * m[i][c]
        for r in uinv:
            r[i] -= k * r[j]

    def swap_cols(i, j):
        for r in m:
            r[i], r[j] = r[j], r[i]

    def add_col(i, j, k):
        for r in m:
            r[j] += k * r[i]

    diag: list[int] = []
    t = 0
    while t < rows and t < cols:
        # find smallest nonzero pivot in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if m[i][j] != 0 and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        if bi != t:
            swap_rows(t, bi)
        if bj != t:
            swap_cols(t, bj)
        done = False
        while not done:
            done = True
            for i in range(t + 1, rows):
                q = m[i][t] // m[t][t]
                if q:
                    add_row(t, i, -q)
                if m[i][t]:
                    swap_rows(t, i)
                    done = False
            if done:
                for j in range(t + 1, cols):
                    q = m[t][j] // m[t][t]
                    if q:
                        add_col(t, j, -q)
                    if m[t][j]:
                        swap_cols(t, j)
                        done = False
        diag.append(abs(m[t][t]))
        t += 1
    return diag, uinv
