"""Planar primitives shared by the rest of the package.

Everything here works with plain floats.  The only numerical policy decision
lives in :func:`near`: comparisons are relative to the magnitudes involved,
with 1.0 as the floor so that quantities near zero are compared absolutely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

TOL = 1e-9


class DilationError(Exception):
    """Base class for every error raised by this package."""


class NonPositiveDeterminant(DilationError):
    """Matrix acting on a dilation surface must have det > 0."""


def near(a: float, b: float, tol: float = TOL) -> bool:
    """Relative comparison with floor 1: |a-b| <= tol * max(1, |a|, |b|)."""
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class Vec2:
    x: float
    y: float

    def __add__(self, o: "Vec2") -> "Vec2":
        return Vec2(self.x + o.x, self.y + o.y)

    def __sub__(self, o: "Vec2") -> "Vec2":
        return Vec2(self.x - o.x, self.y - o.y)

    def __mul__(self, s: float) -> "Vec2":
        return Vec2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def dot(self, o: "Vec2") -> float:
        return self.x * o.x + self.y * o.y

    def cross(self, o: "Vec2") -> float:
        return self.x * o.y - self.y * o.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def perp(self) -> "Vec2":
        """Rotate by +90 degrees."""
        return Vec2(-self.y, self.x)

    def angle(self) -> float:
        return math.atan2(self.y, self.x)

    def unit(self) -> "Vec2":
        n = self.norm()
        if n == 0.0:
            raise DilationError("cannot normalize the zero vector")
        return Vec2(self.x / n, self.y / n)

    def close(self, o: "Vec2", tol: float = TOL) -> bool:
        scale = max(1.0, self.norm(), o.norm())
        return (self - o).norm() <= tol * scale


def angle_ccw(u: Vec2, v: Vec2) -> float:
    """Counterclockwise angle from u to v, in [0, 2*pi)."""
    a = math.atan2(u.cross(v), u.dot(v))
    if a < 0.0:
        a += 2.0 * math.pi
    return a


@dataclass(frozen=True)
class Mat2:
    """2x2 real matrix, row major: [[a, b], [c, d]]."""

    a: float
    b: float
    c: float
    d: float

    @staticmethod
    def identity() -> "Mat2":
        return Mat2(1.0, 0.0, 0.0, 1.0)

    @staticmethod
    def from_rows(rows) -> "Mat2":
        (a, b), (c, d) = rows
        return Mat2(float(a), float(b), float(c), float(d))

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def trace(self) -> float:
        return self.a + self.d

    def apply(self, v: Vec2) -> Vec2:
        return Vec2(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)

    def __matmul__(self, o: "Mat2") -> "Mat2":
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def inverse(self) -> "Mat2":
        det = self.det()
        if det == 0.0:
            raise DilationError("singular matrix")
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def scaled(self, s: float) -> "Mat2":
        return Mat2(self.a * s, self.b * s, self.c * s, self.d * s)


class TraceClass(Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


def classify_trace(m: Mat2, tol: float = TOL) -> TraceClass:
    """Classify m by the trace of its det-1 normalization.

    The parabolic band |tr - 2| <= tol wins ties against both neighbours, so
    a matrix exactly on the boundary is reported parabolic rather than
    falling to rounding luck.
    """
    det = m.det()
    if det <= 0.0:
        raise NonPositiveDeterminant(f"determinant {det} is not positive")
    t = abs(m.trace()) / math.sqrt(det)
    if near(t, 2.0, tol):
        return TraceClass.PARABOLIC
    if t < 2.0:
        return TraceClass.ELLIPTIC
    return TraceClass.HYPERBOLIC


@dataclass(frozen=True)
class AffineMap:
    """z -> scale * z + shift with real scale != 0.

    These are exactly the chart-change maps a dilation structure allows:
    positive scale is a genuine dilation, negative scale folds in a rotation
    by pi.
    """

    scale: float
    shift: Vec2

    def __post_init__(self):
        if self.scale == 0.0:
            raise DilationError("affine map must have nonzero scale")

    @staticmethod
    def identity() -> "AffineMap":
        return AffineMap(1.0, Vec2(0.0, 0.0))

    @staticmethod
    def translation(shift: Vec2) -> "AffineMap":
        return AffineMap(1.0, shift)

    def apply(self, v: Vec2) -> Vec2:
        return Vec2(self.scale * v.x + self.shift.x, self.scale * v.y + self.shift.y)

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other: (self.compose(other))(z) == self(other(z))."""
        return AffineMap(self.scale * other.scale, self.apply(other.shift))

    def invert(self) -> "AffineMap":
        inv = 1.0 / self.scale
        return AffineMap(inv, Vec2(-self.shift.x * inv, -self.shift.y * inv))

    def is_identity(self, tol: float = TOL) -> bool:
        return near(self.scale, 1.0, tol) and self.shift.close(Vec2(0.0, 0.0), tol)

    def close(self, other: "AffineMap", tol: float = TOL) -> bool:
        return near(self.scale, other.scale, tol) and self.shift.close(other.shift, tol)
