"""Planar geometry kernel: isometries, labeled polygons, simplicity, congruence.

Points of the plane are represented as complex numbers ``x + 1j*y``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

Point2 = complex

MERGE_TOL = 1e-9


class DegenerateError(ValueError):
    """Polygon with coincident consecutive corners (a zero-length side)."""


def _finite(z: complex) -> bool:
    return math.isfinite(z.real) and math.isfinite(z.imag)


def _cross(a: complex, b: complex) -> float:
    return a.real * b.imag - a.imag * b.real


def _dot(a: complex, b: complex) -> float:
    return a.real * b.real + a.imag * b.imag


@dataclass(frozen=True)
class Isometry:
    """Plane isometry ``z -> mult * (conj(z) if reflect else z) + shift``.

    ``mult`` is a unit complex number; ``reflect`` selects the
    orientation-reversing branch.
    """

    mult: complex = 1.0 + 0j
    shift: complex = 0j
    reflect: bool = False

    def __post_init__(self) -> None:
        if not (_finite(self.mult) and _finite(self.shift)):
            raise ValueError("non-finite isometry data")
        if abs(abs(self.mult) - 1.0) > 1e-12:
            raise ValueError(f"linear part is not orthogonal: |mult|={abs(self.mult)}")

    @property
    def orientation(self) -> int:
        return -1 if self.reflect else 1

    @property
    def linear(self) -> np.ndarray:
        """Linear part as a 2x2 orthogonal matrix acting on (x, y) columns."""
        a, b = self.mult.real, self.mult.imag
        if self.reflect:
            return np.array([[a, b], [b, -a]])
        return np.array([[a, -b], [b, a]])

    @property
    def translation(self) -> Point2:
        return self.shift

    def __call__(self, z: Point2) -> Point2:
        return self.mult * (z.conjugate() if self.reflect else z) + self.shift

    def apply_all(self, points) -> tuple[Point2, ...]:
        return tuple(self(z) for z in points)

    def compose(self, other: Isometry) -> Isometry:
        """The isometry acting as ``self`` after ``other``."""
        if self.reflect:
            mult = self.mult * other.mult.conjugate()
            shift = self.mult * other.shift.conjugate() + self.shift
        else:
            mult = self.mult * other.mult
            shift = self.mult * other.shift + self.shift
        return Isometry(mult, shift, self.reflect != other.reflect)

    def inverse(self) -> Isometry:
        if self.reflect:
            return Isometry(
                (1.0 / self.mult).conjugate(),
                -(self.shift / self.mult).conjugate(),
                True,
            )
        return Isometry(1.0 / self.mult, -self.shift / self.mult, False)


def identity() -> Isometry:
    return Isometry()


def translation(v: Point2) -> Isometry:
    return Isometry(1.0 + 0j, v, False)


def rotation(angle: float, center: Point2 = 0j) -> Isometry:
    m = cmath.exp(1j * angle)
    return Isometry(m, center - m * center, False)


def reflection(anchor: Point2, direction: float) -> Isometry:
    """Reflection across the line through ``anchor`` at angle ``direction``."""
    m = cmath.exp(2j * direction)
    return Isometry(m, anchor - m * anchor.conjugate(), True)


def glide(anchor: Point2, direction: float, shift: float) -> Isometry:
    """Reflection across a line composed with a translation along it."""
    return translation(cmath.rect(shift, direction)).compose(
        reflection(anchor, direction)
    )


@dataclass(frozen=True)
class Polygon:
    """Ordered corner list with per-corner labels (default 0..n-1).

    Corners of a simple polygon are stored counterclockwise by convention;
    constructors that produce clockwise data reverse it before building.
    """

    corners: tuple[Point2, ...]
    labels: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        corners = tuple(complex(z) for z in self.corners)
        object.__setattr__(self, "corners", corners)
        if len(corners) < 3:
            raise ValueError("polygon needs at least 3 corners")
        for z in corners:
            if not _finite(z):
                raise ValueError("non-finite corner coordinate")
        n = len(corners)
        for k in range(n):
            if abs(corners[(k + 1) % n] - corners[k]) <= MERGE_TOL:
                raise DegenerateError(f"corners {k} and {(k + 1) % n} coincide")
        labels = tuple(self.labels) if self.labels else tuple(range(n))
        if len(labels) != n:
            raise ValueError("label count must match corner count")
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.corners)

    def transformed(self, g: Isometry) -> Polygon:
        return Polygon(g.apply_all(self.corners), self.labels)

    def translated(self, v: Point2) -> Polygon:
        return Polygon(tuple(z + v for z in self.corners), self.labels)

    def reversed(self) -> Polygon:
        """Same point set traversed in the opposite order, labels riding along."""
        return Polygon(self.corners[::-1], self.labels[::-1])


def _corners(p) -> tuple[Point2, ...]:
    if isinstance(p, Polygon):
        return p.corners
    c = tuple(complex(z) for z in p)
    if len(c) < 3:
        raise ValueError("polygon needs at least 3 corners")
    return c


def signed_area(p) -> float:
    c = _corners(p)
    n = len(c)
    return 0.5 * sum(_cross(c[k], c[(k + 1) % n]) for k in range(n))


def corner_angle(p, k: int) -> float:
    """Interior angle at corner ``k`` of a simple polygon, in (0, 2pi)."""
    c = _corners(p)
    n = len(c)
    e_in = c[k % n] - c[(k - 1) % n]
    e_out = c[(k + 1) % n] - c[k % n]
    if abs(e_in) <= MERGE_TOL or abs(e_out) <= MERGE_TOL:
        raise DegenerateError(f"zero-length side at corner {k}")
    turn = math.atan2(_cross(e_in, e_out), _dot(e_in, e_out))
    if signed_area(c) >= 0.0:
        return math.pi - turn
    return math.pi + turn


def seg_point_dist(a: Point2, b: Point2, p: Point2) -> float:
    ab = b - a
    denom = _dot(ab, ab)
    t = 0.0 if denom == 0.0 else min(1.0, max(0.0, _dot(p - a, ab) / denom))
    return abs(a + t * ab - p)


def seg_seg_dist(a: Point2, b: Point2, c: Point2, d: Point2) -> float:
    d1 = _cross(b - a, c - a)
    d2 = _cross(b - a, d - a)
    d3 = _cross(d - c, a - c)
    d4 = _cross(d - c, b - c)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)):
        return 0.0
    return min(
        seg_point_dist(a, b, c),
        seg_point_dist(a, b, d),
        seg_point_dist(c, d, a),
        seg_point_dist(c, d, b),
    )


def first_violation(corners, tol: float = MERGE_TOL):
    """First simplicity violation of a corner loop, or None.

    Returns ("degenerate"|"touch"|"cross", i, j) where i, j are corner or
    side indices. Unlike :func:`is_simple` this never raises, so callers can
    treat degeneracy as plain rejection.
    """
    c = tuple(complex(z) for z in corners)
    n = len(c)
    for k in range(n):
        if abs(c[(k + 1) % n] - c[k]) <= tol:
            return ("degenerate", k, (k + 1) % n)
    for i in range(n):
        for j in range(i + 1, n):
            if j - i == 1 or (i == 0 and j == n - 1):
                s, t = (n - 1, 0) if (i == 0 and j == n - 1) else (i, j)
                # adjacent sides share corner t; only the far endpoints may
                # come near the other side
                if seg_point_dist(c[t], c[(t + 1) % n], c[s]) <= tol:
                    return ("touch", s, t)
                if seg_point_dist(c[s], c[(s + 1) % n], c[(t + 1) % n]) <= tol:
                    return ("touch", s, t)
            else:
                if seg_seg_dist(c[i], c[(i + 1) % n], c[j], c[(j + 1) % n]) <= tol:
                    return ("cross", i, j)
    return None


def is_simple(p, tol: float = MERGE_TOL) -> bool:
    """True iff no two non-adjacent sides come within ``tol`` and adjacent
    sides meet only at their shared corner."""
    c = _corners(p)
    violation = first_violation(c, tol)
    if violation is not None and violation[0] == "degenerate":
        raise DegenerateError(f"corners {violation[1]} and {violation[2]} coincide")
    return violation is None


@dataclass(frozen=True)
class Congruence:
    """Witness that corner k of one polygon maps to corner mapping[k] of another."""

    mapping: tuple[int, ...]
    isometry: Isometry


def congruent(a, b, tol: float = MERGE_TOL) -> Congruence | None:
    """Find an isometry (either orientation) carrying polygon a onto b.

    Corner k of a must land on corner mapping[k] of b, for some cyclic shift
    and direction. Returns None when no isometry matches within tol.
    """
    ca, cb = _corners(a), _corners(b)
    n = len(ca)
    if len(cb) != n:
        return None
    for reflect in (False, True):
        za = tuple(z.conjugate() for z in ca) if reflect else ca
        for direction in (1, -1):
            for shift in range(n):
                idx = tuple((shift + direction * k) % n for k in range(n))
                denom = za[1] - za[0]
                if abs(denom) <= tol:
                    continue
                mult = (cb[idx[1]] - cb[idx[0]]) / denom
                if abs(mult) == 0.0:
                    continue
                mult /= abs(mult)
                offset = cb[idx[0]] - mult * za[0]
                if all(
                    abs(mult * za[k] + offset - cb[idx[k]]) <= tol for k in range(n)
                ):
                    return Congruence(idx, Isometry(mult, offset, reflect))
    return None
