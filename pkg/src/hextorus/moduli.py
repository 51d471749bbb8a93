"""Moduli spaces of the minimal tilings: membership, sampling, components.

A free parameter is admissible exactly when the corresponding constructor
succeeds, i.e. its hexagon is simple. Membership is evaluated through a
vectorized twin of the constructors' corner formulas (the hexagon corners are
affine in the free parameter), so whole grids sample fast; agreement with the
scalar constructors is a tested property.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .construct import B_POINT, G_PRIME, OMEGA3, R_POINT, ROT120
from .geom import MERGE_TOL
from .lattice import check_modulus

KINDS = ("i", "ii", "iii", "cs")

_NON_ADJACENT = (
    (0, 2), (0, 3), (0, 4), (1, 3), (1, 4), (1, 5), (2, 4), (2, 5), (3, 5),
)


@dataclass(frozen=True)
class RegionGrid:
    """Boolean occupancy sampled over an axis-aligned box.

    bits[k, j] is the membership at the center of cell (j, k); row 0 is the
    bottom of the box (smallest y).
    """

    bbox: tuple[float, float, float, float]  # (xmin, xmax, ymin, ymax)
    nx: int
    ny: int
    bits: np.ndarray

    def __post_init__(self) -> None:
        xmin, xmax, ymin, ymax = (float(v) for v in self.bbox)
        object.__setattr__(self, "bbox", (xmin, xmax, ymin, ymax))
        if not (xmax > xmin and ymax > ymin):
            raise ValueError(f"degenerate bbox {self.bbox}")
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid resolution must be at least 2x2")
        bits = np.asarray(self.bits, dtype=bool)
        if bits.shape != (self.ny, self.nx):
            raise ValueError(f"bits shape {bits.shape} != (ny, nx)")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    def cell_centers(self) -> np.ndarray:
        """Complex coordinates of all cell centers, shape (ny, nx)."""
        xmin, xmax, ymin, ymax = self.bbox
        xs = xmin + (np.arange(self.nx) + 0.5) * (xmax - xmin) / self.nx
        ys = ymin + (np.arange(self.ny) + 0.5) * (ymax - ymin) / self.ny
        return xs[None, :] + 1j * ys[:, None]


def _normalize_fixed(kind: str, fixed):
    key = str(kind).strip().lower()
    if key not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    if key == "i":
        tau, i = fixed
        return key, (check_modulus(tau), complex(i))
    if key == "ii":
        y, i = fixed
        y = float(y)
        if not (math.isfinite(y) and y > 0):
            raise ValueError(f"y must be positive, got {y}")
        return key, (y, complex(i))
    if key == "iii":
        if fixed not in (None, (), []):
            raise ValueError("type iii has no fixed parameters")
        return key, ()
    alpha, beta = fixed
    alpha, beta = complex(alpha), complex(beta)
    if alpha.real * beta.imag - alpha.imag * beta.real <= 0:
        raise ValueError("lattice generators must satisfy Im(beta/alpha) > 0")
    return key, (alpha, beta)


def _corner_grids(key: str, fixed, free: np.ndarray) -> list[np.ndarray]:
    """The six hexagon corners as arrays over the free parameter."""
    T = np.asarray(free, dtype=complex)
    ones = np.ones_like(T)
    if key == "i":
        tau, i = fixed
        return [tau * ones, (i - 1.0) * ones, 0.0 * ones, i - T, T, i - T + tau]
    if key == "ii":
        y, i = fixed
        gamma_inv_i = 0.5 - i.conjugate() - 0.5j * y
        return [
            T,
            -T,
            gamma_inv_i * ones,
            0.5 - np.conj(T) - 0.5j * y,
            (1.0 - i) * ones,
            i * ones,
        ]
    if key == "iii":
        return [
            T,
            R_POINT * ones,
            R_POINT + ROT120 * (T - R_POINT),
            G_PRIME * ones,
            B_POINT + ROT120.conjugate() * (T - B_POINT),
            B_POINT * ones,
        ]
    alpha, beta = fixed
    return [T, beta - T, T - alpha, -T, T - beta, alpha - T]


def _cross_arr(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return u.real * v.imag - u.imag * v.real


def _point_seg_dist_arr(a, b, p) -> np.ndarray:
    ab = b - a
    denom = ab.real**2 + ab.imag**2
    t = ((p - a).real * ab.real + (p - a).imag * ab.imag)
    t = np.clip(t / np.where(denom == 0.0, 1.0, denom), 0.0, 1.0)
    return np.abs(a + t * ab - p)


def _seg_seg_dist_arr(a, b, c, d) -> np.ndarray:
    d1 = _cross_arr(b - a, c - a)
    d2 = _cross_arr(b - a, d - a)
    d3 = _cross_arr(d - c, a - c)
    d4 = _cross_arr(d - c, b - c)
    crossing = ((d1 > 0) != (d2 > 0)) & ((d3 > 0) != (d4 > 0))
    m = np.minimum(
        np.minimum(_point_seg_dist_arr(a, b, c), _point_seg_dist_arr(a, b, d)),
        np.minimum(_point_seg_dist_arr(c, d, a), _point_seg_dist_arr(c, d, b)),
    )
    return np.where(crossing, 0.0, m)


def _simple_mask(corners: list[np.ndarray], tol: float) -> np.ndarray:
    """Vectorized twin of geom.first_violation: True where the hexagon is simple."""
    ok = np.ones(corners[0].shape, dtype=bool)
    for k in range(6):
        ok &= np.abs(corners[(k + 1) % 6] - corners[k]) > tol
    for i, j in _NON_ADJACENT:
        ok &= (
            _seg_seg_dist_arr(
                corners[i], corners[(i + 1) % 6], corners[j], corners[(j + 1) % 6]
            )
            > tol
        )
    for s in range(6):
        t = (s + 1) % 6
        ok &= _point_seg_dist_arr(corners[t], corners[(t + 1) % 6], corners[s]) > tol
        ok &= _point_seg_dist_arr(corners[s], corners[t], corners[(t + 1) % 6]) > tol
    return ok


def membership_mask(kind: str, fixed, free, tol: float = MERGE_TOL) -> np.ndarray:
    """Vectorized membership over an array of free parameters."""
    key, fixed = _normalize_fixed(kind, fixed)
    free = np.asarray(free, dtype=complex)
    return _simple_mask(_corner_grids(key, fixed, free), tol)


def membership(kind: str, fixed, free: complex, tol: float = MERGE_TOL) -> bool:
    """True iff the constructor of the given kind succeeds at this parameter."""
    return bool(membership_mask(kind, fixed, np.array([complex(free)]), tol)[0])


def _default_bbox(key: str, fixed) -> tuple[float, float, float, float]:
    if key == "i":
        g1, g2 = 1.0 + 0j, fixed[0]
    elif key == "ii":
        g1, g2 = 1.0 + 0j, 1j * fixed[0]
    elif key == "iii":
        g1, g2 = 1.0 + 0j, OMEGA3
    else:
        g1, g2 = fixed
    xs = [0.0, g1.real, g2.real, (g1 + g2).real]
    ys = [0.0, g1.imag, g2.imag, (g1 + g2).imag]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    w, h = x1 - x0, y1 - y0
    return (x0 - 1.5 * w, x1 + 1.5 * w, y0 - 1.5 * h, y1 + 1.5 * h)


def sample_region(
    kind: str,
    fixed,
    bbox: tuple[float, float, float, float] | None = None,
    nx: int = 512,
    ny: int = 512,
    tol: float = MERGE_TOL,
) -> RegionGrid:
    """Sample membership at every cell center of a grid."""
    key, norm = _normalize_fixed(kind, fixed)
    if bbox is None:
        bbox = _default_bbox(key, norm)
    grid = RegionGrid(tuple(bbox), int(nx), int(ny), np.zeros((ny, nx), dtype=bool))
    bits = _simple_mask(_corner_grids(key, norm, grid.cell_centers()), tol)
    return RegionGrid(grid.bbox, grid.nx, grid.ny, bits)


def connected_components(g: RegionGrid) -> tuple[int, np.ndarray]:
    """4-connectivity component count and per-cell labels of the true cells."""
    labels, count = ndimage.label(g.bits)
    return int(count), labels


@dataclass(frozen=True)
class Arc:
    """Circular arc sampled as a polyline."""

    center: complex
    radius: float
    theta0: float
    theta1: float
    points: tuple[complex, ...]


def type_iii_boundary(samples: int) -> list[Arc]:
    """Three boundary arcs of the type iii moduli region.

    The primary arc runs from G' to R on the circle centered at B; the other
    two are its rotations by +-120 degrees about the origin. Every P on the
    primary arc sees the chord G'R under the inscribed angle 5pi/6.
    """
    samples = int(samples)
    if samples < 2:
        raise ValueError("need at least 2 samples per arc")
    radius = abs(R_POINT - B_POINT)
    arcs = []
    for k in range(3):
        rot = cmath.exp(2j * math.pi * k / 3.0)
        center = rot * B_POINT
        theta0 = math.pi / 6.0 + 2.0 * math.pi * k / 3.0
        theta1 = math.pi / 2.0 + 2.0 * math.pi * k / 3.0
        thetas = np.linspace(theta0, theta1, samples)
        points = tuple(center + radius * cmath.exp(1j * th) for th in thetas)
        arcs.append(Arc(center, radius, theta0, theta1, points))
    return arcs
