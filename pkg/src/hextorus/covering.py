"""Coverings of minimal tilings: build, test minimality, enumerate for a torus.

A finite-index sublattice in Hermite normal form (m, n; l) turns a tiling of
C/(Z*alpha + Z*beta) into one of C/(Z*m*alpha + Z*(l*alpha + n*beta)) with
m*n times as many tiles. Enumeration inverts this: given a target torus and a
tile count, list the sublattice triples whose minimal tiling exists.
"""

from __future__ import annotations

from .construct import OMEGA3, TorusTiling
from .lattice import (
    HnfTriple,
    IntBasis,
    check_modulus,
    covering_modulus,
    enumerate_hnf,
    hnf_of_basis,
    lattices_isometric,
    rectangular_solve,
)

MINIMAL_TILE_COUNT = {"i": 2, "ii": 4, "iii": 3, "cs": 1}


def build_cover(t: TorusTiling, h: HnfTriple) -> TorusTiling:
    """Covering tiling of t along the sublattice (m, n; l)."""
    if not isinstance(h, HnfTriple):
        h = HnfTriple(*h)
    tiles = []
    for k in range(h.m):
        for j in range(h.n):
            shift = k * t.alpha + j * t.beta
            tiles.extend(tile.translated(shift) for tile in t.tiles)
    return TorusTiling(
        h.m * t.alpha,
        h.l * t.alpha + h.n * t.beta,
        tuple(tiles),
        {"kind": "cover", "triple": (h.m, h.n, h.l), "source": dict(t.provenance)},
    )


def _cross(a: complex, b: complex) -> float:
    return a.real * b.imag - a.imag * b.real


def _quotient_dist(d: complex, alpha: complex, beta: complex) -> float:
    """Distance from d to the nearest lattice point (for near-zero tests)."""
    det = _cross(alpha, beta)
    x = _cross(d, beta) / det
    y = _cross(alpha, d) / det
    x -= round(x)
    y -= round(y)
    return abs(x * alpha + y * beta)


def _maps_tiles_to_tiles(t: TorusTiling, delta: complex, tol: float) -> bool:
    """Does translation by delta permute the tile set modulo the lattice?"""
    for tile in t.tiles:
        shifted = tuple(z + delta for z in tile.corners)
        n = len(shifted)
        hit = False
        for other in t.tiles:
            if len(other.corners) != n:
                continue
            for start in range(n):
                if all(
                    _quotient_dist(
                        shifted[k] - other.corners[(start + k) % n],
                        t.alpha,
                        t.beta,
                    )
                    <= tol
                    for k in range(n)
                ):
                    hit = True
                    break
            if hit:
                break
        if not hit:
            return False
    return True


def is_minimal(t: TorusTiling, tol: float = 1e-9) -> bool:
    """True iff no translation outside the lattice preserves the tile set.

    Any such translation must send tile 0 to some tile j, so the centroid
    differences are a complete candidate list.
    """
    centroids = [
        sum(tile.corners) / len(tile.corners) for tile in t.tiles
    ]
    for j in range(1, len(t.tiles)):
        delta = centroids[j] - centroids[0]
        if _quotient_dist(delta, t.alpha, t.beta) <= tol:
            continue  # lattice translation, not a proper symmetry
        if _maps_tiles_to_tiles(t, delta, tol):
            return False
    return True


def _rotated_triple(h: HnfTriple) -> HnfTriple:
    # multiply the sublattice of Z + Z*omega3 by omega3; with
    # omega3^2 = -1 - omega3 the coordinates map (x, y) -> (-y, x - y)
    return hnf_of_basis(IntBasis(0, h.m, -h.n, h.l - h.n))


def _rotation_orbit_min(h: HnfTriple) -> HnfTriple:
    a = _rotated_triple(h)
    b = _rotated_triple(a)
    return min(h, a, b, key=lambda x: (x.m, x.n, x.l))


def enumerate_coverings(
    kind: str, target: complex, tile_count: int, bound: int = 64
) -> list[tuple[HnfTriple, complex]]:
    """All (sublattice triple, minimal modulus) giving the target torus.

    kind selects the construction family: "i", "ii", "iii", or "cs". The tile
    count must be a multiple of the family's minimal tile count (2, 4, 3, 1).
    Families i and cs admit every triple (the minimal modulus is free); ii
    keeps triples where a rectangular minimal modulus exists up to the search
    bound; iii fixes the hexagonal lattice, so triples are canonicalized over
    its rotation symmetry and kept when the covering is isometric to the
    target.
    """
    key = str(kind).strip().lower()
    if key not in MINIMAL_TILE_COUNT:
        raise ValueError(f"kind must be one of {sorted(MINIMAL_TILE_COUNT)}")
    target = check_modulus(target)
    f0 = MINIMAL_TILE_COUNT[key]
    tile_count = int(tile_count)
    if tile_count < 1 or tile_count % f0 != 0:
        raise ValueError(
            f"tile count {tile_count} is not a positive multiple of {f0}"
        )
    index = tile_count // f0
    results: list[tuple[HnfTriple, complex]] = []
    for h in enumerate_hnf(index):
        if key in ("i", "cs"):
            results.append((h, (h.m * target - h.l) / h.n))
        elif key == "ii":
            x = rectangular_solve(target, h, bound)
            if x is not None:
                results.append((h, x))
        else:
            if h != _rotation_orbit_min(h):
                continue
            if lattices_isometric(covering_modulus(OMEGA3, h), target):
                results.append((h, OMEGA3))
    return results
