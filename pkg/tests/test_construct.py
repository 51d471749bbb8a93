"""Tests for the five tiling constructors and planar patch expansion."""

from __future__ import annotations

import cmath
import math

import pytest

from hextorus.construct import (
    B_POINT,
    G_PRIME,
    GenericityWarning,
    ModuliViolation,
    OMEGA3,
    PlanarPatch,
    R_POINT,
    ROT120,
    TorusTiling,
    central_minimal,
    planar_patch,
    strip_tiling,
    type_i_minimal,
    type_ii_minimal,
    type_iii_minimal,
)
from hextorus.geom import Isometry, congruent, rotation, signed_area
from hextorus.hexagon import classify, spec_from_polygon

# documented concave hexagon, equal to four times the first tile of the
# quarter-scale two-tile instance below
DOC_HEX = (1 + 2j, -0.2 + 0.8j, 0j, 1 - 0.2j, 2.8 + 1j, 2 + 1.8j)


def corners_match(a, b, tol=1e-9):
    """Greedy unordered matching of two corner collections."""
    remaining = list(b)
    for z in a:
        for k, w in enumerate(remaining):
            if abs(z - w) <= tol:
                del remaining[k]
                break
        else:
            return False
    return not remaining


def tile_in_set_mod_lattice(corners, tiles, alpha, beta, tol=1e-9):
    for k in range(-2, 3):
        for j in range(-2, 3):
            shifted = [c + k * alpha + j * beta for c in corners]
            if any(corners_match(shifted, t.corners, tol) for t in tiles):
                return True
    return False


def total_area(tiles):
    return sum(abs(signed_area(t)) for t in tiles)


class TestTypeI:
    def test_quarter_scale_doc_hexagon(self):
        tiling = type_i_minimal((1 + 2j) / 4, (0.95 + 0.2j, 0.7 + 0.25j))
        assert len(tiling.tiles) == 2
        for got, expect in zip(tiling.tiles[0].corners, DOC_HEX):
            assert abs(got - expect / 4) <= 1e-12
        assert tiling.tiles[0].labels == (0, 1, 2, 3, 4, 5)

    def test_companion_is_half_turn_image(self):
        i = 0.95 + 0.2j
        tiling = type_i_minimal((1 + 2j) / 4, (i, 0.7 + 0.25j))
        half_turn = rotation(math.pi, i / 2)
        image = [half_turn(c) for c in tiling.tiles[0].corners]
        assert corners_match(image, tiling.tiles[1].corners, 1e-12)

    def test_zero_length_sigma_raises(self):
        with pytest.raises(ModuliViolation):
            type_i_minimal(0.6j, (0.2 + 0.2j, 0.2 + 0.2j))

    def test_sides_two_and_five_equal_exactly(self):
        tiling = type_i_minimal(0.6j, (0.2 + 0.2j, -0.15 + 0.25j))
        spec = spec_from_polygon(tiling.tiles[0])
        assert spec.lengths[2] == spec.lengths[5]
        assert classify(spec).type_i

    def test_fills_fundamental_domain(self):
        tau = 0.6j
        tiling = type_i_minimal(tau, (0.2 + 0.2j, -0.15 + 0.25j))
        assert tiling.modulus == tau
        assert abs(total_area(tiling.tiles) - tiling.covolume) <= 1e-12

    def test_lower_half_plane_tau_rejected(self):
        with pytest.raises(ValueError):
            type_i_minimal(-0.6j, (0.2 + 0.2j, -0.15 + 0.25j))

    def test_self_crossing_sigma_raises(self):
        with pytest.raises(ModuliViolation) as info:
            type_i_minimal(0.6j, (0.2 + 0.2j, 1.6 + 0.25j))
        assert info.value.kind in ("cross", "touch", "degenerate")


class TestTypeII:
    def test_four_tiles_on_rectangular_torus(self):
        tiling = type_ii_minimal(1.0, (0.35 + 0.05j, 0.12 + 0.15j))
        assert len(tiling.tiles) == 4
        assert tiling.alpha == 1
        assert tiling.beta == 1j
        assert classify(spec_from_polygon(tiling.tiles[0])).type_ii

    def test_glide_permutes_tile_set_mod_lattice(self):
        y = 1.0
        tiling = type_ii_minimal(y, (0.35 + 0.05j, 0.12 + 0.15j))
        gamma = Isometry(-1.0 + 0j, 0.5 + 0.5j * y, True)
        for tile in tiling.tiles:
            image = [gamma(c) for c in tile.corners]
            assert tile_in_set_mod_lattice(
                image, tiling.tiles, tiling.alpha, tiling.beta
            )

    def test_orientation_census_of_congruences(self):
        tiling = type_ii_minimal(1.0, (0.35 + 0.05j, 0.12 + 0.15j))
        first = tiling.tiles[0]
        orientations = []
        for other in tiling.tiles[1:]:
            match = congruent(first, other)
            assert match is not None
            orientations.append(match.isometry.orientation)
        assert sorted(orientations) == [-1, -1, 1]

    def test_scaled_drawing_instance(self):
        y = 2.0 / 3.0
        i = complex(2.6 / 6, 0.4 / 4 * y)
        t = complex(1.0 / 6, 0.8 / 4 * y)
        tiling = type_ii_minimal(y, (i, t))
        assert len(tiling.tiles) == 4
        assert abs(total_area(tiling.tiles) - y) <= 1e-12

    def test_sigma_through_rotation_center_raises(self):
        with pytest.raises(ModuliViolation):
            type_ii_minimal(1.0, (-0.12 - 0.15j, 0.12 + 0.15j))

    def test_nonpositive_y_rejected(self):
        with pytest.raises(ValueError):
            type_ii_minimal(0.0, (0.35 + 0.05j, 0.12 + 0.15j))


class TestTypeIII:
    def test_origin_gives_regular_hexagon(self):
        tiling = type_iii_minimal(0j)
        spec = spec_from_polygon(tiling.tiles[0])
        for length in spec.lengths:
            assert abs(length - 1.0 / 3.0) <= 1e-12
        for angle in spec.angles:
            assert abs(angle - 2.0 * math.pi / 3.0) <= 1e-12

    def test_anchor_corners(self):
        P = -0.2 + 0.1j
        tile = type_iii_minimal(P).tiles[0]

        def corner(label):
            return tile.corners[tile.labels.index(label)]

        assert corner(0) == P
        assert corner(1) == R_POINT
        assert corner(3) == G_PRIME
        assert corner(5) == B_POINT
        assert corner(2) == R_POINT + ROT120 * (P - R_POINT)
        assert corner(4) == B_POINT + ROT120.conjugate() * (P - B_POINT)

    def test_p_at_far_corner_raises(self):
        with pytest.raises(ModuliViolation):
            type_iii_minimal(G_PRIME)

    def test_concave_point_valid(self):
        tiling = type_iii_minimal(-0.2 + 0.1j)
        assert len(tiling.tiles) == 3
        assert tiling.modulus == OMEGA3
        spec = spec_from_polygon(tiling.tiles[0])
        assert any(a > math.pi for a in spec.angles)

    def test_tiles_pairwise_congruent_by_rotation(self):
        tiling = type_iii_minimal(-0.2 + 0.1j)
        third_turn = cmath.exp(2j * math.pi / 3)
        for other in tiling.tiles[1:]:
            match = congruent(tiling.tiles[0], other)
            assert match is not None
            assert match.isometry.orientation == 1
            mult = match.isometry.mult
            assert min(abs(mult - third_turn), abs(mult - third_turn.conjugate())) <= 1e-9


class TestCentral:
    def test_documented_hexagon_is_centrally_symmetric(self):
        tiling = central_minimal(1.4 + 0.5j, 0.2 + 0.8j, 0.6 + 0.4j)
        assert len(tiling.tiles) == 1
        corners = tiling.tiles[0].corners
        for k in range(3):
            assert corners[k + 3] == -corners[k]

    def test_half_alpha_raises(self):
        with pytest.raises(ModuliViolation):
            central_minimal(1.4 + 0.5j, 0.2 + 0.8j, (1.4 + 0.5j) / 2)

    def test_unit_square_instance(self):
        tiling = central_minimal(1, 1j, 0.3 + 0.2j)
        assert abs(total_area(tiling.tiles) - 1.0) <= 1e-12
        report = classify(spec_from_polygon(tiling.tiles[0]))
        assert report.central

    def test_wrong_generator_order_rejected(self):
        with pytest.raises(ValueError):
            central_minimal(1j, 1, 0.3 + 0.2j)

    def test_bisector_midpoint_warns_nongeneric(self):
        with pytest.warns(GenericityWarning):
            central_minimal(1, 1j, 0.25 + 0.25j)


class TestStrip:
    SIGMA = (0.3 + 0.45j, 0.2 + 0.525j)  # satisfies Im(2t - i) = h/2 for h=1.2

    def test_single_plus_is_two_tiles(self):
        tiling = strip_tiling(1.2, 0.9, 0.15, self.SIGMA, "+")
        assert isinstance(tiling, TorusTiling)
        assert len(tiling.tiles) == 2
        assert tiling.alpha == complex(0.9, 0.15)
        assert tiling.beta == 1.2j

    def test_three_plus_one_minus(self):
        tiling = strip_tiling(1.2, 0.9, 0.15, self.SIGMA, "+++-")
        assert len(tiling.tiles) == 8
        assert tiling.alpha == complex(4 * 0.9, 2 * 0.15)

    def test_balanced_word_gives_rectangle(self):
        tiling = strip_tiling(1.2, 0.9, 0.15, self.SIGMA, "++--")
        assert len(tiling.tiles) == 8
        assert tiling.alpha == complex(4 * 0.9, 0.0)
        assert tiling.beta == 1.2j
        assert abs(total_area(tiling.tiles) - tiling.covolume) <= 1e-9

    def test_signs_as_integer_sequence(self):
        a = strip_tiling(1.2, 0.9, 0.15, self.SIGMA, [1, -1])
        b = strip_tiling(1.2, 0.9, 0.15, self.SIGMA, "+-")
        assert a.provenance["signs"] == "+-" == b.provenance["signs"]
        assert len(a.tiles) == len(b.tiles)

    def test_empty_signs_raises(self):
        with pytest.raises(ValueError):
            strip_tiling(1.2, 0.9, 0.15, self.SIGMA, "")

    def test_bad_sign_character_raises(self):
        with pytest.raises(ValueError):
            strip_tiling(1.2, 0.9, 0.15, self.SIGMA, "+x")

    def test_bad_mode_raises(self):
        with pytest.raises(ValueError):
            strip_tiling(1.2, 0.9, 0.15, self.SIGMA, "+", mode="ring")

    def test_unbalanced_boundary_sides_raise(self):
        with pytest.raises(ModuliViolation):
            strip_tiling(1.2, 0.9, 0.15, (0.3 + 0.45j, 0.2 + 0.4j), "+")

    def test_patch_mode_lays_out_word_literally(self):
        patch = strip_tiling(1.2, 0.9, 0.15, self.SIGMA, "++--", mode="patch")
        assert isinstance(patch, PlanarPatch)
        assert len(patch.tiles) == 4 * 2 * 3


class TestPlanarPatch:
    def test_three_tile_patch_count(self):
        patch = planar_patch(type_iii_minimal(0j), 1)
        assert len(patch.tiles) == 27

    def test_two_tile_patch_count(self):
        tiling = type_i_minimal((1 + 2j) / 4, (0.95 + 0.2j, 0.7 + 0.25j))
        assert len(planar_patch(tiling, 2).tiles) == 50

    def test_single_tile_patch_count(self):
        tiling = central_minimal(1.4 + 0.5j, 0.2 + 0.8j, 0.6 + 0.4j)
        assert len(planar_patch(tiling, 3).tiles) == 49

    def test_interior_vertices_have_degree_three(self):
        patch = planar_patch(type_iii_minimal(0j), 1)
        counts: dict[tuple[float, float], int] = {}
        for tile in patch.tiles:
            for c in tile.corners:
                key = (round(c.real, 9), round(c.imag, 9))
                counts[key] = counts.get(key, 0) + 1
        assert max(counts.values()) == 3
        assert sum(1 for v in counts.values() if v == 3) > 10

    def test_zero_extent_rejected(self):
        with pytest.raises(ValueError):
            planar_patch(type_iii_minimal(0j), 0)


class TestAreaAccounting:
    def test_all_five_constructors_fill_their_domain(self):
        cases = [
            type_i_minimal(0.6j, (0.2 + 0.2j, -0.15 + 0.25j)),
            type_ii_minimal(1.0, (0.35 + 0.05j, 0.12 + 0.15j)),
            type_iii_minimal(0.05 + 0.22j),
            central_minimal(1.4 + 0.5j, 0.2 + 0.8j, 0.6 + 0.4j),
            strip_tiling(1.2, 0.9, 0.15, TestStrip.SIGMA, "+-"),
        ]
        for tiling in cases:
            assert abs(total_area(tiling.tiles) - tiling.covolume) <= 1e-9 * tiling.covolume
