"""Tests for tiling validation: clustering, side matching, census identities."""

from __future__ import annotations

import warnings
from types import SimpleNamespace

import pytest

from hextorus.construct import (
    GenericityWarning,
    TorusTiling,
    central_minimal,
    strip_tiling,
    type_i_minimal,
    type_ii_minimal,
    type_iii_minimal,
)
from hextorus.geom import Polygon
from hextorus.validate import ToleranceAmbiguityError, census, validate

warnings.simplefilter("ignore", GenericityWarning)


def five_instances():
    return [
        type_i_minimal(0.6j, (0.2 + 0.2j, -0.15 + 0.25j)),
        type_ii_minimal(1.0, (0.35 + 0.05j, 0.12 + 0.15j)),
        type_iii_minimal(0.05 + 0.22j),
        central_minimal(1.4 + 0.5j, 0.2 + 0.8j, 0.6 + 0.4j),
        strip_tiling(1.2, 0.9, 0.15, (0.3 + 0.45j, 0.2 + 0.525j), "+-"),
    ]


def codes(report):
    return sorted({c for c, _ in report.failures})


class TestCensus:
    def test_three_tile_counts(self):
        c = census(type_iii_minimal(0.05 + 0.22j))
        assert (c.f, c.v, c.e, c.h) == (3, 6, 9, 0)
        assert c.v_k == {3: 6}
        assert c.h_l == {}
        assert c.identities_hold

    def test_two_tile_counts(self):
        c = census(type_i_minimal(0.6j, (0.2 + 0.2j, -0.15 + 0.25j)))
        assert (c.f, c.v, c.e, c.h) == (2, 4, 6, 0)
        assert c.identities_hold

    def test_four_tile_all_degree_three(self):
        c = census(type_ii_minimal(1.0, (0.35 + 0.05j, 0.12 + 0.15j)))
        assert (c.f, c.v, c.e, c.h) == (4, 8, 12, 0)
        assert c.v_k == {3: 8}

    def test_minimal_count_relations(self):
        for tiling in five_instances():
            c = census(tiling)
            assert c.v == 2 * c.f
            assert c.e == 3 * c.f
            assert c.h == 0

    def test_half_vertices_counted_but_identities_still_hold(self):
        # offset brick rows: every corner lands mid-side of a neighbor
        brick = Polygon((0j, 1 + 0j, 2 + 0j, 2 + 1j, 1 + 1j, 0 + 1j))
        c = census(SimpleNamespace(alpha=2 + 0j, beta=0.5 + 1j, tiles=(brick,)))
        assert (c.v, c.h, c.e, c.f) == (0, 4, 5, 1)
        assert c.h_l == {3: 2, 2: 2}
        assert c.identities_hold


class TestValidatePasses:
    def test_all_five_constructions(self):
        for tiling in five_instances():
            report = validate(tiling)
            assert report.passed, report.failures
            assert report.failures == ()

    def test_unimodular_rebasis_keeps_validity(self):
        base = type_i_minimal(0.6j, (0.2 + 0.2j, -0.15 + 0.25j))
        rebased = TorusTiling(base.alpha, base.alpha + base.beta, base.tiles)
        report = validate(rebased)
        assert report.passed
        assert report.census == census(base)

    def test_similarity_invariance(self):
        base = type_iii_minimal(0.05 + 0.22j)
        w, shift = 0.7 - 1.1j, 3.0 + 2.0j
        tiles = tuple(
            Polygon(tuple(w * c + shift for c in t.corners), t.labels)
            for t in base.tiles
        )
        moved = TorusTiling(w * base.alpha, w * base.beta, tiles)
        report = validate(moved)
        assert report.passed
        assert report.census == census(base)


class TestValidateFailures:
    def setup_method(self):
        base = type_i_minimal(0.6j, (0.2 + 0.2j, -0.15 + 0.25j))
        self.base = base
        self.t1, self.t2 = base.tiles

    def test_shifted_tile_reported_as_data(self):
        broken = SimpleNamespace(
            alpha=self.base.alpha,
            beta=self.base.beta,
            tiles=(self.t1, self.t2.translated(0.05 + 0.02j)),
        )
        report = validate(broken)
        assert not report.passed
        assert "unmatched-side" in codes(report)

    def test_translated_companion_leaves_unmatched_sides(self):
        broken = SimpleNamespace(
            alpha=self.base.alpha,
            beta=self.base.beta,
            tiles=(self.t1, self.t1.translated(0.5)),
        )
        report = validate(broken)
        assert not report.passed
        assert "unmatched-side" in codes(report)

    def test_half_vertex_failure(self):
        brick = Polygon((0j, 1 + 0j, 2 + 0j, 2 + 1j, 1 + 1j, 0 + 1j))
        report = validate(SimpleNamespace(alpha=2 + 0j, beta=0.5 + 1j, tiles=(brick,)))
        assert not report.passed
        assert "half-vertex" in codes(report)
        assert report.census.h == 4

    def test_square_tile_bad_side_count(self):
        square = Polygon((0j, 1 + 0j, 1 + 1j, 0 + 1j))
        report = validate(SimpleNamespace(alpha=1 + 0j, beta=1j, tiles=(square,)))
        assert not report.passed
        assert "bad-side-count" in codes(report)

    def test_self_crossing_tile_flagged(self):
        c = self.t1.corners
        crossed = Polygon((c[1], c[0]) + c[2:], self.t1.labels)
        report = validate(
            SimpleNamespace(alpha=self.base.alpha, beta=self.base.beta, tiles=(crossed, self.t2))
        )
        assert not report.passed
        assert "non-simple-tile" in codes(report)

    def test_wrong_lattice_area_mismatch(self):
        report = validate(
            SimpleNamespace(alpha=2 + 0j, beta=self.base.beta, tiles=self.base.tiles)
        )
        assert not report.passed
        assert "area-mismatch" in codes(report)

    def test_failures_are_data_not_exceptions(self):
        broken = SimpleNamespace(
            alpha=self.base.alpha,
            beta=self.base.beta,
            tiles=(self.t1, self.t1.translated(0.5)),
        )
        report = validate(broken)
        for code, detail in report.failures:
            assert isinstance(code, str) and isinstance(detail, str)

    def test_ambiguous_corner_distance_raises(self):
        pert = Polygon(
            tuple(c + (2e-9 if k == 0 else 0) for k, c in enumerate(self.t1.corners)),
            self.t1.labels,
        )
        with pytest.raises(ToleranceAmbiguityError):
            validate(
                SimpleNamespace(
                    alpha=self.base.alpha, beta=self.base.beta, tiles=(pert, self.t2)
                )
            )
