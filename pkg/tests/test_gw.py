import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dpcount.gw import (
    GWEngine,
    InconsistentRelationError,
    WDVVRelation,
    divisor_pool,
)
from dpcount.lattice import DivisorClass, SurfaceModel, canonical_form, delta
from oracles import plane_count


def P(d):
    return DivisorClass(d, ())


class TestSeeds:
    def test_exceptional_curve(self, engine):
        assert engine.seed_value(SurfaceModel(5).exceptional(2)) == 1

    def test_line(self, engine):
        assert engine.seed_value(P(1)) == 1

    def test_line_through_blown_up_point(self, engine):
        assert engine.seed_value(DivisorClass(1, (1, 0, 0))) == 1

    def test_anticanonical_pencil_on_k8(self, engine):
        assert engine.seed_value(DivisorClass(3, (1,) * 8)) == 12
        assert engine.seed_value(DivisorClass(3, (1,) * 7)) is None

    def test_absent_for_generic_class(self, engine):
        assert engine.seed_value(P(2)) is None


class TestQuickVanishing:
    def test_degree_zero_non_exceptional(self, engine):
        assert engine.quick_vanishing(DivisorClass(0, (-1, -1)))

    def test_multiplicity_exceeds_degree(self, engine):
        assert engine.quick_vanishing(DivisorClass(1, (2,)))

    def test_negative_genus(self, engine):
        assert engine.quick_vanishing(DivisorClass(2, (2, 1)))

    def test_survivors(self, engine):
        assert not engine.quick_vanishing(P(1))
        assert not engine.quick_vanishing(DivisorClass(0, (0, -1)))
        assert not engine.quick_vanishing(DivisorClass(2, (1, 1, 1, 1)))


class TestSplittings:
    def test_plane_conic(self, engine):
        assert engine.splittings(P(2)) == ((P(1), P(1)),)

    def test_plane_cubic(self, engine):
        assert engine.splittings(P(3)) == ((P(1), P(2)), (P(2), P(1)))

    def test_line_through_one_point_on_two_blowups(self, engine):
        beta = DivisorClass(1, (1, 0))
        e2 = DivisorClass(0, (0, -1))
        rest = DivisorClass(1, (1, 1))
        assert set(engine.splittings(beta)) == {(e2, rest), (rest, e2)}

    def test_parts_sum_and_survive(self, engine):
        beta = DivisorClass(4, (2, 1, 1))
        for b1, b2 in engine.splittings(beta):
            assert b1 + b2 == beta
            assert not b1.is_zero() and not b2.is_zero()
            assert not engine.quick_vanishing(b1)
            assert not engine.quick_vanishing(b2)


class TestRelationR1:
    def test_conic(self, engine):
        rel = engine.relation_r1(P(2), P(1), P(1))
        assert (rel.lhs_coeff, rel.rhs) == (1, 1)

    def test_nodal_cubics(self, engine):
        assert engine.relation_r1(P(3), P(1), P(1)).rhs == 12

    def test_quartics(self, engine):
        assert engine.relation_r1(P(4), P(1), P(1)).rhs == 620

    def test_precondition(self, engine):
        with pytest.raises(ValueError):
            engine.relation_r1(P(1), P(1), P(1))


class TestRelationR2:
    def test_conic_through_three_assigned_points(self, engine):
        surface = SurfaceModel(3)
        rel = engine.relation_r2(
            DivisorClass(2, (1, 1, 1)), surface.line(), surface.line(), surface.exceptional(0)
        )
        assert (rel.lhs_coeff, rel.rhs) == (1, 1)

    def test_degenerate_for_proportional_divisors(self, engine):
        assert engine.r2_coefficient(P(1), P(1), P(1), P(1)) == 0

    def test_coefficient_arithmetic(self, engine):
        surface = SurfaceModel(1)
        lhs = engine.r2_coefficient(
            DivisorClass(2, (1,)), surface.line(), surface.line(), surface.exceptional(0)
        )
        assert lhs == 1

    def test_precondition(self, engine):
        with pytest.raises(ValueError):
            engine.relation_r2(DivisorClass(1, (1, 0)), P2_L, P2_L, P2_L)


P2_L = DivisorClass(1, (0, 0))


class TestRelationR3:
    def test_line_through_assigned_point(self, engine):
        surface = SurfaceModel(2)
        rel = engine.relation_r3(
            DivisorClass(1, (1, 0)),
            surface.exceptional(0),
            surface.exceptional(1),
            surface.line(),
            surface.line() - surface.exceptional(1),
        )
        assert (rel.lhs_coeff, rel.rhs) == (-1, -1)

    def test_degenerate_on_k1_line_class(self, engine):
        surface = SurfaceModel(1)
        basis = (surface.line(), surface.exceptional(0))
        beta = surface.line() - surface.exceptional(0)
        for a in basis:
            for b in basis:
                for c in basis:
                    for d in basis:
                        assert engine.r3_coefficient(beta, a, b, c, d) == 0

    def test_degenerate_for_proportional_divisors(self, engine):
        assert engine.r3_coefficient(P(2), P(1), P(1), P(1), P(1)) == 0


class TestNBeta:
    def test_plane_sequence_matches_classical_recursion(self, engine):
        for d in range(1, 8):
            assert engine.n_beta(P(d)) == plane_count(d)

    def test_cubics_through_blown_up_point(self, engine):
        assert engine.n_beta(DivisorClass(3, (1,))) == 12

    def test_conic_through_assigned_points(self, engine):
        assert engine.n_beta(DivisorClass(2, (1, 1, 1, 1))) == 1

    def test_specialization_identity(self, engine):
        for d in range(1, 6):
            expected = engine.n_beta(P(d))
            for k in range(1, 5):
                for r in range(0, min(k, 3 * d - 2) + 1):
                    m = (1,) * r + (0,) * (k - r)
                    assert engine.n_beta(DivisorClass(d, m)) == expected

    def test_vanishing_class(self, engine):
        assert engine.n_beta(DivisorClass(2, (2, 1))) == 0

    @given(
        st.integers(1, 5),
        st.lists(st.integers(0, 3), min_size=0, max_size=4),
        st.randoms(use_true_random=False),
    )
    @settings(max_examples=60, deadline=None)
    def test_permutation_invariance(self, d, m, rng):
        engine = _shared_engine
        beta = DivisorClass(d, tuple(m))
        shuffled = list(m)
        rng.shuffle(shuffled)
        assert engine.n_beta(beta) == engine.n_beta(DivisorClass(d, tuple(shuffled)))

    def test_nonnegative_on_random_sweep(self, engine):
        rng = random.Random(7)
        for _ in range(100):
            k = rng.randint(0, 4)
            d = rng.randint(1, 5)
            beta = DivisorClass(d, tuple(rng.randint(0, d) for _ in range(k)))
            assert engine.n_beta(beta) >= 0


_shared_engine = GWEngine()


class TestRelationSolve:
    def test_exact_division(self):
        assert WDVVRelation("R1", (), 3, 12).solve() == 4

    def test_inexact_division_raises(self):
        with pytest.raises(InconsistentRelationError):
            WDVVRelation("R1", (), 3, 13).solve()

    def test_degenerate_raises(self):
        with pytest.raises(ValueError):
            WDVVRelation("R1", (), 0, 5).solve()


class TestConsistencyCheck:
    def test_plane_quartic_single_relation(self, engine):
        report = engine.consistency_check(P(4), pool_size=1)
        assert report.value == 620
        assert report.consistent
        assert all(r.implied_value == 620 for r in report.relations)
        assert len(report.relations) == 1

    def test_line_through_point_k2_full_pool(self, engine):
        report = engine.consistency_check(DivisorClass(1, (1, 0)))
        assert report.value == 1
        assert report.consistent
        assert report.relations  # at least one nondegenerate relation exists

    def test_seeded_class_with_degenerate_pool(self, engine):
        report = engine.consistency_check(DivisorClass(1, (1,)), pool_size=2)
        assert report.value == 1
        assert "seed = 1" in report.note


class TestDivisorPool:
    def test_deterministic_and_complete(self):
        pool = divisor_pool(2)
        assert pool[0] == DivisorClass(1, (0, 0))
        assert len(pool) == 1 + 2 + 1 + 2 + 1
        assert divisor_pool(2) == pool


class TestCache:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "cache.tsv"
        writer = GWEngine()
        value = writer.n_beta(P(5))
        writer.save_cache(path)

        reader = GWEngine()
        assert reader.load_cache(path) == []
        assert reader._memo[canonical_form(P(5))] == value

    def test_missing_file_is_fine(self, tmp_path):
        assert GWEngine().load_cache(tmp_path / "absent.tsv") == []

    def test_corrupted_lines_skipped_and_reported(self, tmp_path):
        path = tmp_path / "cache.tsv"
        path.write_text(
            "v1\t0\t2;\t1\n"
            "v0\t0\t3;\t12\n"          # wrong version
            "v1\t1\t3;\t12\n"          # k column disagrees with literal
            "v1\t2\t4;1,2\t1\n"        # m not canonical
            "v1\t0\t5;\t-3\n"          # negative count
            "garbage\n"
        )
        eng = GWEngine()
        problems = eng.load_cache(path)
        assert len(problems) == 5
        assert eng._memo == {P(2): 1}

    def test_atomic_write_leaves_no_temp_files(self, tmp_path):
        path = tmp_path / "cache.tsv"
        eng = GWEngine()
        eng.n_beta(P(3))
        eng.save_cache(path)
        assert [p.name for p in tmp_path.iterdir()] == ["cache.tsv"]
