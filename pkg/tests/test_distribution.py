import math
from dataclasses import replace

import numpy as np
import pytest

from weilsf.anglerank import angle_rank_numeric
from weilsf.classify import classify
from weilsf.distribution import (EmbeddingMissing, PrecisionLoss,
                                 empirical_moments, exact_moments, histogram,
                                 moment_report, trace_sequence)
from weilsf.polyarith import base_change
from weilsf.weilpoly import parse_label, validate


class TestTraceSequence:
    def test_period_four_pattern(self):
        xs = trace_sequence(parse_label("1.2.a"), 8)
        assert np.allclose(xs, [0, -2, 0, 2, 0, -2, 0, 2], atol=1e-9)

    def test_odd_traces_vanish(self):
        xs = trace_sequence(parse_label("2.5.a_ab"), 101)
        assert np.max(np.abs(xs[::2])) < 1e-9

    def test_maximum_when_unit_roots_align(self):
        # (T - 2)^2 over F_4: theta = 0, x_r = 2g identically
        xs = trace_sequence(validate((1, -4, 4), 4), 10)
        assert np.allclose(xs, 2.0, atol=1e-9)

    def test_matches_direct_mpmath_evaluation(self):
        import mpmath as mp
        P = parse_label("1.2.ab")
        from weilsf.weilpoly import roots
        theta = roots(P, 256).thetas[0]
        xs = trace_sequence(P, 50)
        with mp.workprec(128):
            for r in (1, 7, 23, 50):
                ref = 2 * mp.cos(2 * mp.pi * r * theta)
                assert abs(xs[r - 1] - float(ref)) < 1e-10

    def test_precision_guard(self):
        with pytest.raises(PrecisionLoss):
            trace_sequence(parse_label("1.2.ab"), 1 << 33)

    def test_determinism(self):
        a = trace_sequence(parse_label("2.2.ab_b"), 1000)
        b = trace_sequence(parse_label("2.2.ab_b"), 1000)
        assert np.array_equal(a, b)


class TestHistogram:
    def test_supersingular_exact_atoms(self):
        h = histogram(parse_label("1.2.a"), 4000, 16)
        assert sum(h.counts) == 4000
        assert dict(h.atoms) == {0.0: 0.5, -2.0: 0.25, 2.0: 0.25}

    def test_supersingular_counts_off_period(self):
        # N = 6 over the period (0, -2, 0, 2): zeros at r = 1, 3, 5
        h = histogram(parse_label("1.2.a"), 6, 4)
        assert sum(h.counts) == 6
        atoms = dict(h.atoms)
        assert atoms[0.0] == pytest.approx(3 / 6)
        assert atoms[-2.0] == pytest.approx(2 / 6)
        assert atoms[2.0] == pytest.approx(1 / 6)

    def test_half_mass_atom(self):
        h = histogram(parse_label("2.5.a_ab"), 100000, 64)
        assert len(h.atoms) == 1
        v, f = h.atoms[0]
        assert abs(v) < 1e-9 and abs(f - 0.5) < 1e-3

    def test_continuous_case_has_no_atoms(self):
        h = histogram(parse_label("1.2.ab"), 20000, 32)
        assert h.atoms == ()
        assert sum(h.counts) == 20000

    def test_mass_conservation_and_range(self, corpus):
        for P in corpus[(2, 3)][::17]:
            h = histogram(P, 5000, 16)
            assert sum(h.counts) == 5000

    def test_csv_format(self):
        h = histogram(parse_label("1.2.a"), 100, 4)
        lines = h.to_csv().strip().split("\n")
        assert lines[0] == "bucket_left,bucket_right,count"
        assert len(lines) == 5
        assert sum(int(l.split(",")[2]) for l in lines[1:]) == 100

    def test_last_bucket_closed(self):
        h = histogram(validate((1, -4, 4), 4), 10, 8)   # all mass at x = +2 = 2g
        assert h.counts[-1] == 10

    def test_ordinary_elliptic_matches_arcsine_law(self):
        # dx / (pi sqrt(4 - x^2)) on [-2, 2]; bucket mass via arcsin
        n, b = 10 ** 6, 64
        h = histogram(parse_label("1.2.ab"), n, b)
        edges = h.bucket_edges()
        tv = 0.0
        for (lo, hi), c in zip(edges, h.counts):
            exact = (math.asin(min(hi, 2.0) / 2) - math.asin(max(lo, -2.0) / 2)) / math.pi
            tv += abs(c / n - exact)
        assert tv / 2 < 0.02


class TestMoments:
    def test_constant_sequence(self):
        xs = np.full(100, 4.0)
        assert empirical_moments(xs, 3) == [4.0, 16.0, 64.0]

    def test_periodic_average(self):
        xs = trace_sequence(parse_label("1.2.a"), 4000)
        m = empirical_moments(xs, 2)
        assert abs(m[1] - 2.0) < 1e-12

    def test_full_torus_moments(self):
        g1 = classify(parse_label("1.2.ab"))
        assert exact_moments(g1, 6) == [0.0, 2.0, 0.0, 6.0, 0.0, 20.0]
        g2 = classify(parse_label("2.2.ab_b"))
        # E[x^2] = 4, E[x^4] = 2*6 + 6*2*2 = 36 for two independent cosines
        assert exact_moments(g2, 4) == [0.0, 4.0, 0.0, 36.0]

    def test_finite_group_moments(self):
        P = parse_label("1.2.a")
        grp = replace(classify(P), embedding=angle_rank_numeric(P))
        vals = exact_moments(grp, 4)
        assert abs(vals[0]) < 1e-12 and abs(vals[1] - 2.0) < 1e-12
        assert abs(vals[3] - 8.0) < 1e-12

    def test_split_torus_phase_average(self):
        # embedding (u, +-u): half the phases give 4cos, half cancel
        P = parse_label("2.5.a_ab")
        grp = replace(classify(P), embedding=angle_rank_numeric(P))
        vals = exact_moments(grp, 4)
        assert abs(vals[1] - 4.0) < 1e-9
        assert abs(vals[3] - 48.0) < 1e-6

    def test_embedding_missing(self):
        grp = classify(parse_label("2.5.a_ab"))
        with pytest.raises(EmbeddingMissing):
            exact_moments(grp, 2)

    def test_moment_report_converges(self):
        rep = moment_report(parse_label("2.5.a_ab"), 50000, 4)
        assert all(a < 0.05 for a in rep.abs_error)

    def test_odd_moments_vanish_for_connected_groups(self):
        xs = trace_sequence(parse_label("1.2.ab"), 200000)
        m = empirical_moments(xs, 5)
        assert abs(m[0]) < 0.01 and abs(m[2]) < 0.05 and abs(m[4]) < 0.3


class TestBaseChangeTraceIdentity:
    def test_quadratic_identity(self):
        P = parse_label("2.5.a_ab")
        a = trace_sequence(base_change(P, 2), 2000)
        b = trace_sequence(P, 4000)[1::2]
        assert np.max(np.abs(a - b)) < 1e-9

    def test_cubic_identity(self):
        P = parse_label("3.2.a_a_ac")
        a = trace_sequence(base_change(P, 3), 500)
        b = trace_sequence(P, 1500)[2::3]
        assert np.max(np.abs(a - b)) < 1e-9
