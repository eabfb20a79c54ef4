import random

import pytest

from weilsf import _intpoly as ip
from weilsf.polyarith import (BoundExceeded, IsogenyFactorization,
                              NoSupersingularMatch, base_change, factor,
                              factor_coeffs, supersingular_match,
                              supersingular_torsion_order)
from weilsf.weilpoly import parse_label


class TestFactor:
    def test_irreducible_quartic(self):
        fac = factor(parse_label("2.5.a_ab"))
        assert fac.is_irreducible
        assert fac.factors[0][2] == "ordinary"

    def test_square_detected(self):
        c = ip.poly_pow((1, -1, 2), 2)
        assert factor_coeffs(c) == [((1, -1, 2), 2)]

    def test_base_changed_square_is_elliptic_square(self):
        # 2.25.ac_bz must come out as h^2 for the quadratic of 1.25.ab
        fac = factor(parse_label("2.25.ac_bz"))
        assert fac.factors == (((1, -1, 25), 2, "ordinary"),)

    def test_biquadratic_split(self):
        assert factor_coeffs((1, 0, 0, 0, 4)) == [((1, -2, 2), 1), ((1, 2, 2), 1)]

    def test_deterministic_order(self):
        c = ip.poly_mul((1, 2, 2), ip.poly_mul((1, -1, 2), (1, 0, 2)))
        fac = factor_coeffs(c)
        assert fac == sorted(fac, key=lambda he: (ip.degree(he[0]), he[0]))

    def test_factor_expand_roundtrip_random_products(self):
        rng = random.Random(7)
        atoms = [(1, -1, 2), (1, 0, 2), (1, 2, 2), (1, -2, 2), (1, 1, 3),
                 (1, 0, -1, 0, 25), (1, 2, 2, 4, 4), (1, -1, 25)]
        for _ in range(25):
            parts = rng.sample(atoms, rng.randint(1, 3))
            c = (1,)
            for h in parts:
                c = ip.poly_mul(c, ip.poly_pow(h, rng.randint(1, 2)))
            if ip.degree(c) > 12:
                continue
            got = factor_coeffs(c)
            rebuilt = (1,)
            for h, e in got:
                rebuilt = ip.poly_mul(rebuilt, ip.poly_pow(h, e))
            assert rebuilt == c

    def test_json_schema(self):
        fac = factor(parse_label("2.25.ac_bz"))
        assert isinstance(fac, IsogenyFactorization)
        assert fac.to_json() == [{"h": [1, -1, 25], "e": 2, "newton": "ordinary"}]


class TestBaseChange:
    def test_paper_golden_quadratic(self):
        assert base_change(parse_label("2.5.a_ab"), 2).coeffs == \
            parse_label("2.25.ac_bz").coeffs

    def test_imaginary_quadratic_square(self):
        # roots +-i sqrt(q) square to -q
        assert base_change(parse_label("1.2.a"), 2).coeffs == (1, 4, 4)

    def test_composition(self):
        P = parse_label("1.2.ab")
        assert base_change(base_change(P, 2), 3).coeffs == base_change(P, 6).coeffs

    def test_identity(self):
        P = parse_label("2.2.ab_b")
        assert base_change(P, 1).coeffs == P.coeffs

    def test_output_is_validated_weil(self):
        for label in ["2.2.ab_b", "3.2.a_a_ac", "2.3.ac_c"]:
            P = parse_label(label)
            for r in (2, 3, 5):
                Q = base_change(P, r)
                assert Q.q == P.q ** r
                assert Q.g == P.g

    def test_degree7_golden(self):
        got = base_change(parse_label("3.8.ai_bk_aeq"), 7).coeffs
        assert got == ip.poly_pow((1, -1664, 2097152), 3)


class TestSupersingular:
    def test_torsion_orders(self):
        assert supersingular_torsion_order(parse_label("1.2.a")) == 4
        assert supersingular_torsion_order((1, -4, 4), 4) == 1
        assert supersingular_torsion_order((1, 4, 4), 4) == 2
        assert supersingular_torsion_order((1, 2, 2, 4, 4), 2) == 24
        assert supersingular_torsion_order((1, 0, 0, 9, 0, 0, 27), 3) == 36

    def test_torsion_order_rejects_non_ss(self):
        with pytest.raises(BoundExceeded):
            supersingular_torsion_order(parse_label("1.2.ab"))

    def test_match_z2_quartic(self):
        m = supersingular_match((1, 0, 0, 0, 25), 5)
        assert (m.zhu_type, m.m) == ("Z2", 8)

    def test_match_z1_linear(self):
        assert supersingular_match((1, 2), 4).m == 2
        assert supersingular_match((1, -2), 4).m == 1

    def test_match_z3_integer_form(self):
        m = supersingular_match((1, 2, 2, 4, 4), 2)
        assert (m.zhu_type, m.m, m.normalized_family) == ("Z3", 24, "Psi_{2,3}(T)")

    def test_match_agrees_with_torsion_everywhere(self):
        cases = [((1, 0, 2), 2), ((1, 2, 2, 4, 4), 2), ((1, -2, 2, -4, 4), 2),
                 ((1, 0, 0, 0, 25), 5), ((1, 0, 3, 0, 9), 3),
                 ((1, 0, -5, 0, 25), 5), ((1, 5, 15, 25, 25), 5),
                 ((1, -5, 15, -25, 25), 5), ((1, 2), 4), ((1, -2), 4),
                 ((1, 0, 4), 4), ((1, 2, 4), 4), ((1, -2, 4), 4),
                 ((1, 0, 0, 9, 0, 0, 27), 3), ((1, 0, 0, -9, 0, 0, 27), 3),
                 ((1, 0, 0, 0, 16), 4), ((1, 7, 21, 49, 147, 343, 343), 7),
                 ((1, -7, 21, -49, 147, -343, 343), 7),
                 ((1, 2, 4, 8, 16, 32, 64), 4)]
        for h, q in cases:
            assert supersingular_match(h, q).m == supersingular_torsion_order(h, q)

    def test_no_match_is_an_error(self):
        with pytest.raises(NoSupersingularMatch):
            supersingular_match((1, -1, 2), 2)


class TestIntpolyOracles:
    def test_power_sums_match_brute_force(self):
        # brute force with explicit roots of (T-1)(T-2)(T+3)
        c = ip.poly_mul(ip.poly_mul((1, -1), (1, -2)), (1, 3))
        roots = [1, 2, -3]
        s = ip.power_sums(c, 8)
        for k in range(1, 9):
            assert s[k - 1] == sum(r ** k for r in roots)

    def test_from_power_sums_inverts(self):
        c = (1, -2, 51, -50, 625)
        s = ip.power_sums(c, 4)
        assert ip.poly_from_power_sums(s, 4) == c

    def test_cyclotomics(self):
        assert ip.cyclotomic(1) == (1, -1)
        assert ip.cyclotomic(8) == (1, 0, 0, 0, 1)
        assert ip.cyclotomic(12) == (1, 0, -1, 0, 1)
        prod = (1,)
        for d in (1, 2, 3, 6):
            prod = ip.poly_mul(prod, ip.cyclotomic(d))
        assert prod == (1, 0, 0, 0, 0, 0, -1)   # T^6 - 1

    def test_sturm_counts(self):
        assert ip.sturm_count((1, 0, -8)) == 2
        assert ip.sturm_count((1, 0, -8), -1, 8) == 1
        assert ip.sturm_count((1, 0, 1)) == 0

    def test_perfect_power(self):
        assert ip.is_perfect_power(ip.poly_pow((1, -2, 8), 3), 3) == (1, -2, 8)
        assert ip.is_perfect_power((1, 0, 0, -2, 0, 0, 8), 3) is None
