import mpmath as mp
import pytest

from weilsf.weilpoly import (FunctionalEquationViolated, MalformedLabel,
                             NotMonic, NotPrimePower, RootOffCircle,
                             WeilPolynomial, format_label, from_middle,
                             parse_label, roots, validate)


class TestLabels:
    def test_paper_example_decodes(self):
        P = parse_label("2.5.a_ab")
        assert P.coeffs == (1, 0, -1, 0, 25)
        assert (P.g, P.q, P.p, P.d) == (2, 5, 5, 1)

    def test_zero_coefficient(self):
        assert parse_label("1.2.a").coeffs == (1, 0, 2)

    def test_signed_two_letter_tokens(self):
        P = parse_label("2.25.ac_bz")
        assert P.coeffs == (1, -2, 51, -50, 625)

    def test_format_is_inverse(self):
        for label in ["2.5.a_ab", "1.2.a", "2.25.ac_bz", "3.8.ai_bk_aeq",
                      "3.2.a_a_ac", "1.117649.la", "3.7.ao_di_alk"]:
            assert format_label(parse_label(label)) == label

    def test_roundtrip_random_encodable_values(self):
        # every integer in a wide window round-trips through the token codec
        from weilsf.weilpoly import _decode_token, _encode_token
        for n in range(-2000, 2001):
            assert _decode_token(_encode_token(n)) == n

    def test_malformed_tokens_rejected(self):
        for bad in ["2.5.a", "2.5.a_ab_c", "x.5.a_ab", "2.5.a_aB",
                    "2.5.a_a1", "2.5.a_aab", "2.5", "1.6.a"]:
            with pytest.raises((MalformedLabel, NotPrimePower)):
                parse_label(bad)

    def test_non_prime_power_q(self):
        with pytest.raises(NotPrimePower):
            parse_label("1.6.ab")

    def test_off_circle_label_rejected(self):
        # a_1 = -5 violates the Weil bound over F_2
        with pytest.raises(RootOffCircle):
            parse_label("1.2.af")


class TestValidate:
    def test_ordinary_elliptic(self):
        P = validate((1, -1, 2), 2)
        assert P.label == "1.2.ab"
        assert P.trace == 1

    def test_paper_quartic(self):
        assert validate((1, 0, -1, 0, 25), 5).g == 2

    def test_weil_bound_violation(self):
        with pytest.raises(RootOffCircle):
            validate((1, 5, 2), 2)

    def test_functional_equation_violation(self):
        with pytest.raises(FunctionalEquationViolated):
            validate((1, 1, 3), 2)
        with pytest.raises(FunctionalEquationViolated):
            validate((1, 0, -2), 2)   # T^2 - q

    def test_not_monic(self):
        with pytest.raises(NotMonic):
            validate((2, 0, 2), 2)

    def test_functional_equation_exact_on_validated(self):
        for label in ["2.5.a_ab", "3.2.ad_f_ah", "2.2.ab_b"]:
            P = parse_label(label)
            g, q = P.g, P.q
            for i in range(g + 1):
                assert P.coeffs[2 * g - i] == q ** (g - i) * P.coeffs[i]

    def test_boundary_double_real_roots_accepted(self):
        # (T - 2)^2 over F_4 and (T^2 - 2)^2 over F_2 sit on the interval edge
        assert validate((1, -4, 4), 4).g == 1
        assert validate((1, 0, -4, 0, 4), 2).g == 2

    def test_from_middle_mirrors(self):
        P = from_middle(2, 5, (0, -1))
        assert P.coeffs == (1, 0, -1, 0, 25)


class TestRoots:
    def test_pure_imaginary_angles(self):
        rs = roots(parse_label("1.2.a"), 128)
        assert [mp.nstr(a, 6) for a in rs.angles] == ["0.25", "0.75"]
        u = rs.unit_eigenvalues()[0]
        assert abs(u - mp.mpc(0, 1)) < mp.mpf(2) ** -100

    def test_quartic_angles_and_half_sum(self):
        # derived by the power-sum identity: cos(4 pi theta_1) = s_2 / (2 q) = 1/10
        rs = roots(parse_label("2.5.a_ab"), 256)
        t1, t2 = rs.thetas
        with mp.workprec(300):
            expected = mp.acos(mp.mpf(1) / 10) / (4 * mp.pi)
            assert abs(t1 - expected) < mp.mpf(2) ** -200
            assert abs(t1 + t2 - mp.mpf("0.5")) < mp.mpf(2) ** -200

    def test_arccos_closed_form(self):
        rs = roots(parse_label("1.2.ab"), 192)
        with mp.workprec(256):
            expected = mp.acos(1 / (2 * mp.sqrt(2))) / (2 * mp.pi)
            assert abs(rs.thetas[0] - expected) < mp.mpf(2) ** -150

    def test_angle_ordering_and_pairing(self):
        for label in ["3.2.ad_f_ah", "2.2.ab_b", "3.8.ai_bk_aeq"]:
            P = parse_label(label)
            rs = roots(P, 192)
            g = P.g
            for j in range(g - 1):
                assert rs.thetas[j] <= rs.thetas[j + 1]
            for j in range(g):
                assert abs(rs.roots[j] * rs.roots[g + j] - P.q) < mp.mpf(2) ** -90

    def test_angle_sum_and_trace_identity(self):
        # sum of all 2g angles is 0 mod 1; sum of cosines recovers -a_1
        for label in ["2.2.ad_f", "3.2.ae_j_ap"]:
            P = parse_label(label)
            rs = roots(P, 192)
            with mp.workprec(224):
                total = mp.fsum(rs.angles)
                assert abs(total - mp.nint(total)) < mp.mpf(2) ** -150
                cos_sum = mp.fsum(2 * mp.sqrt(P.q) * mp.cos(2 * mp.pi * t)
                                  for t in rs.thetas)
                assert abs(cos_sum + P.a(1)) < mp.mpf(2) ** -120

    def test_repeated_roots(self):
        P = validate((1, -2, 51, -50, 625), 25)   # (T^2 - T + 25)^2
        rs = roots(P, 192)
        assert abs(rs.thetas[0] - rs.thetas[1]) < mp.mpf(2) ** -150

    def test_determinism(self):
        a = roots(parse_label("3.2.ad_f_ah"), 256)
        b = roots(parse_label("3.2.ad_f_ah"), 256)
        assert [mp.nstr(t, 60) for t in a.angles] == [mp.nstr(t, 60) for t in b.angles]

    def test_precision_floor(self):
        with pytest.raises(Exception):
            roots(parse_label("1.2.a"), 32)


def test_json_emission():
    P = parse_label("2.5.a_ab")
    assert P.to_json() == {"g": 2, "q": 5, "p": 5, "d": 1,
                           "coeffs": [1, 0, -1, 0, 25]}
    assert isinstance(P, WeilPolynomial)
