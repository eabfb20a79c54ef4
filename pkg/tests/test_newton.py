from fractions import Fraction

import pytest

from weilsf import _intpoly as ip
from weilsf.newton import Stratum, newton_polygon, stratify
from weilsf.weilpoly import parse_label, validate

F = Fraction


def test_ordinary_elliptic():
    npd = newton_polygon(parse_label("1.2.ab"))
    assert npd.slopes == (F(0), F(1))
    assert npd.p_rank == 1
    assert stratify(npd, 1) is Stratum.ORDINARY


def test_vanishing_middle_coefficient_skipped():
    npd = newton_polygon(parse_label("1.2.a"))
    assert npd.slopes == (F(1, 2), F(1, 2))
    assert npd.p_rank == 0
    assert stratify(npd, 1) is Stratum.SUPERSINGULAR


def test_third_slopes_threefold():
    npd = newton_polygon(validate((1, 0, 0, -2, 0, 0, 8), 2))
    assert npd.slopes == (F(1, 3),) * 3 + (F(2, 3),) * 3
    assert npd.p_rank == 0
    assert not npd.is_supersingular()
    assert stratify(npd, 3) is Stratum.P_RANK_ZERO_NON_SS


def test_surface_strata():
    assert stratify(newton_polygon(parse_label("2.2.a_ad")), 2) is Stratum.ORDINARY
    assert stratify(newton_polygon(parse_label("2.2.ab_a")), 2) is Stratum.ALMOST_ORDINARY
    ss = validate((1, 2, 2, 4, 4), 2)
    assert stratify(newton_polygon(ss), 2) is Stratum.SUPERSINGULAR


def test_k3_threefold():
    c = ip.poly_mul((1, -1, 2), ip.poly_pow((1, 0, 2), 2))
    npd = newton_polygon(validate(c, 2))
    assert npd.slopes == (F(0),) + (F(1, 2),) * 4 + (F(1),)
    assert stratify(npd, 3) is Stratum.K3_TYPE


def test_almost_ordinary_threefold():
    npd = newton_polygon(parse_label("3.2.ac_b_a"))
    assert stratify(npd, 3) is Stratum.ALMOST_ORDINARY
    assert npd.p_rank == 2


def test_quarter_slopes_over_square_field():
    npd = newton_polygon(validate((1, 0, 2, 0, 16), 4))
    assert npd.slopes == (F(1, 4),) * 2 + (F(3, 4),) * 2
    assert stratify(npd, 2) is Stratum.P_RANK_ZERO_NON_SS


def test_slope_symmetry_and_length(corpus):
    for (g, q), polys in corpus.items():
        for P in polys[::7]:
            npd = newton_polygon(P)
            assert len(npd.slopes) == 2 * g
            assert sorted(npd.slopes) == sorted(1 - s for s in npd.slopes)
            assert list(npd.slopes) == sorted(npd.slopes)
            assert 0 <= npd.p_rank <= g


def test_json_shape():
    out = newton_polygon(parse_label("2.2.ab_a")).to_json()
    assert out == {"slopes": ["0", "1/2", "1/2", "1"], "p_rank": 1}


def test_wrong_dimension_raises():
    npd = newton_polygon(parse_label("2.2.ab_a"))
    with pytest.raises(ValueError):
        stratify(npd, 3)
