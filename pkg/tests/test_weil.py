import numpy as np
import pytest

from relclass import weil as W


def numeric_traces(P, m):
    roots = np.roots(P.coeffs)
    return [round(float(np.sum(roots ** k).real)) for k in range(1, m + 1)]


@pytest.mark.parametrize("label", ["1.2.ac", "2.2.a_ae", "2.2.ab_ab", "4.2.af_n_az_bn", "1.3.ad",
                                   "6.2.ag_p_av_y_abn_cn", "3.2.e_j_p"])
def test_traces_match_numeric_roots(label):
    P = W.label_decode(label)
    assert list(W.traces(P, 6).values) == numeric_traces(P, 6)


def test_order_one_table_row():
    # 2.2.a_ae: traces (T2, T4, T8, T16) = (0, 8, 0, 16)
    P = W.label_decode("2.2.a_ae")
    assert P.coeffs == (1, 0, -4, 0, 4)
    assert W.traces(P, 4).values == (0, 8, 0, 16)
    assert W.order(P) == 1


def test_real_traces_agree_with_weil_traces():
    for label in ("3.2.ad_c_b", "4.2.ae_e_h_av", "2.3.ag_p"):
        P = W.label_decode(label)
        assert W.real_traces(W.weil_to_real(P), 8).values == W.traces(P, 8).values


def test_real_weil_round_trip():
    h = W.RealWeilPoly(2, 2, (1, -3, 1))
    P = W.real_to_weil(h)
    # T^2 h(T + 2/T) = T^4 - 3T^3 + 5T^2 - 6T + 4
    assert P.coeffs == (1, -3, 5, -6, 4)
    assert W.weil_to_real(P) == h


def test_weil_to_real_rejects_asymmetric():
    with pytest.raises(W.WeilError):
        W.weil_to_real(W.WeilPoly(2, 1, (1, 1, 3)))


@pytest.mark.parametrize("n,code", [(0, "a"), (1, "b"), (25, "z"), (26, "ba"), (-1, "ab"), (-26, "aba")])
def test_int_codec(n, code):
    assert W.encode_int(n) == code
    assert W.decode_int(code) == n


@pytest.mark.parametrize("bad", ["", "2.2.a", "2.2.a_A", "x.2.a", "2.2.a_aab", "1.2.a_a"])
def test_malformed_labels(bad):
    with pytest.raises(W.WeilError):
        W.label_decode(bad)


def test_label_field_mismatch():
    with pytest.raises(W.WeilError):
        W.label_decode("1.2.ac", q=3)


def test_places_of_projective_line():
    q = 3
    N = [q ** i + 1 for i in range(1, 7)]
    a = W.places_from_counts(N)
    # monic irreducibles of degree d over F_q, plus the point at infinity in degree 1
    assert a[0] == q + 1
    assert a[1] == (q * q - q) // 2
    assert a[5] == (q ** 6 - q ** 3 - q ** 2 + q) // 6


def test_p_rank():
    assert W.p_rank(W.label_decode("1.2.ac")) == 0     # supersingular
    assert W.p_rank(W.label_decode("2.2.ab_ab")) == 2  # ordinary
    assert W.p_rank(W.label_decode("2.2.a_ae")) == 0
    assert W.p_rank(W.label_decode("1.3.ad")) == 0


def test_constant_relative_poly_degree_two_is_the_twist():
    P = W.label_decode("3.2.e_j_p")
    R = W.constant_relative_poly(P, 2)
    assert R.coeffs == tuple(c * (-1) ** i for i, c in enumerate(P.coeffs))


def test_constant_relative_poly_degree_three():
    # prod_{i=1,2} P(zeta_3^i T), computed numerically
    P = W.label_decode("1.2.b")
    z = np.exp(2j * np.pi / 3)
    roots = np.roots(P.coeffs)
    rel = np.concatenate([roots * z, roots * z * z])
    expect = np.round(np.poly(rel).real).astype(int)
    assert W.constant_relative_poly(P, 3).coeffs == tuple(int(c) for c in expect)
    assert W.order(W.constant_relative_poly(P, 3)) == 1


def test_is_weil():
    assert W.is_weil(W.label_decode("2.2.ab_ab"))
    assert not W.is_weil(W.WeilPoly.from_first_half(2, [5]))    # |a_1| > 2 sqrt 2
    assert not W.is_weil(W.WeilPoly.from_first_half(2, [0, 7]))


def test_newton_rejects_nonintegral():
    with pytest.raises(W.WeilError):
        W.newton_coeffs([1, 0], 2)
