from fractions import Fraction

import pytest

from bringcert.series import (DivisionByZeroSeries, InsufficientPrecision, LaurentSeries, cuspform_basis,
                              discriminant_series, hc_differentials, hc_polynomial_series, j_series,
                              series_div, theta_series)


def enumerate_theta(r, prec):
    """Independent oracle: sum over n of (-q)^((5n+r)^2) by brute force."""
    out = {}
    for n in range(-50, 51):
        e = (5 * n + r) ** 2
        if e < prec:
            out[e] = out.get(e, 0) + (-1) ** e
    return out


@pytest.mark.parametrize("r, prec", [(0, 30), (1, 80), (2, 50), (2, 200)])
def test_theta_matches_enumeration(r, prec):
    th = theta_series(r, prec)
    want = enumerate_theta(r, prec)
    assert th.prec == prec
    assert {e: th[e] for e in range(prec) if th[e]} == want


def terms(series, upto):
    return {e: series[e] for e in range(series.valuation, upto) if series[e]}


def test_theta_examples():
    assert terms(theta_series(0, 30), 30) == {0: 1, 25: -2}
    assert terms(theta_series(2, 50), 50) == {4: 1, 9: -1, 49: -1}
    z = theta_series(1, 1)
    assert z.is_zero() and z.prec == 1


def test_division_examples():
    q = LaurentSeries.gen(20)
    assert series_div(q * q, q).truncate(10) == LaurentSeries.gen(10)
    geo = 1 / (1 - q)
    assert all(geo[k] == 1 for k in range(20))
    X = theta_series(0, 40) / theta_series(2, 40)
    assert X.valuation == -4 and X.leading_coefficient() == 1
    with pytest.raises(DivisionByZeroSeries):
        series_div(q, LaurentSeries([], 0, 10))


def test_precision_tracking():
    q = LaurentSeries.gen(10)
    a = q ** 3 + q ** 4
    b = LaurentSeries([1, 1], 0, 6)
    assert (a * b).prec == 9  # min(10 + 0, 6 + 3)
    with pytest.raises(InsufficientPrecision):
        b[6]
    inv = (q * (1 + q)).inverse()
    assert inv.valuation == -1 and inv.prec == 8


def test_differential_leading_terms():
    v = hc_differentials(20)
    assert terms(v["v1"], 15) == {3: -1, 8: 1, 13: 4}
    assert terms(v["v2"], 15) == {2: 1, 7: -2, 12: -1}
    assert terms(v["v3"], 15) == {4: -1, 9: 2, 14: 2}
    assert terms(v["v4"], 13) == {1: -1, 6: 1, 11: 3}


def test_cuspforms_leading_terms(f_series):
    f = f_series
    assert terms(f["x"], 8) == {1: 1, 2: -1, 3: 1, 4: 1, 6: -1, 7: 2}
    assert terms(f["y"], 9) == {1: 1, 2: 1, 3: -1, 4: 1, 6: -1, 7: -2, 8: 1}
    assert terms(f["z"], 7) == {1: 1, 4: -1, 6: -1}
    assert terms(f["w"], 9) == {2: 1, 3: 1, 7: -2, 8: -1}


def test_cuspforms_integral_and_monotone(f_series):
    small = cuspform_basis(60)
    for k in "xyzw":
        assert small[k].valuation >= 1
        assert small[k].agrees_with(f_series[k], 60)
        assert all(Fraction(f_series[k][e]).denominator == 1 for e in range(260))


def test_theta_point_on_hulek_craig():
    th = [theta_series(r, 150) for r in range(3)]
    val = hc_polynomial_series(*th)
    assert val.prec >= 150 and val.is_zero()


def test_j_expansion():
    j = j_series(5)
    assert j.valuation == -1
    assert [j[k] for k in range(-1, 4)] == [1, 744, 196884, 21493760, 864299970]
    d = discriminant_series(10)
    assert d.valuation == 1 and d.leading_coefficient() == 1


def test_j_against_naive_oracle():
    # independent oracle: naive E4^3 / Delta with Delta = q prod (1 - q^n)^24 multiplied out term by term
    N = 12
    e4 = [1] + [240 * sum(d**3 for d in range(1, n + 1) if n % d == 0) for n in range(1, N)]
    def mul(a, b):
        out = [0] * N
        for i, x in enumerate(a):
            for k, y in enumerate(b[: N - i]):
                out[i + k] += x * y
        return out
    prod = [1] + [0] * (N - 1)
    for n in range(1, N):
        factor = [0] * N
        factor[0] = 1
        factor[n] = -1
        for _ in range(24):
            prod = mul(prod, factor)
    num = mul(mul(e4, e4), e4)
    # j = num / (q * prod): solve prod * c = num
    c = []
    for k in range(N):
        c.append(num[k] - sum(prod[k - i] * c[i] for i in range(k)))
    j = j_series(N - 1)
    assert [j[k - 1] for k in range(N)] == c


def test_seriestuple_truncate(f_series):
    t = f_series.truncate(20)
    assert t.prec == 20
