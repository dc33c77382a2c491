from fractions import Fraction

import pytest

from bringcert.exact import (EPS, QQ, SQRT5, ExactMatrix, NonInvertible, NonUnique, NoSolution, NumberField,
                             QQi, QQsqrt5, QQzeta5, Singular, field_inverse, matrix_inverse, matrix_nullspace,
                             matrix_solve, rank, rational_reconstruct, solve_multimodular, sqrt_in_field,
                             upoly_divmod, upoly_mul, upoly_xgcd)
from bringcert.series import HC_MATRIX


def test_golden_ratio_inverse():
    assert field_inverse(EPS) == EPS - 1
    assert EPS * EPS == EPS + 1


def test_gaussian_inverse():
    i = QQi.gen()
    assert field_inverse(i) == -i


def test_cyclotomic_inverse_against_xgcd():
    z = QQzeta5.gen()
    inv = field_inverse(1 + z)
    # independent oracle: u (1 + x) + v m(x) = 1
    g, u, _ = upoly_xgcd([Fraction(1), Fraction(1)], [Fraction(c) for c in QQzeta5.modulus])
    assert g == [1]
    assert inv == QQzeta5(u)
    assert inv * (1 + z) == 1


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        field_inverse(QQsqrt5(0))


def test_reducible_modulus_reports_zero_divisor():
    K = NumberField("bad", [-1, 0, 1], var="a")
    with pytest.raises(NonInvertible):
        field_inverse(1 + K.gen())


def test_tower_extension():
    L = NumberField("Q(sqrt5)[s]", [EPS * EPS, 1, 1], base=QQsqrt5, var="s")
    s = L.gen()
    assert s * s + s + L(EPS * EPS) == 0
    assert L.absolute_degree == 4
    assert field_inverse(s) * s == 1


def test_field_parsing_and_lifting():
    assert QQ("3/6") == Fraction(1, 2)
    assert QQsqrt5(SQRT5) is SQRT5 or QQsqrt5(SQRT5) == SQRT5
    assert QQsqrt5(Fraction(2, 4)).is_rational()
    assert (SQRT5 * SQRT5).to_rational() == 5


@pytest.mark.parametrize("d, root", [(Fraction(9, 4), Fraction(3, 2)), (2, None), (-1, None)])
def test_sqrt_rational(d, root):
    assert sqrt_in_field(d) == root


def test_sqrt_quadratic():
    r = sqrt_in_field(EPS * EPS)
    assert r is not None and r * r == EPS * EPS
    assert sqrt_in_field(QQsqrt5(5)) * sqrt_in_field(QQsqrt5(5)) == 5
    assert sqrt_in_field(EPS) is None


def test_nullspace_examples():
    assert matrix_nullspace(ExactMatrix.identity(2)) == []
    assert matrix_nullspace(ExactMatrix([[1, 1], [1, 1]])) == [[1, -1]]


def test_nullspace_is_integral_and_normalized():
    M = ExactMatrix([[Fraction(1, 2), Fraction(1, 3), 1]])
    basis = matrix_nullspace(M)
    assert len(basis) == 2
    for v in basis:
        assert all(Fraction(x).denominator == 1 for x in v)
        assert next(x for x in v if x) > 0
        assert M.apply(v) == [0]


def test_inverse_examples():
    assert matrix_inverse(ExactMatrix.identity(3)) == ExactMatrix.identity(3)
    D = ExactMatrix([[2, 0], [0, Fraction(1, 2)]])
    assert matrix_inverse(D) == ExactMatrix([[Fraction(1, 2), 0], [0, 2]])


def test_hc_matrix_inverse():
    inv = matrix_inverse(HC_MATRIX)
    assert HC_MATRIX @ inv == ExactMatrix.identity(4)
    assert inv @ HC_MATRIX == ExactMatrix.identity(4)


def test_singular():
    with pytest.raises(Singular):
        matrix_inverse(ExactMatrix([[1, 2], [2, 4]]))


def test_solve_and_rank():
    M = ExactMatrix([[1, 2], [3, 4]])
    x, kernel = matrix_solve(M, [5, 6])
    assert M.apply(x) == [5, 6] and kernel == []
    x, _ = matrix_solve(ExactMatrix([[1, 1], [1, 1]]), [1, 2])
    assert x is None
    assert rank(ExactMatrix([[1, 2], [2, 4]])) == 1


def test_matrix_over_number_field():
    M = ExactMatrix([[SQRT5, 1], [1, EPS]])
    assert M.field is QQsqrt5
    assert M @ matrix_inverse(M) == ExactMatrix.identity(2, QQsqrt5)


def test_rational_reconstruction():
    m = 2**61 - 1
    a = Fraction(-1234, 567)
    r = a.numerator * pow(a.denominator, -1, m) % m
    assert rational_reconstruct(r, m) == a


def test_multimodular_overdetermined():
    x = [Fraction(3, 7), Fraction(-10**20, 3), Fraction(5)]
    rows = [[1, 2, 3], [4, 5, 6], [7, 8, 10], [1, 0, 1], [Fraction(1, 2), 1, 0]]
    rhs = [sum(Fraction(a) * b for a, b in zip(r, x)) for r in rows]
    assert solve_multimodular(rows, rhs) == x


def test_multimodular_failures():
    with pytest.raises(NonUnique) as info:
        solve_multimodular([[1, 1], [2, 2]], [1, 2])
    assert info.value.kernel_dimension == 1
    with pytest.raises(NoSolution):
        solve_multimodular([[1, 0], [0, 1], [1, 1]], [1, 1, 3])


def test_univariate_helpers():
    q, r = upoly_divmod([Fraction(-1), 0, 1], [Fraction(-1), 1])
    assert q == [1, 1] and r == []
    assert upoly_mul([1, 1], [1, -1]) == [1, 0, -1]
