"""Truncated Laurent series with explicit precision, and the q-series of Bring's curve.

A :class:`LaurentSeries` is ``q^valuation * (c0 + c1 q + ...)`` known for all
exponents ``< prec``.  Every operation propagates the precision it can justify,
so a result never claims more than its inputs support.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .exact import ExactMatrix, matrix_inverse


class InsufficientPrecision(ArithmeticError):
    pass


class DivisionByZeroSeries(ZeroDivisionError):
    pass


def _div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        return q if r == 0 else Fraction(a, b)
    return a / b


def _normalize(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class LaurentSeries:
    __slots__ = ("valuation", "coeffs", "prec")

    def __init__(self, coeffs, valuation: int = 0, prec: int | None = None):
        coeffs = [_normalize(c) for c in coeffs]
        if prec is None:
            prec = valuation + len(coeffs)
        coeffs = coeffs[: max(prec - valuation, 0)]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        # strip leading zeros into the valuation
        k = 0
        while k < len(coeffs) and coeffs[k] == 0:
            k += 1
        if k == len(coeffs):
            self.valuation = prec
            self.coeffs = []
        else:
            self.valuation = valuation + k
            self.coeffs = coeffs[k:]
        self.prec = prec

    # -- constructors -------------------------------------------------
    @classmethod
    def from_dict(cls, terms: dict, prec: int) -> "LaurentSeries":
        if not terms:
            return cls([], 0, prec)
        lo = min(terms)
        coeffs = [0] * max(prec - lo, 0)
        for e, c in terms.items():
            if e < prec:
                coeffs[e - lo] += c
        return cls(coeffs, lo, prec)

    @classmethod
    def constant(cls, c, prec: int) -> "LaurentSeries":
        return cls([c], 0, prec)

    @classmethod
    def gen(cls, prec: int) -> "LaurentSeries":
        return cls([1], 1, prec)

    # -- accessors ----------------------------------------------------
    def __getitem__(self, e: int):
        if e >= self.prec:
            raise InsufficientPrecision(f"coefficient q^{e} unknown (prec {self.prec})")
        i = e - self.valuation
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading_coefficient(self):
        return self.coeffs[0] if self.coeffs else 0

    def coefficients(self, start: int, stop: int) -> list:
        return [self[e] for e in range(start, stop)]

    def truncate(self, prec: int) -> "LaurentSeries":
        return LaurentSeries(self.coeffs, self.valuation, min(prec, self.prec))

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by q^k."""
        return LaurentSeries(self.coeffs, self.valuation + k, self.prec + k)

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentSeries):
            return other
        # exact constant: known to every order
        return LaurentSeries([other], 0, max(self.prec, 1))

    def __add__(self, other):
        other = self._coerce(other)
        prec = min(self.prec, other.prec)
        lo = min(self.valuation, other.valuation, prec)
        out = [0] * (prec - lo)
        for s in (self, other):
            off = s.valuation - lo
            for i, c in enumerate(s.coeffs):
                if off + i < len(out):
                    out[off + i] += c
        return LaurentSeries(out, lo, prec)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries([-c for c in self.coeffs], self.valuation, self.prec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            if other == 0:
                return LaurentSeries([], 0, self.prec)
            return LaurentSeries([c * other for c in self.coeffs], self.valuation, self.prec)
        va, vb = self.valuation, other.valuation
        prec = min(self.prec + vb, other.prec + va)
        if self.is_zero() or other.is_zero():
            return LaurentSeries([], 0, prec)
        n = prec - va - vb
        if n <= 0:
            return LaurentSeries([], 0, prec)
        a = self.coeffs[:n]
        b = other.coeffs[:n]
        out = [0] * n
        for i, x in enumerate(a):
            if x == 0:
                continue
            lim = n - i
            for j, y in enumerate(b[:lim]):
                out[i + j] += x * y
        return LaurentSeries(out, va + vb, prec)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentSeries":
        if self.is_zero():
            raise DivisionByZeroSeries(f"series is zero up to q^{self.prec}")
        v = self.valuation
        n = self.prec - v  # relative precision
        a = self.coeffs
        inv0 = _div(1, a[0])
        out = [inv0]
        for k in range(1, n):
            acc = 0
            for i in range(1, min(k, len(a) - 1) + 1):
                acc += a[i] * out[k - i]
            out.append(_normalize(-acc * inv0) if acc else 0)
        return LaurentSeries(out, -v, -v + n)

    def __truediv__(self, other):
        if not isinstance(other, LaurentSeries):
            return self * _div(1, other)
        return series_div(self, other)

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return LaurentSeries([1], 0, max(self.prec - self.valuation, 1))
        result, base = None, self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def derivative(self) -> "LaurentSeries":
        out = [(self.valuation + i) * c for i, c in enumerate(self.coeffs)]
        return LaurentSeries(out, self.valuation - 1, self.prec - 1)

    # -- comparison ---------------------------------------------------
    def agrees_with(self, other, upto: int | None = None) -> bool:
        """Equality of coefficients for exponents below ``upto`` (default: shared prec)."""
        other = self._coerce(other)
        n = min(self.prec, other.prec) if upto is None else upto
        if upto is not None and (self.prec < upto or other.prec < upto):
            raise InsufficientPrecision(f"cannot compare up to q^{upto}")
        lo = min(self.valuation, other.valuation)
        return all(self[e] == other[e] for e in range(lo, n))

    def first_nonzero(self):
        """Exponent of the first nonzero coefficient, or None if zero to prec."""
        return None if self.is_zero() else self.valuation

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.prec == other.prec and self.valuation == other.valuation
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.valuation, tuple(self.coeffs), self.prec))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs[:12]):
            if c == 0:
                continue
            e = self.valuation + i
            mon = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
            cs = str(c)
            if mon:
                cs = "" if c == 1 else ("-" if c == -1 else f"{c}*")
            terms.append(f"{cs}{mon}" if mon else cs)
        body = " + ".join(terms).replace("+ -", "- ")
        return f"{body or '0'} + O(q^{self.prec})"


def series_div(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    """``a / b``; valuation is val(a) - val(b), precision the justified minimum."""
    if b.is_zero():
        raise DivisionByZeroSeries(f"divisor is zero up to q^{b.prec}")
    return a * b.inverse()


# ---------------------------------------------------------------------------
# The concrete q-series
# ---------------------------------------------------------------------------

def theta_series(residue_class: int, prec: int) -> LaurentSeries:
    """``sum_{n in Z} (-q)^((5n+r)^2)`` truncated at q^prec."""
    if residue_class not in (0, 1, 2):
        raise ValueError("residue class must be 0, 1 or 2")
    if prec < 1:
        raise ValueError("prec must be >= 1")
    terms: dict[int, int] = {}
    bound = isqrt(prec - 1)
    for m in range(-bound, bound + 1):
        if (m - residue_class) % 5 == 0:
            e = m * m
            terms[e] = terms.get(e, 0) + (-1 if e % 2 else 1)
    return LaurentSeries.from_dict(terms, prec)


def hc_polynomial_series(x, y, z):
    """F(x, y, z) = x(y^5 + z^5) + x^2 y^2 z^2 - x^4 y z - 2 y^3 z^3 on series."""
    y2, z2 = y * y, z * z
    y3, z3 = y2 * y, z2 * z
    x2 = x * x
    return (x * (y3 * y2 + z3 * z2) + x2 * y2 * z2 - x2 * x2 * y * z
            - 2 * (y3 * z3))


#: the matrix carrying (f1, f2, f3, f4) onto (v1, v2, v3, v4)/dq
HC_MATRIX = ExactMatrix([
    [Fraction(-1, 4), Fraction(-1, 4), Fraction(-1, 4), Fraction(-1, 4)],
    [Fraction(1, 4), Fraction(1, 4), Fraction(-1, 4), Fraction(-1, 4)],
    [0, 0, Fraction(1, 2), Fraction(-1, 2)],
    [Fraction(-1, 2), Fraction(1, 2), 0, 0],
])


class SeriesTuple(dict):
    """Named formal point: label -> LaurentSeries over a common field."""

    @property
    def prec(self) -> int:
        return min(s.prec for s in self.values())

    def truncate(self, prec: int) -> "SeriesTuple":
        return SeriesTuple({k: s.truncate(prec) for k, s in self.items()})


_PAD = 40


@lru_cache(maxsize=16)
def _differentials(prec: int, pad: int):
    work = prec + pad
    x1, y1, z1 = (theta_series(r, work) for r in (0, 1, 2))
    X = x1 / z1
    Y = y1 / z1
    Y2 = Y * Y
    X2 = X * X
    # F(X, Y, 1) = X (Y^5 + 1) + X^2 Y^2 - X^4 Y - 2 Y^3
    F_Y = 5 * X * (Y2 * Y2) + 2 * X2 * Y - X2 * X2 - 6 * Y2
    # normalized against dq/q with the sign making v4 = -q + ...
    ratio = -(X.derivative() / F_Y).shift(1)
    w = (Y2 * Y - X, Y2 * X - 1, Y - X2, Y * (X2 - Y))
    return tuple(wi * ratio for wi in w)


def hc_differentials(prec: int) -> SeriesTuple:
    """The four differentials v_i/dq on Hulek-Craig's curve, known to q^prec.

    Working precision is raised until every output is justified to ``prec``.
    """
    pad = _PAD
    for _ in range(6):
        vs = _differentials(prec, pad)
        if all(v.prec >= prec for v in vs):
            return SeriesTuple({f"v{i + 1}": v.truncate(prec) for i, v in enumerate(vs)})
        pad *= 2
    raise InsufficientPrecision(f"could not justify differentials to q^{prec}")


def cuspform_basis(prec: int) -> SeriesTuple:
    """(f1, f2, f3, f4) = (v1, v2, v3, v4) A^-1, the weight-2 cusp forms for Gamma_B."""
    if prec < 10:
        raise ValueError("prec must be >= 10")
    v = hc_differentials(prec)
    vs = [v[f"v{i}"] for i in range(1, 5)]
    Ainv = matrix_inverse(HC_MATRIX)
    out = {}
    for j, name in enumerate("xyzw"):
        acc = LaurentSeries([], 0, prec)
        for i in range(4):
            c = Ainv[i, j]
            if c != 0:
                acc = acc + vs[i] * c
        out[name] = acc
    return SeriesTuple(out)


def _sigma3(n: int) -> int:
    return sum(d ** 3 for d in range(1, n + 1) if n % d == 0)


def eisenstein_e4(prec: int) -> LaurentSeries:
    return LaurentSeries([1] + [240 * _sigma3(n) for n in range(1, prec)], 0, prec)


def discriminant_series(prec: int) -> LaurentSeries:
    """Delta = q prod (1 - q^n)^24, known to q^prec."""
    n = max(prec - 1, 0)
    # prod (1 - q^k)^24 to relative order n, computed via the Euler product
    prod = [1] + [0] * max(n - 1, 0)
    for k in range(1, n):
        for _ in range(24):
            for i in range(n - 1, k - 1, -1):
                prod[i] -= prod[i - k]
    return LaurentSeries(prod[:n], 1, prec)


def j_series(prec: int) -> LaurentSeries:
    """Klein's j = E4^3 / Delta, known to q^prec (valuation -1)."""
    if prec < 0:
        raise ValueError("prec must be >= 0")
    e4 = eisenstein_e4(prec + 2)
    delta = discriminant_series(prec + 2)
    return ((e4 * e4 * e4) / delta).truncate(prec)
