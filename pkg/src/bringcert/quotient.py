"""The S5-invariant function t on Bring's curve and its reduction to one variable.

Coordinates are x0..x4, the distinguished monomial is T = x0 x1 x2 x3 / x4^4
and v = x1/x0.  Since every permutation sends T to prod_{k != m} x_k / x_m^4
for some m, the ten-term orbit sum is 2 e5 sum_m x_m^-5.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd

from .curves import BRING_VARS, get_curve
from .exact import (is_squarefree, upoly_add, upoly_divmod, upoly_gcd, upoly_mul, upoly_sub,
                    upoly_trim)
from .groebner import buchberger, normal_form
from .poly import GREVLEX, LEX, MultiPoly, format_poly, parse_poly
from .report import FAIL, PASS, CertReport, stopwatch


class ShapeMismatch(ArithmeticError):
    pass


@dataclass(frozen=True)
class Permutation:
    """A permutation of {0..n-1}; ``image[i]`` is where i goes."""

    image: tuple

    def __post_init__(self):
        if sorted(self.image) != list(range(len(self.image))):
            raise ValueError(f"not a permutation: {self.image}")

    @classmethod
    def identity(cls, n: int = 5) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def cycle(cls, *points, n: int = 5) -> "Permutation":
        img = list(range(n))
        for a, b in zip(points, points[1:] + points[:1]):
            img[a] = b
        return cls(tuple(img))

    def __call__(self, i: int) -> int:
        return self.image[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """(self * other)(i) = self(other(i))."""
        return Permutation(tuple(self.image[j] for j in other.image))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.image)
        for i, j in enumerate(self.image):
            inv[j] = i
        return Permutation(tuple(inv))

    def __pow__(self, k: int) -> "Permutation":
        out = Permutation.identity(len(self.image))
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = base * out
        return out


RHO = Permutation.cycle(0, 1, 2, 3, 4)
KAPPA = Permutation.cycle(0, 1)
TRANSPOSITIONS = [Permutation.cycle(i, i + 1) for i in range(4)]


def group_order(generators) -> int:
    """Size of the group generated by ``generators`` (closure by breadth-first search)."""
    n = len(generators[0].image)
    seen = {Permutation.identity(n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for p in frontier:
            for g in generators:
                q = g * p
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return len(seen)


def _monomial_content(p: MultiPoly) -> tuple:
    return tuple(min(e[i] for e in p.terms) for i in range(len(p.vars)))


def _divide_monomial(p: MultiPoly, m: tuple) -> MultiPoly:
    return MultiPoly(p.vars, {tuple(a - b for a, b in zip(e, m)): c for e, c in p.terms.items()})


def _int_content(p: MultiPoly) -> Fraction:
    g = 0
    den = 1
    for c in p.terms.values():
        c = Fraction(c)
        g = gcd(g, c.numerator)
        den = den * c.denominator // gcd(den, c.denominator)
    return Fraction(g, den)


@dataclass(frozen=True)
class RationalFunction:
    """num/den in x0..x4, kept with no common monomial or scalar factor.

    Denominators produced here are monomials, so cancelling common monomial
    factors makes numerator and denominator coprime.
    """

    num: MultiPoly
    den: MultiPoly

    @classmethod
    def make(cls, num: MultiPoly, den: MultiPoly) -> "RationalFunction":
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return cls(num, MultiPoly.const(den.vars, 1))
        m = tuple(min(a, b) for a, b in zip(_monomial_content(num), _monomial_content(den)))
        num, den = _divide_monomial(num, m), _divide_monomial(den, m)
        cn, cd = _int_content(num), _int_content(den)
        num, den = num / cn, den / cd
        scale = cn / cd
        num = num * scale
        lead = den.leading_coefficient(LEX)
        if lead < 0:
            num, den = -num, -den
        return cls(num, den)

    @classmethod
    def parse(cls, num: str, den: str = "1", vars=BRING_VARS) -> "RationalFunction":
        return cls.make(parse_poly(num, vars), parse_poly(den, vars))

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        if self.den == other.den:
            return RationalFunction.make(self.num + other.num, self.den)
        return RationalFunction.make(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + RationalFunction(-other.num, other.den)

    def __mul__(self, c):
        return RationalFunction.make(self.num * c, self.den)

    def is_homogeneous_degree_zero(self) -> bool:
        return (self.num.is_homogeneous() and self.den.is_homogeneous()
                and (not self.num or self.num.total_degree() == self.den.total_degree()))

    def evaluate(self, point):
        return Fraction(self.num.evaluate(point)) / Fraction(self.den.evaluate(point))

    def __str__(self):
        return f"({format_poly(self.num)}) / ({format_poly(self.den)})"


def s5_act(sigma: Permutation, f: RationalFunction) -> RationalFunction:
    """Substitute x_i -> x_sigma(i) in numerator and denominator."""
    vars = f.num.vars

    def act(p: MultiPoly) -> MultiPoly:
        terms = {}
        for e, c in p.terms.items():
            ne = [0] * len(e)
            for i, x in enumerate(e):
                ne[sigma(i)] += x
            terms[tuple(ne)] = c
        return MultiPoly(vars, terms)

    return RationalFunction.make(act(f.num), act(f.den))


def base_monomial() -> RationalFunction:
    return RationalFunction.parse("x0*x1*x2*x3", "x4^4")


def orbit_terms() -> list:
    """The ten summands rho^i(T), kappa rho^i(T) for i = 1..5."""
    T = base_monomial()
    first = [s5_act(RHO ** i, T) for i in range(1, 6)]
    second = [s5_act(KAPPA * RHO ** i, T) for i in range(1, 6)]
    return first + second


def build_t() -> RationalFunction:
    terms = orbit_terms()
    acc = terms[0]
    for t in terms[1:]:
        acc = acc + t
    return acc


# ---------------------------------------------------------------------------
# Reduction to v = x1/x0 by Newton's identities
# ---------------------------------------------------------------------------

class _RF:
    """Univariate rational function over QQ in v, kept reduced."""

    __slots__ = ("n", "d")

    def __init__(self, n, d=(1,)):
        n, d = upoly_trim([Fraction(c) for c in n]), upoly_trim([Fraction(c) for c in d])
        if not d:
            raise ZeroDivisionError
        g = upoly_gcd(n, d) if n else [Fraction(1)]
        if len(g) > 1:
            n, d = upoly_divmod(n, g)[0], upoly_divmod(d, g)[0]
        lead = d[-1]
        self.n = [c / lead for c in n]
        self.d = [c / lead for c in d]

    def __add__(self, o):
        o = _lift(o)
        return _RF(upoly_add(upoly_mul(self.n, o.d), upoly_mul(o.n, self.d)), upoly_mul(self.d, o.d))

    __radd__ = __add__

    def __neg__(self):
        return _RF([-c for c in self.n], self.d)

    def __sub__(self, o):
        return self + (-_lift(o))

    def __rsub__(self, o):
        return _lift(o) - self

    def __mul__(self, o):
        o = _lift(o)
        return _RF(upoly_mul(self.n, o.n), upoly_mul(self.d, o.d))

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _lift(o)
        return _RF(upoly_mul(self.n, o.d), upoly_mul(self.d, o.n))

    def __pow__(self, k):
        out = _RF([1])
        for _ in range(k):
            out = out * self
        return out


def _lift(x):
    return x if isinstance(x, _RF) else _RF([x])


def newton_elementary(p1, p2, p3):
    """Elementary symmetric e1, e2, e3 of three quantities with power sums p1, p2, p3."""
    e1 = p1
    e2 = (e1 * p1 - p2) / 2
    e3 = (e2 * p1 - e1 * p2 + p3) / 3
    return e1, e2, e3


def power_sums_from_elementary(e1, e2, e3, upto: int) -> list:
    """[p1, ..., p_upto] for three quantities (Newton's identities, k >= 1)."""
    p = [None, e1, e1 * e1 - 2 * e2]
    p.append(e1 * p[2] - e2 * p[1] + 3 * e3)
    for k in range(4, upto + 1):
        p.append(e1 * p[k - 1] - e2 * p[k - 2] + e3 * p[k - 3])
    return p[1: upto + 1]


V_DENOMINATOR = upoly_mul(upoly_mul([0, 0, 0, 0, 1], [1, 4, 6, 4, 1]),
                          upoly_mul(upoly_mul([1, 0, 1], [1, 0, 1]), upoly_mul([1, 0, 1], [1, 0, 1])))


def remaining_elementary():
    """e1, e2, e3 of (x2, x3, x4) after x0 = 1, x1 = v on Bring's curve."""
    v = _RF([0, 1])
    return newton_elementary(-(1 + v), -(1 + v * v), -(1 + v ** 3))


def express_t_in_v():
    """Return (g, (4, 4, 4)) with t = -2 g(v) / (v^4 (1+v)^4 (1+v^2)^4).

    With x0 = 1 and x1 = v, t = 2 e5 sum_m x_m^-5.  The reciprocals of
    x2, x3, x4 have elementary symmetric values e2/e3, e1/e3, 1/e3, which
    gives their fifth power sum by Newton's identities.
    """
    v = _RF([0, 1])
    e1, e2, e3 = remaining_elementary()
    r1, r2, r3 = e2 / e3, e1 / e3, _RF([1]) / e3
    recip5 = power_sums_from_elementary(r1, r2, r3, 5)[4]
    t = 2 * v * e3 * (1 + _RF([1]) / v ** 5 + recip5)
    # t * den = -2 g
    scaled = t * _RF(V_DENOMINATOR)
    if len(scaled.d) != 1:
        raise ShapeMismatch(f"denominator of t is not v^4 (1+v)^4 (1+v^2)^4 up to unit: leftover {scaled.d}")
    g = [-c / 2 for c in scaled.n]
    return g, (4, 4, 4)


def t_from_v_formula(g) -> RationalFunction:
    """-2 G(x0, x1) / (x0^4 D(x0, x1)) with G, D the homogenizations of g and the v-denominator."""
    vars = BRING_VARS
    x0, x1 = MultiPoly.var(vars, "x0"), MultiPoly.var(vars, "x1")

    def homog(coeffs, degree):
        acc = MultiPoly(vars, {})
        for k, c in enumerate(coeffs):
            if c:
                acc = acc + x1 ** k * x0 ** (degree - k) * c
        return acc

    G = homog(g, 20)
    D = homog(V_DENOMINATOR, 16)
    return RationalFunction.make(G * (-2), D * x0 ** 4)


def affine_bring_basis(order=GREVLEX, pair_cap=None):
    """Gröbner basis of Bring's ideal with x0 = 1."""
    ring = BRING_VARS
    gens = [g.evaluate({"x0": MultiPoly.const(ring[1:], 1), **{v: MultiPoly.var(ring[1:], v) for v in ring[1:]}})
            for g in get_curve("bring").generators]
    return ring[1:], buchberger(gens, order, pair_cap=pair_cap)


def _dehomogenize(p: MultiPoly, ring) -> MultiPoly:
    return MultiPoly(ring, {e[1:]: c for e, c in p.terms.items()})


def agrees_modulo_bring(a: RationalFunction, b: RationalFunction, order=GREVLEX, pair_cap=None) -> bool:
    """a = b on Bring's curve, tested in the affine chart x0 = 1 (which misses no component)."""
    ring, G = affine_bring_basis(order, pair_cap)
    diff = _dehomogenize(a.num * b.den - b.num * a.den, ring)
    return not normal_form(diff, G, order)


def invariant_under(sigma: Permutation, f: RationalFunction, order=GREVLEX) -> bool:
    moved = s5_act(sigma, f)
    if moved == f:
        return True
    return agrees_modulo_bring(moved, f, order)


# ---------------------------------------------------------------------------
# Degree bookkeeping
# ---------------------------------------------------------------------------

ASSUMED_FIBER_FACTOR = 6


def degree_audit(g=None) -> CertReport:
    with stopwatch() as ms:
        if g is None:
            g, _ = express_t_in_v()
        g = upoly_trim(g)
        deg = len(g) - 1
        sqfree = is_squarefree(g)
        order = group_order([RHO, KAPPA])
        fiber = upoly_sub([-2 * c for c in g], V_DENOMINATOR)
        fiber_sqfree = is_squarefree(fiber)
        ok = deg == 20 and sqfree and deg * ASSUMED_FIBER_FACTOR == order == factorial(5)
    witness = {"deg_g": deg, "g_squarefree": sqfree, "fiber_factor_assumed": ASSUMED_FIBER_FACTOR,
               "product": deg * ASSUMED_FIBER_FACTOR, "group_order": order,
               "sample_fiber_t0_1_squarefree": fiber_sqfree}
    return CertReport("degree-audit", PASS if ok else FAIL, 0, "", witness, ms[0])
