"""Sparse multivariate polynomials, monomial orders and the polynomial text grammar."""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .exact import QQ, FieldElement, NumberField, common_field


class MonomialOrder:
    """A monomial order on exponent tuples; ``key(e)`` grows with the monomial.

    ``kind`` is ``"lex"``, ``"grevlex"`` or ``"block"``.  A block order compares
    the first ``block`` exponents by lex, then the rest by grevlex, which makes
    it an elimination order for the leading variables.
    """

    def __init__(self, kind: str = "grevlex", block: int = 0):
        if kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown monomial order {kind!r}")
        if kind == "block" and block <= 0:
            raise ValueError("block order needs a positive block size")
        self.kind = kind
        self.block = block

    def key(self, e: tuple):
        if self.kind == "lex":
            return e
        if self.kind == "grevlex":
            return (sum(e),) + tuple(-x for x in reversed(e))
        head, tail = e[: self.block], e[self.block:]
        return head + (sum(tail),) + tuple(-x for x in reversed(tail))

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.block) == (other.kind, other.block)

    def __hash__(self):
        return hash((self.kind, self.block))

    def __repr__(self):
        return f"block({self.block})" if self.kind == "block" else self.kind


LEX = MonomialOrder("lex")
GREVLEX = MonomialOrder("grevlex")


def block_order(n_eliminated: int) -> MonomialOrder:
    return MonomialOrder("block", n_eliminated)


def _norm_coeff(c):
    if isinstance(c, int):
        return Fraction(c)
    return c


class MultiPoly:
    """Polynomial over QQ or a :class:`NumberField` in an ordered variable list.

    ``terms`` maps exponent tuples to nonzero coefficients.  Instances are
    treated as immutable.
    """

    __slots__ = ("vars", "terms", "field")

    def __init__(self, vars: Sequence[str], terms: Mapping[tuple, object] | None = None, field=None):
        self.vars = tuple(vars)
        terms = {} if terms is None else terms
        clean = {}
        for e, c in terms.items():
            if c != 0:
                clean[tuple(e)] = _norm_coeff(c)
        self.terms = clean
        self.field = field if field is not None else common_field(clean.values())

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, vars, c, field=None) -> "MultiPoly":
        return cls(vars, {(0,) * len(vars): c}, field)

    @classmethod
    def var(cls, vars, name: str, field=None) -> "MultiPoly":
        vars = tuple(vars)
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls(vars, {tuple(e): 1}, field)

    @classmethod
    def gens(cls, vars, field=None) -> tuple:
        return tuple(cls.var(vars, v, field) for v in vars)

    @classmethod
    def from_univariate(cls, vars, name: str, coeffs: Sequence) -> "MultiPoly":
        vars = tuple(vars)
        i = vars.index(name)
        terms = {}
        for k, c in enumerate(coeffs):
            e = [0] * len(vars)
            e[i] = k
            terms[tuple(e)] = c
        return cls(vars, terms)

    # -- basic queries ------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, name: str) -> int:
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def variables_used(self) -> set:
        used = set()
        for e in self.terms:
            used.update(v for v, x in zip(self.vars, e) if x)
        return used

    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> tuple:
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder = GREVLEX):
        return self.terms[self.leading_monomial(order)]

    def coefficient(self, exps: tuple):
        return self.terms.get(tuple(exps), 0)

    def univariate_coeffs(self, name: str) -> list:
        """Coefficient list (low -> high) of a polynomial in the single variable ``name``."""
        i = self.vars.index(name)
        out = [0] * (self.degree(name) + 1)
        for e, c in self.terms.items():
            if any(x for k, x in enumerate(e) if k != i):
                raise ValueError(f"polynomial is not univariate in {name}")
            out[e[i]] = c
        return out

    # -- arithmetic ---------------------------------------------------
    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.vars != self.vars:
                raise ValueError(f"variable mismatch {self.vars} vs {other.vars}")
            return other
        return MultiPoly.const(self.vars, other)

    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return MultiPoly(self.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()}, self.field)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            if other == 0:
                return MultiPoly(self.vars)
            return MultiPoly(self.vars, {e: c * other for e, c in self.terms.items()})
        other = self._lift(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return MultiPoly(self.vars, terms)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, MultiPoly):
            raise TypeError("use exact_divide for polynomial division")
        inv = 1 / (Fraction(c) if isinstance(c, int) else c)
        return self * inv

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_monomial(self, e: tuple, c=1) -> "MultiPoly":
        return MultiPoly(self.vars, {tuple(a + b for a, b in zip(k, e)): v * c
                                     for k, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction, FieldElement)):
            return self.terms == MultiPoly.const(self.vars, other).terms
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # -- scaling and normal forms ------------------------------------
    def monic(self, order: MonomialOrder = GREVLEX) -> "MultiPoly":
        if not self.terms:
            return self
        lc = self.leading_coefficient(order)
        return self / lc

    def primitive(self) -> "MultiPoly":
        """Scale a QQ-polynomial to coprime integer coefficients (sign kept)."""
        if not self.terms or self.field is not QQ:
            return self
        den = lcm(*(Fraction(c).denominator for c in self.terms.values()))
        ints = {e: int(c * den) for e, c in self.terms.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
        return MultiPoly(self.vars, {e: Fraction(v // g) for e, v in ints.items()})

    def normalize_trailing(self, order: MonomialOrder = GREVLEX) -> "MultiPoly":
        """Scale so the smallest term under ``order`` has coefficient 1."""
        if not self.terms:
            return self
        low = min(self.terms, key=order.key)
        return self / self.terms[low]

    def normalize_leading(self, order: MonomialOrder = GREVLEX) -> "MultiPoly":
        """Scale to coprime integers with positive leading coefficient (QQ only)."""
        p = self.primitive()
        if p.terms and p.leading_coefficient(order) < 0:
            p = -p
        return p

    # -- variables and substitution ----------------------------------
    def rename(self, new_vars: Sequence[str]) -> "MultiPoly":
        """Same exponents, different variable names (positional)."""
        return MultiPoly(tuple(new_vars), self.terms, self.field)

    def change_ring(self, new_vars: Sequence[str]) -> "MultiPoly":
        """Re-express in a variable list containing every variable used."""
        new_vars = tuple(new_vars)
        idx = []
        for v, col in zip(self.vars, zip(*self.terms) if self.terms else [()] * len(self.vars)):
            if v in new_vars:
                idx.append(new_vars.index(v))
            elif any(col):
                raise ValueError(f"variable {v} not in target ring")
            else:
                idx.append(None)
        terms = {}
        for e, c in self.terms.items():
            ne = [0] * len(new_vars)
            for x, i in zip(e, idx):
                if i is not None:
                    ne[i] = x
            terms[tuple(ne)] = c
        return MultiPoly(new_vars, terms, self.field)

    def evaluate(self, values: Mapping[str, object] | Sequence, one=None):
        """Evaluate with arbitrary ring elements (numbers, series, polynomials).

        Powers of every variable are computed once and reused across terms.
        """
        if isinstance(values, Mapping):
            vals = [values[v] for v in self.vars]
        else:
            vals = list(values)
        degs = [max((e[i] for e in self.terms), default=0) for i in range(len(self.vars))]
        powers = []
        for v, d in zip(vals, degs):
            pw = [None] * (d + 1)
            if d >= 1:
                pw[1] = v
            for k in range(2, d + 1):
                pw[k] = pw[k - 1] * v
            powers.append(pw)
        acc = None
        for e, c in self.sorted_terms(GREVLEX):
            term = None
            for i, x in enumerate(e):
                if x:
                    term = powers[i][x] if term is None else term * powers[i][x]
            if term is None:
                term = c if one is None else one * c
            elif c != 1:
                term = term * c
            acc = term if acc is None else acc + term
        if acc is None:
            return 0 if one is None else one * 0
        return acc

    def subs(self, mapping: Mapping[str, "MultiPoly"], target_vars: Sequence[str] | None = None) -> "MultiPoly":
        """Substitute polynomials for some variables; others stay."""
        if target_vars is None:
            target_vars = next(iter(mapping.values())).vars if mapping else self.vars
        target_vars = tuple(target_vars)
        vals = []
        for v in self.vars:
            if v in mapping:
                vals.append(mapping[v])
            else:
                vals.append(MultiPoly.var(target_vars, v))
        one = MultiPoly.const(target_vars, 1)
        out = self.evaluate(vals, one=one)
        return out if isinstance(out, MultiPoly) else MultiPoly.const(target_vars, out)

    def derivative(self, name: str) -> "MultiPoly":
        i = self.vars.index(name)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                terms[tuple(ne)] = c * e[i]
        return MultiPoly(self.vars, terms)

    def homogenize(self, name: str) -> "MultiPoly":
        """Homogenize with the (already present) variable ``name``."""
        i = self.vars.index(name)
        d = self.total_degree()
        terms = {}
        for e, c in self.terms.items():
            ne = list(e)
            ne[i] += d - sum(e)
            terms[tuple(ne)] = c
        return MultiPoly(self.vars, terms)

    # -- printing -----------------------------------------------------
    def to_string(self, order: MonomialOrder = GREVLEX) -> str:
        return format_poly(self, order)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({format_poly(self)!r}, vars={self.vars})"


def exact_divide(a: MultiPoly, b: MultiPoly, order: MonomialOrder = GREVLEX) -> MultiPoly:
    """Quotient of an exact division; raises ValueError if ``b`` does not divide ``a``."""
    q_terms: dict = {}
    r = dict(a.terms)
    lm = b.leading_monomial(order)
    lc = b.terms[lm]
    while r:
        m = max(r, key=order.key)
        if any(x < y for x, y in zip(m, lm)):
            raise ValueError("division is not exact")
        qe = tuple(x - y for x, y in zip(m, lm))
        qc = r[m] / lc
        q_terms[qe] = qc
        for e, c in b.terms.items():
            k = tuple(x + y for x, y in zip(e, qe))
            v = r.get(k, 0) - qc * c
            if v == 0:
                r.pop(k, None)
            else:
                r[k] = v
    return MultiPoly(a.vars, q_terms)


# ---------------------------------------------------------------------------
# Text grammar
# ---------------------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, text: str, pos: int, expected: Iterable[str]):
        self.text = text
        self.pos = pos
        self.expected = sorted(set(expected))
        super().__init__(f"parse error at position {pos} in {text!r}: expected one of {self.expected}")


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(text, start, ["number", "identifier", "operator"])
        start = m.start(m.lastgroup)
        toks.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, vars: Sequence[str], field):
        self.text = text
        self.vars = tuple(vars)
        self.field = field
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, expected):
        raise ParseError(self.text, self.peek()[2], expected)

    def parse(self) -> MultiPoly:
        p = self.expr()
        if self.peek()[0] != "end":
            self.fail(["+", "-", "*", "end of input"])
        return p

    def expr(self) -> MultiPoly:
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term() * sign
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> MultiPoly:
        acc = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.factor()
            elif kind in ("id", "num") or (kind == "op" and val == "("):
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> MultiPoly:
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            num = int(val)
            if self.peek()[1] == "/" and self.peek()[0] == "op":
                self.take()
                k2, v2, _ = self.peek()
                if k2 != "num":
                    self.fail(["integer denominator"])
                self.take()
                if int(v2) == 0:
                    raise ParseError(self.text, pos, ["nonzero denominator"])
                return MultiPoly.const(self.vars, Fraction(num, int(v2)))
            return MultiPoly.const(self.vars, num)
        if kind == "id":
            self.take()
            if val not in self.vars:
                raise ParseError(self.text, pos, [f"variable in {list(self.vars)}"])
            base = MultiPoly.var(self.vars, val)
            return self._power(base)
        if kind == "op" and val == "(":
            self.take()
            inner = self.expr()
            if self.peek()[1] != ")":
                self.fail([")"])
            self.take()
            return self._power(inner)
        self.fail(["number", "variable", "("])

    def _power(self, base: MultiPoly) -> MultiPoly:
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            k, v, _ = self.peek()
            if k != "num":
                self.fail(["integer exponent"])
            self.take()
            return base ** int(v)
        return base


def parse_poly(text: str, vars: Sequence[str], field=QQ) -> MultiPoly:
    """Parse ``text`` in the polynomial grammar over QQ, e.g. ``"1/2*s - 3"``."""
    p = _Parser(text, vars, field).parse()
    if field is not QQ:
        p = MultiPoly(p.vars, {e: field(c) for e, c in p.terms.items()}, field)
    return p


def _field_generators(field) -> list:
    gens = []
    f = field
    while isinstance(f, NumberField):
        gens.append((f.var, f))
        f = f.base
    return gens


def parse_field_element(text: str, field):
    """Parse a field element written as a polynomial in the tower's generator names."""
    if field is QQ:
        p = parse_poly(text, ())
        return p.terms.get((), Fraction(0))
    gens = _field_generators(field)
    names = [g for g, _ in gens]
    p = parse_poly(text, names)
    values = [f.gen() for _, f in gens]
    out = p.evaluate(values)
    return field(out)


def _format_coeff(c) -> str:
    if isinstance(c, FieldElement):
        return f"({c})"
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: MultiPoly, order: MonomialOrder = GREVLEX) -> str:
    if not p.terms:
        return "0"
    parts = []
    for e, c in p.sorted_terms(order):
        mon = "*".join(
            v if x == 1 else f"{v}^{x}" for v, x in zip(p.vars, e) if x
        )
        neg = not isinstance(c, FieldElement) and c < 0
        a = -c if neg else c
        if mon:
            cs = "" if a == 1 else _format_coeff(a) + "*"
            body = cs + mon
        else:
            body = _format_coeff(a)
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)
