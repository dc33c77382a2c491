"""Exact arithmetic: rationals, number fields as quotient rings, dense linear algebra.

Rationals are :class:`fractions.Fraction`.  A number field is a quotient ring
``base[a]/(m(a))`` for a monic modulus ``m`` over a base field, which is either
:data:`QQ` or another :class:`NumberField`, so towers such as
``Q(sqrt5)[s]/(s^2+s+eps^2)`` are plain nested quotient rings.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence


class NonInvertible(ArithmeticError):
    """Raised when an element shares a factor with a (reducible) modulus."""


class Singular(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# Dense univariate polynomials over a field, coefficient lists low -> high.
# Coefficients are anything supporting + - * / and comparison with 0.
# ---------------------------------------------------------------------------

def upoly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def upoly_add(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
    return upoly_trim(out)


def upoly_sub(a, b):
    return upoly_add(a, [-c for c in b])


def upoly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return upoly_trim(out)


def upoly_divmod(a, b):
    a = upoly_trim(a)
    b = upoly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [0] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lead = b[-1]
    inv = 1 / lead if not isinstance(lead, int) else Fraction(1, lead)
    while len(r) >= len(b) and r:
        c = r[-1] * inv
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[k + i] -= c * y
        r = upoly_trim(r)
    return upoly_trim(q), r


def upoly_monic(a):
    a = upoly_trim(a)
    if not a:
        return a
    lead = a[-1]
    inv = 1 / lead if not isinstance(lead, int) else Fraction(1, lead)
    return [c * inv for c in a]


def upoly_gcd(a, b):
    """Monic gcd."""
    a, b = upoly_trim(a), upoly_trim(b)
    while b:
        a, b = b, upoly_divmod(a, b)[1]
    return upoly_monic(a)


def upoly_xgcd(a, b):
    """Return (g, u, v) with u*a + v*b = g, g monic."""
    r0, r1 = upoly_trim(a), upoly_trim(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = upoly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, upoly_sub(s0, upoly_mul(q, s1))
        t0, t1 = t1, upoly_sub(t0, upoly_mul(q, t1))
    if not r0:
        return [], [], []
    inv = 1 / r0[-1] if not isinstance(r0[-1], int) else Fraction(1, r0[-1])
    return [c * inv for c in r0], [c * inv for c in s0], [c * inv for c in t0]


def upoly_derivative(a):
    return upoly_trim([i * c for i, c in enumerate(a)][1:])


def upoly_eval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def is_squarefree(a) -> bool:
    """True iff gcd(a, a') is constant."""
    return len(upoly_gcd(a, upoly_derivative(a))) <= 1


# ---------------------------------------------------------------------------
# Fields
# ---------------------------------------------------------------------------

class RationalField:
    """The field Q; elements are Fractions (ints are accepted on input)."""

    name = "QQ"
    degree = 1
    base = None

    def __call__(self, x) -> Fraction:
        if isinstance(x, FieldElement):
            raise TypeError(f"cannot coerce {x!r} into QQ")
        if isinstance(x, str):
            return Fraction(x.replace(" ", ""))
        return Fraction(x)

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def contains(self, x) -> bool:
        return isinstance(x, (int, Fraction))

    def __repr__(self):
        return "QQ"


QQ = RationalField()


class NumberField:
    """``base[var]/(modulus)`` with ``modulus`` monic, coefficients low -> high.

    Irreducibility is not checked.  A reducible modulus shows up later as
    :class:`NonInvertible` when inverting a zero divisor.
    """

    def __init__(self, name: str, modulus: Sequence, base=QQ, var: str = "a"):
        mod = upoly_trim([base(c) for c in modulus])
        if len(mod) < 2:
            raise ValueError("modulus must have positive degree")
        if mod[-1] != 1:
            raise ValueError("modulus must be monic")
        self.name = name
        self.base = base
        self.var = var
        self.modulus = tuple(mod)
        self.degree = len(mod) - 1

    @property
    def absolute_degree(self) -> int:
        d, f = 1, self
        while f is not QQ:
            d *= f.degree
            f = f.base
        return d

    def __call__(self, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            if x.field is self:
                return x
            # lift from a subfield in the tower
            return FieldElement(self, (self.base(x),) + (self.base.zero,) * (self.degree - 1))
        if isinstance(x, (list, tuple)):
            coords = [self.base(c) for c in x]
            if len(coords) > self.degree:
                return self.from_poly(coords)
            coords += [self.base.zero] * (self.degree - len(coords))
            return FieldElement(self, tuple(coords))
        if isinstance(x, str):
            x = Fraction(x.replace(" ", ""))
        return FieldElement(self, (self.base(x),) + (self.base.zero,) * (self.degree - 1))

    def from_poly(self, coeffs) -> "FieldElement":
        _, r = upoly_divmod([self.base(c) for c in coeffs], list(self.modulus))
        r = r + [self.base.zero] * (self.degree - len(r))
        return FieldElement(self, tuple(self.base(c) for c in r))

    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return self(-self.modulus[0])
        return self([0, 1])

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def contains(self, x) -> bool:
        return isinstance(x, FieldElement) and x.field is self

    def __repr__(self):
        return f"NumberField({self.name})"


class FieldElement:
    """Element of a :class:`NumberField`, stored as its reduced coordinate vector."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: tuple):
        self.field = field
        self.coords = coords

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is self.field:
                return other
            return self.field(other)
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(a * other for a in self.coords))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.field.from_poly(upoly_mul(list(self.coords), list(other.coords)))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self == 0:
            raise ZeroDivisionError("inverse of zero in " + self.field.name)
        g, u, _ = upoly_xgcd(upoly_trim(self.coords), list(self.field.modulus))
        if len(g) != 1:
            raise NonInvertible(
                f"element shares factor {g} with modulus of {self.field.name}"
            )
        return self.field.from_poly(u)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.field.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, FieldElement) and other.field is self.field:
            return self.coords == other.coords
        if isinstance(other, (int, Fraction, FieldElement)):
            try:
                return self.coords == self.field(other).coords
            except TypeError:
                return False
        return NotImplemented

    def __hash__(self):
        if all(c == 0 for c in self.coords[1:]):
            return hash(self.coords[0])
        return hash((self.field.name, self.coords))

    def __bool__(self):
        return any(c != 0 for c in self.coords)

    def is_rational(self) -> bool:
        if any(c != 0 for c in self.coords[1:]):
            return False
        c = self.coords[0]
        return c.is_rational() if isinstance(c, FieldElement) else True

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        c = self.coords[0]
        return c.to_rational() if isinstance(c, FieldElement) else Fraction(c)

    def __repr__(self):
        return str(self)

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            cs = f"({c})" if isinstance(c, FieldElement) or i else str(c)
            if i == 0:
                terms.append(cs)
            elif i == 1:
                terms.append(f"{cs}*{self.field.var}")
            else:
                terms.append(f"{cs}*{self.field.var}^{i}")
        return " + ".join(terms) if terms else "0"


def field_inverse(e):
    if isinstance(e, FieldElement):
        return e.inverse()
    if e == 0:
        raise ZeroDivisionError("inverse of zero")
    return 1 / Fraction(e)


def field_of(x):
    return x.field if isinstance(x, FieldElement) else QQ


def common_field(values):
    """The largest field among ``values`` (assumes they lie in one tower)."""
    best = QQ
    for v in values:
        f = field_of(v)
        if f is not QQ and (best is QQ or f.absolute_degree > best.absolute_degree):
            best = f
    return best


# Standard fields.
QQi = NumberField("Q(i)", [1, 0, 1], var="i")
QQsqrt5 = NumberField("Q(sqrt5)", [-5, 0, 1], var="sqrt5")
QQzeta5 = NumberField("Q(zeta5)", [1, 1, 1, 1, 1], var="zeta5")
SQRT5 = QQsqrt5.gen()
EPS = (1 + SQRT5) / 2


def sqrt_in_field(d):
    """Return a square root of ``d`` lying in its own field, or None.

    Decided for QQ and for quadratic fields over QQ; for anything larger the
    answer is only searched among elements of the base field.
    """
    if not isinstance(d, FieldElement):
        d = Fraction(d)
        if d < 0:
            return None
        n, m = _isqrt_exact(d.numerator), _isqrt_exact(d.denominator)
        if n is None or m is None:
            return None
        return Fraction(n, m)
    K = d.field
    if d == 0:
        return K.zero
    if K.degree == 2 and K.base is QQ and K.modulus[1] == 0:
        # K = Q(sqrt D); (a + b r)^2 = a^2 + D b^2 + 2ab r
        D = -K.modulus[0]
        d0, d1 = d.coords
        r = K.gen()
        if d1 == 0:
            a = sqrt_in_field(d0)
            if a is not None:
                return K(a)
            b = sqrt_in_field(d0 / D)
            return None if b is None else b * r
        # D b^4 - d0 b^2 + d1^2/4 = 0, a quadratic in b^2
        disc = d0 * d0 - D * d1 * d1
        root = sqrt_in_field(disc)
        if root is None:
            return None
        for b2 in ((d0 + root) / (2 * D), (d0 - root) / (2 * D)):
            b = sqrt_in_field(b2)
            if b:
                a = d1 / (2 * b)
                cand = a + b * r
                if cand * cand == d:
                    return cand
        return None
    if d.is_rational():
        root = sqrt_in_field(d.to_rational())
        return None if root is None else K(root)
    return None


def _isqrt_exact(n: int):
    from math import isqrt

    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


# ---------------------------------------------------------------------------
# Dense matrices
# ---------------------------------------------------------------------------

class ExactMatrix:
    """Row-major dense matrix with exact entries over a single field."""

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged matrix")
        self.field = common_field(x for r in self.rows for x in r)
        K = self.field
        self.rows = [[K(x) for x in r] for r in self.rows]

    @classmethod
    def identity(cls, n: int, field=QQ) -> "ExactMatrix":
        return cls([[field(int(i == j)) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, ExactMatrix) and self.rows == other.rows

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        cols = list(zip(*other.rows))
        return ExactMatrix([[sum((a * b for a, b in zip(r, c)), self.field.zero) for c in cols]
                            for r in self.rows])

    def apply(self, v: Sequence) -> list:
        return [sum((a * b for a, b in zip(r, v)), self.field.zero) for r in self.rows]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix([list(c) for c in zip(*self.rows)]) if self.rows else ExactMatrix([])

    def __repr__(self):
        return f"ExactMatrix({self.rows!r})"


def row_echelon(rows, ncols=None):
    """Reduced row echelon form, in place on a copy.  Returns (rref rows, pivots)."""
    M = [list(r) for r in rows]
    if ncols is None:
        ncols = len(M[0]) if M else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = field_inverse(M[r][c])
        M[r] = [x * inv for x in M[r]]
        pivot_row = M[r]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], pivot_row)]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(M: ExactMatrix) -> int:
    return len(row_echelon(M.rows, M.ncols)[1])


def _clear_rational(vec):
    dens = [x.denominator for x in vec if x != 0]
    m = lcm(*dens) if dens else 1
    ints = [int(x * m) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [Fraction(x // g) for x in ints] if g else ints


def matrix_nullspace(M: ExactMatrix) -> list:
    """Basis of the right nullspace, one vector per free column in column order.

    Each vector has first nonzero entry positive (it starts out as 1) and, over
    QQ, is scaled to coprime integers.
    """
    n = M.ncols
    K = M.field
    rref, pivots = row_echelon(M.rows, n)
    pivset = set(pivots)
    basis = []
    for free in range(n):
        if free in pivset:
            continue
        v = [K.zero] * n
        v[free] = K.one
        for row, pc in zip(rref, pivots):
            v[pc] = -row[free]
        first = next(x for x in v if x != 0)
        v = [x / first for x in v]
        if K is QQ:
            v = _clear_rational(v)
        basis.append(v)
    return basis


def matrix_inverse(M: ExactMatrix) -> ExactMatrix:
    n = M.nrows
    if n != M.ncols:
        raise ValueError("matrix is not square")
    K = M.field
    aug = [r + [K(int(i == j)) for j in range(n)] for i, r in enumerate(M.rows)]
    rref, pivots = row_echelon(aug, n)
    if pivots != list(range(n)):
        raise Singular("matrix is singular")
    return ExactMatrix([r[n:] for r in rref])


def matrix_solve(M: ExactMatrix, b: Sequence):
    """Return (particular solution or None, nullspace basis) for M x = b."""
    n = M.ncols
    K = M.field
    aug = [r + [K(x)] for r, x in zip(M.rows, b)]
    rref, pivots = row_echelon(aug, n + 1)
    if n in pivots:
        return None, matrix_nullspace(M)
    x = [K.zero] * n
    for row, pc in zip(rref, pivots):
        x[pc] = row[n]
    return x, matrix_nullspace(M)


# ---------------------------------------------------------------------------
# Multi-modular solving of overdetermined rational systems
# ---------------------------------------------------------------------------

PRIMES = (
    2305843009213693951, 2305843009213693921, 2305843009213693907,
    2305843009213693723, 2305843009213693693, 2305843009213693669,
    2305843009213693613, 2305843009213693583, 2305843009213693561,
    2305843009213693541, 2305843009213693487, 2305843009213693433,
)


class NoSolution(ArithmeticError):
    pass


class NonUnique(ArithmeticError):
    def __init__(self, message: str, kernel_dimension: int):
        super().__init__(message)
        self.kernel_dimension = kernel_dimension


def _mod(x, p: int) -> int:
    if isinstance(x, int):
        return x % p
    x = Fraction(x)
    if x.denominator % p == 0:
        raise ZeroDivisionError("bad prime")
    return x.numerator * pow(x.denominator, -1, p) % p


def _echelon_mod(rows: list, ncols: int, p: int):
    """Gauss-Jordan mod p on an augmented matrix; returns (rows, pivot cols, pivot row ids)."""
    M = [list(r) for r in rows]
    ids = list(range(len(M)))
    pivots = []
    r = 0
    for c in range(ncols):
        k = next((i for i in range(r, len(M)) if M[i][c]), None)
        if k is None:
            continue
        M[r], M[k] = M[k], M[r]
        ids[r], ids[k] = ids[k], ids[r]
        inv = pow(M[r][c], -1, p)
        pr = [a * inv % p for a in M[r]]
        M[r] = pr
        for i in range(len(M)):
            if i != r:
                f = M[i][c]
                if f:
                    M[i] = [(a - f * b) % p for a, b in zip(M[i], pr)]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots, ids[:r]


def probe_mod_p(rows, rhs, p: int = PRIMES[0]) -> dict:
    """Rank and consistency of ``rows x = rhs`` modulo ``p``.

    A full rank mod p proves full rank over QQ.  Inconsistency mod p is
    strong evidence, not proof, of inconsistency over QQ.
    """
    n = len(rows[0])
    aug = [[_mod(a, p) for a in r] + [_mod(b, p)] for r, b in zip(rows, rhs)]
    M, pivots, ids = _echelon_mod(aug, n + 1, p)
    consistent = n not in pivots
    rank_a = len([c for c in pivots if c < n])
    return {"rank": rank_a, "unknowns": n, "consistent": consistent,
            "pivot_rows": [i for i, c in zip(ids, pivots) if c < n],
            "solution": ([row[n] for row in M] if consistent and rank_a == n else None)}


def rational_reconstruct(a: int, m: int):
    """Return Fraction n/d with n/d = a mod m and |n|, d < sqrt(m/2), or None."""
    from math import isqrt

    bound = isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def solve_multimodular(rows, rhs, max_primes: int = len(PRIMES)) -> list:
    """Unique rational solution of an overdetermined consistent system.

    Uses the first prime to certify full column rank and select a square
    subsystem, then CRT plus rational reconstruction until two successive
    reconstructions agree, and finally checks every original equation exactly.
    """
    n = len(rows[0])
    probe = probe_mod_p(rows, rhs, PRIMES[0])
    if not probe["consistent"]:
        again = probe_mod_p(rows, rhs, PRIMES[1])
        if not again["consistent"]:
            raise NoSolution("system inconsistent modulo two primes")
        probe = again
    if probe["rank"] < n:
        raise NonUnique("kernel is nontrivial", n - probe["rank"])
    sub = probe["pivot_rows"]
    srows = [rows[i] for i in sub]
    srhs = [rhs[i] for i in sub]
    residues = probe["solution"]
    modulus = PRIMES[0]
    previous = None
    for p in PRIMES[1:max_primes]:
        aug = [[_mod(a, p) for a in r] + [_mod(b, p)] for r, b in zip(srows, srhs)]
        M, pivots, _ = _echelon_mod(aug, n + 1, p)
        if pivots != list(range(n)):
            continue  # unlucky prime
        sol_p = [row[n] for row in M]
        # CRT combine
        inv = pow(modulus, -1, p)
        residues = [r + modulus * ((s - r) * inv % p) for r, s in zip(residues, sol_p)]
        modulus *= p
        cand = [rational_reconstruct(r, modulus) for r in residues]
        if None not in cand and cand == previous:
            break
        previous = cand if None not in cand else None
    else:
        raise NoSolution("rational reconstruction did not stabilize")
    for r, b in zip(rows, rhs):
        if sum(Fraction(a) * x for a, x in zip(r, cand) if a) != b:
            raise NoSolution("reconstructed solution fails an equation")
    return cand
