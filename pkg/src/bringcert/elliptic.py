"""Weierstrass models: invariants, coordinate changes, and solving for isomorphisms.

Coordinate changes follow the usual convention
``x = u^2 x' + r,  y = u^3 y' + u^2 s x' + t``, taking the curve with
a-invariants ``a`` to the curve with invariants ``a'``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .exact import QQ, FieldElement, NumberField, common_field, field_of, sqrt_in_field


class SingularCurve(ArithmeticError):
    pass


class ExtensionRequired(ArithmeticError):
    def __init__(self, message: str, obstruction=None):
        super().__init__(message)
        self.obstruction = obstruction


def _coerce_all(values, field=None):
    K = field if field is not None else common_field(values)
    return K, [K(v) for v in values]


@dataclass(frozen=True)
class WeierstrassCurve:
    a1: object
    a2: object
    a3: object
    a4: object
    a6: object
    label: str = ""

    @classmethod
    def from_list(cls, coeffs, label: str = "", field=None) -> "WeierstrassCurve":
        _, vals = _coerce_all(list(coeffs), field)
        return cls(*vals, label=label)

    @property
    def ainvs(self) -> tuple:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def field(self):
        return common_field(self.ainvs)

    def base_change(self, K) -> "WeierstrassCurve":
        return WeierstrassCurve(*(K(a) for a in self.ainvs), label=self.label)

    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def c_invariants(self):
        b2, b4, b6, _ = self.b_invariants()
        c4 = b2 * b2 - 24 * b4
        c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
        return c4, c6

    def discriminant(self):
        b2, b4, b6, b8 = self.b_invariants()
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def j_invariant(self):
        disc = self.discriminant()
        if disc == 0:
            raise SingularCurve(f"curve {self.label or self.ainvs} is singular")
        c4, _ = self.c_invariants()
        return c4 ** 3 / disc if isinstance(disc, FieldElement) else Fraction(c4 ** 3) / disc

    def __eq__(self, other):
        if not isinstance(other, WeierstrassCurve):
            return NotImplemented
        K = common_field(self.ainvs + other.ainvs)
        return all(K(a) == K(b) for a, b in zip(self.ainvs, other.ainvs))

    def __hash__(self):
        return hash(tuple(str(a) for a in self.ainvs))

    def __str__(self):
        return f"[{', '.join(str(a) for a in self.ainvs)}]"


def invariants(E: WeierstrassCurve) -> dict:
    """b2, b4, b6, b8, c4, c6, discriminant and j of ``E``."""
    b2, b4, b6, b8 = E.b_invariants()
    c4, c6 = E.c_invariants()
    disc = E.discriminant()
    if disc == 0:
        raise SingularCurve(f"curve {E.label or E.ainvs} is singular")
    return {"b2": b2, "b4": b4, "b6": b6, "b8": b8, "c4": c4, "c6": c6,
            "discriminant": disc, "j": E.j_invariant()}


@dataclass(frozen=True)
class Transform:
    u: object
    r: object
    s: object
    t: object

    @property
    def field(self):
        return common_field((self.u, self.r, self.s, self.t))

    def inverse(self) -> "Transform":
        u, r, s, t = self.u, self.r, self.s, self.t
        ui = 1 / u if isinstance(u, FieldElement) else 1 / Fraction(u)
        return Transform(ui, -r * ui * ui, -s * ui, (r * s - t) * ui ** 3)

    def __iter__(self):
        return iter((self.u, self.r, self.s, self.t))


IDENTITY = Transform(Fraction(1), Fraction(0), Fraction(0), Fraction(0))


def transform_apply(E: WeierstrassCurve, T: Transform) -> WeierstrassCurve:
    K = common_field(E.ainvs + tuple(T))
    a1, a2, a3, a4, a6 = (K(a) for a in E.ainvs)
    u, r, s, t = (K(v) for v in T)
    if u == 0:
        raise ZeroDivisionError("transform with u = 0")
    ui = 1 / u
    n1 = a1 + 2 * s
    n2 = a2 - s * a1 + 3 * r - s * s
    n3 = a3 + r * a1 + 2 * t
    n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
    n6 = a6 + r * a4 + r * r * a2 + r ** 3 - t * a3 - t * t - r * t * a1
    return WeierstrassCurve(n1 * ui, n2 * ui ** 2, n3 * ui ** 3, n4 * ui ** 4, n6 * ui ** 6,
                            label=E.label and f"{E.label}*T")


class TransformList(list):
    """Solutions of an isomorphism problem plus how they were obtained.

    ``extension`` is the field actually used (None when no extension was
    adjoined); ``extension_poly`` its defining monic polynomial over the base
    field as a coefficient list; ``witness`` a short reason when empty.
    """

    def __init__(self, items=(), extension=None, extension_poly=None, witness=""):
        super().__init__(items)
        self.extension = extension
        self.extension_poly = extension_poly
        self.witness = witness


def _complete(E, E2, u, s, K):
    """Given u and s in K, recover r, t from the a2, a3 relations and check a4, a6."""
    a1, a2, a3, _, _ = (K(a) for a in E.ainvs)
    b1, b2, b3, _, _ = (K(a) for a in E2.ainvs)
    r = (u * u * b2 - a2 + s * a1 + s * s) / 3
    t = (u ** 3 * b3 - a3 - r * a1) / 2
    T = Transform(u, r, s, t)
    return T if transform_apply(E, T) == E2 else None


def _u_squared_candidates(E, E2, K):
    c4, c6 = (K(c) for c in E.c_invariants())
    d4, d6 = (K(c) for c in E2.c_invariants())
    if c4 != 0 and c6 != 0:
        return [(c6 * d4) / (c4 * d6)]
    if c6 == 0:
        # j = 1728: u^4 = c4/c4'
        root = sqrt_in_field(c4 / d4)
        if root is None:
            raise ExtensionRequired("u^4 = c4/c4' has no square root in the base field",
                                    obstruction=[-(c4 / d4), 0, 1])
        return [root, -root]
    # j = 0: u^6 = c6/c6'; only rational cube roots are searched
    ratio = c6 / d6
    if isinstance(ratio, FieldElement):
        if not ratio.is_rational():
            raise ExtensionRequired("cube root over a number field not supported",
                                    obstruction=[-ratio, 0, 0, 1])
        ratio = ratio.to_rational()
    cube = _rational_cube_root(Fraction(ratio))
    if cube is None:
        raise ExtensionRequired("u^6 = c6/c6' needs a cube root", obstruction=[-ratio, 0, 0, 1])
    return [K(cube)]


def _rational_cube_root(q: Fraction):
    def icbrt(n):
        sign = -1 if n < 0 else 1
        n = abs(n)
        r = round(n ** (1 / 3)) if n < 2 ** 52 else int(round(n ** (1 / 3)))
        for c in (r - 1, r, r + 1):
            if c >= 0 and c ** 3 == n:
                return sign * c
        return None

    a, b = icbrt(q.numerator), icbrt(q.denominator)
    return None if a is None or b is None else Fraction(a, b)


def transform_solve(E: WeierstrassCurve, E2: WeierstrassCurve, ext_name: str = "s") -> TransformList:
    """All (u, r, s, t) with ``transform_apply(E, T) == E2``.

    Works over the common field K of the two curves; when u needs a square
    root not in K, one quadratic extension of K is built.  If a1' != 0 the
    extension adjoins ``s`` through ``s^2 + a1 s + (a1^2 - u^2 a1'^2)/4``,
    otherwise it adjoins ``u`` through ``u^2 - d``.
    """
    K = common_field(E.ainvs + E2.ainvs)
    E, E2 = E.base_change(K) if K is not QQ else E, E2.base_change(K) if K is not QQ else E2
    jE, jE2 = E.j_invariant(), E2.j_invariant()
    if jE != jE2:
        return TransformList(witness=f"j-invariants differ: {jE} != {jE2}")
    a1 = K(E.a1)
    b1 = K(E2.a1)
    found = []
    ext = None
    ext_poly = None
    for d in _u_squared_candidates(E, E2, K):
        root = sqrt_in_field(d)
        if root is not None:
            for u in (root, -root):
                s = (u * b1 - a1) / 2
                T = _complete(E, E2, K(u), K(s), K)
                if T is not None and T not in found:
                    found.append(T)
            continue
        if b1 != 0:
            poly = [(a1 * a1 - d * b1 * b1) / 4, a1, K(1)]
            L = NumberField(f"{getattr(K, 'name', 'QQ')}[{ext_name}]", poly, base=K, var=ext_name)
            s = L.gen()
            roots = [s, -s - a1]
            us = [(2 * r + a1) / b1 for r in roots]
        else:
            poly = [-d, K(0), K(1)]
            L = NumberField(f"{getattr(K, 'name', 'QQ')}[u]", poly, base=K, var="u")
            u0 = L.gen()
            us = [u0, -u0]
            roots = [L(-a1 / 2)] * 2
        for u, s in zip(us, roots):
            T = _complete(E.base_change(L), E2.base_change(L), u, s, L)
            if T is not None:
                found.append(T)
        ext, ext_poly = L, poly
    if ext is not None and any(field_of(T.u) is not ext for T in found):
        raise ExtensionRequired("mixed solution fields")
    return TransformList(found, extension=ext, extension_poly=ext_poly,
                         witness="" if found else "no solution within one quadratic extension")


# ---------------------------------------------------------------------------
# Curve data files: one curve per line, "label: a1,a2,a3,a4,a6"
# ---------------------------------------------------------------------------

def parse_curve_line(line: str, field=QQ) -> WeierstrassCurve:
    from .poly import parse_field_element

    label, _, rest = line.partition(":")
    parts = [p.strip() for p in rest.split(",")]
    if len(parts) != 5:
        raise ValueError(f"expected five a-invariants in {line!r}")
    vals = [parse_field_element(p, field) for p in parts]
    return WeierstrassCurve.from_list(vals, label=label.strip(), field=field)


def load_curves(path, field=QQ) -> dict:
    curves = {}
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            E = parse_curve_line(line, field)
            curves[E.label] = E
    return curves


def data_path(name: str) -> Path:
    return Path(__file__).with_name("data") / name
