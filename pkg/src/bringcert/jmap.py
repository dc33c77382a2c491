"""Re-deriving the j-map on the level-50 model and assembling the Belyi function.

On ``t^2 = s^6 - 4s^5 - 10s^3 - 4s + 1`` the modular j-function is written as

    j = (A(s) + B(s) t) / (2 s^25 (s^4 - s^3 + s^2 - s + 1)^2).

The coefficients of A and B are found by exact linear algebra on
q-expansions: s(q), t(q) come from the cusp forms through the certified
Belyi arguments, and ``j * denominator(s) = A(s) + B(s) t`` is imposed
coefficient by coefficient.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from .curves import CERTIFIED_ARGS, DISPLAYED_ARGS, RationalMap, XB_VARS, get_curve
from .exact import NonUnique, NoSolution, probe_mod_p, solve_multimodular, upoly_trim
from .poly import MultiPoly, format_poly, parse_poly
from .report import FAIL, PASS, CertReport, stopwatch
from .series import InsufficientPrecision, LaurentSeries, cuspform_basis, j_series

log = logging.getLogger(__name__)

# 2 s^25 (s^4 - s^3 + s^2 - s + 1)^2, low -> high
_QUARTIC = [1, -1, 1, -1, 1]
DENOMINATOR = [0] * 25 + [2 * c for c in
                          upoly_trim([sum(_QUARTIC[i] * _QUARTIC[k - i] for i in range(5) if 0 <= k - i < 5)
                                      for k in range(9)])]

DEFAULT_BOUNDS = (35, 30)
ESCALATION_STEP = 5
ESCALATION_CAP = 100
PREC_MARGIN = 40


@dataclass(frozen=True)
class JMapData:
    A: tuple  # coefficients low -> high
    B: tuple

    @property
    def degrees(self) -> tuple:
        return len(self.A) - 1, len(self.B) - 1

    def poly(self, which: str) -> MultiPoly:
        return MultiPoly.from_univariate(("s",), "s", self.A if which == "A" else self.B)

    def scaled(self, c) -> "JMapData":
        return JMapData(tuple(a * c for a in self.A), tuple(b * c for b in self.B))

    def to_text(self) -> str:
        return f"A = {format_poly(self.poly('A'))}\nB = {format_poly(self.poly('B'))}\n"

    @classmethod
    def from_text(cls, text: str) -> "JMapData":
        found = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            name, sep, body = line.partition("=")
            name = name.strip()
            if not sep or name not in ("A", "B"):
                raise ValueError(f"expected 'A = ...' or 'B = ...', got {line!r}")
            found[name] = parse_poly(body, ("s",)).univariate_coeffs("s")
        if set(found) != {"A", "B"}:
            raise ValueError("jmap file must define both A and B")
        return cls(tuple(Fraction(c) for c in found["A"]), tuple(Fraction(c) for c in found["B"]))


def read_jmap(path) -> JMapData:
    return JMapData.from_text(Path(path).read_text())


def write_jmap(data: JMapData, path) -> None:
    Path(path).write_text(data.to_text())


# ---------------------------------------------------------------------------
# s(q), t(q)
# ---------------------------------------------------------------------------

def _args_series(f, args):
    vals = {v: f[v] for v in XB_VARS}
    out = []
    for num, den in args:
        n = parse_poly(num, XB_VARS).evaluate(vals)
        d = parse_poly(den, XB_VARS).evaluate(vals)
        out.append(n / d)
    return out


@lru_cache(maxsize=4)
def st_series(prec: int, kind: str = "certified"):
    """(s(q), t(q)) on the cusp-form point, each justified to at least q^prec."""
    args = CERTIFIED_ARGS if kind == "certified" else DISPLAYED_ARGS
    pad = 12
    while True:
        s, t = _args_series(cuspform_basis(prec + pad), args)
        if s.prec >= prec and t.prec >= prec:
            return s.truncate(prec), t.truncate(prec)
        pad *= 2


def _horner(coeffs, s: LaurentSeries):
    acc = LaurentSeries([], 0, s.prec)
    for c in reversed(coeffs):
        acc = acc * s + c if c else acc * s
    return acc


def _work_prec(prec: int, deg_A: int, deg_B: int) -> int:
    # s has a simple pole, t a triple pole; s^k loses k orders of absolute precision
    return prec + max(deg_A, deg_B + 3, len(DENOMINATOR) - 1) + 8


def _system(prec: int, deg_A: int, deg_B: int):
    """Rows (coefficients of q^e, e < prec) of A(s) + B(s) t = j * den(s)."""
    work = _work_prec(prec, deg_A, deg_B)
    s, t = st_series(work)
    rhs = j_series(work) * _horner(DENOMINATOR, s)
    cols = []
    p = LaurentSeries.constant(1, work)
    powers = [p]
    for _ in range(max(deg_A, deg_B)):
        p = p * s
        powers.append(p)
    cols = powers[: deg_A + 1] + [powers[k] * t for k in range(deg_B + 1)]
    short = min(c.prec for c in cols + [rhs])
    if short < prec:
        raise InsufficientPrecision(f"system columns known only below q^{short}")
    lo = min(min(c.valuation for c in cols if not c.is_zero()), rhs.valuation)
    rows = [[c[e] for c in cols] for e in range(lo, prec)]
    return rows, [rhs[e] for e in range(lo, prec)]


def residual_order(data: JMapData, prec: int):
    """None if j * den(s) - A(s) - B(s) t vanishes below q^prec, else the first bad exponent."""
    work = _work_prec(prec, *data.degrees)
    s, t = st_series(work)
    res = j_series(work) * _horner(DENOMINATOR, s) - _horner(data.A, s) - _horner(data.B, s) * t
    if res.prec < prec:
        raise InsufficientPrecision(f"residual known only below q^{res.prec}")
    return res.truncate(prec).first_nonzero()


def derive_j_map(deg_A: int, deg_B: int, prec: int) -> JMapData:
    """Unique (A, B) with the given degree bounds, verified to q^(2 prec)."""
    if prec < deg_A + deg_B + PREC_MARGIN:
        raise InsufficientPrecision(f"prec {prec} < deg_A + deg_B + {PREC_MARGIN}")
    rows, rhs = _system(prec, deg_A, deg_B)
    sol = solve_multimodular(rows, rhs)
    A = tuple(upoly_trim(sol[: deg_A + 1])) or (Fraction(0),)
    B = tuple(upoly_trim(sol[deg_A + 1:])) or (Fraction(0),)
    data = JMapData(A, B)
    bad = residual_order(data, 2 * prec)
    if bad is not None:
        raise NoSolution(f"solution fails re-substitution at q^{bad}")
    return data


def probe_bounds(deg_A: int, deg_B: int, prec: int) -> dict:
    """Modular feasibility test for a pair of degree bounds (fast, not a certificate)."""
    rows, rhs = _system(prec, deg_A, deg_B)
    return probe_mod_p(rows, rhs)


def derive_with_escalation(prec: int = 200, start=DEFAULT_BOUNDS, step: int = ESCALATION_STEP,
                           cap: int = ESCALATION_CAP):
    """Escalate both degree bounds by ``step`` until a solution exists.

    Each candidate is screened modulo a prime first; the exact solve runs
    only on bounds whose modular system is consistent.  Returns
    (JMapData, log of attempts, precision actually used).
    """
    dA, dB = start
    if prec < dA + dB + PREC_MARGIN:
        raise InsufficientPrecision(f"prec {prec} < {dA} + {dB} + {PREC_MARGIN} for the starting bounds")
    attempts = []
    while max(dA, dB) <= cap:
        p = max(prec, dA + dB + PREC_MARGIN)
        probe = probe_bounds(dA, dB, p)
        attempts.append({"deg_A": dA, "deg_B": dB, "prec": p, "consistent": probe["consistent"],
                         "rank": probe["rank"], "unknowns": probe["unknowns"]})
        log.info("jmap bounds (%d, %d): consistent=%s", dA, dB, probe["consistent"])
        if probe["consistent"]:
            if probe["rank"] < probe["unknowns"]:
                raise NonUnique(f"kernel dimension {probe['unknowns'] - probe['rank']} at ({dA}, {dB})",
                                probe["unknowns"] - probe["rank"])
            return derive_j_map(dA, dB, p), attempts, p
        dA, dB = dA + step, dB + step
    raise NoSolution(f"no solution with degree bounds up to {cap}")


# ---------------------------------------------------------------------------
# The composed Belyi function on the canonical model
# ---------------------------------------------------------------------------

def _cleared(coeffs, N: MultiPoly, D: MultiPoly, degree: int) -> MultiPoly:
    """sum c_i N^i D^(degree - i)."""
    one = MultiPoly.const(N.vars, 1)
    npow, dpow = [one], [one]
    for _ in range(degree):
        npow.append(npow[-1] * N)
        dpow.append(dpow[-1] * D)
    acc = MultiPoly(N.vars, {})
    for i, c in enumerate(coeffs):
        if c:
            acc = acc + npow[i] * dpow[degree - i] * c
    return acc


def assemble_belyi(data: JMapData, kind: str = "certified") -> RationalMap:
    """(1/1728) h(s, t) on the canonical model, as one cleared rational function."""
    args = CERTIFIED_ARGS if kind == "certified" else DISPLAYED_ARGS
    (ns, ds), (nt, dt) = [(parse_poly(a, XB_VARS), parse_poly(b, XB_VARS)) for a, b in args]
    a, b = data.degrees
    e = len(DENOMINATOR) - 1
    k = max(a, b)
    A = _cleared(data.A, ns, ds, a)
    B = _cleared(data.B, ns, ds, b)
    E = _cleared(DENOMINATOR, ns, ds, e)
    num = A * ds ** (k - a) * dt + B * nt * ds ** (k - b)
    den = dt * E
    if e >= k:
        num = num * ds ** (e - k)
    else:
        den = den * ds ** (k - e)
    xgb = get_curve("xgb")
    return RationalMap(xgb, get_curve("p1"), [(num, den * 1728)], f"belyi-{kind}")


def belyi_series(data: JMapData, prec: int, kind: str = "certified") -> LaurentSeries:
    """(1/1728) h(s(q), t(q)) evaluated structurally on the cusp-form point."""
    work = _work_prec(prec, *data.degrees)
    s, t = st_series(work, kind)
    h = (_horner(data.A, s) + _horner(data.B, s) * t) / _horner(DENOMINATOR, s)
    return h * Fraction(1, 1728)


def belyi_matches_j(data: JMapData, prec: int, kind: str = "certified"):
    """None if the composed map equals j/1728 below q^prec, else the first bad exponent."""
    diff = belyi_series(data, prec, kind) - j_series(prec) * Fraction(1, 1728)
    if diff.prec < prec:
        raise InsufficientPrecision(f"composition known only below q^{diff.prec}")
    return diff.truncate(prec).first_nonzero()


def certify_jmap(prec: int = 200, external: JMapData | None = None) -> CertReport:
    with stopwatch() as ms:
        witness = {}
        try:
            data, attempts, used = derive_with_escalation(prec)
        except (NoSolution, NonUnique) as exc:
            return CertReport("jmap-derive", FAIL, prec, "", {"error": type(exc).__name__, "message": str(exc)}, 0)
        witness["attempts"] = attempts
        witness["degrees"] = list(data.degrees)
        witness["A"] = format_poly(data.poly("A"))
        witness["B"] = format_poly(data.poly("B"))
        bad = belyi_matches_j(data, prec)
        witness["composed_equals_j_over_1728_to"] = prec if bad is None else None
        if bad is not None:
            witness["first_mismatch"] = bad
        if external is not None:
            witness["external_file_agrees"] = external == data
        ok = bad is None and witness.get("external_file_agrees", True)
    return CertReport("jmap-derive", PASS if ok else FAIL, used, "", witness, ms[0])
