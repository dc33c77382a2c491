"""Buchberger's algorithm, normal forms, ideal membership and elimination.

Over QQ all intermediate polynomials are kept as primitive integer
polynomials (fraction-free reduction plus content removal); over a number
field reduction is done monic in field arithmetic.  Pairs are selected by the
normal strategy (smallest lcm degree, then order) and pruned with Buchberger's
coprime criterion and the Gebauer-Moeller chain criterion.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .exact import QQ
from .poly import GREVLEX, MonomialOrder, MultiPoly, block_order


class ResourceLimit(RuntimeError):
    pass


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a: tuple, b: tuple) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


class _Work:
    """A polynomial during the computation: terms dict plus cached leading data."""

    __slots__ = ("terms", "lm", "lc")

    def __init__(self, terms: dict, key):
        self.terms = terms
        self.lm = max(terms, key=key)
        self.lc = terms[self.lm]


def _primitive_int(terms: dict) -> dict:
    den = lcm(*(c.denominator for c in map(Fraction, terms.values())))
    ints = {e: int(Fraction(c) * den) for e, c in terms.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        ints = {e: v // g for e, v in ints.items()}
    return ints


def _content(terms: dict) -> int:
    g = 0
    for v in terms.values():
        g = gcd(g, v)
        if g == 1:
            return 1
    return g


class _Reducer:
    """Full reduction of a term dict by a list of _Work polynomials."""

    def __init__(self, key, integral: bool):
        self.key = key
        self.integral = integral

    def _negkey(self, e):
        return tuple(-x for x in self.key(e))

    def reduce(self, terms: dict, basis: list, top_only: bool = False):
        """Return (remainder terms, scale) with remainder = scale * NF(terms).

        In field mode the scale is always 1.
        """
        f = dict(terms)
        rem: dict = {}
        scale = 1
        heap = [(self._negkey(e), e) for e in f]
        heapq.heapify(heap)
        integral = self.integral
        while heap:
            _, m = heapq.heappop(heap)
            c = f.get(m)
            if c is None:
                continue
            g = None
            for h in basis:
                if _divides(h.lm, m):
                    g = h
                    break
            if g is None:
                rem[m] = f.pop(m)
                if top_only:
                    for e, v in f.items():
                        rem[e] = v
                    return rem, scale
                continue
            shift = tuple(x - y for x, y in zip(m, g.lm))
            if integral:
                d = gcd(c, g.lc)
                a = g.lc // d
                b = c // d
                if a != 1:
                    if a == -1:
                        f = {e: -v for e, v in f.items()}
                        rem = {e: -v for e, v in rem.items()}
                    else:
                        f = {e: v * a for e, v in f.items()}
                        rem = {e: v * a for e, v in rem.items()}
                    scale *= a
            else:
                b = c / g.lc
            for e, v in g.terms.items():
                k = tuple(x + y for x, y in zip(e, shift))
                nv = f.get(k, 0) - b * v
                if nv == 0:
                    f.pop(k, None)
                else:
                    if k not in f:
                        heapq.heappush(heap, (self._negkey(k), k))
                    f[k] = nv
            if integral and len(f) + len(rem) > 8:
                # keep integers small; content of f and rem together
                cg = gcd(_content(f) if f else 0, _content(rem) if rem else 0)
                if cg > 1:
                    f = {e: v // cg for e, v in f.items()}
                    rem = {e: v // cg for e, v in rem.items()}
                    scale = Fraction(scale, cg)
        return rem, scale


def _spoly(f: _Work, g: _Work, integral: bool) -> dict:
    L = _lcm(f.lm, g.lm)
    sf = tuple(x - y for x, y in zip(L, f.lm))
    sg = tuple(x - y for x, y in zip(L, g.lm))
    if integral:
        d = gcd(f.lc, g.lc)
        a, b = g.lc // d, f.lc // d
    else:
        a, b = 1 / f.lc, 1 / g.lc
    out: dict = {}
    for e, v in f.terms.items():
        k = tuple(x + y for x, y in zip(e, sf))
        out[k] = out.get(k, 0) + a * v
    for e, v in g.terms.items():
        k = tuple(x + y for x, y in zip(e, sg))
        nv = out.get(k, 0) - b * v
        if nv == 0:
            out.pop(k, None)
        else:
            out[k] = nv
    return out


@dataclass
class GroebnerStats:
    pairs_considered: int = 0
    pairs_reduced: int = 0
    zero_reductions: int = 0


def _prepare(gens: Sequence[MultiPoly]):
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return (), True, []
    vars = gens[0].vars
    for g in gens:
        if g.vars != vars:
            raise ValueError("generators live in different rings")
    integral = all(g.field is QQ for g in gens)
    if integral:
        terms = [_primitive_int(g.terms) for g in gens]
    else:
        K = next(g.field for g in gens if g.field is not QQ)
        terms = [{e: K(c) for e, c in g.terms.items()} for g in gens]
    return vars, integral, terms


def buchberger(gens: Sequence[MultiPoly], order: MonomialOrder = GREVLEX,
               pair_cap: int | None = None, stats: GroebnerStats | None = None) -> list:
    """Reduced Groebner basis of the ideal generated by ``gens`` (monic, sorted descending)."""
    vars, integral, inputs = _prepare(gens)
    if not inputs:
        return []
    key = order.key
    red = _Reducer(key, integral)
    stats = stats if stats is not None else GroebnerStats()

    polys: list[_Work] = []
    active: list[int] = []
    pairs: list[tuple[int, int]] = []

    def add(h_terms: dict):
        h = _Work(h_terms, key)
        if not integral:
            inv = 1 / h.lc
            h = _Work({e: v * inv for e, v in h_terms.items()}, key)
        elif h.lc < 0:
            h = _Work({e: -v for e, v in h_terms.items()}, key)
        hi = len(polys)
        polys.append(h)
        # Gebauer-Moeller update
        cand = [(hi, g) for g in active]
        kept = []
        for idx, (a, g) in enumerate(cand):
            Lg = _lcm(h.lm, polys[g].lm)
            if _coprime(h.lm, polys[g].lm):
                kept.append((a, g))
                continue
            dominated = False
            for b, g2 in cand[idx + 1:]:
                if _divides(_lcm(h.lm, polys[g2].lm), Lg):
                    dominated = True
                    break
            if not dominated:
                for b, g2 in kept:
                    if _divides(_lcm(h.lm, polys[g2].lm), Lg):
                        dominated = True
                        break
            if not dominated:
                kept.append((a, g))
        new_pairs = [(g, a) for a, g in kept if not _coprime(h.lm, polys[g].lm)]
        old = []
        for (i, j) in pairs:
            Lij = _lcm(polys[i].lm, polys[j].lm)
            if (_divides(h.lm, Lij) and _lcm(polys[i].lm, h.lm) != Lij
                    and _lcm(polys[j].lm, h.lm) != Lij):
                continue
            old.append((i, j))
        pairs[:] = old + new_pairs
        active[:] = [g for g in active if not _divides(h.lm, polys[g].lm)] + [hi]

    # sort inputs so that small leading terms go first (deterministic)
    for t in sorted(inputs, key=lambda d: key(max(d, key=key))):
        r, _ = red.reduce(t, [polys[g] for g in active])
        if r:
            add(_primitive_int(r) if integral else r)

    def pair_key(p):
        L = _lcm(polys[p[0]].lm, polys[p[1]].lm)
        return (sum(L), key(L), p)

    while pairs:
        if pair_cap is not None and stats.pairs_considered >= pair_cap:
            raise ResourceLimit(f"pair cap {pair_cap} exceeded")
        best = min(pairs, key=pair_key)
        pairs.remove(best)
        stats.pairs_considered += 1
        i, j = best
        s = _spoly(polys[i], polys[j], integral)
        if not s:
            stats.zero_reductions += 1
            continue
        r, _ = red.reduce(s, [polys[g] for g in active])
        stats.pairs_reduced += 1
        if not r:
            stats.zero_reductions += 1
            continue
        add(_primitive_int(r) if integral else r)

    return _interreduce([polys[g] for g in active], vars, key, integral, order)


def _interreduce(G: list, vars, key, integral: bool, order) -> list:
    G = sorted(G, key=lambda g: key(g.lm))
    minimal = []
    for g in G:
        if not any(_divides(h.lm, g.lm) for h in minimal):
            minimal.append(g)
    red = _Reducer(key, integral)
    out = []
    for idx, g in enumerate(minimal):
        others = [h for k, h in enumerate(minimal) if k != idx]
        tail = dict(g.terms)
        lead = tail.pop(g.lm)
        r, scale = red.reduce(tail, others)
        # g = lead*lm + tail  ->  lead*lm + tail_nf, tail_nf = r / scale
        terms = {e: Fraction(v) / scale for e, v in r.items()}
        terms[g.lm] = Fraction(lead) if integral else lead
        lc = terms[g.lm]
        out.append(MultiPoly(vars, {e: v / lc for e, v in terms.items()}))
    out.sort(key=lambda p: key(p.leading_monomial(order)), reverse=True)
    return out


def _as_work(basis: Sequence[MultiPoly], key, integral: bool) -> list:
    out = []
    for b in basis:
        if b.is_zero():
            continue
        t = _primitive_int(b.terms) if integral else dict(b.terms)
        out.append(_Work(t, key))
    return out


def normal_form(p: MultiPoly, basis: Sequence[MultiPoly], order: MonomialOrder = GREVLEX) -> MultiPoly:
    """Remainder of ``p`` on division by ``basis``; unique when ``basis`` is a Groebner basis."""
    if p.is_zero():
        return p
    integral = p.field is QQ and all(b.field is QQ for b in basis)
    key = order.key
    red = _Reducer(key, integral)
    if integral:
        pt = {e: Fraction(c) for e, c in p.terms.items()}
        den = lcm(*(c.denominator for c in pt.values()))
        start = {e: int(c * den) for e, c in pt.items()}
        r, scale = red.reduce(start, _as_work(basis, key, True))
        return MultiPoly(p.vars, {e: Fraction(v) / (scale * den) for e, v in r.items()})
    r, _ = red.reduce(dict(p.terms), _as_work(basis, key, False))
    return MultiPoly(p.vars, r)


def reduces_to_zero(p: MultiPoly, basis: Sequence[MultiPoly], order: MonomialOrder = GREVLEX) -> bool:
    return normal_form(p, basis, order).is_zero()


def s_polynomial(f: MultiPoly, g: MultiPoly, order: MonomialOrder = GREVLEX) -> MultiPoly:
    key = order.key
    integral = f.field is QQ and g.field is QQ
    wf, wg = _as_work([f, g], key, integral) if integral else _as_work([f.monic(order), g.monic(order)], key, False)
    return MultiPoly(f.vars, _spoly(wf, wg, integral))


def is_groebner_basis(basis: Sequence[MultiPoly], order: MonomialOrder = GREVLEX) -> bool:
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if not reduces_to_zero(s_polynomial(basis[i], basis[j], order), basis, order):
                return False
    return True


@dataclass
class Ideal:
    generators: list
    groebner_cache: dict = field(default_factory=dict)

    @property
    def vars(self) -> tuple:
        return self.generators[0].vars

    def groebner_basis(self, order: MonomialOrder = GREVLEX, pair_cap: int | None = None) -> list:
        if order not in self.groebner_cache:
            self.groebner_cache[order] = buchberger(self.generators, order, pair_cap=pair_cap)
        return self.groebner_cache[order]

    def contains(self, p: MultiPoly, order: MonomialOrder = GREVLEX) -> bool:
        return reduces_to_zero(p, self.groebner_basis(order), order)


def eliminate(ideal: Ideal, drop_vars: Sequence[str], pair_cap: int | None = None) -> Ideal:
    """Generators of ``ideal`` intersected with the ring of the remaining variables.

    The ring is reordered with ``drop_vars`` first and a block order (lex on
    the dropped block, grevlex on the rest) is used.  The result lives in the
    remaining variables, in their original order.
    """
    vars = ideal.vars
    drop = [v for v in vars if v in set(drop_vars)]
    keep = [v for v in vars if v not in set(drop_vars)]
    ring = tuple(drop + keep)
    gens = [g.change_ring(ring) for g in ideal.generators]
    G = buchberger(gens, block_order(len(drop)), pair_cap=pair_cap)
    n = len(drop)
    out = [g.change_ring(keep) for g in G if all(not any(e[:n]) for e in g.terms)]
    out.sort(key=lambda p: GREVLEX.key(p.leading_monomial(GREVLEX)))
    return Ideal(out)
