import pytest

from bringcert.curves import CUBIC, HC_VARS, QUADRIC, ST_RELATION, XB_VARS, compose_poly, get_curve, psi_map
from bringcert.groebner import (Ideal, ResourceLimit, buchberger, eliminate, is_groebner_basis, normal_form,
                                reduces_to_zero)
from bringcert.poly import GREVLEX, LEX, MultiPoly, block_order, parse_poly


def P(text, vars):
    return parse_poly(text, vars)


def test_single_monomial():
    x = P("x", ("x", "y"))
    for order in (LEX, GREVLEX):
        assert buchberger([x], order) == [x]


def test_twisted_cubic():
    V = ("x", "y", "z")
    G = buchberger([P("x^2 - y", V), P("x^3 - z", V)], LEX)
    target = P("y^3 - z^2", V)
    assert any(g == target or g == -target for g in G)
    assert is_groebner_basis(G, LEX)


def test_normal_form_examples():
    V = ("x", "y")
    assert normal_form(P("x^2", V), [P("x", V)]).is_zero()
    assert normal_form(P("y", V), [P("x", V)]) == P("y", V)


def test_quadric_after_psi_is_divisible_by_F():
    hc = get_curve("hc")
    num, _ = compose_poly(P(QUADRIC, XB_VARS), psi_map().coords)
    assert normal_form(num, hc.ideal.groebner_basis()).is_zero()


def test_eliminate_trivial():
    V = ("x", "T")
    E = eliminate(Ideal([P("T - x", V), P("x", V)]), ("x",))
    assert E.generators == [P("T", ("T",))]


def test_eliminate_twisted_cubic():
    V = ("x", "y", "z")
    E = eliminate(Ideal([P("x^2 - y", V), P("x^3 - z", V)]), ("x",))
    assert len(E.generators) == 1
    g = E.generators[0]
    target = P("y^3 - z^2", ("y", "z"))
    assert g == target or g == -target


def test_membership():
    V = ("x", "y", "z")
    I = Ideal([P("x^2 - y", V), P("x^3 - z", V)])
    assert I.contains(P("x*y - z", V))
    assert not I.contains(P("x - z", V))


def test_pair_cap():
    V = ("u", "x", "y", "z", "w", "S", "T")
    gens = [P("x*S - y", V), P("w*T - z", V), P(QUADRIC, V), P(CUBIC, V), P("1 - u*x*w", V)]
    with pytest.raises(ResourceLimit):
        buchberger(gens, block_order(5), pair_cap=3)


def test_reduced_basis_is_monic_free_of_redundancy():
    V = ("x", "y", "z")
    G = buchberger([P("x^2 - y", V), P("x^3 - z", V), P("x*y - z", V)], GREVLEX)
    lms = [g.leading_monomial(GREVLEX) for g in G]
    for i, a in enumerate(lms):
        for k, b in enumerate(lms):
            if i != k:
                assert not all(p <= q for p, q in zip(a, b))
    assert all(reduces_to_zero(g, G) for g in G)
