import pytest

from bringcert.curves import (CERTIFIED_ARGS, CUBIC, QUADRIC, ST_CHART, ST_RELATION, XB_VARS, RankDefect,
                              RationalMap, belyi_argument_identity, canonical_form, compose_maps,
                              exhaustive_ratio_search, get_curve, identity_map, psi_map, ratio_readings,
                              reconstruct_canonical, roundtrip_check, series_arbiter, sextic_is_squarefree,
                              st_relation_by_elimination, st_to_x050, verify_rational_map, verify_series_point,
                              x050_to_st, monomials)
from bringcert.exact import ExactMatrix, rank
from bringcert.poly import MultiPoly, parse_poly
from bringcert.series import InsufficientPrecision, LaurentSeries, SeriesTuple, cuspform_basis, theta_series

STV = ("S", "T")


def test_registry():
    assert get_curve("bring").generators[2].total_degree() == 3
    assert [g.total_degree() for g in get_curve("xgb").generators] == [2, 3]
    assert get_curve("hc").generators[0].total_degree() == 6
    assert "c = 0 mod 50" in get_curve("xgb").metadata["group"]
    with pytest.raises(KeyError):
        get_curve("nope")


def test_sextic_squarefree():
    assert sextic_is_squarefree()


def test_theta_point_on_hc():
    th = {v: theta_series(r, 140) for v, r in zip(("x1", "y1", "z1"), (0, 1, 2))}
    assert verify_series_point(get_curve("hc"), th, 120).passed


def test_cuspforms_on_canonical_model(f_series):
    assert verify_series_point(get_curve("xgb"), f_series, 120).passed


def test_degenerate_point_fails_at_q2():
    q = LaurentSeries.gen(30)
    rep = verify_series_point(get_curve("xgb"), {v: q for v in XB_VARS}, 20)
    assert not rep.passed
    bad = rep.witness["first_nonvanishing"]
    assert (bad["order"], bad["coefficient"]) == (2, 2)


def test_point_needs_precision():
    q = LaurentSeries.gen(10)
    with pytest.raises(InsufficientPrecision):
        verify_series_point(get_curve("xgb"), {v: q for v in XB_VARS}, 20)


def test_reconstruct_canonical(f_series):
    quadric, cubic = reconstruct_canonical(f_series, 120)
    assert quadric == canonical_form(parse_poly(QUADRIC, XB_VARS))
    assert quadric == parse_poly(QUADRIC, XB_VARS) or quadric == -parse_poly(QUADRIC, XB_VARS)
    assert cubic == parse_poly(CUBIC, XB_VARS)


def test_reconstruction_stable_in_precision(f_series):
    assert reconstruct_canonical(f_series, 80) == reconstruct_canonical(f_series, 120)


def test_reconstruct_rank_defect():
    q = LaurentSeries.gen(60)
    f = SeriesTuple({"x": q, "y": q, "z": q * q, "w": q * q})
    with pytest.raises(RankDefect) as info:
        reconstruct_canonical(f, 50)
    basis = [parse_poly(b, XB_VARS) for b in info.value.basis]
    assert len(basis) > 1
    mons = monomials(XB_VARS, 2)
    vec = lambda p: [p.coefficient(m) for m in mons]
    target = parse_poly("x^2 - y^2", XB_VARS)
    span = [vec(b) for b in basis]
    assert rank(ExactMatrix(span + [vec(target)])) == rank(ExactMatrix(span))


def test_reconstruct_low_precision(f_series):
    with pytest.raises(InsufficientPrecision):
        reconstruct_canonical(f_series, 20)


def test_psi_is_a_map():
    assert verify_rational_map(psi_map()).passed


def test_identity_maps():
    for name in ("xgb", "hc", "x050", "st-chart"):
        ident = identity_map(get_curve(name))
        assert verify_rational_map(ident).passed
        assert roundtrip_check(ident, ident).passed


def test_level50_maps_and_roundtrip():
    fwd, bwd = st_to_x050(), x050_to_st()
    assert verify_rational_map(fwd).passed
    assert verify_rational_map(bwd).passed
    assert roundtrip_check(fwd, bwd).passed


def test_perturbed_inverse_fails():
    fwd, bwd = st_to_x050(), x050_to_st()
    n, d = bwd.coords[1]
    bad = RationalMap(bwd.source, bwd.target, [bwd.coords[0], (n + d, d)], "perturbed")
    rep = roundtrip_check(fwd, bad)
    assert not rep.passed
    assert "bwd_after_fwd" in rep.witness or "fwd_after_bwd" in rep.witness


def test_level50_maps_from_unswapped_relation_fail():
    assert not verify_rational_map(st_to_x050("st")).passed


def test_st_elimination_certified_reading():
    S, T = ratio_readings()["certified"]
    gens = st_relation_by_elimination(S, T)
    R = parse_poly(ST_RELATION, STV)
    assert len(gens) == 1 and (gens[0] == R or gens[0] == -R)


def test_st_chart_is_reciprocal_transform():
    R = parse_poly(ST_RELATION, STV)
    chart = parse_poly(ST_CHART, STV)
    # T^2 R(S, 1/T)
    S, T = MultiPoly.gens(STV)
    terms = {}
    for (a, b), c in R.terms.items():
        terms[(a, 2 - b)] = c
    assert MultiPoly(STV, terms) == chart


def test_series_arbiter(f_series):
    R = parse_poly(ST_RELATION, STV)
    out = series_arbiter(R, f_series, ratio_readings(), 100)
    assert out["certified"] is None
    assert out["stated"] is not None and out["literal"] is not None
    assert out["stated"][0] == -3


def test_exhaustive_search_finds_one_reading():
    f = cuspform_basis(60)
    R = parse_poly(ST_RELATION, STV)
    assert exhaustive_ratio_search(R, f, 40) == [(("y", "x"), ("z", "w"))]


def test_belyi_argument_identity():
    rep = belyi_argument_identity()
    assert rep.passed
    assert rep.witness["literal_reading_rejected"]


def test_certified_args_send_cusp_forms_to_level50(f_series):
    args = RationalMap.from_strings(get_curve("xgb"), get_curve("x050"), CERTIFIED_ARGS)
    s, t = args.evaluate(f_series.truncate(120))
    rel = t * t - parse_poly("s^6 - 4*s^5 - 10*s^3 - 4*s + 1", ("s",)).evaluate({"s": s})
    assert rel.truncate(80).is_zero()


def test_compose_with_identity():
    fwd = st_to_x050()
    comp = compose_maps(fwd, identity_map(fwd.source))
    for (a, b), (c, d) in zip(comp.coords, fwd.coords):
        assert a * d == b * c
