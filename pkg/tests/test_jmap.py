import random
from fractions import Fraction

import pytest

from bringcert import jmap
from bringcert.curves import CERTIFIED_ARGS, XB_VARS
from bringcert.exact import NoSolution
from bringcert.poly import parse_poly
from bringcert.series import InsufficientPrecision


def test_degrees_and_leading_coefficients(derived_jmap):
    data, attempts, prec = derived_jmap
    assert data.degrees == (83, 80)
    assert list(data.A[:5]) == [1, -27, 328, -2404, 12130]
    assert list(data.B[:5]) == [1, -25, 280, -1885, 8715]
    assert all(Fraction(c).denominator == 1 for c in data.A + data.B)
    assert attempts[-1]["consistent"] and not any(a["consistent"] for a in attempts[:-1])
    assert prec >= 205


def test_residual_vanishes(derived_jmap):
    data, _, _ = derived_jmap
    assert jmap.residual_order(data, 250) is None


def test_composition_equals_j(derived_jmap):
    data, _, _ = derived_jmap
    assert jmap.belyi_matches_j(data, 200) is None


def test_scaled_solution_fails(derived_jmap):
    data, _, _ = derived_jmap
    assert jmap.belyi_matches_j(data.scaled(2), 200) == -1


def test_file_round_trip(derived_jmap, tmp_path):
    data, _, _ = derived_jmap
    path = tmp_path / "jmap.txt"
    jmap.write_jmap(data, path)
    assert jmap.read_jmap(path) == data


def test_file_errors(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("A = 1 + s\n")
    with pytest.raises(ValueError):
        jmap.read_jmap(path)
    path.write_text("C = 1\n")
    with pytest.raises(ValueError):
        jmap.read_jmap(path)


def test_external_file_cross_check(derived_jmap):
    data, _, _ = derived_jmap
    assert jmap.certify_jmap(200, external=data.scaled(1)).witness["external_file_agrees"]


def test_assembled_map_matches_structural_evaluation(derived_jmap):
    data, _, _ = derived_jmap
    belyi = jmap.assemble_belyi(data)
    (num, den), = belyi.coords
    rng = random.Random(11)
    pt = {v: Fraction(rng.randint(-20, 20), rng.randint(1, 9)) for v in XB_VARS}
    (ns, ds), (nt, dt) = [(parse_poly(a, XB_VARS), parse_poly(b, XB_VARS)) for a, b in CERTIFIED_ARGS]
    s = Fraction(ns.evaluate(pt)) / Fraction(ds.evaluate(pt))
    t = Fraction(nt.evaluate(pt)) / Fraction(dt.evaluate(pt))
    horner = lambda cs: sum(Fraction(c) * s ** k for k, c in enumerate(cs))
    h = (horner(data.A) + horner(data.B) * t) / horner(jmap.DENOMINATOR)
    assert Fraction(num.evaluate(pt)) / Fraction(den.evaluate(pt)) == h / 1728


def test_starting_bounds_have_no_solution():
    with pytest.raises(NoSolution):
        jmap.derive_j_map(35, 30, 200)


def test_escalation_below_cap_fails():
    with pytest.raises(NoSolution):
        jmap.derive_with_escalation(200, cap=60)


def test_low_precision_is_rejected():
    with pytest.raises(InsufficientPrecision):
        jmap.derive_with_escalation(50)
    with pytest.raises(InsufficientPrecision):
        jmap.derive_j_map(35, 30, 80)


def test_denominator():
    quartic = [1, -1, 1, -1, 1]
    assert jmap.DENOMINATOR[:25] == [0] * 25
    assert jmap.DENOMINATOR[25] == 2 and jmap.DENOMINATOR[-1] == 2
    assert len(jmap.DENOMINATOR) == 34
    assert sum(jmap.DENOMINATOR) == 2 * sum(quartic) ** 2
