import pytest

from tapkit.builders import Case3Spec, TwoBridgeSpec, build
from tapkit.closed_form import recursion_two_bridge
from tapkit.engine import TapResult, alexander, twisted_alexander, welldefinedness_report
from tapkit.errors import DeficiencyMismatch
from tapkit.groups import Presentation, Word
from tapkit.laurent import LaurentPoly, Mat2, is_palindromic
from tapkit.reps import riley_parabolic_reps, search_reps, trivial_rep, validate_rep


@pytest.fixture(scope="module")
def trefoil():
    p = Presentation(["x", "y"], [Word.parse("x y x y^-1 x^-1 y^-1")], "x")
    rep = validate_rep(p, {"x": [[1, 1], [0, 1]], "y": [[1, 0], [-1, 1]]})
    return p, rep


def test_trefoil_parabolic(trefoil):
    p, rep = trefoil
    res = twisted_alexander(p, rep)
    # Fibered genus one: monic of degree 4g - 2 = 2; here exactly 1 + t^2.
    assert res.polynomial == LaurentPoly({0: 1, 2: 1})
    assert res.degree == 2 and res.leading == 1 and res.trailing == 1
    assert res.remainder_norm == 0


def test_trefoil_columns_agree(trefoil):
    p, rep = trefoil
    rpt = welldefinedness_report(p, rep)
    assert set(rpt["results"]) == {"x", "y"} and rpt["all_agree"]


def test_trefoil_alexander(trefoil):
    p, _ = trefoil
    assert alexander(p) == LaurentPoly({0: 1, 1: -1, 2: 1})


def test_degenerate_column_skipped():
    p = Presentation(["x", "y"], [Word.parse("y")], "x")
    rep = validate_rep(p, {"x": [[2, 1], [1, 1]], "y": [[1, 0], [0, 1]]})
    rpt = welldefinedness_report(p, rep)
    assert rpt["skipped"] == ["y"] and list(rpt["results"]) == ["x"]


def test_deficiency_checked():
    p = Presentation(["x", "y"], [Word.parse("x y x^-1 y^-1"), Word.parse("x y")], "x")
    with pytest.raises(DeficiencyMismatch):
        alexander(p)


@pytest.mark.parametrize("m, lead", [((1, -1), 1), ((2, -1), 2), ((2, -3), 6), ((3, 3, 1, -1), 9)])
def test_alexander_two_bridge(m, lead):
    poly = alexander(build(TwoBridgeSpec(m)))
    assert poly.max_exp() == len(m)
    assert poly.coeffs[poly.max_exp()] in (lead, -lead)
    assert is_palindromic(poly)


@pytest.mark.parametrize("n", [-2, 1, 3])
def test_alexander_case3_palindromic(n):
    assert is_palindromic(alexander(build(Case3Spec(n))))


def test_two_bridge_riley_matches_closed_form():
    spec = TwoBridgeSpec((1, -1))
    p = build(spec)
    for rep in riley_parabolic_reps(p):
        eng = twisted_alexander(p, rep)
        assert eng.remainder_norm == 0                # exact and polynomial
        assert recursion_two_bridge(spec, rep).matches(eng)


def test_conjugation_invariance():
    p = build(TwoBridgeSpec((2, -1)))
    rep = riley_parabolic_reps(p, limit=1)[0]
    one = rep["a"].a * 0 + 1
    P = Mat2(one * 2, one, one, one)
    conj = rep.conjugate(P, p)
    assert twisted_alexander(p, conj).matches(twisted_alexander(p, rep))


def test_k3_exact_columns_agree():
    p = build(TwoBridgeSpec((1, -1, 1, 1)))
    reps = riley_parabolic_reps(p, mode="auto", limit=1)
    rpt = welldefinedness_report(p, reps[0])
    assert len(rpt["results"]) >= 2 and rpt["all_agree"]


def test_trivial_rep_gives_rational_function():
    p = build(TwoBridgeSpec((1, 1)))
    res = twisted_alexander(p, trivial_rep(p))
    assert not res.is_polynomial
    alex = alexander(p)
    # Wada's invariant for the trivial 2-dimensional rep is (Delta_K / (t - 1))^2.
    want_num = alex * alex
    want_den = LaurentPoly({0: 1, 1: -2, 2: 1})
    assert res.matches(TapResult(numerator=want_num, denominator=want_den))


def test_float_search_rep_case3_columns_agree():
    p = build(Case3Spec(2))
    reps, _ = search_reps(p, 10, stop_after=1)
    rpt = welldefinedness_report(p, reps[0])
    assert rpt["all_agree"]
    res = rpt["results"]["z"]
    assert res.is_polynomial and res.degree == 14


def test_result_json_fields(trefoil):
    p, rep = trefoil
    out = twisted_alexander(p, rep).to_json()
    assert out["polynomial"]["coeffs"].keys() == {"0", "2"}
    assert out["degree"] == 2 and out["column"] == "x" and out["method"] == "engine"
