import pytest

from tapkit.builders import Case2Spec, Case3Spec, TwoBridgeSpec, build
from tapkit.closed_form import (alex_closed_form, case2_blocks, case3_blocks, case3_polynomial,
                                closed_form, coeffs_case2, leading_coeff_two_bridge, n_sequence,
                                recursion_case2, recursion_two_bridge, trace_coefficients,
                                two_bridge_blocks, windows_respected)
from tapkit.closed_form.case3 import blocks_poly, case3_matrices
from tapkit.engine import alexander, fox_jacobian_phi, twisted_alexander
from tapkit.errors import IndexOutOfRange, UnsupportedFamily
from tapkit.laurent import LaurentPoly, Mat2
from tapkit.reps import riley_parabolic_reps, search_reps, trivial_rep

TOL = 1e-7


def negligible(poly):
    return all(abs(complex(x)) < TOL for c in poly.coeffs.values() for x in c.entries())


def same(p, q):
    return negligible(p - q)


def zero_poly():
    return LaurentPoly()


@pytest.fixture(scope="module")
def two_bridge_case():
    spec = TwoBridgeSpec((-2, 3, -1, 2))
    p = build(spec)
    rep = riley_parabolic_reps(p, mode="float", limit=1)[0]
    return spec, p, rep, fox_jacobian_phi(p, rep.images)


@pytest.fixture(scope="module")
def case2_case():
    spec = Case2Spec(1, (1, -1, 2), (1, -2))
    p = build(spec)
    rep = search_reps(p, 12, stop_after=1)[0][0]
    return spec, p, rep, fox_jacobian_phi(p, rep.images)


@pytest.fixture(scope="module", params=[2, -2, 3, -3])
def case3_case(request):
    spec = Case3Spec(request.param)
    p = build(spec)
    rep = search_reps(p, 16, stop_after=1)[0][0]
    return spec, p, rep, fox_jacobian_phi(p, rep.images)


def test_two_bridge_blocks_are_fox_entries(two_bridge_case):
    spec, p, rep, jac = two_bridge_case
    for j in range(-1, 2 * spec.k + 1):
        row, i = jac[j + 1], (j + 1) // 2
        blk = two_bridge_blocks(j, spec, rep)
        if i <= 1:
            assert same(blk.first, row["a"])
            if blk.second is not None:
                assert same(blk.second, -row["x-1"])
        else:
            assert same(blk.first, -row[f"x{2 * i - 4}"])
            assert same(blk.second, -row[f"x{2 * i - 3}"])
    with pytest.raises(IndexOutOfRange):
        two_bridge_blocks(2 * spec.k + 1, spec, rep)


def test_two_bridge_printed_tail_differs_for_even_i(two_bridge_case):
    spec, p, rep, jac = two_bridge_case
    # i = 2 (relators 3, 4): the literal primed tail conjugates the twist sum.
    for j in (3, 4):
        assert not same(two_bridge_blocks(j, spec, rep, printed=True).second, -jac[j + 1]["x1"])
    # Odd i is printed correctly.
    for j in (5, 6):
        assert same(two_bridge_blocks(j, spec, rep, printed=True).second,
                    two_bridge_blocks(j, spec, rep).second)


def test_two_bridge_first_block_m0_one():
    spec = TwoBridgeSpec((1, -1))
    rep = riley_parabolic_reps(build(spec), limit=1)[0]
    X = rep.images
    E = Mat2.identity(X["a"].a * 0 + 1)
    want = LaurentPoly({-1: X["x-1"], 0: -(E + X["a"] * X["b"])})
    assert two_bridge_blocks(-1, spec, rep).first == want


def test_two_bridge_recursion_and_windows(two_bridge_case):
    spec, p, rep, _ = two_bridge_case
    assert windows_respected(n_sequence(spec, rep)) == {}
    cf = recursion_two_bridge(spec, rep)
    assert cf.matches(twisted_alexander(p, rep), 1e-6)
    lead, factors = leading_coeff_two_bridge(spec, rep)
    assert len(factors) == 4
    assert abs(complex(cf.leading) - complex(lead)) < 1e-6 or abs(complex(cf.leading) + complex(lead)) < 1e-6


@pytest.mark.parametrize("m", [(1, -1), (2, -3), (3, 1, -2, 1)])
def test_trivial_rep_leading_is_square_of_twists(m):
    spec = TwoBridgeSpec(m)
    lead, _ = leading_coeff_two_bridge(spec, trivial_rep(build(spec)))
    want = 1
    for x in m:
        want *= x * x
    assert lead == want


def test_case2_blocks_are_fox_entries(case2_case):
    spec, p, rep, jac = case2_case
    assert same(case2_blocks(-4, "R", spec, rep).first, jac[0]["a"])
    for j in range(-1, 2 * spec.k + 1):
        row, i = jac[3 + j + 1], (j + 1) // 2
        f, s, _ = case2_blocks(j, "R", spec, rep)
        assert same(f, -row.get(f"x{2 * i - 4}", zero_poly()))
        assert same(s, -row.get(f"x{2 * i - 3}", zero_poly()))
    off = 2 * spec.k + 9
    for j in range(1, 2 * spec.l + 1):
        row, i = jac[off + j - 1], (j + 1) // 2
        f, s, _ = case2_blocks(j, "S", spec, rep)
        assert same(f, -row.get(f"y{2 * i - 4}", zero_poly()))
        assert same(s, -row.get(f"y{2 * i - 3}", zero_poly()))


def test_case2_printed_y_block_sign():
    # The slip sits on the lone power term of the even-index block for even i
    # when the y-side twist exponent -n_i is negative.
    spec = Case2Spec(1, (1, -1, 2), (1, 2))
    p = build(spec)
    rep = search_reps(p, 12, stop_after=1)[0][0]
    jac = fox_jacobian_phi(p, rep.images)
    j = 4
    want = -jac[2 * spec.k + 9 + j - 1]["y0"]
    assert same(case2_blocks(j, "S", spec, rep)[0], want)
    assert not same(case2_blocks(j, "S", spec, rep, printed=True)[0], want)
    for j in (1, 2, 3):
        assert same(case2_blocks(j, "S", spec, rep, printed=True)[0],
                    case2_blocks(j, "S", spec, rep)[0])


def test_case2_first_tangle_block_positive_beta1():
    spec = Case2Spec(1, (0, -2, 1), (-2, 1))
    rep = trivial_rep(build(spec))
    im = rep.images
    want = LaurentPoly({-2: im["x-4"] * im["c"].inverse()})
    assert case2_blocks(-4, "R", spec, rep).first == want


def test_case2_recursion_matches_engine(case2_case):
    spec, p, rep, _ = case2_case
    cf = recursion_case2(spec, rep)
    eng = twisted_alexander(p, rep)
    assert cf.matches(eng, 1e-6)
    assert cf.degree == eng.degree == cf.predictions["degree"]
    assert closed_form(spec, rep).matches(cf, 1e-9)


def test_case2_trivial_kappa0():
    spec = Case2Spec(1, (1, -1, 2), (1, -2))
    val, degree, label = coeffs_case2(spec, trivial_rep(build(spec)))
    assert label == "kappa0" and degree == 2 * (spec.k + spec.l + 1)
    want = 1
    for x in spec.m + spec.n:
        want *= x * x
    assert val == want


def test_alex_closed_form_examples():
    assert alex_closed_form(TwoBridgeSpec((2, -3))) == (6, 2)
    # m_0 = 0 branch: m1 + n1 + m1 n1 = -2 - 3 + 6 = 1.
    spec = Case2Spec(1, (0, -2, 1), (-3, 1))
    lead, degree = alex_closed_form(spec)
    assert (lead, degree) == (1, 4)
    poly = alexander(build(spec))
    assert poly.max_exp() - min(poly.coeffs) == degree
    assert poly.coeffs[poly.max_exp()] in (lead, -lead)
    with pytest.raises(UnsupportedFamily):
        alex_closed_form(Case3Spec(2))


def test_case3_blocks_are_fox_entries(case3_case):
    spec, p, rep, jac = case3_case
    assert same(blocks_poly(case3_blocks(spec, rep)), jac[0]["x"])


def test_case3_printed_leading_block_sign(case3_case):
    spec, p, rep, jac = case3_case
    if spec.n % 2:
        pytest.skip("only the even-n list has the signed leading block")
    lit = case3_blocks(spec, rep, printed=True)
    assert same(LaurentPoly({-4: -lit.blocks[0]}), LaurentPoly({-4: jac[0]["x"].coeff(-4)}))
    assert not same(blocks_poly(lit), jac[0]["x"])


def test_case3_proof_convention_fails_for_even_n(case3_case):
    spec, p, rep, jac = case3_case
    got = blocks_poly(case3_blocks(spec, rep, convention="proof"))
    assert same(got, jac[0]["x"]) == bool(spec.n % 2)


def test_case3_polynomial_and_trace_formulas(case3_case):
    spec, p, rep, _ = case3_case
    cf = case3_polynomial(spec, rep)
    assert cf.matches(twisted_alexander(p, rep), 1e-6)
    assert cf.notes["trace_formulas_agree"]
    if spec.n % 2 == 0:
        assert cf.notes["printed_mismatches"] == [2, 7]
        lit, fixed = trace_coefficients(spec, rep, printed=True), trace_coefficients(spec, rep)
        assert len(lit) == len(fixed)


@pytest.mark.parametrize("n", [4, -4, 2])
def test_case3_trivial_matrices(n):
    spec = Case3Spec(n)
    X, Z, Y, W, A, B = case3_matrices(spec, trivial_rep(build(spec)))
    E = Mat2.identity(X.a * 0 + 1)
    assert W == E and B == E * abs(n // 2)


def test_case3_minus_one_has_zero_twist_sum():
    spec = Case3Spec(-1)
    *_, B = case3_matrices(spec, trivial_rep(build(spec)))
    assert B.det() == 0 and B.trace() == 0
