"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py`` (the lines are printed in the
terminal summary) or ``python tests/test_acceptance.py``.
"""
import functools
import itertools
import random
import time
from fractions import Fraction
from math import gcd


from tapkit.builders import (Case2Spec, Case3Spec, TwoBridgeSpec, build, build_case2, build_case3,
                             build_two_bridge, cf_to_rational, even_continued_fraction, genus)
from tapkit.closed_form import (alex_closed_form, case3_polynomial, coeffs_case2,
                                leading_coeff_two_bridge, recursion_case2, recursion_two_bridge)
from tapkit.engine import alexander, twisted_alexander, welldefinedness_report
from tapkit.groups import GroupRingElement, Word, fox_derivative
from tapkit.laurent import Mat2, is_palindromic
from tapkit.reps import riley_parabolic_reps, search_reps, trivial_rep
from tapkit.scalars import ComplexFloat

# Pinned tolerances and sizes.
TOL_TWO_BRIDGE = 1e-8
TOL_CASE2 = 1e-7
TOL_CASE3 = 1e-7
TOL_EXAMPLES = 1e-9
BUDGET_TWO_BRIDGE_S = 120.0
K3_SAMPLES = 200
CASE2_SAMPLES = 100
FOX_WORDS = 1000
WELLDEF_PAIRS = 50
CF_BOUND = 200
SEARCH_SEEDS = 40

RESULTS = {}


def report(n, ok, detail):
    RESULTS[n] = f"CRITERION {n} {'PASS' if ok else 'FAIL'}: {detail}"
    return ok


def _close(a, b, tol):
    """Scalar equality: exact for exact scalars, relative tol for floats."""
    if isinstance(a, ComplexFloat) or isinstance(b, ComplexFloat):
        a, b = complex(a), complex(b)
        return abs(a - b) <= tol * max(1.0, abs(a), abs(b))
    return a == b


def _close_up_to_sign(a, b, tol):
    return _close(a, b, tol) or _close(a, -b, tol)


# ---------------------------------------------------------------------------
# Two-bridge grid (criteria 1-3)

def two_bridge_grid():
    vals = [-3, -2, -1, 1, 2, 3]
    grid = [TwoBridgeSpec(m) for m in itertools.product(vals, repeat=2)]
    rng = random.Random(20240601)
    grid += [TwoBridgeSpec(tuple(rng.choice(vals) for _ in range(4))) for _ in range(K3_SAMPLES)]
    return grid


def two_bridge_point(spec):
    p = build_two_bridge(spec)
    rec = {"spec": spec.m, "oracle": [], "extremes": None, "exact": None}
    riley = riley_parabolic_reps(p, limit=1)[0]
    rec["exact"] = riley.exact
    for rep in (trivial_rep(p), riley):
        eng = twisted_alexander(p, rep, tol=None if rep.exact else TOL_TWO_BRIDGE)
        cf = recursion_two_bridge(spec, rep, tol=None if rep.exact else TOL_TWO_BRIDGE)
        rec["oracle"].append(cf.matches(eng, TOL_TWO_BRIDGE)
                             and cf.notes.get("degree_windows_ok", False))
        if rep is riley:
            lam, _ = leading_coeff_two_bridge(spec, rep)
            if _close(lam, lam * 0, TOL_TWO_BRIDGE):
                rec["extremes"] = None                 # degenerate: nothing to check
            else:
                rec["extremes"] = (eng.is_polynomial and eng.degree == 2 * spec.k
                                  and eng.degree == 4 * genus(spec) - 2
                                  and _close_up_to_sign(eng.trailing, lam, TOL_TWO_BRIDGE)
                                  and _close_up_to_sign(eng.leading, lam, TOL_TWO_BRIDGE))
    return rec


@functools.lru_cache(maxsize=None)
def two_bridge_records():
    start = time.time()
    records = [two_bridge_point(s) for s in two_bridge_grid()]
    return records, time.time() - start


def test_criterion_1_two_bridge_oracle():
    records, elapsed = two_bridge_records()
    bad = [r["spec"] for r in records if not all(r["oracle"])]
    exact = sum(1 for r in records if r["exact"])
    ok = not bad and elapsed < BUDGET_TWO_BRIDGE_S
    report(1, ok, f"{len(records)} specs x (trivial + Riley), {exact} exact Riley reps, "
                  f"mismatches={bad[:5]}, {elapsed:.1f}s (budget {BUDGET_TWO_BRIDGE_S:.0f}s)")
    assert ok


def test_criterion_2_leading_coefficient_product():
    records, _ = two_bridge_records()
    checked = [r for r in records if r["extremes"] is not None]
    bad = [r["spec"] for r in checked if not r["extremes"]]
    ok = not bad and len(checked) > 0
    report(2, ok, f"{len(checked)} nondegenerate Riley points, degree 2k = 4g-2 and both "
                  f"extreme coefficients = product of twist determinants; failures={bad[:5]}")
    assert ok


def test_criterion_3_alexander_two_bridge():
    bad = []
    grid = two_bridge_grid()
    for spec in grid:
        poly = alexander(build_two_bridge(spec))
        want = 1
        for m in spec.m:
            want *= m
        lead, deg = alex_closed_form(spec)
        top = poly.coeffs[poly.max_exp()]
        if not (poly.max_exp() == spec.k + 1 == deg and top in (abs(want), -abs(want))
                and lead == abs(want)):
            bad.append(spec.m)
    ok = not bad
    report(3, ok, f"{len(grid)} specs, degree k+1 and leading |m_k...m_0| exactly; "
                  f"failures={bad[:5]}")
    assert ok


# ---------------------------------------------------------------------------
# Case (2) (criteria 4-5)

def case2_samples():
    rng = random.Random(777)
    vals = [-2, -1, 1, 2]
    out = []
    for i in range(CASE2_SAMPLES):
        sign = 1 if i % 2 == 0 else -1
        m0 = [0, 1, -1][i % 3]
        out.append(Case2Spec(sign, (m0, rng.choice(vals), rng.choice(vals)),
                             (rng.choice(vals), rng.choice(vals))))
    return out


def first_nonabelian(p, seeds=SEARCH_SEEDS):
    reps, _ = search_reps(p, seeds, tol=None, stop_after=1)
    return reps[0] if reps else None


def test_criterion_4_case2_oracle():
    bad, missing, degree_checked = [], [], 0
    samples = case2_samples()
    for spec in samples:
        p = build_case2(spec)
        rep = first_nonabelian(p)
        if rep is None:
            missing.append(spec)
            continue
        for r in (trivial_rep(p), rep):
            tol = None if r.exact else TOL_CASE2
            eng = twisted_alexander(p, r, tol=tol)
            cf = recursion_case2(spec, r, tol=tol)
            ok = cf.matches(eng, TOL_CASE2)
            if r is rep:
                lead, deg, _ = coeffs_case2(spec, r)
                if abs(complex(lead)) > 1e3 * TOL_CASE2:
                    degree_checked += 1
                    ok = ok and eng.is_polynomial and eng.degree == deg
                    ok = ok and deg == (2 * (spec.k + spec.l + 1) if spec.m[0] != 0
                                        else 2 * (spec.k + spec.l) - 2)
            if not ok:
                bad.append((spec, r.nonabelian))
    ok = not bad and not missing
    report(4, ok, f"{len(samples)} specs x (trivial + searched rep), degree branch checked on "
                  f"{degree_checked}; mismatches={len(bad)}, no rep found={len(missing)}")
    assert ok


EXAMPLE_SPECS = {
    "first example (-2,-2)": (Case2Spec(1, (0, -2, 1), (-2, 1)),
                              lambda A, B, C, E: 2 - (B * A * B * C).trace()),
    "second example (-2,-3)": (Case2Spec(1, (0, -2, 1), (-3, 1)),
                               lambda A, B, C, E: 1 - ((B * A * B * C - E) * (B * C + E)).trace()),
}


def test_criterion_5_case2_examples():
    lines, ok = [], True
    for (name, (spec, formula)), want in zip(EXAMPLE_SPECS.items(), ("degree", "non-monic")):
        p = build_case2(spec)
        reps, _ = search_reps(p, SEARCH_SEEDS, tol=None, stop_after=3)
        formula_ok, witnessed = bool(reps), False
        for rep in reps:
            A, B, C = rep["a"], rep["b"], rep["c"]
            E = Mat2.identity(A.a * 0 + 1)
            lam, deg, label = coeffs_case2(spec, rep)
            val = formula(A, B, C, E)
            formula_ok &= label == "lambda0" and abs(complex(lam) - complex(val)) <= TOL_EXAMPLES
            if abs(complex(val)) <= 1e-6:
                continue
            eng = twisted_alexander(p, rep, tol=TOL_CASE2)
            if want == "degree":
                witnessed |= eng.degree == 4 * genus(spec) - 2
            else:
                witnessed |= abs(abs(complex(eng.leading)) - 1) > 1e-6
        ok &= formula_ok and witnessed
        lines.append(f"{name}: formula {'ok' if formula_ok else 'BAD'} on {len(reps)} reps, "
                     f"{want} {'witnessed' if witnessed else 'NOT witnessed'}")
    report(5, ok, "; ".join(lines))
    assert ok


# ---------------------------------------------------------------------------
# Case (3) (criterion 6)

def test_criterion_6_case3_oracle():
    bad, notes = [], {}
    for n in range(-4, 5):
        spec = Case3Spec(n)
        p = build_case3(spec)
        rep = first_nonabelian(p)
        if rep is None:
            bad.append((n, "no rep"))
            continue
        for r in (trivial_rep(p), rep):
            tol = None if r.exact else TOL_CASE3
            eng = twisted_alexander(p, r, tol=tol)
            cf = case3_polynomial(spec, r, tol=tol)
            ok = cf.matches(eng, TOL_CASE3)
            if r is rep:
                poly = cf.polynomial
                top = cf.predictions["degree"]
                ok = ok and poly is not None and poly.max_exp() == top
                ok = ok and is_palindromic(poly, TOL_CASE3)
                generic = top == (14 if n % 2 == 0 else 6)
                if generic:
                    ok = ok and cf.notes.get("trace_formulas_agree", False)
                    notes[n] = cf.notes.get("printed_mismatches")
                ok = ok and cf.notes.get("convention") == "preamble"
            if not ok:
                bad.append((n, r.nonabelian))
    ok = not bad
    literal = sorted({tuple(v) for v in notes.values() if v})
    report(6, ok, f"n=-4..4 x (trivial + searched rep), symmetric, two-ended recurrences agree, "
                  f"A convention = preamble; literal trace-formula mismatches at {literal} "
                  f"(corrected forms agree); failures={bad}")
    assert ok


# ---------------------------------------------------------------------------
# Fox calculus (criterion 7)

def random_word(rng, gens, max_len=12):
    return Word([(rng.choice(gens), rng.choice((1, -1))) for _ in range(rng.randint(0, max_len))])


def test_criterion_7_fox_laws():
    rng = random.Random(7)
    gens = ["a", "b", "c"]
    failures = 0
    for _ in range(FOX_WORDS):
        u, v = random_word(rng, gens), random_word(rng, gens)
        for g in gens:
            if fox_derivative(u * v, g) != fox_derivative(u, g) + u * fox_derivative(v, g):
                failures += 1
            if fox_derivative(u.inverse(), g) != -(u.inverse() * fox_derivative(u, g)):
                failures += 1
        total = GroupRingElement()
        for g in gens:
            total = total + fox_derivative(u, g) * (GroupRingElement.of(Word.gen(g)) - 1)
        if total != GroupRingElement.of(u) - 1:
            failures += 1
    ok = failures == 0
    report(7, ok, f"product, inverse and fundamental identity on {FOX_WORDS} random word pairs "
                  f"(exact); failures={failures}")
    assert ok


# ---------------------------------------------------------------------------
# Well-definedness (criterion 8)

def welldef_pairs():
    rng = random.Random(8)
    pairs = []
    while len(pairs) < WELLDEF_PAIRS:
        kind = len(pairs) % 3
        if kind == 0:
            spec = TwoBridgeSpec((rng.choice([-2, -1, 1, 2]), rng.choice([-2, -1, 1, 2])))
            p = build(spec)
            reps = [trivial_rep(p)] + riley_parabolic_reps(p, limit=1)
            pairs.append((spec, p, reps[len(pairs) % 2]))
        elif kind == 1:
            spec = Case3Spec(rng.randint(-3, 3))
            p = build(spec)
            rep = first_nonabelian(p, 16) if rng.random() < 0.7 else trivial_rep(p)
            if rep is not None:
                pairs.append((spec, p, rep))
        else:
            spec = Case2Spec(rng.choice([1, -1]), (rng.choice([0, 1]), rng.choice([-1, 1]),
                                                   rng.choice([-1, 1])),
                             (rng.choice([-1, 1]), rng.choice([-1, 1])))
            p = build(spec)
            rep = first_nonabelian(p, 16) if rng.random() < 0.5 else trivial_rep(p)
            if rep is not None:
                pairs.append((spec, p, rep))
    return pairs


def test_criterion_8_column_independence():
    bad, columns = [], 0
    pairs = welldef_pairs()
    for spec, p, rep in pairs:
        rpt = welldefinedness_report(p, rep, tol=None if rep.exact else TOL_CASE2)
        columns += len(rpt["results"])
        if not rpt["all_agree"] or len(rpt["results"]) < 2:
            bad.append(spec)
    ok = not bad
    report(8, ok, f"{len(pairs)} (presentation, rep) pairs, {columns} admissible columns, "
                  f"all normalize_unit-equal; failures={bad[:5]}")
    assert ok


# ---------------------------------------------------------------------------
# Continued fractions (criterion 9)

def _shape_ok(beta, alpha, entries):
    if any(e == 0 for e in entries[1:]):
        return False
    if alpha % 2 and beta % 2 == 0:
        return all(e % 2 == 0 for e in entries) and len(entries) % 2 == 1
    if alpha % 2 == 0:
        return all(e % 2 == 0 for e in entries) and len(entries) % 2 == 0
    return all(e % 2 == 0 for e in entries[:-1]) and entries[-1] % 2 == 1


def test_criterion_9_continued_fractions():
    count, bad = 0, []
    for alpha in range(1, CF_BOUND + 1):
        for beta in range(-alpha + 1, alpha):
            if gcd(alpha, beta) != 1:
                continue
            count += 1
            cf = even_continued_fraction(beta, alpha)
            if cf_to_rational(cf.entries) != Fraction(beta, alpha) or \
                    not _shape_ok(beta, alpha, cf.entries):
                bad.append((beta, alpha))
    example = cf_to_rational([0, 1, 1, 2]) == Fraction(3, 5)
    ok = not bad and example
    report(9, ok, f"{count} coprime pairs |beta| < alpha <= {CF_BOUND} round-trip with the "
                  f"parity shapes; [0,1,1,2] = 3/5: {example}; failures={bad[:5]}")
    assert ok


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
    for n in sorted(RESULTS):
        print(RESULTS[n])
