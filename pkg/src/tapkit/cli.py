"""tapkit command line: build presentations, find representations, compute
and cross-check twisted Alexander polynomials.

Exit codes: 0 ok, 1 comparison mismatch, 2 invalid input, 3 computation error.
Errors are reported as one JSON record on standard output.
"""
from __future__ import annotations

import argparse
import itertools
import json
import os
import random
import sys
from fractions import Fraction
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .builders import Case2Spec, Case3Spec, TwoBridgeSpec, build, genus, spec_from_json
from .closed_form import alex_closed_form, closed_form
from .engine import SCHEMA_VERSION, alexander, twisted_alexander
from .errors import InvalidInput, Mismatch, TapkitError
from .groups import Presentation
from .laurent import is_palindromic
from .reps import images_from_json, newton_search_rep, riley_parabolic_reps, search_reps, \
    trivial_rep, validate_rep
from .scalars import ComplexFloat, default_tol, scalar_is_zero, scalar_to_json


class _Parser(argparse.ArgumentParser):
    """argparse with a JSON error record and exit code 2."""

    def error(self, message):
        _emit({"error": "invalid_input", "message": message, "details": {}})
        sys.exit(2)


def _emit(obj, out=None):
    text = json.dumps(obj, sort_keys=True)
    if out is None or out == "-":
        print(text)
    else:
        with open(out, "w") as fh:
            fh.write(text + "\n")


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise InvalidInput(f"expected comma-separated integers, got {text!r}")


def _read_json(path):
    try:
        if path in (None, "-"):
            raw = sys.stdin.read()
        else:
            with open(path) as fh:
                raw = fh.read()
    except OSError as e:
        raise InvalidInput(f"cannot read {path}: {e.strerror}", path=path)
    try:
        return json.loads(raw)
    except json.JSONDecodeError as e:
        raise InvalidInput(f"malformed JSON in {path or 'stdin'}: {e.msg}",
                           line=e.lineno, column=e.colno)


# ---------------------------------------------------------------------------
# Spec / presentation / representation resolution

def _spec_from_args(args):
    fam = getattr(args, "family", None)
    if fam is None:
        return None
    if fam == "two-bridge":
        if args.m is None:
            raise InvalidInput("two-bridge needs --m")
        return TwoBridgeSpec(tuple(_int_list(args.m)))
    if fam == "case2":
        if args.m is None or args.n is None or args.beta1 is None:
            raise InvalidInput("case2 needs --beta1, --m and --n")
        return Case2Spec(_sign(args.beta1), tuple(_int_list(args.m)), tuple(_int_list(args.n)))
    if fam == "case3":
        if args.n is None:
            raise InvalidInput("case3 needs --n")
        return Case3Spec(int(args.n))
    raise InvalidInput(f"unknown family {fam!r}")


def _sign(text):
    if text in ("+", "+1", "1"):
        return 1
    if text in ("-", "-1"):
        return -1
    raise InvalidInput(f"beta1 must be + or -, got {text!r}")


def _load_presentation(args):
    """(presentation, spec or None) from family flags or presentation JSON."""
    spec = _spec_from_args(args)
    if spec is not None:
        return build(spec), spec
    obj = _read_json(getattr(args, "presentation", None))
    try:
        p = Presentation.from_json(obj)
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise InvalidInput(f"not a presentation: {e!r}")
    spec = None
    if isinstance(p.family, dict):
        spec = spec_from_json(p.family)
    return p, spec


def resolve_rep(p, text, tol=None):
    """trivial | riley:<i> | search:<seed> | path to a representation JSON file."""
    if text == "trivial":
        return trivial_rep(p)
    if text.startswith("riley:"):
        i = _selector_int(text)
        reps = riley_parabolic_reps(p, tol=tol, limit=i + 1)
        if not 0 <= i < len(reps):
            raise InvalidInput(f"riley index {i} out of range (found {len(reps)} reps)")
        return reps[i]
    if text.startswith("search:"):
        return newton_search_rep(p, seed=_selector_int(text), tol=tol)
    try:
        images = images_from_json(_read_json(text))
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise InvalidInput(f"not a representation: {e!r}")
    return validate_rep(p, images, tol=tol)


def _selector_int(text):
    try:
        return int(text.split(":", 1)[1])
    except ValueError:
        raise InvalidInput(f"bad representation selector {text!r}")


def _is_zero(x, tol=None):
    """Exact zero, or |x| <= 1e3 * tol for float scalars."""
    if isinstance(x, (int, Fraction)):
        return x == 0
    if isinstance(x, (ComplexFloat, float, complex)):
        return abs(complex(x)) <= 1e3 * (default_tol() if tol is None else tol)
    return scalar_is_zero(x)


def _run_method(method, p, spec, rep, column=None, tol=None):
    if method == "engine":
        return twisted_alexander(p, rep, column=column, tol=tol)
    if spec is None:
        raise InvalidInput("closed-form needs a family spec (flags or a built presentation)")
    return closed_form(spec, rep, tol=tol)


# ---------------------------------------------------------------------------
# Commands

def cmd_build(args):
    p, _ = _load_presentation(args)
    _emit(p.to_json(), args.out)
    return 0


def cmd_reps(args):
    tol = default_tol()
    if args.reps_kind == "riley":
        p = build(TwoBridgeSpec(tuple(_int_list(args.m))))
        reps = riley_parabolic_reps(p, mode=args.mode, tol=tol)
        _emit({"version": SCHEMA_VERSION,
               "reps": [dict(images=r.to_json(), report=r.report) for r in reps]}, args.out)
        return 0
    p, _ = _load_presentation(args)
    seeds = range(args.seed, args.seed + args.seeds)
    found, failures = [], []
    for s in seeds:
        part, bad = _search_one(p, s, tol)
        found += part
        failures += bad
        if args.stop_after and len(found) >= args.stop_after:
            break
    _emit({"version": SCHEMA_VERSION,
           "reps": [dict(images=r.to_json(), report=r.report) for r in found],
           "failures": failures}, args.out)
    return 0


def _search_one(p, seed, tol):
    try:
        return [newton_search_rep(p, seed=seed, tol=tol)], []
    except TapkitError as e:
        return [], [e.details]


def cmd_tap(args):
    p, spec = _load_presentation(args)
    rep = resolve_rep(p, args.rep, default_tol())
    res = _run_method(args.method, p, spec, rep, column=args.column)
    _emit(res.to_json(), args.out)
    return 0


def cmd_alex(args):
    p, spec = _load_presentation(args)
    poly = alexander(p, column=args.column)
    out = {"version": SCHEMA_VERSION, "polynomial": poly.to_json(), "degree": poly.max_exp(),
           "leading": scalar_to_json(poly.coeffs[poly.max_exp()]),
           "palindromic": is_palindromic(poly)}
    if spec is not None and not isinstance(spec, Case3Spec):
        lead, deg = alex_closed_form(spec)
        top = poly.coeffs[poly.max_exp()]
        out["closed_form"] = {"leading": lead, "degree": deg,
                              "agrees": (_is_zero(top - lead) or _is_zero(top + lead))
                              and deg == poly.max_exp()}
    _emit(out, args.out)
    return 0


def compare_point(p, spec, rep, tol=None):
    eng = twisted_alexander(p, rep, tol=tol)
    cf = closed_form(spec, rep, tol=tol)
    return eng, cf, cf.matches(eng, tol)


def cmd_compare(args):
    p, spec = _load_presentation(args)
    if spec is None:
        raise InvalidInput("compare needs a family spec (flags or a built presentation)")
    tol = default_tol()
    rep = resolve_rep(p, args.rep, tol)
    eng, cf, ok = compare_point(p, spec, rep, tol)
    out = {"version": SCHEMA_VERSION, "agree": ok, "engine": eng.to_json(),
           "closed_form": cf.to_json()}
    _emit(out, args.out)
    if not ok:
        raise Mismatch("closed form and engine disagree up to units")
    return 0


# ---------------------------------------------------------------------------
# Sweeps

def _two_bridge_grid(args, rng):
    vals = [v for v in range(-args.max_m, args.max_m + 1) if v != 0]
    for k in _int_list(args.k):
        if args.samples:
            for _ in range(args.samples):
                yield TwoBridgeSpec(tuple(rng.choice(vals) for _ in range(k + 1)))
        else:
            for m in itertools.product(vals, repeat=k + 1):
                yield TwoBridgeSpec(m)


def _case2_grid(args, rng):
    vals = [v for v in range(-args.max_m, args.max_m + 1) if v != 0]
    k, l = args.k_case2, args.l
    count = args.samples or 20
    for _ in range(count):
        m0 = rng.choice([0] + vals)
        yield Case2Spec(rng.choice([1, -1]), (m0,) + tuple(rng.choice(vals) for _ in range(k)),
                        tuple(rng.choice(vals) for _ in range(l)))


def sweep_specs(args):
    rng = random.Random(args.seed)
    if args.family == "two-bridge":
        return list(_two_bridge_grid(args, rng))
    if args.family == "case2":
        return list(_case2_grid(args, rng))
    lo, hi = _int_list(args.n_range)
    return [Case3Spec(n) for n in range(lo, hi + 1)]


def sweep_point(task):
    """One JSON record for (spec, rep-selector, tol); never raises."""
    spec, rep_sel, tol = task
    rec = {"spec": spec.to_json(), "rep": rep_sel}
    try:
        p = build(spec)
        rep = _sweep_rep(p, rep_sel, tol)
        rec["nonabelian"] = rep.nonabelian
        eng, cf, ok = compare_point(p, spec, rep, tol)
        rec["agree"] = bool(ok)
        rec["is_polynomial"] = eng.is_polynomial
        rec["degree"] = eng.degree
        rec["predictions"] = cf.to_json().get("predictions", {})
        if eng.is_polynomial:
            lead = eng.leading
            rec["monic"] = _is_zero(lead - 1, tol) or _is_zero(lead + 1, tol)
        if not isinstance(spec, Case3Spec) and rep.nonabelian:
            g = genus(spec)
            pred = cf.predictions.get("lambda0", cf.predictions.get("kappa0"))
            if pred is not None and not _is_zero(pred, tol):
                rec["genus"] = g
                rec["genus_degree_ok"] = eng.degree == 4 * g - 2
    except TapkitError as e:
        rec["error"] = e.record()
    return rec


def _sweep_rep(p, sel, tol):
    if sel == "nonabelian":
        if isinstance(p.family, dict) and p.family.get("family") == "two-bridge":
            return riley_parabolic_reps(p, tol=tol, limit=1)[0]
        reps, failures = search_reps(p, 16, tol=tol, stop_after=1)
        if not reps:
            from .errors import DidNotConverge
            raise DidNotConverge("no nonabelian rep found in 16 seeds", failures=len(failures))
        return reps[0]
    return resolve_rep(p, sel, tol)


def cmd_sweep(args):
    specs = sweep_specs(args)
    tol = default_tol()
    sels = [s.strip() for s in args.reps.split(",") if s.strip()]
    tasks = [(s, r, tol) for s in specs for r in sels]
    if args.workers == 1:
        records = map(sweep_point, tasks)
        pool = None
    else:
        pool = ProcessPoolExecutor(max_workers=args.workers or None)
        records = pool.map(sweep_point, tasks, chunksize=4)
    failures = 0
    out = sys.stdout if args.out in (None, "-") else open(args.out, "w")
    try:
        for rec in records:                    # map keeps grid order
            if not rec.get("agree", False):
                failures += 1
            out.write(json.dumps(rec, sort_keys=True) + "\n")
    finally:
        if pool is not None:
            pool.shutdown()
        if out is not sys.stdout:
            out.close()
    if failures:
        raise Mismatch(f"{failures} of {len(tasks)} sweep points did not agree",
                       failures=failures, points=len(tasks))
    return 0


# ---------------------------------------------------------------------------

def _family_flags(sp, presentation=True):
    sp.add_argument("--family", choices=["two-bridge", "case2", "case3"])
    sp.add_argument("--m", help="comma-separated m entries")
    sp.add_argument("--n", help="comma-separated n entries (case2) or the integer n (case3)")
    sp.add_argument("--beta1", help="+ or - (case2)")
    if presentation:
        sp.add_argument("--presentation", help="presentation JSON file ('-' or omitted: stdin)")


def build_parser():
    ap = _Parser(prog="tapkit", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--tol", type=float, help="float tolerance (overrides TAPKIT_TOL)")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="emit a presentation")
    b.add_argument("family", choices=["two-bridge", "case2", "case3"])
    b.add_argument("--m")
    b.add_argument("--n")
    b.add_argument("--beta1")
    b.add_argument("--out")
    b.set_defaults(func=cmd_build)

    r = sub.add_parser("reps", help="find representations")
    rsub = r.add_subparsers(dest="reps_kind", required=True, parser_class=_Parser)
    rr = rsub.add_parser("riley", help="parabolic reps of a two-bridge knot")
    rr.add_argument("--m", required=True)
    rr.add_argument("--mode", choices=["auto", "exact", "float"], default="auto")
    rr.add_argument("--out")
    rr.set_defaults(func=cmd_reps)
    rs = rsub.add_parser("search", help="numeric search from seeded starts")
    _family_flags(rs)
    rs.add_argument("--seeds", type=int, default=10)
    rs.add_argument("--seed", type=int, default=0, help="first seed")
    rs.add_argument("--stop-after", type=int)
    rs.add_argument("--out")
    rs.set_defaults(func=cmd_reps)

    for name, func, hlp in (("tap", cmd_tap, "twisted Alexander polynomial"),
                            ("compare", cmd_compare, "engine vs closed form")):
        t = sub.add_parser(name, help=hlp)
        _family_flags(t)
        t.add_argument("--rep", default="trivial",
                       help="trivial | riley:<i> | search:<seed> | rep JSON file")
        if name == "tap":
            t.add_argument("--method", choices=["engine", "closed-form"], default="engine")
            t.add_argument("--column")
        t.add_argument("--out")
        t.set_defaults(func=func)

    a = sub.add_parser("alex", help="classical Alexander polynomial")
    _family_flags(a)
    a.add_argument("--column")
    a.add_argument("--out")
    a.set_defaults(func=cmd_alex)

    s = sub.add_parser("sweep", help="compare both methods over a parameter grid (JSON lines)")
    s.add_argument("--family", choices=["two-bridge", "case2", "case3"], required=True)
    s.add_argument("--k", default="1", help="two-bridge: comma-separated k values")
    s.add_argument("--k-case2", type=int, default=2)
    s.add_argument("--l", type=int, default=2)
    s.add_argument("--max-m", type=int, default=2, help="|m_i|, |n_i| bound (at most 5)")
    s.add_argument("--n-range", default="-4,4", help="case3: lo,hi")
    s.add_argument("--samples", type=int, default=0, help="random samples instead of a full grid")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--reps", default="trivial,nonabelian",
                   help="comma-separated: trivial, nonabelian, riley:<i>, search:<seed>")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--allow-large", action="store_true", help="lift the |m| <= 5, k <= 6 caps")
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)
    return ap


def _check_caps(args):
    if args.command != "sweep" or args.allow_large:
        return
    if args.max_m > 5 or max(_int_list(args.k) + [args.k_case2, args.l]) > 6:
        raise InvalidInput("sweep caps |m| <= 5 and k, l <= 6; pass --allow-large to lift them")


_VALUE_FLAGS = {"--m", "--n", "--beta1", "--n-range", "--k"}


def _glue_negative_values(argv):
    """Let "--m -2,1" through: argparse would read "-2,1" as an option."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_negative_values(argv))
    if args.tol is not None:
        os.environ["TAPKIT_TOL"] = repr(args.tol)
    try:
        _check_caps(args)
        return args.func(args)
    except TapkitError as e:
        _emit(e.record())
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
