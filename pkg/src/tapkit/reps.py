"""Representations into SL2: validation, Riley's parabolic representations
of two-bridge knot groups, and a damped Newton search for the other
families."""
from __future__ import annotations

import json

import numpy as np

from .errors import (DidNotConverge, InvalidInput, NoNonabelianRoot, NotSL2,
                     RelatorViolation, UnknownGenerator)
from .groups import Presentation
from .laurent import Mat2
from .scalars import (AlgebraicExt, AlgebraicField, ComplexFloat, ExactField, FloatField,
                      GaussianRational, default_tol, field_of)


def eval_word(word, images, inverses=None):
    """Image of a word, multiplying runs of equal letters by powers."""
    if inverses is None:
        inverses = {}
    result = None
    L = word.letters
    i = 0
    while i < len(L):
        g, s = L[i]
        j = i
        while j < len(L) and L[j] == L[i]:
            j += 1
        if s == 1:
            m = images[g]
        else:
            if g not in inverses:
                inverses[g] = images[g].inverse()
            m = inverses[g]
        block = m ** (j - i) if j - i > 1 else m
        result = block if result is None else result * block
        i = j
    if result is None:
        some = next(iter(images.values()))
        return Mat2.identity(some.a * 0 + 1)
    return result


def extend_images(p, images):
    """Fill in images of defined generators from their defining words."""
    out = dict(images)
    for g, w in p.definitions:
        if g not in out:
            missing = w.generators() - set(out)
            if missing:
                raise UnknownGenerator(f"cannot evaluate {g}: no image for {sorted(missing)}")
            out[g] = eval_word(w, out)
    return out


def _deviation(m, target, exact):
    if exact:
        return 0.0 if m == target else float("inf")
    diff = max(abs(complex(x) - complex(y)) for x, y in zip(m.entries(), target.entries()))
    scale = max(1.0, max(abs(complex(x)) for x in m.entries()))
    return diff / scale


class Representation:
    """Validated SL2 images of every generator of a presentation."""

    def __init__(self, images, field, report, nonabelian):
        self.images = images
        self.field = field
        self.report = report
        self.nonabelian = nonabelian

    @property
    def exact(self):
        return self.field.exact

    def __getitem__(self, g):
        return self.images[g]

    def conjugate(self, P, presentation):
        Pi = P.inverse()
        return validate_rep(presentation, {g: P * m * Pi for g, m in self.images.items()},
                            tol=getattr(self.field, "tol", None))

    def to_float(self, presentation, tol=None):
        """Same representation with float entries (algebraic elements need an
        embedding and are therefore rejected here)."""
        imgs = {g: m.map(lambda x: ComplexFloat.of(complex(x))) for g, m in self.images.items()}
        return validate_rep(presentation, imgs, tol=tol)

    def to_json(self):
        return {g: m.to_json() for g, m in self.images.items()}

    def dumps(self):
        return json.dumps(self.to_json())

    def __repr__(self):
        return f"Representation({self.field!r}, nonabelian={self.nonabelian})"


def images_from_json(obj):
    if not isinstance(obj, dict):
        raise InvalidInput("representation JSON must be an object")
    if "images" in obj and isinstance(obj["images"], dict):
        obj = obj["images"]
    return {g: Mat2.from_json(m) for g, m in obj.items()}


def _coerce_images(images, tol):
    """Pick one field for all entries and coerce everything into it."""
    vals = [x for m in images.values() for x in m.entries()]
    field = field_of([x for x in vals if not isinstance(x, int)], tol)
    return {g: m.map(field.coerce) for g, m in images.items()}, field


def validate_rep(p, images, tol=None):
    """Check det = 1 and relators -> E; return a Representation."""
    images = {g: (m if isinstance(m, Mat2) else Mat2.from_rows(m)) for g, m in images.items()}
    images = extend_images(p, images)
    missing = [g for g in p.generators if g not in images]
    if missing:
        raise UnknownGenerator(f"no image for generator(s) {missing}")
    images = {g: images[g] for g in p.generators}
    images, field = _coerce_images(images, tol)
    exact = field.exact
    one = field.one()
    worst_det = 0.0
    for g, m in images.items():
        d = m.det()
        if exact:
            if d != one:
                raise NotSL2(f"det of image of {g} is {d!r}, not 1", generator=g)
        else:
            dev = abs(complex(d) - 1)
            worst_det = max(worst_det, dev)
            if dev > field.tol * max(1.0, abs(complex(d))):
                raise NotSL2(f"det of image of {g} deviates from 1 by {dev:.3g}",
                             generator=g, deviation=dev)
    E = Mat2.identity(one)
    inverses = {}
    worst = 0.0
    for r in p.relators + p.redundant:
        dev = _deviation(eval_word(r, images, inverses), E, exact)
        worst = max(worst, dev)
        if exact and dev:
            raise RelatorViolation(f"relator {r} does not map to the identity", relator=str(r))
        if not exact and dev > field.tol:
            raise RelatorViolation(f"relator {r} deviates from the identity by {dev:.3g}",
                                   relator=str(r), deviation=dev)
    nonabelian = _is_nonabelian(p, images, field)
    report = {"max_relator_deviation": worst, "max_det_deviation": worst_det,
              "nonabelian": nonabelian, "field": field.name}
    return Representation(images, field, report, nonabelian)


def commutator_deviation(x, y):
    c = x * y - y * x
    return max(abs(complex(v)) for v in c.entries()) / max(
        1.0, max(abs(complex(v)) for v in (x * y).entries()))


def _is_nonabelian(p, images, field):
    gens = p.free_generators() or list(p.generators)
    mats = [images[g] for g in gens]
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            x, y = mats[i], mats[j]
            if field.exact:
                if x * y != y * x:
                    return True
            elif commutator_deviation(x, y) > 1e3 * field.tol:
                return True
    return False


def trivial_rep(p):
    one = GaussianRational(1)
    return validate_rep(p, {g: Mat2.identity(one) for g in p.free_generators()})


# ---------------------------------------------------------------------------
# Riley representations.

def riley_polynomial(p):
    """Entry-gcd polynomial in w for rho(a) = [[1,1],[0,1]], rho(b) = [[1,0],[w,1]].

    Returns a sympy Poly over ZZ with the powers of w removed.
    """
    import sympy as sp
    w = sp.Symbol("w")
    free = p.free_generators()
    if sorted(free) != ["a", "b"]:
        raise InvalidInput("Riley representations need free generators a and b")
    one = sp.Poly(1, w, domain="ZZ")
    zero = sp.Poly(0, w, domain="ZZ")
    wp = sp.Poly(w, w, domain="ZZ")
    images = {"a": Mat2(one, one, zero, one), "b": Mat2(one, zero, wp, one)}
    inv = {"a": Mat2(one, -one, zero, one), "b": Mat2(one, zero, -wp, one)}
    images = _extend_poly_images(p, images, inv)
    g = zero
    E = Mat2(one, zero, zero, one)
    defined = {g_ for g_, _ in p.definitions}
    # Redundant relators are consequences of the others, so they are skipped.
    for r in p.relators:
        if r.letters and r.letters[0][0] in defined and _is_definition(p, r):
            continue
        m = _eval_poly_word(r, images, inv) - E
        for e in sorted(m.entries(), key=lambda e: e.degree()):
            g = e if g.is_zero else g.gcd(e)
    if g.is_zero:
        raise NoNonabelianRoot("relators impose no condition on w")
    cs = g.all_coeffs()
    while len(cs) > 1 and cs[-1] == 0:          # strip powers of w
        cs.pop()
    return sp.Poly(cs, w, domain="ZZ")


def _is_definition(p, r):
    for g, w in p.definitions:
        if r == (type(w).gen(g) * w.inverse()):
            return True
    return False


def _poly_inverse_sl2(m):
    return Mat2(m.d, -m.b, -m.c, m.a)


def _eval_poly_word(word, images, inv):
    out = None
    for g, s in word:
        m = images[g] if s == 1 else inv[g]
        out = m if out is None else out * m
    if out is None:
        raise InvalidInput("empty word")
    return out


def _extend_poly_images(p, images, inv):
    for g, w in p.definitions:
        m = _eval_poly_word(w, images, inv)
        images[g] = m
        inv[g] = _poly_inverse_sl2(m)
    return images


def riley_parabolic_reps(p, mode="auto", tol=None, max_exact_degree=2, limit=None,
                         factor_max_degree=60):
    """One representation per Riley root.

    mode "float": a float rep per distinct root.  "exact": an exact rep per
    irreducible factor over Q(i) (algebraic when the factor has degree > 1).
    "auto": exact for factors of degree <= max_exact_degree, float roots
    otherwise; polynomials above factor_max_degree are not factored at all.
    ``limit`` stops after that many representations.
    """
    import sympy as sp
    poly = riley_polynomial(p)
    w = poly.gens[0]
    if poly.degree() < 1:
        raise NoNonabelianRoot("Riley polynomial has no nonzero roots")
    sqf = poly.sqf_part()
    if mode == "float" or (mode == "auto" and sqf.degree() > factor_max_degree):
        factors = [sqf]
    else:
        factors = [sp.Poly(f, w) for f, _ in sp.factor_list(sqf.as_expr(), w, gaussian=True)[1]]
        factors.sort(key=lambda f: (f.degree(), str(f.as_expr())))
    reps = []
    for fp in factors:
        deg = fp.degree()
        if mode == "exact" or (mode == "auto" and deg <= max_exact_degree):
            coeffs = [_gauss(c) for c in reversed(fp.all_coeffs())]
            if deg == 1:
                one = GaussianRational(1)
                wv = -coeffs[0] / coeffs[1]
            else:
                field = AlgebraicField(coeffs)
                one = field.one()
                wv = field.generator()
            zero = one * 0
            reps.append(validate_rep(p, {"a": Mat2(one, one, zero, one),
                                         "b": Mat2(one, zero, wv, one)}))
        else:
            for root in _float_roots(fp, need=limit):
                try:
                    reps.append(validate_rep(
                        p, {"a": Mat2(*map(ComplexFloat, (1, 1, 0, 1))),
                            "b": Mat2(ComplexFloat(1), ComplexFloat(0),
                                      ComplexFloat.of(root), ComplexFloat(1))}, tol=tol))
                except (RelatorViolation, NotSL2):
                    continue                   # root too ill-conditioned at this tolerance
                if limit is not None and len(reps) >= limit:
                    break
        if limit is not None and len(reps) >= limit:
            break
    if not reps:
        raise NoNonabelianRoot("no nonabelian parabolic representation found")
    return reps


def _gauss(c):
    import sympy as sp
    return GaussianRational(_q(sp.re(c)), _q(sp.im(c)))


def _q(x):
    from fractions import Fraction
    import sympy as sp
    r = sp.Rational(x)
    return Fraction(int(r.p), int(r.q))


def _float_roots(fp, dps=40, need=None):
    """Distinct roots of an integer/Gaussian polynomial, yielded lazily:
    companion-matrix eigenvalues polished by Newton steps at ``dps`` digits.
    Falls back to mpmath's polyroots when fewer than ``need`` (default: all)
    survive polishing; if that does not converge either, only the polished
    roots are yielded."""
    import mpmath
    coeffs = [complex(c) if not c.is_Integer else int(c) for c in fp.all_coeffs()]
    big = max(abs(c) for c in coeffs)
    approx = np.roots([c / big for c in coeffs])
    approx = sorted(approx, key=lambda z: (round(abs(z), 9), round(np.angle(z), 9)))
    need = fp.degree() if need is None else need
    out = []

    def fresh(zc):
        return all(abs(zc - r) > 1e-9 * max(1.0, abs(zc)) for r in out)

    with mpmath.workdps(dps):
        mc = [mpmath.mpc(c) for c in coeffs]
        dmc = [c * (len(mc) - 1 - i) for i, c in enumerate(mc[:-1])]
        absc = [abs(c) for c in mc]
        eps = mpmath.mpf(10) ** (-dps + 5)
        for z0 in approx:
            z = mpmath.mpc(complex(z0))
            for _ in range(60):
                df = mpmath.polyval(dmc, z)
                if df == 0:
                    break
                step = mpmath.polyval(mc, z) / df
                z -= step
                if abs(step) <= eps * max(1, abs(z)):
                    break
            if abs(mpmath.polyval(mc, z)) > mpmath.polyval(absc, abs(z)) * eps * 1000:
                continue
            zc = complex(z)
            if fresh(zc):
                out.append(zc)
                yield zc
    if len(out) < need:
        for steps in (200, 2000):
            try:
                roots = fp.nroots(n=30, maxsteps=steps)
                break
            except mpmath.NoConvergence:
                roots = []                     # keep what polishing produced
        for r in roots:
            zc = complex(r)
            if fresh(zc):
                out.append(zc)
                yield zc


# ---------------------------------------------------------------------------
# Numeric search.

def _residual_fn(p):
    free = p.free_generators()
    defined = {g for g, _ in p.definitions}
    checks = [r for r in p.relators + p.redundant if not _is_definition(p, r)]

    def unpack(x):
        imgs = {}
        for k, g in enumerate(free):
            a, b, c, d = x[4 * k:4 * k + 4]
            imgs[g] = Mat2(a, b, c, d)
        return imgs

    def residual(x):
        imgs = _extend_complex(p, unpack(x))
        res = []
        for r in checks:
            m = _eval_complex(r, imgs)
            res.extend([m.a - 1, m.b, m.c, m.d - 1])
        for g in free:
            res.append(imgs[g].det() - 1)
        return np.array(res, dtype=complex)

    return free, unpack, residual, defined


def _inv_complex(m):
    det = m.a * m.d - m.b * m.c
    return Mat2(m.d / det, -m.b / det, -m.c / det, m.a / det)


def _eval_complex(word, imgs, cache=None):
    out = None
    inv = {}
    L = word.letters
    i = 0
    while i < len(L):
        g, s = L[i]
        j = i
        while j < len(L) and L[j] == L[i]:
            j += 1
        if s == 1:
            m = imgs[g]
        else:
            if g not in inv:
                inv[g] = _inv_complex(imgs[g])
            m = inv[g]
        blk = m ** (j - i) if j - i > 1 else m
        out = blk if out is None else out * blk
        i = j
    return out if out is not None else Mat2(1, 0, 0, 1)


def _extend_complex(p, imgs):
    for g, w in p.definitions:
        imgs[g] = _eval_complex(w, imgs)
    return imgs


def newton_search_rep(p, seed=0, max_iter=200, tol=None, start=None, residual_target=1e-12,
                      require_nonabelian=True):
    """Levenberg-Marquardt search for SL2 images of the free generators.

    ``start`` may be a dict of initial images; otherwise entries are drawn
    from a complex Gaussian with the given seed.  Raises DidNotConverge with
    the best residual on failure.
    """
    with np.errstate(all="ignore"):            # divergent seeds overflow harmlessly
        return _lm_search(p, seed, max_iter, tol, start, residual_target, require_nonabelian)


def _lm_search(p, seed, max_iter, tol, start, residual_target, require_nonabelian):
    tol = default_tol() if tol is None else tol
    free, unpack, residual, _ = _residual_fn(p)
    rng = np.random.default_rng(seed)
    if start is not None:
        x = np.array([complex(v) for g in free for v in start[g].entries()], dtype=complex)
    else:
        x = (rng.standard_normal(4 * len(free)) + 1j * rng.standard_normal(4 * len(free)))
        for k in range(len(free)):
            a, b, c, d = x[4 * k:4 * k + 4]
            det = a * d - b * c
            x[4 * k:4 * k + 4] /= np.sqrt(det)
    f = residual(x)
    cost = np.linalg.norm(f)
    lam = 1e-3
    h = 1e-7
    for _ in range(max_iter):
        if cost < residual_target:
            break
        J = np.empty((len(f), len(x)), dtype=complex)
        for j in range(len(x)):
            step = h * max(1.0, abs(x[j]))
            xp = x.copy()
            xp[j] += step
            J[:, j] = (residual(xp) - f) / step
        JH = J.conj().T
        A = JH @ J
        g = JH @ f
        improved = False
        for _ in range(12):
            try:
                dx = np.linalg.solve(A + lam * np.diag(np.diag(A).real + 1e-12), -g)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            xn = x + dx
            fn = residual(xn)
            cn = np.linalg.norm(fn)
            if np.isfinite(cn) and cn < cost:
                x, f, cost = xn, fn, cn
                lam = max(lam / 3, 1e-12)
                improved = True
                break
            lam *= 10
        if not improved:
            break
    if not np.isfinite(cost) or cost > max(residual_target, tol):
        raise DidNotConverge(f"search from seed {seed} stalled at residual {cost:.3g}",
                             seed=seed, residual=float(cost) if np.isfinite(cost) else None)
    # Renormalize each image to det exactly 1 up to rounding.
    imgs = unpack(x)
    fixed = {}
    for g, m in imgs.items():
        s = np.sqrt(m.a * m.d - m.b * m.c)
        fixed[g] = Mat2(*(ComplexFloat.of(v / s) for v in m.entries()))
    rep = validate_rep(p, fixed, tol=tol)
    if require_nonabelian and not rep.nonabelian:
        raise DidNotConverge(f"search from seed {seed} converged to an abelian representation",
                             seed=seed, residual=float(cost), abelian=True)
    rep.report["residual"] = float(cost)
    rep.report["seed"] = seed
    return rep


def search_reps(p, seeds, tol=None, max_iter=200, stop_after=None, require_nonabelian=True):
    """Run newton_search_rep over seeds 0..seeds-1; returns (reps, failures)."""
    found, failures = [], []
    for s in range(seeds):
        try:
            found.append(newton_search_rep(p, seed=s, max_iter=max_iter, tol=tol,
                                           require_nonabelian=require_nonabelian))
        except DidNotConverge as e:
            failures.append(e.details)
        if stop_after is not None and len(found) >= stop_after:
            break
    return found, failures
