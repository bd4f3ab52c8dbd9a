"""Twisted Alexander polynomials from a presentation and a representation:
Fox Jacobian, image in the Laurent matrix ring, determinant, division."""
from __future__ import annotations

from .errors import (AllDenominatorsZero, DeficiencyMismatch, InexactDivision,
                     UnknownGenerator, ZeroPolynomial)
from .laurent import (LaurentPoly, Mat2, _is_float_poly, det_laurent, divide_exact,
                      equal_up_to_unit, flatten_blocks, laurent_divmod, normalize_unit, prune)
from .scalars import default_tol, scalar_to_json

SCHEMA_VERSION = 1

# Float quotients whose relative remainder exceeds this are treated as
# genuinely non-polynomial.
FLOAT_DIVISION_SLACK = 1e-6


def phi_of(x, images, degrees):
    """Image of a group-ring element: each word w goes to t^deg(w) rho(w).

    ``images`` maps generators to Mat2 (or to scalars in 1-dim mode)."""
    from .groups import GroupRingElement
    x = GroupRingElement.of(x)
    out = {}
    for w, c in x.terms.items():
        d = 0
        m = None
        for g, s in w:
            if g not in images or g not in degrees:
                raise UnknownGenerator(f"no image or degree for generator {g!r}")
            img = images[g] if s == 1 else _inverse(images[g])
            m = img if m is None else m * img
            d += s * degrees[g]
        if m is None:
            m = _identity_like(next(iter(images.values())))
        term = m * c
        out[d] = out[d] + term if d in out else term
    return LaurentPoly(out)


def _inverse(m):
    if isinstance(m, Mat2):
        return m.inverse()
    return 1 / m if not isinstance(m, int) or m not in (1, -1) else m


def _identity_like(m):
    if isinstance(m, Mat2):
        return Mat2.identity(m.a * 0 + 1)
    return 1


def fox_jacobian_phi(p, images):
    """Phi(dr/dg) for every relator r and generator g, via one prefix scan
    per relator.  Returns a list (per relator) of dicts generator -> poly."""
    degrees = p.degrees
    inv = {}
    rows = []
    for r in p.relators:
        acc = {}
        prefix = None
        d = 0
        for g, s in r:
            if g not in images:
                raise UnknownGenerator(f"no image for generator {g!r}")
            if s == 1:
                term = prefix if prefix is not None else _identity_like(images[g])
                slot = acc.setdefault(g, {})
                slot[d] = slot[d] + term if d in slot else term
                prefix = images[g] if prefix is None else prefix * images[g]
                d += degrees[g]
            else:
                if g not in inv:
                    inv[g] = _inverse(images[g])
                prefix = inv[g] if prefix is None else prefix * inv[g]
                d -= degrees[g]
                slot = acc.setdefault(g, {})
                slot[d] = slot[d] - prefix if d in slot else -prefix
        rows.append({g: LaurentPoly(c) for g, c in acc.items()})
    return rows


def column_denominator(p, images, g):
    """det Phi(g - 1)."""
    x = images[g]
    d = p.degrees[g]
    if isinstance(x, Mat2):
        one = x.a * 0 + 1
        poly = LaurentPoly({d: x}) - LaurentPoly({0: Mat2.identity(one)})
        return poly.det()
    return LaurentPoly({d: x}) - LaurentPoly({0: 1})


class TapResult:
    """Normalized twisted Alexander polynomial plus bookkeeping.

    ``polynomial`` is None when the quotient is not a Laurent polynomial
    (abelian representations); then ``numerator``/``denominator`` hold the
    reduced rational function.
    """

    def __init__(self, *, polynomial=None, numerator=None, denominator=None, column=None,
                 method="engine", remainder_norm=0.0, raw=None, predictions=None, tol=None,
                 notes=None):
        self.polynomial = polynomial
        self.numerator = numerator
        self.denominator = denominator
        self.column = column
        self.method = method
        self.remainder_norm = remainder_norm
        self.raw = raw
        self.predictions = predictions or {}
        self.tol = tol
        self.notes = notes or {}

    @property
    def is_polynomial(self):
        return self.polynomial is not None

    @property
    def degree(self):
        if self.polynomial is not None:
            return self.polynomial.max_exp()
        return self.numerator.span() - self.denominator.span()

    @property
    def leading(self):
        if self.polynomial is not None:
            return self.polynomial.coeffs[self.polynomial.max_exp()]
        return (self.numerator.coeffs[self.numerator.max_exp()]
                / self.denominator.coeffs[self.denominator.max_exp()])

    @property
    def trailing(self):
        if self.polynomial is not None:
            return self.polynomial.coeffs[0]
        return self.numerator.coeffs[0] / self.denominator.coeffs[0]

    def coefficient(self, e):
        return self.polynomial.coeff(e)

    def matches(self, other, tol=None):
        """Equality up to units (as polynomials or as rational functions)."""
        if self.is_polynomial and other.is_polynomial:
            return equal_up_to_unit(self.polynomial, other.polynomial, tol)
        a_num, a_den = self.as_fraction()
        b_num, b_den = other.as_fraction()
        return equal_up_to_unit(a_num * b_den, b_num * a_den, tol)

    def as_fraction(self):
        if self.is_polynomial:
            return self.polynomial, LaurentPoly({0: 1})
        return self.numerator, self.denominator

    def to_json(self):
        out = {"version": SCHEMA_VERSION, "method": self.method, "column": self.column,
               "is_polynomial": self.is_polynomial}
        if self.is_polynomial:
            out["polynomial"] = self.polynomial.to_json()
        else:
            out["numerator"] = self.numerator.to_json()
            out["denominator"] = self.denominator.to_json()
        out["degree"] = self.degree
        out["leading"] = scalar_to_json(self.leading)
        out["trailing"] = scalar_to_json(self.trailing)
        out["remainder_norm"] = self.remainder_norm
        if self.raw is not None:
            out["raw"] = self.raw.to_json()
        if self.predictions:
            out["predictions"] = {k: _json_value(v) for k, v in self.predictions.items()}
        if self.notes:
            out["notes"] = {k: _json_value(v) for k, v in self.notes.items()}
        return out

    def __repr__(self):
        body = self.polynomial if self.is_polynomial else f"({self.numerator})/({self.denominator})"
        return f"TapResult[{self.method}, col={self.column}]({body})"


def _json_value(v):
    if isinstance(v, LaurentPoly):
        return v.to_json()
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _json_value(x) for k, x in v.items()}
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    try:
        return scalar_to_json(v)
    except Exception:
        return str(v)


def poly_gcd(p, q, tol=None):
    """Monic-normalized gcd of two Laurent polynomials (exact scalars)."""
    a, b = p, q
    while not b.is_zero():
        _, r = laurent_divmod(a, b)
        a, b = b, r
    if a.is_zero():
        return a
    a = a.shift(-a.min_exp())
    lead = a.coeffs[a.max_exp()]
    return a * lead.inverse() if hasattr(lead, "inverse") else a


def finish_quotient(num, den, *, column, method, tol=None, allow_rational=True, raw=None):
    """Divide num by den and package the normalized result."""
    floaty = _is_float_poly(num) or _is_float_poly(den)
    tol = default_tol() if tol is None and floaty else tol
    if num.is_zero():
        raise ZeroPolynomial("numerator determinant vanishes identically", column=column)
    if floaty:
        q, rn = divide_exact(num, den, tol)
        if rn <= FLOAT_DIVISION_SLACK:
            return TapResult(polynomial=normalize_unit(q, tol), column=column, method=method,
                             remainder_norm=rn, raw=raw, tol=tol)
        if not allow_rational:
            raise InexactDivision("float quotient has a large remainder", remainder_norm=rn)
        return TapResult(numerator=normalize_unit(prune(num, tol), tol),
                         denominator=normalize_unit(den, tol),
                         column=column, method=method, remainder_norm=rn, raw=raw, tol=tol)
    try:
        q, _ = divide_exact(num, den)
        return TapResult(polynomial=normalize_unit(q), column=column, method=method, raw=raw)
    except InexactDivision:
        if not allow_rational:
            raise
    g = poly_gcd(num, den)
    n2, _ = divide_exact(num, g)
    d2, _ = divide_exact(den, g)
    return TapResult(numerator=normalize_unit(n2), denominator=normalize_unit(d2),
                     column=column, method=method, raw=raw)


def _column_order(p):
    order = []
    for g in (p.preferred_column, p.meridian, *p.generators):
        if g is not None and g not in order:
            order.append(g)
    return order


def _check_deficiency(p):
    if len(p.relators) != len(p.generators) - 1:
        raise DeficiencyMismatch(
            f"{len(p.generators)} generators but {len(p.relators)} relators; need deficiency one")


def _numerator(p, jac, column, dim, tol):
    cols = [g for g in p.generators if g != column]
    zero = LaurentPoly()
    blocks = [[row.get(g, zero) for g in cols] for row in jac]
    return det_laurent(flatten_blocks(blocks, dim), tol)


def twisted_alexander(p, rep, column=None, tol=None, allow_rational=True):
    """Wada's invariant det A_{rho,k} / det Phi(x_k - 1), normalized."""
    _check_deficiency(p)
    images = rep.images if hasattr(rep, "images") else rep
    if tol is None and hasattr(rep, "field"):
        tol = getattr(rep.field, "tol", None)
    jac = fox_jacobian_phi(p, images)
    return _tap_column(p, images, jac, column, tol, allow_rational)


def _tap_column(p, images, jac, column, tol, allow_rational, method="engine"):
    candidates = [column] if column is not None else _column_order(p)
    for g in candidates:
        if g not in p.generators:
            raise UnknownGenerator(f"column {g!r} is not a generator")
        den = column_denominator(p, images, g)
        if _is_float_poly(den):
            den = prune(den, default_tol() if tol is None else tol)
        if den.is_zero():
            continue
        num = _numerator(p, jac, g, 2 if isinstance(images[g], Mat2) else 1, tol)
        return finish_quotient(num, den, column=g, method=method, tol=tol,
                               allow_rational=allow_rational, raw=num)
    raise AllDenominatorsZero("every candidate column has det Phi(x - 1) = 0",
                              candidates=candidates)


def alexander(p, column=None):
    """Classical Alexander polynomial via the 1-dimensional representation,
    dividing by (t^d - 1)/(t - 1) for the removed generator of degree d."""
    _check_deficiency(p)
    images = {g: 1 for g in p.generators}
    jac = fox_jacobian_phi(p, images)
    candidates = [column] if column is not None else _column_order(p)
    for g in candidates:
        if g not in p.generators:
            raise UnknownGenerator(f"column {g!r} is not a generator")
        d = p.degrees[g]
        if d == 0:
            continue
        den = LaurentPoly({j: 1 for j in range(abs(d))})
        num = _numerator(p, jac, g, 1, None)
        if num.is_zero():
            raise ZeroPolynomial("Alexander matrix minor vanishes", column=g)
        q, _ = divide_exact(num, den)
        return normalize_unit(q)
    raise AllDenominatorsZero("no generator of nonzero degree")


def welldefinedness_report(p, rep, tol=None):
    """twisted_alexander for every admissible column plus pairwise agreement."""
    _check_deficiency(p)
    images = rep.images if hasattr(rep, "images") else rep
    if tol is None and hasattr(rep, "field"):
        tol = getattr(rep.field, "tol", None)
    jac = fox_jacobian_phi(p, images)
    results = {}
    skipped = []
    for g in p.generators:
        try:
            results[g] = _tap_column(p, images, jac, g, tol, True)
        except AllDenominatorsZero:
            skipped.append(g)
    cols = list(results)
    agree = {(a, b): results[a].matches(results[b], tol) for a in cols for b in cols}
    return {"results": results, "skipped": skipped, "agree": agree,
            "all_agree": all(agree.values())}
