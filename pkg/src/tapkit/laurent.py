"""2x2 matrices, Laurent polynomials in t with scalar or matrix coefficients,
determinants of Laurent-polynomial matrices, exact division and unit
normalization."""
from __future__ import annotations

from itertools import permutations

import numpy as np

from .errors import InexactDivision, NonSquare, ZeroPolynomial
from .scalars import (AlgebraicExt, ComplexFloat, FloatField, GaussianRational,
                      default_tol, scalar_from_json, scalar_is_zero, scalar_to_json)


class Mat2:
    """2x2 matrix over any scalar type, row-major (a b / c d)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def identity(cls, one=1):
        return cls(one, one * 0, one * 0, one)

    @classmethod
    def zero(cls, zero=0):
        return cls(zero, zero, zero, zero)

    @classmethod
    def from_rows(cls, rows):
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def map(self, f):
        return Mat2(f(self.a), f(self.b), f(self.c), f(self.d))

    def __add__(self, o):
        if not isinstance(o, Mat2):
            return NotImplemented
        return Mat2(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, o):
        if not isinstance(o, Mat2):
            return NotImplemented
        return Mat2(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __neg__(self):
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, o):
        if isinstance(o, Mat2):
            return Mat2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                        self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)
        if isinstance(o, LaurentPoly):
            return NotImplemented
        return Mat2(self.a * o, self.b * o, self.c * o, self.d * o)

    def __rmul__(self, o):
        return Mat2(o * self.a, o * self.b, o * self.c, o * self.d)

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def adj(self):
        """Adjugate (cofactor matrix) B* with B B* = det(B) E."""
        return Mat2(self.d, -self.b, -self.c, self.a)

    def inverse(self):
        det = self.det()
        if scalar_is_zero(det):
            from .errors import DivisionByZero
            raise DivisionByZero("singular 2x2 matrix")
        inv = det.inverse() if hasattr(det, "inverse") else GaussianRational(det).inverse()
        return self.adj() * inv

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = Mat2.identity(self.a * 0 + 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self):
        return all(scalar_is_zero(x) for x in self.entries())

    def __eq__(self, o):
        if not isinstance(o, Mat2):
            return NotImplemented
        return all(x == y for x, y in zip(self.entries(), o.entries()))

    def __hash__(self):
        return hash(self.entries())

    def __repr__(self):
        return f"Mat2({self.a!r}, {self.b!r}; {self.c!r}, {self.d!r})"

    def to_json(self):
        return [[scalar_to_json(self.a), scalar_to_json(self.b)],
                [scalar_to_json(self.c), scalar_to_json(self.d)]]

    @classmethod
    def from_json(cls, obj):
        from .errors import InvalidInput
        try:
            (a, b), (c, d) = obj
        except (TypeError, ValueError):
            raise InvalidInput(f"matrix must be [[a,b],[c,d]], got {obj!r}")
        return cls(*(scalar_from_json(x) for x in (a, b, c, d)))


def mat_max_abs(m):
    return max(abs(complex(x)) for x in m.entries())


def mat_power_sum(m, lo, hi):
    """Sum of m^j for lo <= j <= hi (the zero matrix if the range is empty)."""
    one = m.a * 0 + 1
    if hi < lo:
        return Mat2.zero(one * 0)
    total = Mat2.zero(one * 0)
    p = m ** lo
    for _ in range(lo, hi + 1):
        total = total + p
        p = p * m
    return total


def _coeff_nonzero(c):
    if isinstance(c, Mat2):
        return not c.is_zero()
    return not scalar_is_zero(c)


class LaurentPoly:
    """Laurent polynomial in t; coefficients are scalars or Mat2s."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        out = {}
        if coeffs:
            for e, c in coeffs.items():
                if _coeff_nonzero(c):
                    out[int(e)] = c
        self.coeffs = out

    @classmethod
    def monomial(cls, c, e=0):
        return cls({e: c})

    @classmethod
    def constant(cls, c):
        return cls({0: c})

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def min_exp(self):
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no exponents")
        return min(self.coeffs)

    def max_exp(self):
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no exponents")
        return max(self.coeffs)

    def span(self):
        return self.max_exp() - self.min_exp()

    def coeff(self, e, default=0):
        return self.coeffs.get(e, default)

    def is_monomial(self):
        return len(self.coeffs) == 1

    def __add__(self, o):
        if not isinstance(o, LaurentPoly):
            o = LaurentPoly.constant(o)
        out = dict(self.coeffs)
        for e, c in o.coeffs.items():
            out[e] = out[e] + c if e in out else c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, o):
        if not isinstance(o, LaurentPoly):
            o = LaurentPoly.constant(o)
        return self + (-o)

    def __rsub__(self, o):
        return LaurentPoly.constant(o) - self

    def __mul__(self, o):
        if not isinstance(o, LaurentPoly):
            return LaurentPoly({e: c * o for e, c in self.coeffs.items()})
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in o.coeffs.items():
                e = e1 + e2
                p = c1 * c2
                out[e] = out[e] + p if e in out else p
        return LaurentPoly(out)

    def __rmul__(self, o):
        return LaurentPoly({e: o * c for e, c in self.coeffs.items()})

    def shift(self, s):
        return LaurentPoly({e + s: c for e, c in self.coeffs.items()})

    def map(self, f):
        return LaurentPoly({e: f(c) for e, c in self.coeffs.items()})

    def det(self):
        """Determinant of a Mat2-coefficient polynomial."""
        e = self.entry_polys()
        return e[0][0] * e[1][1] - e[0][1] * e[1][0]

    def trace(self):
        e = self.entry_polys()
        return e[0][0] + e[1][1]

    def entry_polys(self):
        """Split a Mat2-coefficient polynomial into a 2x2 grid of scalar polynomials."""
        grid = [[{}, {}], [{}, {}]]
        for e, m in self.coeffs.items():
            grid[0][0][e] = m.a
            grid[0][1][e] = m.b
            grid[1][0][e] = m.c
            grid[1][1][e] = m.d
        return [[LaurentPoly(g) for g in row] for row in grid]

    def evaluate(self, t):
        total = None
        for e, c in self.coeffs.items():
            term = c * (t ** e)
            total = term if total is None else total + term
        return total

    def __eq__(self, o):
        if not isinstance(o, LaurentPoly):
            o = LaurentPoly.constant(o)
        if self.coeffs.keys() != o.coeffs.keys():
            return False
        return all(self.coeffs[e] == o.coeffs[e] for e in self.coeffs)

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items(), key=lambda kv: kv[0])))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({self.coeffs[e]!r})t^{e}" for e in sorted(self.coeffs))

    def to_json(self):
        return {"coeffs": {str(e): scalar_to_json(self.coeffs[e]) for e in sorted(self.coeffs)}}

    @classmethod
    def from_json(cls, obj):
        from .errors import InvalidInput
        if not isinstance(obj, dict) or "coeffs" not in obj:
            raise InvalidInput("polynomial JSON must be {\"coeffs\": {...}}")
        try:
            return cls({int(e): scalar_from_json(c) for e, c in obj["coeffs"].items()})
        except ValueError:
            raise InvalidInput("polynomial exponents must be decimal integers")


T = LaurentPoly({1: 1})


# ---------------------------------------------------------------------------
# Scalar helpers used by the polynomial algorithms.

def _is_float_poly(p):
    return any(isinstance(c, ComplexFloat) for c in p.coeffs.values())


def _inv(c):
    if isinstance(c, int):
        return GaussianRational(c).inverse()
    return c.inverse()


def prune(p, tol):
    """Drop float coefficients below tol times the largest coefficient norm."""
    if not p.coeffs or not _is_float_poly(p):
        return p
    top = max(abs(complex(c)) for c in p.coeffs.values())
    return LaurentPoly({e: c for e, c in p.coeffs.items() if abs(complex(c)) > tol * top})


def laurent_divmod(num, den, tol=None):
    """Long division in the Laurent ring: num = q*den + r.

    Both are shifted to ordinary polynomials with nonzero constant term in
    the denominator, then divided from the top degree down.
    """
    if den.is_zero():
        from .errors import DivisionByZero
        raise DivisionByZero("division by the zero polynomial")
    if tol is not None:
        den = prune(den, tol)
    if num.is_zero():
        return LaurentPoly(), LaurentPoly()
    a, b = num.min_exp(), den.min_exp()
    N = {e - a: c for e, c in num.coeffs.items()}
    D = {e - b: c for e, c in den.coeffs.items()}
    dd = max(D)
    inv_lead = _inv(D[dd])
    q = {}
    top = max(N)
    floatish = tol is not None
    scale = max((abs(complex(c)) for c in N.values()), default=0.0) if floatish else 0.0
    while N:
        top = max(N)
        if top < dd:
            break
        c = N.pop(top) * inv_lead
        s = top - dd
        q[s] = c
        for e, dc in D.items():
            if e == dd:
                continue
            k = e + s
            v = N.get(k, 0) - c * dc
            if floatish:
                if abs(complex(v)) <= 1e-15 * scale:
                    N.pop(k, None)
                    continue
            elif scalar_is_zero(v):
                N.pop(k, None)
                continue
            N[k] = v
    quot = LaurentPoly(q).shift(a - b)
    rem = LaurentPoly(N).shift(a)
    return quot, rem


def divide_exact(num, den, tol=None):
    """Return (quotient, remainder norm).

    Exact scalars: raises InexactDivision unless the remainder vanishes.
    Floats: the relative remainder norm is returned and the caller decides.
    """
    floaty = _is_float_poly(num) or _is_float_poly(den)
    if floaty:
        tol = default_tol() if tol is None else tol
        q, r = laurent_divmod(num, den, tol)
        scale = max((abs(complex(c)) for c in num.coeffs.values()), default=1.0) or 1.0
        rn = max((abs(complex(c)) for c in r.coeffs.values()), default=0.0) / scale
        return prune(q, tol), rn
    q, r = laurent_divmod(num, den)
    if not r.is_zero():
        raise InexactDivision("nonzero remainder in exact division",
                              quotient=repr(q), remainder=repr(r))
    return q, 0.0


# ---------------------------------------------------------------------------
# Unit normalization.

def _sign_key_positive(c, tol):
    """True if c already satisfies the canonical-sign rule."""
    if isinstance(c, AlgebraicExt):
        first = next(x for x in c.coeffs if not x.is_zero())
        return _sign_key_positive(first, tol)
    if isinstance(c, GaussianRational):
        return c.re > 0 or (c.re == 0 and c.im > 0)
    if isinstance(c, int):
        return c > 0
    z = complex(c)
    if abs(z.real) > tol * abs(z):
        return z.real > 0
    return z.imag > 0


def normalize_unit(p, tol=None):
    """Shift so the lowest exponent is 0 and fix the overall sign so the
    constant coefficient has positive real part (ties: positive imaginary)."""
    if _is_float_poly(p):
        tol = default_tol() if tol is None else tol
        p = prune(p, tol)
    else:
        tol = 0.0
    if p.is_zero():
        raise ZeroPolynomial("cannot normalize the zero polynomial")
    p = p.shift(-p.min_exp())
    if not _sign_key_positive(p.coeffs[0], tol):
        p = -p
    return p


def coeff_close(a, b, tol):
    if isinstance(a, ComplexFloat) or isinstance(b, ComplexFloat):
        a, b = complex(a), complex(b)
        return abs(a - b) <= tol * max(1.0, abs(a), abs(b))
    return a == b


def polys_close(p, q, tol=None, scale=None):
    """Coefficientwise closeness; for floats the tolerance is relative to the
    largest coefficient of either polynomial."""
    floaty = _is_float_poly(p) or _is_float_poly(q)
    if not floaty:
        return p == q
    tol = default_tol() if tol is None else tol
    if scale is None:
        scale = max([1.0] + [abs(complex(c)) for c in p.coeffs.values()]
                    + [abs(complex(c)) for c in q.coeffs.values()])
    for e in set(p.coeffs) | set(q.coeffs):
        if abs(complex(p.coeff(e)) - complex(q.coeff(e))) > tol * scale:
            return False
    return True


def equal_up_to_unit(p, q, tol=None):
    """p = ±t^s q, comparing after normalization (both signs tried for floats)."""
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    floaty = _is_float_poly(p) or _is_float_poly(q)
    tol = (default_tol() if tol is None else tol) if floaty else None
    np_ = normalize_unit(p, tol)
    nq = normalize_unit(q, tol)
    if not floaty:
        return np_ == nq
    return polys_close(np_, nq, tol) or polys_close(np_, -nq, tol)


def is_palindromic(p, tol=None):
    """p(t) agrees with t^deg p(1/t) up to sign."""
    if p.is_zero():
        return True
    hi = p.max_exp()
    lo = p.min_exp()
    rev = LaurentPoly({hi + lo - e: c for e, c in p.coeffs.items()})
    return polys_close(p, rev, tol) or polys_close(p, -rev, tol)


# ---------------------------------------------------------------------------
# Determinants.

def flatten_blocks(blocks, dim=2):
    """Turn a grid of Mat2-coefficient polynomials into a scalar grid."""
    n = len(blocks)
    if any(len(row) != len(blocks[0]) for row in blocks):
        raise NonSquare("ragged block matrix")
    if dim == 1:
        return [list(row) for row in blocks]
    out = [[None] * (len(blocks[0]) * 2) for _ in range(n * 2)]
    for i, row in enumerate(blocks):
        for j, blk in enumerate(row):
            if blk.is_zero():
                for a in range(2):
                    for b in range(2):
                        out[2 * i + a][2 * j + b] = LaurentPoly()
                continue
            sample = next(iter(blk.coeffs.values()))
            if not isinstance(sample, Mat2):
                blk = blk.map(lambda c: Mat2(c, c * 0, c * 0, c))
            g = blk.entry_polys()
            for a in range(2):
                for b in range(2):
                    out[2 * i + a][2 * j + b] = g[a][b]
    return out


def det_cofactor(matrix):
    """Leibniz-formula determinant; only for small oracle checks."""
    n = len(matrix)
    if any(len(r) != n for r in matrix):
        raise NonSquare("determinant of a non-square matrix")
    if n == 0:
        return LaurentPoly.constant(1)
    total = LaurentPoly()
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = LaurentPoly.constant(1)
        for i in range(n):
            term = term * matrix[i][perm[i]]
            if term.is_zero():
                break
        total = total - term if inv % 2 else total + term
    return total


def det_laurent(matrix, tol=None):
    """Determinant of a square matrix of scalar Laurent polynomials."""
    n = len(matrix)
    if any(len(r) != n for r in matrix):
        raise NonSquare(f"matrix is {n}x{[len(r) for r in matrix]}")
    if n == 0:
        return LaurentPoly.constant(1)
    if any(_is_float_poly(p) for row in matrix for p in row):
        return _det_float(matrix, tol)
    return _det_exact(matrix)


def det_block(blocks, dim=2, tol=None):
    return det_laurent(flatten_blocks(blocks, dim), tol)


def _det_exact(matrix):
    n = len(matrix)
    rows = [{j: p for j, p in enumerate(r) if not p.is_zero()} for r in matrix]
    col_rows = {j: set() for j in range(n)}
    for i, r in enumerate(rows):
        for j in r:
            col_rows[j].add(i)
    active_r = set(range(n))
    active_c = set(range(n))
    det = LaurentPoly.constant(1)
    sign = 1
    # Eliminate with monomial (unit) pivots first, Markowitz-style.
    while active_r:
        best = None
        for i in active_r:
            ri = rows[i]
            if not ri:
                return LaurentPoly()
            for j, p in ri.items():
                if len(p.coeffs) == 1:
                    cost = (len(ri) - 1) * (len(col_rows[j]) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, i, j)
                        if cost == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, i, j = best
        pos_r = sum(1 for x in active_r if x < i)
        pos_c = sum(1 for x in active_c if x < j)
        if (pos_r + pos_c) % 2:
            sign = -sign
        piv = rows[i][j]
        (pe, pc), = piv.coeffs.items()
        det = det * piv
        inv = LaurentPoly({-pe: _inv(pc)})
        pivot_row = rows[i]
        for i2 in list(col_rows[j]):
            if i2 == i:
                continue
            f = rows[i2][j] * inv
            r2 = rows[i2]
            for j2, p in pivot_row.items():
                if j2 == j:
                    continue
                v = r2.get(j2, LaurentPoly()) - f * p
                if v.is_zero():
                    if j2 in r2:
                        del r2[j2]
                        col_rows[j2].discard(i2)
                else:
                    if j2 not in r2:
                        col_rows[j2].add(i2)
                    r2[j2] = v
            del r2[j]
            col_rows[j].discard(i2)
        for j2 in pivot_row:
            col_rows[j2].discard(i)
        rows[i] = {}
        active_r.discard(i)
        active_c.discard(j)
    if not active_r:
        return det if sign == 1 else -det
    rs = sorted(active_r)
    cs = sorted(active_c)
    sub = [[rows[i].get(j, LaurentPoly()) for j in cs] for i in rs]
    rest = _bareiss(sub)
    out = det * rest
    return out if sign == 1 else -out


def _bareiss(m):
    n = len(m)
    m = [list(r) for r in m]
    sign = 1
    prev = LaurentPoly.constant(1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if swap is None:
                return LaurentPoly()
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = divide_exact(num, prev)[0] if not num.is_zero() else LaurentPoly()
            m[i][k] = LaurentPoly()
        prev = m[k][k]
    out = m[n - 1][n - 1]
    return out if sign == 1 else -out


def _det_float(matrix, tol=None):
    """Evaluate at roots of unity, take numeric determinants, transform back."""
    tol = default_tol() if tol is None else tol
    n = len(matrix)
    row_shift = []
    for r in matrix:
        exps = [e for p in r for e in p.coeffs]
        row_shift.append(min(exps) if exps else 0)
    shifted = [[p.shift(-s) for p in r] for r, s in zip(matrix, row_shift)]
    col_shift = []
    for j in range(n):
        exps = [e for i in range(n) for e in shifted[i][j].coeffs]
        col_shift.append(min(exps) if exps else 0)
    shifted = [[shifted[i][j].shift(-col_shift[j]) for j in range(n)] for i in range(n)]
    row_deg = [max((e for p in r for e in p.coeffs), default=0) for r in shifted]
    col_deg = [max((e for i in range(n) for e in shifted[i][j].coeffs), default=0)
               for j in range(n)]
    if any(not any(not p.is_zero() for p in r) for r in shifted):
        return LaurentPoly()
    D = min(sum(row_deg), sum(col_deg))
    N = D + 1
    coeff = np.zeros((n, n, N), dtype=complex)
    for i in range(n):
        for j in range(n):
            for e, c in shifted[i][j].coeffs.items():
                coeff[i, j, e] = complex(c)
    # values[k] = matrix evaluated at exp(2 pi i k / N)
    vals = np.fft.ifft(coeff, axis=2) * N
    dets = np.linalg.det(np.moveaxis(vals, 2, 0))
    cs = np.fft.fft(dets) / N
    total_shift = sum(row_shift) + sum(col_shift)
    p = LaurentPoly({e + total_shift: ComplexFloat.of(c) for e, c in enumerate(cs) if c != 0})
    return prune(p, tol * 1e-3) if not p.is_zero() else p


def to_float_poly(p):
    return p.map(lambda c: ComplexFloat.of(complex(c)))


def leading_coeff(p):
    return p.coeffs[p.max_exp()]


def trailing_coeff(p):
    return p.coeffs[p.min_exp()]


def float_field_for(p, tol=None):
    return FloatField(tol) if _is_float_poly(p) else None
