"""Scalar fields: exact Gaussian rationals, algebraic extensions of them, and
tolerance-aware complex floats.

All three share the same small interface (``+ - * /``, ``inverse()``,
``is_zero()``, ``to_json()``) so the matrix and polynomial layers never need
to know which one they are holding.  Integers mix freely with every type.
"""
from __future__ import annotations

import math
import os
from fractions import Fraction

from .errors import DivisionByZero, InvalidInput, NonInvertibleResidue

DEFAULT_TOL = 1e-9


def default_tol():
    """Tolerance from TAPKIT_TOL, else ``DEFAULT_TOL``."""
    raw = os.environ.get("TAPKIT_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise InvalidInput(f"TAPKIT_TOL is not a number: {raw!r}")


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot read {x!r} as an exact rational")


class GaussianRational:
    """p + q i with p, q rational."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def coerce(cls, x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x, 0)
        return NotImplemented

    def is_zero(self):
        return not self.re and not self.im

    def __bool__(self):
        return not self.is_zero()

    def __add__(self, other):
        o = GaussianRational.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = GaussianRational.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = GaussianRational.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, int):
            return GaussianRational(self.re * other, self.im * other)
        o = GaussianRational.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not self.im and not o.im:
            return GaussianRational(self.re * o.re, 0)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        if not n:
            raise DivisionByZero("inverse of exact zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = GaussianRational.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        o = GaussianRational.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        return f"({self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}i)"

    def to_json(self):
        return {"re": str(self.re), "im": str(self.im)}


# ---------------------------------------------------------------------------
# Dense univariate polynomials over GaussianRational, lowest degree first.

def _trim(p):
    p = list(p)
    while p and p[-1].is_zero():
        p.pop()
    return p


def poly_divmod(num, den):
    num = _trim(num)
    den = _trim(den)
    if not den:
        raise DivisionByZero("polynomial division by zero")
    inv_lead = den[-1].inverse()
    q = [GaussianRational()] * max(len(num) - len(den) + 1, 0)
    r = list(num)
    while len(r) >= len(den) and r:
        shift = len(r) - len(den)
        c = r[-1] * inv_lead
        q[shift] = c
        for i, d in enumerate(den):
            r[shift + i] = r[shift + i] - c * d
        r = _trim(r)
    return _trim(q), r


def poly_mul(p, q):
    if not p or not q:
        return []
    out = [GaussianRational()] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a.is_zero():
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return _trim(out)


def poly_sub(p, q):
    n = max(len(p), len(q))
    z = GaussianRational()
    return _trim([(p[i] if i < len(p) else z) - (q[i] if i < len(q) else z) for i in range(n)])


def poly_inverse_mod(elem, modulus):
    """Inverse of ``elem`` modulo ``modulus`` by the extended Euclidean algorithm."""
    r0, r1 = _trim(modulus), _trim(elem)
    s0, s1 = [], [GaussianRational(1)]
    if not r1:
        raise DivisionByZero("inverse of zero residue")
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
    if len(r0) != 1:
        raise NonInvertibleResidue("residue shares a factor with the modulus",
                                   gcd=[c.to_json() for c in r0])
    c = r0[0].inverse()
    return [x * c for x in s0]


class AlgebraicExt:
    """Residue class of a polynomial in w modulo an (assumed irreducible)
    modulus over the Gaussian rationals.  Irreducibility is not checked;
    a bad modulus shows up as ``NonInvertibleResidue`` when inverting."""

    __slots__ = ("coeffs", "modulus")

    def __init__(self, coeffs, modulus):
        mod = _trim(GaussianRational.coerce(c) if not isinstance(c, GaussianRational) else c
                    for c in modulus)
        if len(mod) < 2:
            raise InvalidInput("modulus must have degree at least 1")
        if mod[-1] != 1:
            lead = mod[-1].inverse()
            mod = [c * lead for c in mod]
        cs = [c if isinstance(c, GaussianRational) else GaussianRational.coerce(c) for c in coeffs]
        if len(cs) >= len(mod):
            _, cs = poly_divmod(cs, mod)
        self.coeffs = tuple(_trim(cs))
        self.modulus = tuple(mod)

    @classmethod
    def generator(cls, modulus):
        """The class of w itself."""
        return cls([0, 1], modulus)

    def _lift(self, other):
        if isinstance(other, AlgebraicExt):
            if other.modulus != self.modulus:
                raise InvalidInput("mixing algebraic elements with different moduli")
            return other
        g = GaussianRational.coerce(other)
        if g is NotImplemented:
            return NotImplemented
        return AlgebraicExt([g], self.modulus)

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return not self.is_zero()

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        z = GaussianRational()
        a = self.coeffs + (z,) * (n - len(self.coeffs))
        b = o.coeffs + (z,) * (n - len(o.coeffs))
        return AlgebraicExt([x + y for x, y in zip(a, b)], self.modulus)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicExt([-c for c in self.coeffs], self.modulus)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, int):
            return AlgebraicExt([c * other for c in self.coeffs], self.modulus)
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return AlgebraicExt(poly_mul(self.coeffs, o.coeffs), self.modulus)

    __rmul__ = __mul__

    def inverse(self):
        return AlgebraicExt(poly_inverse_mod(self.coeffs, self.modulus), self.modulus)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except InvalidInput:
            return False
        if o is NotImplemented:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.modulus))

    def embed(self, root):
        """Evaluate the residue polynomial at a numeric root of the modulus."""
        v = 0j
        for c in reversed(self.coeffs):
            v = v * root + complex(c)
        return v

    def __repr__(self):
        terms = [f"{c!r}*w^{i}" for i, c in enumerate(self.coeffs)]
        return "Alg(" + (" + ".join(terms) or "0") + ")"

    def to_json(self):
        return {"poly": [c.to_json() for c in self.coeffs],
                "modulus": [c.to_json() for c in self.modulus]}


class ComplexFloat:
    """Double-precision complex number.  Closeness is decided by the
    caller's ``FloatField`` tolerance, never by a global."""

    __slots__ = ("v",)

    def __init__(self, re=0.0, im=0.0):
        self.v = complex(re, im)

    @classmethod
    def of(cls, z):
        out = cls.__new__(cls)
        out.v = complex(z)
        return out

    @staticmethod
    def _val(x):
        if isinstance(x, ComplexFloat):
            return x.v
        if isinstance(x, (int, float, complex, Fraction)):
            return complex(x)
        if isinstance(x, GaussianRational):
            return complex(x)
        return None

    def is_zero(self):
        return self.v == 0

    def __bool__(self):
        return self.v != 0

    def __add__(self, other):
        o = self._val(other)
        if o is None:
            return NotImplemented
        return ComplexFloat.of(self.v + o)

    __radd__ = __add__

    def __neg__(self):
        return ComplexFloat.of(-self.v)

    def __sub__(self, other):
        o = self._val(other)
        if o is None:
            return NotImplemented
        return ComplexFloat.of(self.v - o)

    def __rsub__(self, other):
        o = self._val(other)
        if o is None:
            return NotImplemented
        return ComplexFloat.of(o - self.v)

    def __mul__(self, other):
        o = self._val(other)
        if o is None:
            return NotImplemented
        return ComplexFloat.of(self.v * o)

    __rmul__ = __mul__

    def inverse(self, tol=0.0):
        if abs(self.v) <= tol:
            raise DivisionByZero("inverse of (numerically) zero float", value=repr(self.v))
        return ComplexFloat.of(1 / self.v)

    def __truediv__(self, other):
        o = self._val(other)
        if o is None:
            return NotImplemented
        if o == 0:
            raise DivisionByZero("float division by zero")
        return ComplexFloat.of(self.v / o)

    def __rtruediv__(self, other):
        o = self._val(other)
        if o is None:
            return NotImplemented
        return ComplexFloat.of(o) / self

    def __eq__(self, other):
        o = self._val(other)
        if o is None:
            return NotImplemented
        return self.v == o

    def __hash__(self):
        return hash(self.v)

    def __complex__(self):
        return self.v

    def __abs__(self):
        return abs(self.v)

    @property
    def real(self):
        return self.v.real

    @property
    def imag(self):
        return self.v.imag

    def __repr__(self):
        return f"CF({self.v.real:.6g}{self.v.imag:+.6g}j)"

    def to_json(self):
        return {"re": self.v.real, "im": self.v.imag}


# ---------------------------------------------------------------------------
# Field descriptors.  These carry the configuration (modulus, tolerance)
# that individual values should not have to.

class ExactField:
    name = "exact"
    exact = True

    def coerce(self, x):
        if isinstance(x, (GaussianRational, AlgebraicExt)):
            return x
        return GaussianRational.coerce(x)

    def zero(self):
        return GaussianRational(0)

    def one(self):
        return GaussianRational(1)

    def is_zero(self, x):
        return x == 0

    def close(self, a, b):
        return a == b

    def invert(self, x):
        return x.inverse()

    def __eq__(self, other):
        return type(self) is type(other)

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return "ExactField()"


class AlgebraicField(ExactField):
    name = "algebraic"

    def __init__(self, modulus):
        self.modulus = AlgebraicExt([0], modulus).modulus

    def coerce(self, x):
        if isinstance(x, AlgebraicExt):
            return x
        return AlgebraicExt([GaussianRational.coerce(x)], self.modulus)

    def zero(self):
        return AlgebraicExt([], self.modulus)

    def one(self):
        return AlgebraicExt([1], self.modulus)

    def generator(self):
        return AlgebraicExt.generator(self.modulus)

    def __eq__(self, other):
        return isinstance(other, AlgebraicField) and other.modulus == self.modulus

    def __hash__(self):
        return hash(self.modulus)

    def __repr__(self):
        return f"AlgebraicField({list(self.modulus)})"


class FloatField:
    name = "float"
    exact = False

    def __init__(self, tol=None):
        self.tol = default_tol() if tol is None else float(tol)

    def coerce(self, x):
        if isinstance(x, ComplexFloat):
            return x
        return ComplexFloat.of(complex(x))

    def zero(self):
        return ComplexFloat()

    def one(self):
        return ComplexFloat(1.0)

    def is_zero(self, x):
        return abs(complex(x)) <= self.tol

    def close(self, a, b):
        a, b = complex(a), complex(b)
        return abs(a - b) <= self.tol * max(1.0, abs(a), abs(b))

    def invert(self, x):
        return self.coerce(x).inverse(self.tol)

    def __eq__(self, other):
        return isinstance(other, FloatField) and other.tol == self.tol

    def __hash__(self):
        return hash(("float", self.tol))

    def __repr__(self):
        return f"FloatField(tol={self.tol})"


def field_invert(x, field=None):
    """Invert a scalar; for floats the field tolerance decides what counts as zero."""
    if field is not None:
        return field.invert(x)
    if isinstance(x, int):
        x = GaussianRational(x)
    return x.inverse()


def scalar_is_zero(x):
    if isinstance(x, (int, Fraction, float, complex)):
        return x == 0
    return x.is_zero()


def scalar_to_json(x):
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x).to_json()
    if isinstance(x, (float, complex)):
        return ComplexFloat.of(x).to_json()
    return x.to_json()


def scalar_from_json(obj):
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return GaussianRational(obj) if isinstance(obj, int) else ComplexFloat(obj)
    if not isinstance(obj, dict):
        raise InvalidInput(f"not a scalar literal: {obj!r}")
    if "poly" in obj:
        if "modulus" not in obj:
            raise InvalidInput("algebraic literal needs a modulus")
        return AlgebraicExt([scalar_from_json(c) for c in obj["poly"]],
                            [scalar_from_json(c) for c in obj["modulus"]])
    if "re" not in obj:
        raise InvalidInput(f"not a scalar literal: {obj!r}")
    re, im = obj["re"], obj.get("im", 0)
    if isinstance(re, str) or isinstance(im, str):
        try:
            return GaussianRational(Fraction(str(re)), Fraction(str(im)))
        except (ValueError, ZeroDivisionError):
            raise InvalidInput(f"bad exact literal: {obj!r}")
    if isinstance(re, int) and isinstance(im, int) and not isinstance(re, bool):
        return GaussianRational(re, im)
    if not all(isinstance(v, (int, float)) for v in (re, im)):
        raise InvalidInput(f"bad float literal: {obj!r}")
    return ComplexFloat(float(re), float(im))


def field_of(values, tol=None):
    """Pick the field describing a collection of scalars."""
    modulus = None
    for v in values:
        if isinstance(v, ComplexFloat):
            return FloatField(tol)
        if isinstance(v, AlgebraicExt):
            modulus = v.modulus
    if modulus is not None:
        return AlgebraicField(modulus)
    return ExactField()


def approx_complex(x):
    """Best-effort complex value of any scalar (algebraic ones have none)."""
    if isinstance(x, AlgebraicExt):
        raise TypeError("algebraic element has no canonical complex value")
    return complex(x)


def is_finite(x):
    z = complex(x)
    return math.isfinite(z.real) and math.isfinite(z.imag)
