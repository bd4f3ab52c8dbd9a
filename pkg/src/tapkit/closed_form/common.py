"""Small helpers shared by the family-specific closed forms."""
from __future__ import annotations

from ..laurent import LaurentPoly, Mat2, mat_power_sum


def lp(*terms):
    """Laurent polynomial from (exponent, Mat2) pairs; repeated exponents add."""
    out = {}
    for e, m in terms:
        out[e] = out[e] + m if e in out else m
    return LaurentPoly(out)


def psum(m, lo, hi):
    """Sum of m^j for lo <= j <= hi."""
    return mat_power_sum(m, lo, hi)


def signed_range_sum(m, count):
    """Sum_{j=1}^{count} m^j for count > 0 and Sum_{j=count+1}^{0} m^j for count < 0."""
    if count > 0:
        return psum(m, 1, count)
    return psum(m, count + 1, 0)


def abs_power_sum(m, count):
    """Sum_{j=1}^{|count|} m^j, taken literally for either sign of count."""
    return psum(m, 1, abs(count))


def identity_like(m):
    return Mat2.identity(m.a * 0 + 1)


def zero_like(m):
    return Mat2.zero(m.a * 0)


def E_poly(m):
    return LaurentPoly({0: identity_like(m)})


def meridian_denominator(M, degree=1):
    """det(t^d M - E) = t^{2d} - tr(M) t^d + 1."""
    one = M.a * 0 + 1
    return LaurentPoly({2 * degree: one, degree: -M.trace(), 0: one})


class Images:
    """Accessor for the images X_i (or Y_i) with the family's fixed aliases."""

    def __init__(self, rep, prefix, aliases):
        self.images = rep.images if hasattr(rep, "images") else rep
        self.prefix = prefix
        self.aliases = aliases
        self._inv = {}

    def __call__(self, i):
        if i in self.aliases:
            return self.aliases[i]
        return self.images[f"{self.prefix}{i}"]

    def inv(self, i):
        if i not in self._inv:
            self._inv[i] = self(i).inverse()
        return self._inv[i]
