"""Closed form for two-bridge knots: the printed R/R' blocks, the
N-recursion and the leading-coefficient product."""
from __future__ import annotations

from collections import namedtuple

from ..builders import TwoBridgeSpec, build_two_bridge
from ..engine import finish_quotient
from ..errors import IndexOutOfRange
from ..laurent import LaurentPoly
from .common import Images, abs_power_sum, identity_like, lp, meridian_denominator, psum, \
    signed_range_sum

PrintedBlocks = namedtuple("PrintedBlocks", "first second labels")


def _images(rep):
    imgs = rep.images if hasattr(rep, "images") else rep
    A, B = imgs["a"], imgs["b"]
    return Images(imgs, "x", {-4: B, -3: A, -2: A.inverse()})


def twist_matrix(X, i):
    """X_{2i-3}^s X_{2i-4}^s with s = (-1)^i."""
    if i % 2 == 0:
        return X(2 * i - 3) * X(2 * i - 4)
    return X.inv(2 * i - 3) * X.inv(2 * i - 4)


def two_bridge_blocks(index, spec, rep, printed=False):
    """The block expressions for relator index -1..2k.

    Index -1, 0: (R, None).  Index 1, 2: (R, -R').  Index >= 3: (-R, -R').
    For even i the primed blocks are printed with the twist sum conjugated,
    X_{2i-3}^{-1} S X_{2i-4}^{-1}; ``printed=True`` returns that literal form,
    the default returns the form that agrees with the Fox derivative.
    """
    if not isinstance(spec, TwoBridgeSpec):
        spec = TwoBridgeSpec(tuple(spec))
    k = spec.k
    if not -1 <= index <= 2 * k:
        raise IndexOutOfRange(f"relator index {index} outside -1..{2 * k}")
    X = _images(rep)
    A, B = X(-3), X(-4)
    Ai = X(-2)
    i = (index + 1) // 2
    m = spec.m[i]
    if i == 0:
        AB = A * B
        if m > 0:
            S = psum(AB, 0, m - 1)
            if index == -1:
                return PrintedBlocks(lp((-1, X(-1) * S), (0, -(S + AB ** m))), None, ("R_-1",))
            return PrintedBlocks(lp((0, -S), (1, X(0) * S)), None, ("R_0",))
        S = psum(AB, m, -1)
        if index == -1:
            return PrintedBlocks(lp((-1, -(X(-1) * S)), (0, S - AB ** m)), None, ("R_-1",))
        return PrintedBlocks(lp((0, S), (1, -(X(0) * S))), None, ("R_0",))
    if i == 1:
        W = X.inv(-1) * A
        S = signed_range_sum(W, m)
        e = 1 if m > 0 else -1
        if index == 1:
            R = lp((0, X(1) * S * Ai * e), (1, -(S * Ai) * e))
            if m > 0:
                Rp = lp((0, X(1) * (S + W ** (m + 1)) * Ai), (1, -(S * Ai)))
            else:
                Rp = lp((0, -(X(1) * (S - W ** (m + 1)) * Ai)), (1, S * Ai))
            return PrintedBlocks(R, Rp, ("R_1", "-R'_1"))
        if m > 0:
            R = lp((1, -((S - W ** m) * Ai)), (2, X(2) * S * Ai))
        else:
            R = lp((1, (S + W ** m) * Ai), (2, -(X(2) * S * Ai)))
        Rp = lp((1, -(S * Ai) * e), (2, X(2) * S * Ai * e))
        return PrintedBlocks(R, Rp, ("R_2", "-R'_2"))
    j_odd = index == 2 * i - 1
    e = 1 if m > 0 else -1
    if i % 2 == 0:
        W = X(2 * i - 3) * X(2 * i - 4)
        S = signed_range_sum(W, m)
        Xi4 = X.inv(2 * i - 4)
        Xi3 = X.inv(2 * i - 3)
        if printed:
            tail = lambda P: Xi3 * P * Xi4
        else:
            tail = lambda P: P * Xi4 * Xi3
        if j_odd:
            Xn = X(2 * i - 1)
            R = lp((-2, -(Xn * S * Xi4) * e), (-1, S * Xi4 * e))
            if m > 0:
                Rp = lp((-1, -(Xn * tail(S))), (0, tail(S + W ** (m + 1))))
            else:
                Rp = lp((-1, Xn * tail(S)), (0, -tail(S - W ** (m + 1))))
        else:
            Xn = X(2 * i)
            if m > 0:
                R = lp((-1, S * Xi4), (0, -(Xn * (S - W ** m) * Xi4)))
            else:
                R = lp((-1, -(S * Xi4)), (0, Xn * (S + W ** m) * Xi4))
            Rp = lp((0, tail(S) * e), (1, -(Xn * tail(S)) * e))
    else:
        W = X.inv(2 * i - 3) * X.inv(2 * i - 4)
        S = signed_range_sum(W, m)
        X4 = X(2 * i - 4)
        if j_odd:
            Xn = X(2 * i - 1)
            R = lp((-1, Xn * S * e), (0, -S * e))
            if m > 0:
                Rp = lp((0, Xn * (S + W ** (m + 1)) * X4), (1, -(S * X4)))
            else:
                Rp = lp((0, -(Xn * (S - W ** (m + 1)) * X4)), (1, S * X4))
        else:
            Xn = X(2 * i)
            if m > 0:
                R = lp((0, -(S - W ** m)), (1, Xn * S))
            else:
                R = lp((0, S + W ** m), (1, -(Xn * S)))
            Rp = lp((1, -(S * X4) * e), (2, Xn * S * X4 * e))
    return PrintedBlocks(R, Rp, (f"-R_{index}", f"-R'_{index}"))


def degree_window(index):
    """Allowed [min, max] exponents of N_index."""
    if index in (-1, 0):
        return (-1, 0) if index == -1 else (0, 1)
    i = (index + 1) // 2
    odd = index == 2 * i - 1
    if i % 2 == 0:
        return (-i // 2 - 1, i // 2) if odd else (-i // 2, i // 2 + 1)
    h = (i + 1) // 2
    return (-h, h) if odd else (-h + 1, h + 1)


def n_sequence(spec, rep):
    """N_{-1}..N_{2k} of the recursion."""
    k = spec.k
    N = {}
    N[-1] = two_bridge_blocks(-1, spec, rep).first
    N[0] = two_bridge_blocks(0, spec, rep).first
    for j in (1, 2):
        blk = two_bridge_blocks(j, spec, rep)
        N[j] = blk.first + blk.second * N[-1]
    for i in range(2, k + 1):
        for j in (2 * i - 1, 2 * i):
            blk = two_bridge_blocks(j, spec, rep)
            N[j] = blk.first * N[2 * i - 4] + blk.second * N[2 * i - 3]
    return N


def windows_respected(N):
    bad = {}
    for j, poly in N.items():
        if poly.is_zero():
            continue
        lo, hi = degree_window(j)
        if poly.min_exp() < lo or poly.max_exp() > hi:
            bad[j] = (poly.min_exp(), poly.max_exp(), lo, hi)
    return bad


def leading_coeff_two_bridge(spec, rep):
    """Product over i of det(Sum_{j=1}^{|m_i|} (X_{2i-3}^s X_{2i-4}^s)^j)."""
    if not isinstance(spec, TwoBridgeSpec):
        spec = TwoBridgeSpec(tuple(spec))
    X = _images(rep)
    total = identity_like(X(-3)).a
    factors = []
    for i, m in enumerate(spec.m):
        d = abs_power_sum(twist_matrix(X, i), m).det()
        factors.append(d)
        total = total * d
    return total, factors


def recursion_two_bridge(spec, rep, tol=None):
    if not isinstance(spec, TwoBridgeSpec):
        spec = TwoBridgeSpec(tuple(spec))
    N = n_sequence(spec, rep)
    bad = windows_respected(N)
    num = N[2 * spec.k].det()
    B = rep.images["b"] if hasattr(rep, "images") else rep["b"]
    if tol is None and hasattr(rep, "field"):
        tol = getattr(rep.field, "tol", None)
    res = finish_quotient(num, meridian_denominator(B), column="b", method="closed-form",
                          tol=tol, raw=num)
    lam, factors = leading_coeff_two_bridge(spec, rep)
    res.predictions = {"lambda0": lam, "factors": factors, "degree": 2 * spec.k}
    res.notes = {"degree_windows_ok": not bad, "window_violations": bad}
    return res


def presentation(spec):
    return build_two_bridge(spec)
