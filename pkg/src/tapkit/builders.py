"""Presentations of the three tunnel-number-one Montesinos families, even
continued fractions of rational tangles, and genus formulas."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import NotCase2, NotCoprime, SpecInvariantViolation, UnsupportedFamily
from .groups import Presentation, Word, commutator


# ---------------------------------------------------------------------------
# Specs

@dataclass(frozen=True)
class TwoBridgeSpec:
    m: tuple

    def __post_init__(self):
        m = tuple(int(x) for x in self.m)
        object.__setattr__(self, "m", m)
        if len(m) < 2 or len(m) % 2:
            raise SpecInvariantViolation(f"need m_0..m_k with k odd, got {len(m)} entries")
        if any(x == 0 for x in m):
            raise SpecInvariantViolation("every m_i must be nonzero")

    @property
    def k(self):
        return len(self.m) - 1

    def to_json(self):
        return {"family": "two-bridge", "m": list(self.m)}


@dataclass(frozen=True)
class Case2Spec:
    beta1_sign: int
    m: tuple
    n: tuple

    def __post_init__(self):
        m = tuple(int(x) for x in self.m)
        n = tuple(int(x) for x in self.n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)
        if self.beta1_sign not in (1, -1):
            raise SpecInvariantViolation("beta1_sign must be +1 or -1")
        if not m or (len(m) - 1) % 2:
            raise SpecInvariantViolation(f"need m_0..m_k with k even, got {len(m)} entries")
        if len(n) % 2 or not n:
            raise SpecInvariantViolation(f"need n_1..n_l with l even and positive, got {len(n)}")
        if any(x == 0 for x in m[1:]) or any(x == 0 for x in n):
            raise SpecInvariantViolation("m_1..m_k and n_1..n_l must be nonzero")
        if len(m) < 3:
            raise SpecInvariantViolation("need k >= 2")

    @property
    def k(self):
        return len(self.m) - 1

    @property
    def l(self):
        return len(self.n)

    def to_json(self):
        return {"family": "case2", "beta1": self.beta1_sign, "m": list(self.m), "n": list(self.n)}


@dataclass(frozen=True)
class Case3Spec:
    n: int

    def to_json(self):
        return {"family": "case3", "n": self.n}


def spec_from_json(obj):
    fam = obj.get("family")
    if fam == "two-bridge":
        return TwoBridgeSpec(tuple(obj["m"]))
    if fam == "case2":
        return Case2Spec(int(obj["beta1"]), tuple(obj["m"]), tuple(obj["n"]))
    if fam == "case3":
        return Case3Spec(int(obj["n"]))
    raise UnsupportedFamily(f"unknown family {fam!r}")


# ---------------------------------------------------------------------------
# Continued fractions

@dataclass(frozen=True)
class EvenCF:
    """Entries c_0, c_1, ... of c_0 + 1/(c_1 + 1/(c_2 + ...)).

    All entries are even except possibly the last one (when both alpha
    and beta are odd)."""
    entries: tuple

    def value(self):
        return cf_to_rational(self.entries)

    def halves(self):
        """m_i with entries 2 m_i (the odd last entry 2 m + 1 gives m)."""
        return tuple(e // 2 for e in self.entries)


def cf_to_rational(entries):
    entries = list(entries)
    if not entries:
        raise ValueError("empty continued fraction")
    v = Fraction(entries[-1])
    for c in reversed(entries[:-1]):
        v = c + 1 / v
    return v


def _nearest_even(x):
    """Even integer e with |x - e| < 1 (x not an odd integer)."""
    f = x.numerator // x.denominator
    return f if f % 2 == 0 else f + 1


def even_continued_fraction(beta, alpha):
    if alpha < 1:
        raise NotCoprime(f"alpha must be positive, got {alpha}")
    if gcd(beta, alpha) != 1:
        raise NotCoprime(f"gcd({beta}, {alpha}) != 1")
    x = Fraction(beta, alpha)
    entries = []
    while True:
        if x.denominator == 1:
            entries.append(int(x))
            break
        e = _nearest_even(x)
        entries.append(e)
        x = 1 / (x - e)
    return EvenCF(tuple(entries))


# ---------------------------------------------------------------------------
# Two-bridge knots

def _x(i):
    return f"x{i}"


def _twist_pair(names_or_words, i, m, new_odd, new_even, relators, definitions):
    """Relations x_{2i-1} = W^m x_{2i-3} W^-m and x_{2i} = W^m x_{2i-4} W^-m,
    with W = x_{2i-3}^s x_{2i-4}^s, s = (-1)^i.  Inputs are words."""
    u, v = names_or_words
    s = 1 if i % 2 == 0 else -1
    W = (u ** s) * (v ** s)
    Wm = W ** m
    for new, old in ((new_odd, u), (new_even, v)):
        rhs = Wm * old * Wm.inverse()
        definitions.append((new, rhs))
        relators.append(Word.gen(new) * rhs.inverse())


def build_two_bridge(spec):
    if not isinstance(spec, TwoBridgeSpec):
        spec = TwoBridgeSpec(tuple(spec))
    k = spec.k
    gens = ["b", "a"] + [_x(i) for i in range(-1, 2 * k + 1)]
    word = {-4: Word.gen("b"), -3: Word.gen("a"), -2: Word.gen("a", -1)}
    for i in range(-1, 2 * k + 1):
        word[i] = Word.gen(_x(i))
    relators, definitions = [], []
    for i in range(k + 1):
        _twist_pair((word[2 * i - 3], word[2 * i - 4]), i, spec.m[i],
                    _x(2 * i - 1), _x(2 * i), relators, definitions)
    closing = word[2 * k - 1] * word[2 * k - 2]
    relators.append(word[2 * k] * Word.gen("b", -1))
    return Presentation(gens, relators, "b", definitions=definitions, redundant=[closing],
                        preferred_column="b", family=spec.to_json())


# ---------------------------------------------------------------------------
# Case (2): M(0; (2, ±1), (alpha2, beta2), (alpha3, beta3))

def _y(i):
    return f"y{i}"


def first_tangle_words(beta1_sign):
    """Words for x_{-4} and y_0 in a and c from the half-integer tangle."""
    a, c = Word.gen("a"), Word.gen("c")
    if beta1_sign > 0:
        x4 = c.inverse() * a.inverse() * c
        y0 = x4.inverse() * c.inverse() * x4
    else:
        e = a.inverse() * c.inverse() * a
        x4 = e.inverse() * a.inverse() * e
        y0 = e
    return x4, y0


def build_case2(spec):
    if not isinstance(spec, Case2Spec):
        raise SpecInvariantViolation("expected a Case2Spec")
    k, l = spec.k, spec.l
    gens = (["a", "b", "c"] + [_x(i) for i in range(-4, 2 * k + 1)]
            + [_y(i) for i in range(-2, 2 * l + 1)])
    X = {i: Word.gen(_x(i)) for i in range(-4, 2 * k + 1)}
    Y = {i: Word.gen(_y(i)) for i in range(-2, 2 * l + 1)}
    x4, y0 = first_tangle_words(spec.beta1_sign)
    relators, definitions = [], []

    def define(name, rhs):
        definitions.append((name, rhs))
        relators.append(Word.gen(name) * rhs.inverse())

    define(_x(-4), x4)
    define(_x(-3), Word.gen("a"))
    define(_x(-2), Word.gen("b"))
    for i in range(k + 1):
        _twist_pair((X[2 * i - 3], X[2 * i - 4]), i, spec.m[i],
                    _x(2 * i - 1), _x(2 * i), relators, definitions)
    relators.append(X[2 * k - 1] * X[2 * k - 2])
    define(_y(-2), Word.gen("b"))
    define(_y(-1), Word.gen("c"))
    define(_y(0), y0)
    for i in range(1, l + 1):
        _twist_pair((Y[2 * i - 3], Y[2 * i - 4]), i, -spec.n[i - 1],
                    _y(2 * i - 1), _y(2 * i), relators, definitions)
    relators.append(Y[2 * l - 1] * Y[2 * l - 2])
    joining = X[2 * k] * Y[2 * l].inverse()
    return Presentation(gens, relators, "c", definitions=definitions, redundant=[joining],
                        preferred_column="c", family=spec.to_json())


def normalize_case2(b, tangles):
    """Bring M(b; (2, beta1), (alpha2, beta2), (alpha3, beta3)) to the form
    with beta1/alpha1 = ±1/2 and even expansions of the other two tangles.

    Integer twists are moved between tangles, which preserves the sum of
    the tangle fractions minus b.
    """
    if len(tangles) != 3:
        raise NotCase2("need exactly three tangles")
    (a1, b1), (a2, b2), (a3, b3) = [(int(a), int(bb)) for a, bb in tangles]
    if a1 != 2 or a2 % 2 == 0 or a3 % 2 == 0 or a2 < 1 or a3 < 1:
        raise NotCase2("need alpha1 = 2 and odd positive alpha2, alpha3")
    for a, bb in ((a1, b1), (a2, b2), (a3, b3)):
        if gcd(a, bb) != 1:
            raise NotCase2(f"tangle {bb}/{a} is not in lowest terms")
    f1 = Fraction(b1, 2) - b           # absorb the b half twists into tangle 1
    f2 = Fraction(b2, a2)
    f3 = Fraction(b3, a3)
    # tangle 1 -> 1/2, surplus integer into tangle 2
    shift = f1 - Fraction(1, 2)
    f1 -= shift
    f2 += shift
    # tangle 3 into (-1, 1)
    q = int(f3)
    f3 -= q
    f2 += q
    sign1 = 1
    even2 = f2.numerator % 2 == 0
    even3 = f3.numerator % 2 == 0
    if even2 and even3:
        pass
    elif not even2 and not even3:
        s = 1 if f3 > 0 else -1
        f2 += s
        f3 -= s
    elif not even2:
        f2 += 1
        f1 -= 1
        sign1 = -1
    else:
        f3 += 1
        f1 -= 1
        sign1 = -1
    assert f1 == Fraction(sign1, 2)
    cf3 = even_continued_fraction(f3.numerator, f3.denominator).entries
    if cf3[0]:
        f2 += cf3[0]
        f3 -= cf3[0]
        cf3 = (0,) + cf3[1:]
    cf2 = even_continued_fraction(f2.numerator, f2.denominator).entries
    if len(cf2) < 3 or len(cf3) < 3:
        raise NotCase2(f"degenerate tangles {f2}, {f3}: the knot is two-bridge")
    if len(cf2) % 2 == 0 or len(cf3) % 2 == 0 or any(e % 2 for e in cf2 + cf3):
        raise NotCase2(f"unexpected expansions {cf2}, {cf3}")
    return Case2Spec(sign1, tuple(e // 2 for e in cf2), tuple(e // 2 for e in cf3[1:]))


def case2_tangles(spec):
    """The (alpha, beta) pairs of the normalized tangles of a spec."""
    f2 = cf_to_rational([2 * x for x in spec.m])
    f3 = cf_to_rational([0] + [2 * x for x in spec.n])
    return [(2, spec.beta1_sign), (f2.denominator, f2.numerator),
            (f3.denominator, f3.numerator)]


# ---------------------------------------------------------------------------
# Case (3): K_n = M(0; (3n+2, -2n-1), (3, 1), (3, 1))

def case3_y_word(n):
    x, z = Word.gen("x"), Word.gen("z")
    if n % 2 == 0:
        W = x.inverse() * commutator(x, z) * commutator(x.inverse(), z.inverse()) * x
        return W ** (n // 2)
    W = commutator(z, x.inverse()) * commutator(z.inverse(), x)
    return W ** ((n + 1) // 2)


def case3_relator(n):
    x, z = Word.gen("x"), Word.gen("z")
    y = case3_y_word(n)
    zxz = z * x * z.inverse()
    if n % 2 == 0:
        lhs = commutator(x.inverse(), z.inverse()) * x * y * x * zxz * y.inverse()
        rhs = y * z * x * zxz * y.inverse() * zxz.inverse()
    else:
        lhs = x * z * x * z.inverse() * commutator(y, zxz)
        rhs = z * x.inverse() * commutator(zxz, y) * x
    return lhs * rhs.inverse()


def build_case3(spec):
    if not isinstance(spec, Case3Spec):
        spec = Case3Spec(int(spec))
    return Presentation(["x", "z"], [case3_relator(spec.n)], "x", preferred_column="z",
                        family=spec.to_json())


def build(spec):
    if isinstance(spec, TwoBridgeSpec):
        return build_two_bridge(spec)
    if isinstance(spec, Case2Spec):
        return build_case2(spec)
    if isinstance(spec, Case3Spec):
        return build_case3(spec)
    raise UnsupportedFamily(f"no builder for {spec!r}")


def genus(spec):
    if isinstance(spec, TwoBridgeSpec):
        return (spec.k + 1) // 2
    if isinstance(spec, Case2Spec):
        two_g = spec.k + spec.l + 2 if spec.m[0] != 0 else spec.k + spec.l
        return two_g // 2
    raise UnsupportedFamily("genus is only available for two-bridge and case (2) knots")
