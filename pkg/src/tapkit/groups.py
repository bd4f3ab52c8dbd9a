"""Free-group words, the integral group ring, Fox derivatives and
finitely presented groups with their abelianization degrees."""
from __future__ import annotations

import json
import sys
from fractions import Fraction

from .errors import InvalidInput, NonCyclicAbelianization, UnknownGenerator


def reduce_word(letters):
    """Freely reduce a sequence of (generator, ±1) pairs."""
    out = []
    for g, s in letters:
        if s not in (1, -1):
            raise InvalidInput(f"letter exponent must be +1 or -1, got {s!r}")
        if out and out[-1][0] == g and out[-1][1] == -s:
            out.pop()
        else:
            out.append((sys.intern(g), s))
    return Word._raw(tuple(out))


class Word:
    """A freely reduced word.  Generators are interned strings."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters=()):
        w = reduce_word(letters)
        self.letters = w.letters
        self._hash = None

    @classmethod
    def _raw(cls, letters):
        w = cls.__new__(cls)
        w.letters = letters
        w._hash = None
        return w

    @classmethod
    def gen(cls, name, power=1):
        s = 1 if power > 0 else -1
        return cls._raw(((sys.intern(name), s),) * abs(power))

    @classmethod
    def identity(cls):
        return cls._raw(())

    def __mul__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        a, b = self.letters, other.letters
        i = 0
        n = min(len(a), len(b))
        while i < n and a[-1 - i][0] == b[i][0] and a[-1 - i][1] == -b[i][1]:
            i += 1
        return Word._raw(a[:len(a) - i] + b[i:])

    def inverse(self):
        return Word._raw(tuple((g, -s) for g, s in reversed(self.letters)))

    def __invert__(self):
        return self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = Word.identity()
        for _ in range(n):
            out = out * self
        return out

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.letters)
        return self._hash

    def generators(self):
        return {g for g, _ in self.letters}

    def exponent_sum(self, g):
        return sum(s for h, s in self.letters if h == g)

    def __str__(self):
        if not self.letters:
            return "1"
        parts = []
        i = 0
        L = self.letters
        while i < len(L):
            j = i
            while j < len(L) and L[j] == L[i]:
                j += 1
            e = (j - i) * L[i][1]
            parts.append(L[i][0] if e == 1 else f"{L[i][0]}^{e}")
            i = j
        return " ".join(parts)

    def __repr__(self):
        return f"Word({str(self)!r})"

    @classmethod
    def parse(cls, text):
        """Parse strings like ``"a b^-1 x-1^2"``; ``"1"`` or ``""`` is the identity."""
        letters = []
        for tok in text.split():
            if tok == "1":
                continue
            if "^" in tok:
                name, _, exp = tok.rpartition("^")
                try:
                    e = int(exp)
                except ValueError:
                    raise InvalidInput(f"bad exponent in token {tok!r}")
            else:
                name, e = tok, 1
            if not name:
                raise InvalidInput(f"empty generator name in token {tok!r}")
            letters.extend([(name, 1 if e > 0 else -1)] * abs(e))
        return cls(letters)


def word_product(*parts):
    out = Word.identity()
    for p in parts:
        out = out * (Word.gen(p) if isinstance(p, str) else p)
    return out


def commutator(u, v):
    """[u, v] = u v u^-1 v^-1."""
    return u * v * u.inverse() * v.inverse()


class GroupRingElement:
    """Finite integer combination of words; zero coefficients are absent."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for w, c in (terms.items() if isinstance(terms, dict) else terms):
                if c:
                    clean[w] = clean.get(w, 0) + c
                    if not clean[w]:
                        del clean[w]
        self.terms = clean

    @classmethod
    def of(cls, x):
        if isinstance(x, GroupRingElement):
            return x
        if isinstance(x, Word):
            return cls({x: 1})
        if isinstance(x, int):
            return cls({Word.identity(): x})
        raise TypeError(f"cannot embed {x!r} in the group ring")

    def __add__(self, other):
        o = GroupRingElement.of(other)
        t = dict(self.terms)
        for w, c in o.terms.items():
            t[w] = t.get(w, 0) + c
        return GroupRingElement(t)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-GroupRingElement.of(other))

    def __rsub__(self, other):
        return GroupRingElement.of(other) - self

    def __mul__(self, other):
        o = GroupRingElement.of(other)
        t = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in o.terms.items():
                w = w1 * w2
                t[w] = t.get(w, 0) + c1 * c2
        return GroupRingElement(t)

    def __rmul__(self, other):
        return GroupRingElement.of(other) * self

    def __eq__(self, other):
        try:
            o = GroupRingElement.of(other)
        except TypeError:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def augmentation(self):
        return sum(self.terms.values())

    def __repr__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda kv: (len(kv[0]), str(kv[0])))
        return " + ".join(f"{c}*[{w}]" for w, c in items)


def fox_derivative(w, g):
    """Fox derivative of the word ``w`` with respect to generator ``g``.

    Scans prefixes: a letter g contributes +prefix, a letter g^-1
    contributes -(prefix g^-1).
    """
    terms = {}
    L = w.letters
    for i, (h, s) in enumerate(L):
        if h != g:
            continue
        if s == 1:
            p = Word._raw(L[:i])
            terms[p] = terms.get(p, 0) + 1
        else:
            p = Word._raw(L[:i + 1])
            terms[p] = terms.get(p, 0) - 1
    return GroupRingElement(terms)


# ---------------------------------------------------------------------------

def _nullspace_vector(rows, n):
    """Basis of the rational null space of an integer matrix (list of rows)."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def abelianization_degrees(generators, relators, meridian):
    """Degree of each generator under G -> H_1 = Z, normalized so the
    meridian has degree 1."""
    gens = list(generators)
    if meridian not in gens:
        raise UnknownGenerator(f"meridian {meridian!r} is not a generator")
    index = {g: i for i, g in enumerate(gens)}
    rows = []
    for r in relators:
        row = [0] * len(gens)
        for g, s in r:
            if g not in index:
                raise UnknownGenerator(f"relator uses unknown generator {g!r}")
            row[index[g]] += s
        rows.append(row)
    basis = _nullspace_vector(rows, len(gens))
    if len(basis) != 1:
        raise NonCyclicAbelianization(
            f"exponent-sum system has a {len(basis)}-dimensional solution space")
    v = basis[0]
    mv = v[index[meridian]]
    if not mv:
        raise NonCyclicAbelianization("meridian abelianizes to zero")
    v = [x / mv for x in v]
    if any(x.denominator != 1 for x in v):
        raise NonCyclicAbelianization("degree vector has no integer normalization")
    return {g: int(x) for g, x in zip(gens, v)}


class Presentation:
    """Finitely presented group with a designated meridian.

    ``definitions`` optionally lists (generator, word in earlier generators)
    pairs whose defining relators ``gen * word^-1`` appear among the
    relators; they let representation tools extend images from the free
    generators.  ``redundant`` holds relations that hold in the group but
    are omitted from the deficiency-one list.
    """

    def __init__(self, generators, relators, meridian, *, definitions=(), redundant=(),
                 preferred_column=None, family=None):
        self.generators = tuple(sys.intern(g) for g in generators)
        if len(set(self.generators)) != len(self.generators):
            raise InvalidInput("duplicate generator names")
        for g in self.generators:
            if not g or any(ch.isspace() for ch in g) or "^" in g or g == "1":
                raise InvalidInput(f"bad generator name {g!r}")
        self.relators = tuple(relators)
        self.meridian = meridian
        self.definitions = tuple(definitions)
        self.redundant = tuple(redundant)
        self.preferred_column = preferred_column
        self.family = family
        known = set(self.generators)
        for r in self.relators + self.redundant + tuple(w for _, w in self.definitions):
            bad = r.generators() - known
            if bad:
                raise UnknownGenerator(f"unknown generator(s) {sorted(bad)}")
        if preferred_column is not None and preferred_column not in known:
            raise UnknownGenerator(f"preferred column {preferred_column!r} is not a generator")
        self.degrees = abelianization_degrees(self.generators, self.relators, meridian)
        for r in self.redundant:
            if sum(self.degrees[g] * s for g, s in r):
                raise InvalidInput(f"redundant relator {r} has nonzero degree")

    @property
    def deficiency(self):
        return len(self.generators) - len(self.relators)

    def free_generators(self):
        defined = {g for g, _ in self.definitions}
        return [g for g in self.generators if g not in defined]

    def word_degree(self, w):
        return sum(self.degrees[g] * s for g, s in w)

    def to_json(self):
        out = {"generators": list(self.generators),
               "relators": [str(r) for r in self.relators],
               "meridian": self.meridian}
        if self.definitions:
            out["definitions"] = [[g, str(w)] for g, w in self.definitions]
        if self.redundant:
            out["redundant_relators"] = [str(r) for r in self.redundant]
        if self.preferred_column is not None:
            out["preferred_column"] = self.preferred_column
        if self.family is not None:
            out["family"] = self.family
        return out

    def dumps(self):
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, dict):
            raise InvalidInput("presentation JSON must be an object")
        try:
            gens = obj["generators"]
            rels = obj["relators"]
            mer = obj["meridian"]
        except KeyError as e:
            raise InvalidInput(f"presentation JSON missing key {e}")
        if not isinstance(gens, list) or not all(isinstance(g, str) for g in gens):
            raise InvalidInput("generators must be a list of strings")
        if not isinstance(rels, list) or not all(isinstance(r, str) for r in rels):
            raise InvalidInput("relators must be a list of strings")
        return cls(gens, [Word.parse(r) for r in rels], mer,
                   definitions=[(g, Word.parse(w)) for g, w in obj.get("definitions", [])],
                   redundant=[Word.parse(r) for r in obj.get("redundant_relators", [])],
                   preferred_column=obj.get("preferred_column"),
                   family=obj.get("family"))

    @classmethod
    def loads(cls, text):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise InvalidInput(f"malformed JSON: {e}", line=e.lineno, column=e.colno)
        return cls.from_json(obj)

    def __repr__(self):
        return (f"Presentation({len(self.generators)} generators, "
                f"{len(self.relators)} relators, meridian={self.meridian!r})")
