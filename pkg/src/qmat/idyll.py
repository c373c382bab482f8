"""Idylls: pointed abelian groups whose nullset decides which formal sums vanish.

Elements are stored as plain Python scalars inside each idyll so that the
hot loops in the matroid code never allocate wrapper objects.  The
``Element`` and ``FormalSum`` classes are thin, typed views for callers who
prefer to carry the idyll around with the value.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Hashable, Iterable, Iterator

from .errors import IdyllError


class Idyll:
    """Base class.  Subclasses fix the carrier and the nullset rule."""

    name = "?"
    zero: Hashable = 0
    one: Hashable = 1
    minus_one: Hashable = -1
    finite = True

    def contains(self, value) -> bool:
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def neg(self, a):
        return self.mul(self.minus_one, a)

    def signed(self, a, sign: int):
        """``a`` times ``(-1)**k`` where ``sign`` is +1 or -1."""
        return a if sign > 0 else self.neg(a)

    def nulls(self, terms: Iterable) -> bool:
        """Nullset test on an iterable of values; zeros are dropped."""
        raise NotImplementedError

    def units(self) -> tuple:
        raise IdyllError(f"{self.name} has an infinite carrier")

    def elements(self) -> tuple:
        return (self.zero,) + self.units()

    def parse(self, text):
        raise NotImplementedError

    def format(self, value) -> str:
        return str(value)

    def sort_key(self, value):
        return value

    def __repr__(self):
        return f"<idyll {self.name}>"


class Krasner(Idyll):
    name = "K"
    minus_one = 1

    def contains(self, value):
        return value in (0, 1)

    def mul(self, a, b):
        return a & b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return 1

    def neg(self, a):
        return a

    def signed(self, a, sign):
        return a

    def nulls(self, terms):
        count = 0
        for t in terms:
            if t:
                count += 1
                if count > 1:
                    return True
        return count != 1

    def units(self):
        return (1,)

    def parse(self, text):
        value = int(str(text))
        if value not in (0, 1):
            raise IdyllError(f"{text!r} is not an element of K")
        return value


class _SignLike(Idyll):
    def contains(self, value):
        return value in (0, 1, -1)

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return a

    def neg(self, a):
        return -a

    def signed(self, a, sign):
        return a if sign > 0 else -a

    def units(self):
        return (1, -1)

    def sort_key(self, value):
        return value

    def parse(self, text):
        value = int(str(text))
        if value not in (0, 1, -1):
            raise IdyllError(f"{text!r} is not an element of {self.name}")
        return value


class Sign(_SignLike):
    """Sign hyperfield: a sum vanishes when it is empty or has both signs."""

    name = "S"

    def nulls(self, terms):
        pos = neg = False
        for t in terms:
            if t > 0:
                pos = True
            elif t < 0:
                neg = True
            if pos and neg:
                return True
        return not (pos or neg)


class RegularPartialField(_SignLike):
    """F1 with a sign: a sum vanishes when the +1 and -1 terms balance."""

    name = "F1pm"

    def nulls(self, terms):
        return sum(terms) == 0


class Tropical(Idyll):
    """Nonnegative exact rationals; null when the maximum is attained twice."""

    name = "T"
    finite = False
    minus_one = Fraction(1)
    one = Fraction(1)
    zero = Fraction(0)

    def contains(self, value):
        return isinstance(value, (int, Fraction)) and value >= 0

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return 1 / Fraction(a)

    def neg(self, a):
        return a

    def signed(self, a, sign):
        return a

    def nulls(self, terms):
        top = None
        count = 0
        for t in terms:
            if not t:
                continue
            if top is None or t > top:
                top, count = t, 1
            elif t == top:
                count += 1
        return top is None or count >= 2

    def parse(self, text):
        value = Fraction(str(text))
        if value < 0:
            raise IdyllError(f"{text!r} is negative; T holds nonnegative values")
        return value

    def format(self, value):
        return str(Fraction(value))


class FieldIdyll(Idyll):
    """A finite prime field viewed as an idyll: a sum is null iff it is 0."""

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise IdyllError(f"GF({p}) needs a prime modulus")
        self.p = p
        self.name = f"GF({p})"
        self.minus_one = p - 1

    def contains(self, value):
        return isinstance(value, int) and 0 <= value < self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, -1, self.p)

    def neg(self, a):
        return -a % self.p

    def signed(self, a, sign):
        return a if sign > 0 else -a % self.p

    def nulls(self, terms):
        return sum(terms) % self.p == 0

    def units(self):
        return tuple(range(1, self.p))

    def parse(self, text):
        return int(str(text)) % self.p

    def __eq__(self, other):
        return isinstance(other, FieldIdyll) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


K = Krasner()
S = Sign()
T = Tropical()
F1PM = RegularPartialField()


@lru_cache(maxsize=None)
def finite_field(p: int) -> FieldIdyll:
    return FieldIdyll(p)


def idyll_by_name(name: str) -> Idyll:
    key = name.strip()
    table = {"K": K, "S": S, "T": T, "F1pm": F1PM, "F1±": F1PM}
    if key in table:
        return table[key]
    if key.startswith("GF(") and key.endswith(")"):
        return finite_field(int(key[3:-1]))
    raise IdyllError(f"unknown idyll {name!r}")


# ---------------------------------------------------------------------------
# element-level views


@dataclass(frozen=True)
class Element:
    idyll: Idyll
    value: Hashable

    def __post_init__(self):
        if not self.idyll.contains(self.value):
            raise IdyllError(f"{self.value!r} is not in {self.idyll.name}")

    def _check(self, other: "Element"):
        if other.idyll != self.idyll:
            raise IdyllError(f"cannot combine {self.idyll.name} with {other.idyll.name}")

    def __mul__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.idyll, self.idyll.mul(self.value, other.value))

    def __neg__(self) -> "Element":
        return Element(self.idyll, self.idyll.neg(self.value))

    def inverse(self) -> "Element":
        return Element(self.idyll, self.idyll.inv(self.value))

    def is_zero(self) -> bool:
        return not self.value

    def __str__(self):
        return self.idyll.format(self.value)


def mul(a: Element, b: Element) -> Element:
    return a * b


def neg(a: Element) -> Element:
    return -a


def inv(a: Element) -> Element:
    return a.inverse()


class FormalSum:
    """Multiset of nonzero elements of one idyll, stored sorted."""

    def __init__(self, idyll: Idyll, terms: Iterable = ()):
        self.idyll = idyll
        values = []
        for t in terms:
            v = t.value if isinstance(t, Element) else t
            if not idyll.contains(v):
                raise IdyllError(f"{v!r} is not in {idyll.name}")
            if v:
                values.append(v)
        self.terms = tuple(sorted(values, key=idyll.sort_key))

    def is_null(self) -> bool:
        return self.idyll.nulls(self.terms)

    def __iter__(self) -> Iterator:
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return (isinstance(other, FormalSum) and other.idyll == self.idyll
                and Counter(other.terms) == Counter(self.terms))

    def __hash__(self):
        return hash((self.idyll.name, self.terms))

    def __repr__(self):
        inner = " + ".join(self.idyll.format(t) for t in self.terms) or "0"
        return f"FormalSum[{self.idyll.name}]({inner})"


def is_null(s: FormalSum) -> bool:
    return s.is_null()


def inner_product(idyll: Idyll, x: dict, y: dict) -> FormalSum:
    """Formal sum of the coordinatewise products of two families on the same index set."""
    if set(x) != set(y):
        raise IdyllError("inner product needs families on the same index set")
    return FormalSum(idyll, (idyll.mul(x[e], y[e]) for e in x))


# ---------------------------------------------------------------------------
# morphisms


class IdyllMorphism:
    """A named multiplicative map between two idylls."""

    rule = "?"

    def __init__(self, source: Idyll, target: Idyll):
        self.source = source
        self.target = target

    def __call__(self, value):
        raise NotImplementedError

    def push(self, a: Element) -> Element:
        if a.idyll != self.source:
            raise IdyllError(f"{self.rule} expects {self.source.name}, got {a.idyll.name}")
        return Element(self.target, self(a.value))

    def __repr__(self):
        return f"{self.rule}({self.source.name} -> {self.target.name})"


class ToKrasner(IdyllMorphism):
    """The terminal map: every unit goes to 1."""

    rule = "ToKrasner"

    def __init__(self, source: Idyll):
        super().__init__(source, K)

    def __call__(self, value):
        return 1 if value else 0


class Identity(IdyllMorphism):
    rule = "Identity"

    def __init__(self, idyll: Idyll):
        super().__init__(idyll, idyll)

    def __call__(self, value):
        return value


class Inclusion(IdyllMorphism):
    """F1pm into any idyll (sending -1 to the target's -1), or K into T."""

    rule = "Inclusion"

    def __init__(self, source: Idyll, target: Idyll):
        if source is F1PM:
            pass
        elif source is K and target is T:
            pass
        else:
            raise IdyllError(f"no inclusion {source.name} -> {target.name}")
        super().__init__(source, target)

    def __call__(self, value):
        if not value:
            return self.target.zero
        if value == 1:
            return self.target.one
        return self.target.minus_one


def push_forward_elem(f: IdyllMorphism, a: Element) -> Element:
    return f.push(a)


def check_morphism(f: IdyllMorphism, max_terms: int = 4) -> bool:
    """Exhaustively test that ``f`` is multiplicative and preserves null sums.

    Sums of up to ``max_terms`` units are tried; the source carrier must be finite.
    """
    from itertools import combinations_with_replacement

    src, tgt = f.source, f.target
    if f(src.zero) != tgt.zero or f(src.one) != tgt.one:
        return False
    units = src.units()
    for a in units:
        for b in units:
            if f(src.mul(a, b)) != tgt.mul(f(a), f(b)):
                return False
    for k in range(max_terms + 1):
        for terms in combinations_with_replacement(units, k):
            if src.nulls(terms) and not tgt.nulls([f(t) for t in terms]):
                return False
    return True
