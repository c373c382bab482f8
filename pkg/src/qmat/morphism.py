"""Submonomial matrices and the morphisms of matroids they define.

A submonomial matrix from S to T has at most one nonzero entry in each row
and each column, so it is stored as a partial injection S -> T together with
one coefficient per mapped source label.  Four independent tests decide
whether such a matrix is a morphism N -> M; ``is_morphism`` uses the
Plücker-sum test, which needs no vector enumeration and works over T.
"""
from __future__ import annotations

from bisect import bisect_left
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import ConditionViolated, NotSubmonomial, QmatError, ShapeMismatch
from .idyll import Idyll, IdyllMorphism
from .matroid import (
    DEFAULT_BUDGET,
    Matroid,
    orthogonal,
    push_forward_matroid,
    rank_zero,
    restrict,
    vectors,
)


class F1LinearMap:
    """Base-point preserving map between pointed sets, injective away from the base point.

    ``mapping`` sends each source label to a target label or ``None`` (the base point).
    """

    def __init__(self, source: Iterable[Hashable], target: Iterable[Hashable], mapping: Mapping):
        self.source = tuple(source)
        self.target = tuple(target)
        self.mapping = {s: mapping.get(s) for s in self.source}
        hit = [t for t in self.mapping.values() if t is not None]
        if len(hit) != len(set(hit)):
            raise NotSubmonomial("two labels share a nonzero image")
        if not set(hit) <= set(self.target):
            raise QmatError("image leaves the target set")

    def __call__(self, s):
        return self.mapping[s]

    def adjoint(self) -> "F1LinearMap":
        back = {t: s for s, t in self.mapping.items() if t is not None}
        return F1LinearMap(self.target, self.source, back)

    def __eq__(self, other):
        return (isinstance(other, F1LinearMap) and self.source == other.source
                and self.target == other.target and self.mapping == other.mapping)

    def __hash__(self):
        return hash((self.source, self.target, tuple(self.mapping.items())))

    def __repr__(self):
        body = ", ".join(f"{s}->{'0' if t is None else t}" for s, t in self.mapping.items())
        return f"F1LinearMap({body})"


class SubmonomialMatrix:
    def __init__(self, idyll: Idyll, source: Iterable[Hashable], target: Iterable[Hashable],
                 entries: Mapping[Hashable, tuple]):
        """``entries`` maps a source label to ``(target label, nonzero coefficient)``."""
        self.idyll = idyll
        self.source = tuple(source)
        self.target = tuple(target)
        tindex = {t: i for i, t in enumerate(self.target)}
        sindex = {s: i for i, s in enumerate(self.source)}
        image = [-1] * len(self.source)
        coeff = [idyll.zero] * len(self.source)
        for s, (t, c) in entries.items():
            if s not in sindex:
                raise ShapeMismatch(f"{s!r} is not a source label")
            if t not in tindex:
                raise ShapeMismatch(f"{t!r} is not a target label")
            if not idyll.contains(c):
                raise QmatError(f"{c!r} is not in {idyll.name}")
            if not c:
                continue
            image[sindex[s]] = tindex[t]
            coeff[sindex[s]] = c
        used = [i for i in image if i >= 0]
        if len(used) != len(set(used)):
            raise NotSubmonomial("a row holds two nonzero entries")
        self.image = tuple(image)
        self.coeff = tuple(coeff)

    @classmethod
    def from_rows(cls, idyll: Idyll, source, target, rows: Sequence[Sequence]) -> "SubmonomialMatrix":
        """Build from a dense matrix with rows indexed by target and columns by source."""
        source, target = tuple(source), tuple(target)
        if len(rows) != len(target) or any(len(row) != len(source) for row in rows):
            raise ShapeMismatch("matrix shape does not match the label sets")
        entries = {}
        for i, row in enumerate(rows):
            for j, c in enumerate(row):
                if c:
                    if source[j] in entries:
                        raise NotSubmonomial(f"column {source[j]!r} holds two nonzero entries")
                    entries[source[j]] = (target[i], c)
        return cls(idyll, source, target, entries)

    @property
    def entries(self) -> dict:
        return {self.source[j]: (self.target[i], self.coeff[j])
                for j, i in enumerate(self.image) if i >= 0}

    def rows(self) -> list[list]:
        out = [[self.idyll.zero] * len(self.source) for _ in self.target]
        for j, i in enumerate(self.image):
            if i >= 0:
                out[i][j] = self.coeff[j]
        return out

    def _key(self):
        return (self.idyll.name, self.source, self.target, self.image, self.coeff)

    def __eq__(self, other):
        return isinstance(other, SubmonomialMatrix) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"SubmonomialMatrix[{self.idyll.name}]({self.rows()!r})"


def identity(idyll: Idyll, ground: Iterable[Hashable]) -> SubmonomialMatrix:
    ground = tuple(ground)
    return SubmonomialMatrix(idyll, ground, ground, {e: (e, idyll.one) for e in ground})


def zero_matrix(idyll: Idyll, source, target) -> SubmonomialMatrix:
    return SubmonomialMatrix(idyll, source, target, {})


def all_submonomial(idyll: Idyll, source, target) -> list[SubmonomialMatrix]:
    """Every submonomial matrix between two label sets over a finite idyll."""
    source, target = tuple(source), tuple(target)
    units = idyll.units()
    out = []
    for k in range(min(len(source), len(target)) + 1):
        for cols in combinations(source, k):
            for rows in permutations(target, k):
                for cs in product(units, repeat=k):
                    out.append(SubmonomialMatrix(
                        idyll, source, target,
                        {s: (t, c) for s, t, c in zip(cols, rows, cs)}))
    return out


def underlying_map(phi: SubmonomialMatrix) -> F1LinearMap:
    return F1LinearMap(phi.source, phi.target,
                       {s: phi.target[i] if i >= 0 else None for s, i in zip(phi.source, phi.image)})


def apply(phi: SubmonomialMatrix, x: Sequence) -> tuple:
    if len(x) != len(phi.source):
        raise ShapeMismatch("vector length does not match the source")
    idyll = phi.idyll
    out = [idyll.zero] * len(phi.target)
    for j, i in enumerate(phi.image):
        if i >= 0 and x[j]:
            out[i] = idyll.mul(phi.coeff[j], x[j])
    return tuple(out)


def transpose(phi: SubmonomialMatrix) -> SubmonomialMatrix:
    return SubmonomialMatrix(phi.idyll, phi.target, phi.source,
                             {t: (s, c) for s, (t, c) in phi.entries.items()})


def compose(psi: SubmonomialMatrix, phi: SubmonomialMatrix) -> SubmonomialMatrix:
    """The product psi * phi.  Whether it is a morphism has to be checked separately."""
    if phi.target != psi.source or phi.idyll != psi.idyll:
        raise ShapeMismatch("target of the first factor must be the source of the second")
    second = psi.entries
    out = {}
    for s, (t, c) in phi.entries.items():
        if t in second:
            u, d = second[t]
            out[s] = (u, phi.idyll.mul(d, c))
    return SubmonomialMatrix(phi.idyll, phi.source, psi.target, out)


def _check_shapes(phi: SubmonomialMatrix, N: Matroid, M: Matroid):
    if N.ground != phi.source or M.ground != phi.target:
        raise ShapeMismatch("matrix labels do not match the ground sets")
    if not (N.idyll == M.idyll == phi.idyll):
        raise ShapeMismatch("matrix and matroids live over different idylls")


def morphism_witness(phi: SubmonomialMatrix, N: Matroid, M: Matroid):
    """First failing Plücker sum as ``(y, x)`` label tuples, or None when phi is a morphism."""
    _check_shapes(phi, N, M)
    w, r = N.rank, M.rank
    if r == 0:
        return None
    idyll = phi.idyll
    mul, signed, nulls = idyll.mul, idyll.signed, idyll.nulls
    image, coeff = phi.image, phi.coeff
    nvals, mvals = N.values, M.values
    xs = list(combinations(range(M.size), r - 1))
    for y in combinations(range(N.size), w + 1):
        active = []
        for k, e in enumerate(y):
            t = image[e]
            if t < 0:
                continue
            a = nvals.get(y[:k] + y[k + 1:])
            if a:
                active.append((k, mul(a, coeff[e]), t))
        if not active:
            continue
        for x in xs:
            terms = []
            for k, a, t in active:
                pos = bisect_left(x, t)
                if pos < len(x) and x[pos] == t:
                    continue
                b = mvals.get(x[:pos] + (t,) + x[pos:])
                if b:
                    terms.append(signed(mul(a, b), -1 if (k + pos) & 1 else 1))
            if terms and not nulls(terms):
                return (tuple(N.ground[i] for i in y), tuple(M.ground[i] for i in x))
    return None


def is_morphism_pluecker(phi: SubmonomialMatrix, N: Matroid, M: Matroid) -> bool:
    return morphism_witness(phi, N, M) is None


is_morphism = is_morphism_pluecker


def is_morphism_circuits(phi: SubmonomialMatrix, N: Matroid, M: Matroid) -> bool:
    _check_shapes(phi, N, M)
    cocircuits = M.cocircuit_set
    for c in N.circuit_set:
        image = apply(phi, c)
        if not all(orthogonal(phi.idyll, image, z) for z in cocircuits):
            return False
    return True


@lru_cache(maxsize=4096)
def _vector_set(M: Matroid, budget: int) -> frozenset:
    return vectors(M, budget)


def is_morphism_vectors(phi: SubmonomialMatrix, N: Matroid, M: Matroid, budget: int = DEFAULT_BUDGET) -> bool:
    _check_shapes(phi, N, M)
    target = _vector_set(M, budget)
    return all(apply(phi, x) in target for x in _vector_set(N, budget))


def preimage(phi: SubmonomialMatrix, M: Matroid) -> Matroid:
    """The matroid on the source whose vectors are the phi-preimages of vectors of M."""
    if M.ground != phi.target or M.idyll != phi.idyll:
        raise ShapeMismatch("matrix target does not match the matroid")
    idyll = phi.idyll
    hit = sorted(i for i in phi.image if i >= 0)
    if not hit:
        return rank_zero(idyll, phi.source)
    psi = restrict(M, [M.ground[i] for i in hit])
    d = psi.rank
    if d == 0:
        return rank_zero(idyll, phi.source)
    where = {t: p for p, t in enumerate(hit)}
    active = [j for j, i in enumerate(phi.image) if i >= 0]
    out = {}
    for z in combinations(active, d):
        v = psi.evaluate([where[phi.image[j]] for j in z])
        if not v:
            continue
        for j in z:
            v = idyll.mul(v, phi.coeff[j])
        out[z] = v
    return Matroid(idyll, phi.source, d, out)


def is_quotient(N: Matroid, M: Matroid) -> bool:
    """Whether M is a quotient of N, i.e. the identity is a morphism N -> M."""
    if N.ground != M.ground or N.idyll != M.idyll:
        raise ShapeMismatch("quotients need the same ground set and idyll")
    return is_morphism_pluecker(identity(N.idyll, N.ground), N, M)


def factorization_check(phi: SubmonomialMatrix, N: Matroid, M: Matroid) -> bool:
    _check_shapes(phi, N, M)
    return is_quotient(N, preimage(phi, M))


def _split(phi: SubmonomialMatrix, A: Iterable[Hashable], B: Iterable[Hashable]):
    A, B = set(A), set(B)
    if not A <= set(phi.source) or not B <= set(phi.target):
        raise ShapeMismatch("A and B must be subsets of the source and target")
    for s, (t, _) in phi.entries.items():
        if s in A and t not in B:
            raise ConditionViolated(f"{s!r} lies in A but maps to {t!r} outside B")
    return A, B


def restrict_morphism(phi: SubmonomialMatrix, A, B) -> SubmonomialMatrix:
    """The block on B x A; a morphism N|A -> M|B when phi is a morphism."""
    A, B = _split(phi, A, B)
    return SubmonomialMatrix(phi.idyll, [s for s in phi.source if s in A], [t for t in phi.target if t in B],
                             {s: (t, c) for s, (t, c) in phi.entries.items() if s in A})


def contract_morphism(phi: SubmonomialMatrix, A, B) -> SubmonomialMatrix:
    """The block on the complements; a morphism N/A -> M/B when phi is a morphism."""
    A, B = _split(phi, A, B)
    return SubmonomialMatrix(phi.idyll, [s for s in phi.source if s not in A],
                             [t for t in phi.target if t not in B],
                             {s: (t, c) for s, (t, c) in phi.entries.items() if s not in A and t not in B})


def delete_morphism_dual(phi: SubmonomialMatrix, A, B) -> SubmonomialMatrix:
    """The transpose of the contraction block; a morphism from M* minus B to N* minus A."""
    return transpose(contract_morphism(phi, A, B))


def push_forward_morphism(f: IdyllMorphism, phi: SubmonomialMatrix, N: Matroid, M: Matroid):
    """Entrywise image under f, and whether it is a morphism between the pushed matroids."""
    if f.source != phi.idyll:
        raise QmatError(f"{f!r} does not start at {phi.idyll.name}")
    pushed = SubmonomialMatrix(f.target, phi.source, phi.target,
                               {s: (t, f(c)) for s, (t, c) in phi.entries.items()})
    return pushed, is_morphism_pluecker(pushed, push_forward_matroid(f, N), push_forward_matroid(f, M))
