"""Matroids over idylls, stored as normalized Grassmann-Plücker functions.

Internally a matroid of rank r on n labels keeps a dict from sorted r-tuples
of ground indices to nonzero idyll values.  Evaluating an arbitrary tuple
sorts it and applies the permutation sign, so the alternating axiom holds by
construction.  Vectors (circuits, covectors, ...) are tuples of idyll values
in ground order.
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations, product
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import AllZero, BudgetExceeded, GP2Violation, InfiniteCarrier, QmatError
from .idyll import Idyll, IdyllMorphism, K

DEFAULT_BUDGET = 1 << 24

Vector = tuple


def sort_sign(seq: Sequence[int]) -> tuple[int, tuple]:
    """Sign of the permutation sorting ``seq`` and the sorted tuple; sign 0 on repeats."""
    items = list(seq)
    sign = 1
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
        if j > 0 and items[j - 1] == items[j]:
            return 0, ()
    return sign, tuple(items)


def gp2_witness(idyll: Idyll, n: int, r: int, values: Mapping[tuple, object]):
    """First (y, x) pair of index tuples whose Plücker sum is not null, or None.

    Only strictly increasing y and x are visited; the relation is alternating
    in both arguments, so the remaining tuples add nothing new.
    """
    if r == 0:
        return None
    mul, signed, nulls = idyll.mul, idyll.signed, idyll.nulls
    for y in combinations(range(n), r + 1):
        hats = [values.get(y[:k] + y[k + 1:]) for k in range(r + 1)]
        if not any(hats):
            continue
        for x in combinations(range(n), r - 1):
            terms = []
            for k, a in enumerate(hats):
                if not a:
                    continue
                e = y[k]
                pos = bisect_left(x, e)
                if pos < len(x) and x[pos] == e:
                    continue
                b = values.get(x[:pos] + (e,) + x[pos:])
                if not b:
                    continue
                terms.append(signed(mul(a, b), -1 if (k + pos) & 1 else 1))
            if terms and not nulls(terms):
                return y, x
    return None


def normalize_values(idyll: Idyll, values: Mapping[tuple, object]) -> dict:
    nonzero = {k: v for k, v in values.items() if v}
    if not nonzero:
        raise AllZero("a Grassmann-Plücker function needs a nonzero value")
    lead = nonzero[min(nonzero)]
    if lead == idyll.one:
        return nonzero
    scale = idyll.inv(lead)
    return {k: idyll.mul(scale, v) for k, v in nonzero.items()}


def normalize_vector(idyll: Idyll, vec: Sequence) -> Vector:
    for v in vec:
        if v:
            if v == idyll.one:
                return tuple(vec)
            scale = idyll.inv(v)
            return tuple(idyll.mul(scale, w) if w else idyll.zero for w in vec)
    return tuple(vec)


def orthogonal(idyll: Idyll, x: Sequence, y: Sequence) -> bool:
    mul = idyll.mul
    return idyll.nulls([mul(a, b) for a, b in zip(x, y) if a and b])


@dataclass
class PlueckerVector:
    """Raw coordinates of a candidate Grassmann-Plücker function.

    ``values`` maps tuples of ground labels (any order, sign applied) to
    idyll values.  Nothing is validated until ``gp_validate``.
    """

    idyll: Idyll
    ground: tuple
    rank: int
    values: dict = field(default_factory=dict)

    def index_values(self) -> dict:
        index = {e: i for i, e in enumerate(self.ground)}
        out = {}
        for key, value in self.values.items():
            if len(key) != self.rank:
                raise QmatError(f"coordinate {key!r} has length {len(key)}, expected {self.rank}")
            if not self.idyll.contains(value):
                raise QmatError(f"{value!r} is not in {self.idyll.name}")
            sign, idx = sort_sign([index[e] for e in key])
            if sign == 0 or not value:
                continue
            out[idx] = self.idyll.signed(value, sign)
        return out


class Matroid:
    """Immutable matroid over an idyll.  Construct through ``gp_validate`` or the helpers below."""

    def __init__(self, idyll: Idyll, ground: Iterable[Hashable], rank: int, values: Mapping[tuple, object]):
        self.idyll = idyll
        self.ground = tuple(ground)
        self.rank = rank
        self.values = normalize_values(idyll, values)
        self._key = (idyll.name, self.ground, rank, frozenset(self.values.items()))

    @property
    def size(self) -> int:
        return len(self.ground)

    @cached_property
    def index(self) -> dict:
        return {e: i for i, e in enumerate(self.ground)}

    def __eq__(self, other):
        return isinstance(other, Matroid) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        shown = ", ".join(
            "".join(str(self.ground[i]) for i in key) + ":" + self.idyll.format(v)
            for key, v in sorted(self.values.items())
        )
        return f"Matroid[{self.idyll.name}](rank={self.rank}, ground={list(self.ground)}, {{{shown}}})"

    def evaluate(self, idx: Sequence[int]):
        """Value on an arbitrary tuple of ground indices."""
        sign, key = sort_sign(idx)
        if sign == 0:
            return self.idyll.zero
        v = self.values.get(key)
        if not v:
            return self.idyll.zero
        return self.idyll.signed(v, sign)

    def value(self, labels: Sequence[Hashable]):
        return self.evaluate([self.index[e] for e in labels])

    @cached_property
    def basis_masks(self) -> frozenset:
        return frozenset(sum(1 << i for i in key) for key in self.values)

    def bases(self) -> list[tuple]:
        return [tuple(self.ground[i] for i in key) for key in sorted(self.values)]

    def rank_of_indices(self, idx: Iterable[int]) -> int:
        mask = sum(1 << i for i in set(idx))
        return max(bin(b & mask).count("1") for b in self.basis_masks)

    def rank_of(self, labels: Iterable[Hashable]) -> int:
        return self.rank_of_indices(self.index[e] for e in labels)

    def with_ground(self, ground: Sequence[Hashable]) -> "Matroid":
        """Same matroid with the labels renamed position by position."""
        return Matroid(self.idyll, ground, self.rank, self.values)

    def to_pluecker(self) -> PlueckerVector:
        return PlueckerVector(self.idyll, self.ground, self.rank,
                              {tuple(self.ground[i] for i in k): v for k, v in self.values.items()})

    # cached derived data used by the morphism tests

    @cached_property
    def circuit_set(self) -> frozenset:
        return _circuits(self)

    @cached_property
    def cocircuit_set(self) -> frozenset:
        return dual(self).circuit_set


def gp_validate(phi: PlueckerVector) -> Matroid:
    """Check the Plücker relations and return the normalized matroid."""
    if phi.rank < 0 or phi.rank > len(phi.ground):
        raise QmatError(f"rank {phi.rank} is out of range for {len(phi.ground)} elements")
    if len(set(phi.ground)) != len(phi.ground):
        raise QmatError("ground labels must be distinct")
    values = phi.index_values()
    if not values:
        raise AllZero("a Grassmann-Plücker function needs a nonzero value")
    witness = gp2_witness(phi.idyll, len(phi.ground), phi.rank, values)
    if witness is not None:
        y, x = witness
        labels = (tuple(phi.ground[i] for i in y), tuple(phi.ground[i] for i in x))
        raise GP2Violation(f"Plücker relation fails at y={labels[0]}, x={labels[1]}", labels)
    return Matroid(phi.idyll, phi.ground, phi.rank, values)


def from_values(idyll: Idyll, ground: Iterable[Hashable], rank: int, values: Mapping) -> Matroid:
    return gp_validate(PlueckerVector(idyll, tuple(ground), rank, dict(values)))


def from_bases_K(ground: Iterable[Hashable], rank: int, bases: Iterable[Iterable[Hashable]]) -> Matroid:
    ground = tuple(ground)
    return from_values(K, ground, rank, {tuple(sorted(b, key=ground.index)): 1 for b in bases})


def uniform(rank: int, ground: Iterable[Hashable] | int, idyll: Idyll = K) -> Matroid:
    """Uniform matroid with every value 1 (valid over K, T and S only for small cases)."""
    if isinstance(ground, int):
        ground = range(1, ground + 1)
    ground = tuple(ground)
    return from_values(idyll, ground, rank, {b: idyll.one for b in combinations(ground, rank)})


def underlying(M: Matroid) -> Matroid:
    return Matroid(K, M.ground, M.rank, {k: 1 for k in M.values})


def dual(M: Matroid) -> Matroid:
    n, r = M.size, M.rank
    full = range(n)
    out = {}
    for key, v in M.values.items():
        rest = tuple(i for i in full if i not in key)
        sign, _ = sort_sign(rest + key)
        out[rest] = M.idyll.signed(v, sign)
    return Matroid(M.idyll, M.ground, n - r, out)


def _independent_part(M: Matroid, chosen: set[int]) -> tuple[int, ...]:
    """A maximal independent subset of ``chosen``, taken from the first basis meeting it most."""
    best = max(sorted(M.values), key=lambda b: len(chosen.intersection(b)))
    return tuple(i for i in best if i in chosen)


def _labels_to_set(M: Matroid, labels: Iterable[Hashable]) -> set[int]:
    try:
        return {M.index[a] for a in labels}
    except KeyError as exc:
        raise QmatError(f"{exc.args[0]!r} is not in the ground set") from None


def _append_minor(M: Matroid, keep: list[int], extra: tuple[int, ...], rank: int) -> Matroid:
    out = {}
    for pos in combinations(range(len(keep)), rank):
        v = M.evaluate(tuple(keep[p] for p in pos) + extra)
        if v:
            out[pos] = v
    return Matroid(M.idyll, [M.ground[i] for i in keep], rank, out)


def contract(M: Matroid, A: Iterable[Hashable], independent: Sequence[Hashable] | None = None) -> Matroid:
    """M/A on E - A.  ``independent`` overrides the choice of maximal independent subset of A."""
    chosen = _labels_to_set(M, A)
    if independent is None:
        part = _independent_part(M, chosen)
    else:
        part = tuple(sorted(M.index[a] for a in independent))
    keep = [i for i in range(M.size) if i not in chosen]
    return _append_minor(M, keep, part, M.rank - len(part))


def delete(M: Matroid, A: Iterable[Hashable], completion: Sequence[Hashable] | None = None) -> Matroid:
    """M minus A on E - A.  ``completion`` overrides the choice of b in A extending a basis of E - A."""
    chosen = _labels_to_set(M, A)
    keep = [i for i in range(M.size) if i not in chosen]
    if completion is None:
        best = max(sorted(M.values), key=lambda b: sum(1 for i in b if i not in chosen))
        part = tuple(i for i in best if i in chosen)
    else:
        part = tuple(sorted(M.index[a] for a in completion))
    return _append_minor(M, keep, part, M.rank - len(part))


def restrict(M: Matroid, A: Iterable[Hashable]) -> Matroid:
    chosen = _labels_to_set(M, A)
    return delete(M, [M.ground[i] for i in range(M.size) if i not in chosen])


def _circuits(M: Matroid) -> frozenset:
    n, r, idyll = M.size, M.rank, M.idyll
    found = set()
    for y in combinations(range(n), r + 1):
        vec = [idyll.zero] * n
        hit = False
        for k, e in enumerate(y):
            v = M.values.get(y[:k] + y[k + 1:])
            if v:
                vec[e] = idyll.signed(v, -1 if k & 1 else 1)
                hit = True
        if hit:
            found.add(normalize_vector(idyll, vec))
    return frozenset(found)


def circuits(M: Matroid) -> frozenset:
    """One normalized representative per circuit (first nonzero entry equal to 1)."""
    return M.circuit_set


def cocircuits(M: Matroid) -> frozenset:
    return M.cocircuit_set


def _all_vectors(idyll: Idyll, n: int, budget: int):
    if not idyll.finite:
        raise InfiniteCarrier(f"{idyll.name} has infinitely many vectors; use is_vector")
    carrier = idyll.elements()
    if len(carrier) ** n > budget:
        raise BudgetExceeded(f"{len(carrier)}^{n} candidate vectors exceed the budget {budget}")
    return product(carrier, repeat=n)


def orthogonal_complement(idyll: Idyll, n: int, family: Iterable[Vector], budget: int = DEFAULT_BUDGET) -> frozenset:
    family = list(family)
    return frozenset(x for x in _all_vectors(idyll, n, budget)
                     if all(orthogonal(idyll, x, y) for y in family))


def vectors(M: Matroid, budget: int = DEFAULT_BUDGET) -> frozenset:
    return orthogonal_complement(M.idyll, M.size, M.cocircuit_set, budget)


def covectors(M: Matroid, budget: int = DEFAULT_BUDGET) -> frozenset:
    return orthogonal_complement(M.idyll, M.size, M.circuit_set, budget)


def is_vector(M: Matroid, x: Sequence) -> bool:
    if len(x) != M.size:
        raise QmatError("vector length does not match the ground set")
    return all(orthogonal(M.idyll, x, z) for z in M.cocircuit_set)


def is_covector(M: Matroid, x: Sequence) -> bool:
    if len(x) != M.size:
        raise QmatError("vector length does not match the ground set")
    return all(orthogonal(M.idyll, x, c) for c in M.circuit_set)


def vectors_perpendicular(M: Matroid, budget: int = DEFAULT_BUDGET) -> bool:
    """Perfection witness for one matroid: every vector is orthogonal to every covector."""
    vs, cs = vectors(M, budget), covectors(M, budget)
    return all(orthogonal(M.idyll, v, c) for v in vs for c in cs)


def push_forward_matroid(f: IdyllMorphism, M: Matroid) -> Matroid:
    if f.source != M.idyll:
        raise QmatError(f"{f!r} does not start at {M.idyll.name}")
    return Matroid(f.target, M.ground, M.rank, {k: f(v) for k, v in M.values.items()})


def extend_with_loop(M: Matroid, label: Hashable = 0) -> Matroid:
    """M with an extra loop appended at the end of the ground order."""
    if label in M.index:
        raise QmatError(f"label {label!r} is already in the ground set")
    return Matroid(M.idyll, M.ground + (label,), M.rank, M.values)


def rank_zero(idyll: Idyll, ground: Iterable[Hashable]) -> Matroid:
    return Matroid(idyll, ground, 0, {(): idyll.one})


# ---------------------------------------------------------------------------
# catalogues


def exchange_holds(family: frozenset) -> bool:
    """Basis exchange on a family of bitmasks."""
    for b1 in family:
        for b2 in family:
            only1 = b1 & ~b2
            if not only1:
                continue
            only2 = b2 & ~b1
            while only1:
                x = only1 & -only1
                only1 ^= x
                rest = b1 ^ x
                m = only2
                while m:
                    y = m & -m
                    if rest | y in family:
                        break
                    m ^= y
                else:
                    return False
    return True


def _lower_shadow(family: frozenset) -> frozenset:
    out = set()
    for b in family:
        m = b
        while m:
            x = m & -m
            out.add(b ^ x)
            m ^= x
    return frozenset(out)


@lru_cache(maxsize=None)
def basis_families(n: int, r: int) -> tuple[frozenset, ...]:
    """Every basis family (as bitmasks) of a rank-r matroid on n labelled elements.

    Built recursively: the last element is a loop, a coloop, or splits the
    matroid into a deletion of rank r and a contraction of rank r - 1 whose
    bases are independent in the deletion.
    """
    if r < 0 or r > n:
        return ()
    if n == 0:
        return (frozenset({0}),)
    top = 1 << (n - 1)
    found = set(basis_families(n - 1, r))
    for fam in basis_families(n - 1, r - 1):
        found.add(frozenset(b | top for b in fam))
    if 0 < r < n:
        contractions = basis_families(n - 1, r - 1)
        for deletion in basis_families(n - 1, r):
            shadow = _lower_shadow(deletion)
            for con in contractions:
                if con <= shadow:
                    fam = deletion | frozenset(b | top for b in con)
                    if exchange_holds(fam):
                        found.add(fam)
    return tuple(sorted(found, key=lambda f: sorted(f)))


def mask_to_tuple(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


@lru_cache(maxsize=None)
def catalogue_values(idyll: Idyll, n: int, r: int) -> tuple[dict, ...]:
    """Normalized value maps of every rank-r matroid over a finite idyll on n indices."""
    out = []
    for fam in basis_families(n, r):
        keys = sorted(mask_to_tuple(b) for b in fam)
        if idyll is K:
            out.append({k: 1 for k in keys})
            continue
        units = idyll.units()
        for choice in product(units, repeat=len(keys) - 1):
            values = dict(zip(keys, (idyll.one,) + choice))
            if gp2_witness(idyll, n, r, values) is None:
                out.append(values)
    return tuple(out)


def catalogue(idyll: Idyll, ground: Iterable[Hashable], rank: int) -> list[Matroid]:
    ground = tuple(ground)
    return [Matroid(idyll, ground, rank, v) for v in catalogue_values(idyll, len(ground), rank)]


def all_matroids(idyll: Idyll, ground: Iterable[Hashable]) -> list[Matroid]:
    ground = tuple(ground)
    return [M for r in range(len(ground) + 1) for M in catalogue(idyll, ground, r)]
