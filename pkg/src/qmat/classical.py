"""Classical matroids, strong maps between them, and the link to K-morphisms.

Subsets of a ground set are bitmasks over the ground order.  A pointed map
sends each source label to a target label or to ``None``, the base point.
"""
from __future__ import annotations

from functools import cached_property
from itertools import combinations
from typing import Hashable, Iterable, Mapping

from .errors import NotF1Linear, NotStrong, QmatError, ShapeMismatch
from .idyll import K
from .matroid import Matroid, exchange_holds, from_bases_K, mask_to_tuple
from .morphism import SubmonomialMatrix, is_morphism_pluecker, underlying_map


def bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class ClassicalMatroid:
    """A matroid given by its bases; rank, closure and friends are tabulated lazily."""

    def __init__(self, ground: Iterable[Hashable], bases: Iterable[Iterable[Hashable]]):
        self.ground = tuple(ground)
        index = {e: i for i, e in enumerate(self.ground)}
        masks = set()
        for b in bases:
            masks.add(sum(1 << index[e] for e in set(b)))
        if not masks:
            raise QmatError("a matroid needs at least one basis")
        sizes = {bin(m).count("1") for m in masks}
        if len(sizes) != 1 or not exchange_holds(frozenset(masks)):
            raise QmatError("the sets do not satisfy basis exchange")
        self.masks = frozenset(masks)
        self.rank = sizes.pop()

    @classmethod
    def from_masks(cls, ground, masks) -> "ClassicalMatroid":
        ground = tuple(ground)
        return cls(ground, [[ground[i] for i in mask_to_tuple(m)] for m in masks])

    @classmethod
    def from_matroid(cls, M: Matroid) -> "ClassicalMatroid":
        return cls(M.ground, M.bases())

    def to_matroid(self) -> Matroid:
        return from_bases_K(self.ground, self.rank, self.bases())

    @property
    def size(self) -> int:
        return len(self.ground)

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def bases(self) -> list[tuple]:
        return sorted(tuple(self.ground[i] for i in mask_to_tuple(m)) for m in self.masks)

    def mask(self, labels: Iterable[Hashable]) -> int:
        index = {e: i for i, e in enumerate(self.ground)}
        return sum(1 << index[e] for e in set(labels))

    def labels(self, mask: int) -> frozenset:
        return frozenset(self.ground[i] for i in bits(mask))

    @cached_property
    def rank_table(self) -> list[int]:
        return [max(bin(b & a).count("1") for b in self.masks) for a in range(1 << self.size)]

    @cached_property
    def closure_table(self) -> list[int]:
        rk = self.rank_table
        out = []
        for a in range(1 << self.size):
            c = a
            for i in range(self.size):
                if rk[a | (1 << i)] == rk[a]:
                    c |= 1 << i
            out.append(c)
        return out

    @cached_property
    def flat_masks(self) -> frozenset:
        return frozenset(self.closure_table)

    @cached_property
    def circuit_masks(self) -> frozenset:
        rk = self.rank_table
        dependent = [a for a in range(1 << self.size) if rk[a] < bin(a).count("1")]
        return frozenset(a for a in dependent
                         if all(rk[a ^ (1 << i)] == bin(a).count("1") - 1 for i in bits(a)))

    @cached_property
    def dual(self) -> "ClassicalMatroid":
        return ClassicalMatroid.from_masks(self.ground, [self.full ^ b for b in self.masks])

    @cached_property
    def cocircuit_masks(self) -> frozenset:
        return self.dual.circuit_masks

    @cached_property
    def covector_masks(self) -> frozenset:
        """Unions of cocircuits, the empty set included."""
        out = {0}
        for c in self.cocircuit_masks:
            out |= {u | c for u in out}
        return frozenset(out)

    def __eq__(self, other):
        return isinstance(other, ClassicalMatroid) and (self.ground, self.masks) == (other.ground, other.masks)

    def __hash__(self):
        return hash((self.ground, self.masks))

    def __repr__(self):
        return f"ClassicalMatroid(ground={list(self.ground)}, bases={self.bases()})"


def rank_of(M: ClassicalMatroid, A: Iterable[Hashable]) -> int:
    return M.rank_table[M.mask(A)]


def closure_of(M: ClassicalMatroid, A: Iterable[Hashable]) -> frozenset:
    return M.labels(M.closure_table[M.mask(A)])


def all_classical(ground: Iterable[Hashable]) -> list[ClassicalMatroid]:
    from .matroid import basis_families

    ground = tuple(ground)
    return [ClassicalMatroid.from_masks(ground, fam)
            for r in range(len(ground) + 1) for fam in basis_families(len(ground), r)]


class PointedMap:
    """A base-point preserving map between augmented ground sets; ``None`` is the base point."""

    def __init__(self, source: Iterable[Hashable], target: Iterable[Hashable], mapping: Mapping):
        self.source = tuple(source)
        self.target = tuple(target)
        tindex = {t: i for i, t in enumerate(self.target)}
        self.mapping = {}
        image = []
        for s in self.source:
            t = mapping.get(s)
            if t is not None and t not in tindex:
                raise ShapeMismatch(f"{t!r} is not a target label")
            self.mapping[s] = t
            image.append(-1 if t is None else tindex[t])
        self.image = tuple(image)

    def __call__(self, s):
        return self.mapping[s]

    def image_mask(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            if self.image[i] >= 0:
                out |= 1 << self.image[i]
        return out

    def preimage_mask(self, mask: int) -> int:
        return sum(1 << s for s, t in enumerate(self.image) if t >= 0 and mask >> t & 1)

    @cached_property
    def zero_mask(self) -> int:
        return sum(1 << s for s, t in enumerate(self.image) if t < 0)

    def is_f1_linear(self) -> bool:
        hit = [t for t in self.image if t >= 0]
        return len(hit) == len(set(hit))

    def adjoint(self) -> "PointedMap":
        if not self.is_f1_linear():
            raise NotF1Linear("only injective-away-from-zero maps have an adjoint")
        return PointedMap(self.target, self.source, {t: s for s, t in self.mapping.items() if t is not None})

    def __eq__(self, other):
        return isinstance(other, PointedMap) and (self.source, self.target, self.image) == (
            other.source, other.target, other.image)

    def __hash__(self):
        return hash((self.source, self.target, self.image))

    def __repr__(self):
        body = ", ".join(f"{s}->{'0' if t is None else t}" for s, t in self.mapping.items())
        return f"PointedMap({body})"


def all_pointed_maps(source, target) -> list[PointedMap]:
    from itertools import product

    source, target = tuple(source), tuple(target)
    return [PointedMap(source, target, dict(zip(source, choice)))
            for choice in product((None,) + target, repeat=len(source))]


class StrongMapTest:
    """Everything about (sigma, M) that the three strong-map criteria need, precomputed once.

    Calling one of the methods with a source matroid N answers whether sigma
    is a strong map N -> M by that criterion.  Looping over many N with a
    fixed (sigma, M) is the intended use.
    """

    def __init__(self, sigma: PointedMap, M: ClassicalMatroid):
        if sigma.target != M.ground:
            raise ShapeMismatch("map target does not match the matroid")
        self.sigma = sigma
        self.M = M
        zero = sigma.zero_mask
        self.pulled_cocircuits = [sigma.preimage_mask(z) for z in M.cocircuit_masks]
        # flats of M with the loop added pull back to sets that contain everything sent to 0
        self.pulled_flats = [sigma.preimage_mask(f) | zero for f in M.flat_masks]
        close = M.closure_table
        self.closure_bound = [sigma.preimage_mask(close[sigma.image_mask(a)]) | zero
                              for a in range(1 << len(sigma.source))]

    def _check(self, N: ClassicalMatroid):
        if N.ground != self.sigma.source:
            raise ShapeMismatch("map source does not match the matroid")

    def by_cocircuits(self, N: ClassicalMatroid) -> bool:
        self._check(N)
        cov = N.covector_masks
        return all(p in cov for p in self.pulled_cocircuits)

    def by_flats(self, N: ClassicalMatroid) -> bool:
        self._check(N)
        flats = N.flat_masks
        return all(p in flats for p in self.pulled_flats)

    def by_closure(self, N: ClassicalMatroid) -> bool:
        self._check(N)
        close = N.closure_table
        return all(not (c & ~b) for c, b in zip(close, self.closure_bound))


def is_strong_map(sigma: PointedMap, N: ClassicalMatroid, M: ClassicalMatroid) -> bool:
    """Cocircuits of M pull back to unions of cocircuits of N."""
    return StrongMapTest(sigma, M).by_cocircuits(N)


def is_strong_map_flats(sigma: PointedMap, N: ClassicalMatroid, M: ClassicalMatroid) -> bool:
    """Flats of M with a loop at the base point pull back to flats of N with the same loop."""
    return StrongMapTest(sigma, M).by_flats(N)


def is_strong_map_closure(sigma: PointedMap, N: ClassicalMatroid, M: ClassicalMatroid) -> bool:
    """sigma(cl_N(A)) lies in the closure of sigma(A) for every A."""
    return StrongMapTest(sigma, M).by_closure(N)


def preimage_classical(sigma: PointedMap, M: ClassicalMatroid) -> ClassicalMatroid:
    """Matroid on the source whose rank of A is the rank of sigma(A) in M."""
    if sigma.target != M.ground:
        raise ShapeMismatch("map target does not match the matroid")
    rk = M.rank_table
    n = len(sigma.source)
    top = rk[sigma.image_mask((1 << n) - 1)]
    bases = [sum(1 << i for i in c) for c in combinations(range(n), top)]
    bases = [b for b in bases if rk[sigma.image_mask(b)] == top]
    return ClassicalMatroid.from_masks(sigma.source, bases)


def is_f1_linear(sigma: PointedMap) -> bool:
    return sigma.is_f1_linear()


def sets_orthogonal(x: int, y: int) -> bool:
    return bin(x & y).count("1") != 1


def circuits_orthogonal(sigma: PointedMap, N: ClassicalMatroid, M: ClassicalMatroid) -> bool:
    """Images of the circuits of N are orthogonal to the cocircuits of M."""
    return all(sets_orthogonal(sigma.image_mask(c), z)
               for c in N.circuit_masks for z in M.cocircuit_masks)


def is_classical_quotient(N: ClassicalMatroid, M: ClassicalMatroid) -> bool:
    if N.ground != M.ground:
        raise ShapeMismatch("quotients need the same ground set")
    ident = PointedMap(N.ground, N.ground, {e: e for e in N.ground})
    return is_strong_map(ident, N, M)


def k_morphism_to_strong(phi: SubmonomialMatrix, N: Matroid, M: Matroid) -> PointedMap:
    if phi.idyll != K:
        raise QmatError("expected a matrix over K")
    if not is_morphism_pluecker(phi, N, M):
        raise NotStrong("the matrix is not a morphism")
    f = underlying_map(phi)
    return PointedMap(f.source, f.target, f.mapping)


def strong_to_k_morphism(sigma: PointedMap, N: ClassicalMatroid, M: ClassicalMatroid) -> SubmonomialMatrix:
    if not sigma.is_f1_linear():
        raise NotF1Linear("two labels share a nonzero image")
    if not is_strong_map(sigma, N, M):
        raise NotStrong("the map is not strong")
    return SubmonomialMatrix(K, sigma.source, sigma.target,
                             {s: (t, 1) for s, t in sigma.mapping.items() if t is not None})
