"""Specialization order on K-points, Tits spaces, initial matroids, and Euler characteristics.

A K-point y specializes to x (x lies in the closure of y) when every vertex
matroid of x has its bases among those of y.  The Tits space is the set of
minimal points.  Under a nice distinguishing sequence of gradings the Tits
points are exactly the coordinate points, which correspond to
subrepresentations of complementary dimension.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Hashable, Mapping, Sequence

from .errors import InvalidSequence, NotFound, NotNiceGrading, QmatError
from .idyll import K
from .matroid import Matroid, exchange_holds
from .morphism import SubmonomialMatrix
from .quiver import (
    F1Rep,
    coefficient_quiver,
    distinguishes,
    dual_dimension,
    find_nice_sequence,
    is_forest,
    is_nice_grading,
    is_nice_relative,
    is_nice_sequence,
    is_primitive_cycle,
    subrepresentations,
)
from .quiver_matroid import QuiverMatroid, enumerate_points, induced_arrow_matrix, underlying_rep, validate_qm


class SpecializationPoset:
    def __init__(self, points: Sequence[QuiverMatroid]):
        self.points = list(points)
        masks = [tuple(M.basis_masks for M in p.vertex_matroids.values()) for p in self.points]
        self.below = [[all(a <= b for a, b in zip(masks[i], masks[j])) for j in range(len(masks))]
                      for i in range(len(masks))]

    def leq(self, i: int, j: int) -> bool:
        """Point i lies in the closure of point j."""
        return self.below[i][j]

    def minimal(self) -> list[int]:
        n = len(self.points)
        return [i for i in range(n) if not any(j != i and self.below[j][i] for j in range(n))]


def specialization_order(points: Sequence[QuiverMatroid]) -> SpecializationPoset:
    return SpecializationPoset(points)


def tits_space(rep: F1Rep, ranks: Mapping[Hashable, int], points: Sequence[QuiverMatroid] | None = None):
    if points is None:
        points = enumerate_points(rep, ranks, K)
    poset = specialization_order(points)
    return [poset.points[i] for i in poset.minimal()]


def initial_matroid(M: Matroid, grading: Mapping[Hashable, int]) -> Matroid:
    """The K-matroid of bases of minimal total weight."""
    weights = [grading[e] for e in M.ground]
    score = {key: sum(weights[i] for i in key) for key in M.values}
    low = min(score.values())
    keep = {key: 1 for key, s in score.items() if s == low}
    masks = frozenset(sum(1 << i for i in key) for key in keep)
    if not exchange_holds(masks):
        raise QmatError("minimal-weight bases failed exchange")
    return Matroid(K, M.ground, M.rank, keep)


def initial_matroid_sequence(M: Matroid, seq: Sequence[Mapping[Hashable, int]]) -> Matroid:
    """Apply the first grading, then the next one to the result, and so on."""
    for g in seq:
        M = initial_matroid(M, g)
    return M


def initial_qm(M: QuiverMatroid, grading: Mapping[tuple, int], priors: Sequence[Mapping[tuple, int]] = (),
               rep: F1Rep | None = None) -> QuiverMatroid:
    """Initial matroid at every vertex; ``grading`` is keyed by (vertex, label)."""
    rep = rep or underlying_rep(M)
    nice = is_nice_relative(grading, priors, rep) if priors else is_nice_grading(grading, rep)
    if not nice:
        raise NotNiceGrading("the grading is not nice for this representation")
    vertex = {}
    for v, N in M.vertex_matroids.items():
        vertex[v] = initial_matroid(_as_k(N), {e: grading[(v, e)] for e in N.ground})
    return validate_qm(QuiverMatroid(M.quiver, vertex, {name: _as_k_matrix(phi) for name, phi in M.arrow_maps.items()}))


def _as_k(N: Matroid) -> Matroid:
    return N if N.idyll == K else Matroid(K, N.ground, N.rank, {k: 1 for k in N.values})


def _as_k_matrix(phi):
    if phi.idyll == K:
        return phi
    return SubmonomialMatrix(K, phi.source, phi.target, {s: (t, 1) for s, (t, _) in phi.entries.items()})


def is_coordinate(point: QuiverMatroid) -> bool:
    return all(len(M.values) == 1 for M in point.vertex_matroids.values())


def coordinate_point(rep: F1Rep, omega: Mapping[Hashable, Sequence]) -> QuiverMatroid:
    """The point whose vertex matroid at v has the single basis E_v minus omega_v."""
    vertex = {}
    for v in rep.quiver.vertices:
        labels = rep.sets[v]
        chosen = set(omega.get(v, ()))
        key = tuple(i for i, e in enumerate(labels) if e not in chosen)
        vertex[v] = Matroid(K, labels, len(key), {key: 1})
    matrices = {a.name: induced_arrow_matrix(rep, a.name, K) for a in rep.quiver.arrows}
    return QuiverMatroid(rep.quiver, vertex, matrices)


def subrep_of_coordinate(point: QuiverMatroid) -> dict:
    if not is_coordinate(point):
        raise QmatError("not a coordinate point")
    out = {}
    for v, M in point.vertex_matroids.items():
        (key,) = M.values
        out[v] = tuple(e for i, e in enumerate(M.ground) if i not in key)
    return out


@dataclass
class EulerReport:
    tits_count: int
    subrep_count: int
    coordinate_count: int
    certificate: str | None
    euler: int | None

    def as_dict(self) -> dict:
        return asdict(self)


def euler_via_tits(rep: F1Rep, ranks: Mapping[Hashable, int], sequence: Sequence[Mapping] | None = None,
                   points: Sequence[QuiverMatroid] | None = None) -> EulerReport:
    """Count Tits points and complementary subrepresentations; claim the Euler characteristic only with a certificate.

    The certificate is ``VerifiedSequence`` for a supplied (and checked)
    sequence, ``Tree`` when the coefficient quiver has no cycles,
    ``PrimitiveCycle`` for a primitive cycle, ``VerifiedSequence`` again when
    a sequence can be found, and ``None`` otherwise.
    """
    if points is None:
        points = enumerate_points(rep, ranks, K)
    tits = tits_space(rep, ranks, points)
    subreps = subrepresentations(rep, dual_dimension(rep, ranks))
    coordinate = [p for p in points if is_coordinate(p)]
    graph = coefficient_quiver(rep)
    if sequence is not None:
        if not (is_nice_sequence(sequence, rep) and distinguishes(sequence, rep)):
            raise InvalidSequence("the supplied gradings are not a nice distinguishing sequence")
        certificate = "VerifiedSequence"
    elif is_forest(graph):
        certificate = "Tree"
    elif is_primitive_cycle(graph, rep):
        certificate = "PrimitiveCycle"
    else:
        try:
            find_nice_sequence(rep)
            certificate = "VerifiedSequence"
        except NotFound:
            certificate = None
    euler = None
    if certificate is not None:
        if not (len(tits) == len(subreps) == len(coordinate)):
            raise QmatError(f"certified count mismatch: tits {len(tits)}, subreps {len(subreps)}, "
                            f"coordinate {len(coordinate)}")
        euler = len(tits)
    return EulerReport(len(tits), len(subreps), len(coordinate), certificate, euler)
