"""Quiver matroids: a matroid at every vertex and a morphism along every arrow.

The points of the quiver Grassmannian of an F1-representation over a finite
idyll are enumerated two ways.  ``enumerate_points`` combines per-vertex
matroid catalogues and keeps the tuples whose induced arrow matrices are
morphisms.  ``enumerate_qr_points`` solves the quiver Plücker relations
directly on projective coordinates.  The two must agree.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import BudgetExceeded, MorphismViolation, NotSubrepresentation, QmatError
from .idyll import Idyll, K
from .matroid import (
    DEFAULT_BUDGET,
    Matroid,
    PlueckerVector,
    catalogue,
    contract,
    dual,
    restrict,
    sort_sign,
)
from .morphism import (
    SubmonomialMatrix,
    contract_morphism,
    morphism_witness,
    restrict_morphism,
    transpose,
    underlying_map,
)
from .quiver import F1Rep, Quiver, is_subrepresentation


class QuiverMatroid:
    def __init__(self, quiver: Quiver, vertex_matroids: Mapping[Hashable, Matroid],
                 arrow_maps: Mapping[Hashable, SubmonomialMatrix]):
        self.quiver = quiver
        self.vertex_matroids = {v: vertex_matroids[v] for v in quiver.vertices}
        self.arrow_maps = {a.name: arrow_maps[a.name] for a in quiver.arrows}

    @property
    def idyll(self) -> Idyll:
        return next(iter(self.vertex_matroids.values())).idyll

    def ranks(self) -> dict:
        return {v: M.rank for v, M in self.vertex_matroids.items()}

    def _key(self):
        return (self.quiver, tuple(self.vertex_matroids.items()), tuple(self.arrow_maps.items()))

    def __eq__(self, other):
        return isinstance(other, QuiverMatroid) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        parts = ", ".join(f"{v}: {[''.join(map(str, b)) for b in M.bases()]}"
                          for v, M in self.vertex_matroids.items())
        return f"QuiverMatroid({parts})"


def validate_qm(candidate: QuiverMatroid) -> QuiverMatroid:
    idylls = {M.idyll for M in candidate.vertex_matroids.values()}
    if len(idylls) > 1:
        raise QmatError("vertex matroids live over different idylls")
    for a in candidate.quiver.arrows:
        N = candidate.vertex_matroids[a.source]
        M = candidate.vertex_matroids[a.target]
        witness = morphism_witness(candidate.arrow_maps[a.name], N, M)
        if witness is not None:
            raise MorphismViolation(f"arrow {a.name!r} is not a morphism", a.name, witness)
    return candidate


def is_valid_qm(candidate: QuiverMatroid) -> bool:
    try:
        validate_qm(candidate)
    except (MorphismViolation, QmatError):
        return False
    return True


def induced_arrow_matrix(rep: F1Rep, arrow: Hashable, idyll: Idyll = K) -> SubmonomialMatrix:
    a = rep.quiver.arrow[arrow]
    return SubmonomialMatrix(idyll, rep.sets[a.source], rep.sets[a.target],
                             {e: (f, idyll.one) for e, f in rep.maps[arrow].items() if f is not None})


def _vertex_order(rep: F1Rep):
    vertices = rep.quiver.vertices
    position = {v: k for k, v in enumerate(vertices)}
    ready = [[] for _ in vertices]
    for a in rep.quiver.arrows:
        ready[max(position[a.source], position[a.target])].append(a)
    return vertices, position, ready


def enumerate_points(rep: F1Rep, ranks: Mapping[Hashable, int], idyll: Idyll = K,
                     budget: int = DEFAULT_BUDGET, threads: int = 1) -> list[QuiverMatroid]:
    """Every quiver matroid with underlying representation ``rep`` and the given ranks.

    Output order is lexicographic in the per-vertex catalogue order, whatever
    the thread count.
    """
    if not idyll.finite:
        raise QmatError(f"{idyll.name} has infinitely many points; check candidates with check_qr_relations")
    vertices, position, ready = _vertex_order(rep)
    cats = {}
    for v in vertices:
        r = ranks.get(v, 0)
        if not 0 <= r <= len(rep.sets[v]):
            return []
        cats[v] = catalogue(idyll, rep.sets[v], r)
    for k, arrows in enumerate(ready):
        arrows.sort(key=lambda a: len(cats[a.source]) * len(cats[a.target]))
    matrices = {a.name: induced_arrow_matrix(rep, a.name, idyll) for a in rep.quiver.arrows}
    memo: dict = {}
    visited = [0]

    def ok(a, chosen):
        key = (a.name, chosen[position[a.source]], chosen[position[a.target]])
        hit = memo.get(key)
        if hit is None:
            hit = morphism_witness(matrices[a.name], cats[a.source][key[1]], cats[a.target][key[2]]) is None
            memo[key] = hit
        return hit

    def fill(k, chosen, out):
        if k == len(vertices):
            out.append(tuple(chosen))
            return
        for i in range(len(cats[vertices[k]])):
            visited[0] += 1
            if visited[0] > budget:
                raise BudgetExceeded(f"more than {budget} partial tuples visited")
            chosen.append(i)
            if all(ok(a, chosen) for a in ready[k]):
                fill(k + 1, chosen, out)
            chosen.pop()

    if not vertices:
        found = [()]
    elif threads > 1:
        def branch(i):
            out = []
            if all(ok(a, [i]) for a in ready[0]):
                fill(1, [i], out)
            return out

        with ThreadPoolExecutor(max_workers=threads) as pool:
            found = [t for part in pool.map(branch, range(len(cats[vertices[0]]))) for t in part]
    else:
        found = []
        fill(0, [], found)
    return [QuiverMatroid(rep.quiver, {v: cats[v][i] for v, i in zip(vertices, choice)}, matrices)
            for choice in found]


# ---------------------------------------------------------------------------
# quiver Plücker relations


@dataclass(frozen=True)
class Relation:
    """A formal sum of signed products T[first] * T[second] of two coordinates.

    Each coordinate is ``(vertex, sorted label tuple)``.  ``origin`` names the
    vertex (per-vertex relation) or the arrow it comes from.
    """

    origin: tuple
    terms: tuple  # of (sign, coordinate, coordinate)

    def __str__(self):
        def name(c):
            return "T" + "".join(str(e) for e in c[1])

        out = ""
        for k, (sign, c1, c2) in enumerate(self.terms):
            op = ("-" if sign < 0 else "+") if k else ("-" if sign < 0 else "")
            out += f" {op} " if k else op
            out += name(c1) + name(c2)
        return out


def _coordinate(labels: Sequence, order: dict):
    """Sorted coordinate key and sign for a tuple of labels, or (0, None) on repeats."""
    sign, idx = sort_sign([order[e] for e in labels])
    return sign, idx


def _relations_between(origin, source_v, source_labels, r_s, target_v, target_labels, r_t, image):
    """Sum over k of (-1)^k T[y without y_k] * T[(image(y_k), x)] for increasing y and x."""
    t_order = {e: i for i, e in enumerate(target_labels)}
    out = []
    if r_t == 0:
        return out
    for y in combinations(source_labels, r_s + 1):
        for x in combinations(target_labels, r_t - 1):
            terms = []
            for k, e in enumerate(y):
                f = image(e)
                if f is None:
                    continue
                sign, idx = _coordinate((f,) + x, t_order)
                if sign == 0:
                    continue
                second = (target_v, tuple(target_labels[i] for i in idx))
                first = (source_v, y[:k] + y[k + 1:])
                terms.append((sign * (-1 if k & 1 else 1), first, second))
            if terms:
                out.append(Relation(origin, tuple(terms)))
    return out


def qr_relations(rep: F1Rep, ranks: Mapping[Hashable, int], include_vertices: bool = True) -> list[Relation]:
    """The per-vertex Plücker relations and the per-arrow relations of the quiver Grassmannian."""
    out = []
    if include_vertices:
        for v in rep.quiver.vertices:
            labels = rep.sets[v]
            r = ranks.get(v, 0)
            out += _relations_between(("vertex", v), v, labels, r, v, labels, r, lambda e: e)
    for a in rep.quiver.arrows:
        m = rep.maps[a.name]
        out += _relations_between(("arrow", a.name), a.source, rep.sets[a.source], ranks.get(a.source, 0),
                                  a.target, rep.sets[a.target], ranks.get(a.target, 0), m.get)
    return out


def arrow_relations(rep: F1Rep, ranks: Mapping[Hashable, int]) -> list[Relation]:
    return qr_relations(rep, ranks, include_vertices=False)


def _coordinates_of(rep: F1Rep, v, point, idyll: Idyll, rank: int):
    """Sorted coordinate dict from a Matroid, PlueckerVector or raw mapping; None if qr1/qr2 fail."""
    if isinstance(point, Matroid):
        return {tuple(point.ground[i] for i in k): val for k, val in point.values.items()}
    raw = point.values if isinstance(point, PlueckerVector) else point
    order = {e: i for i, e in enumerate(rep.sets[v])}
    out = {}
    for key, value in raw.items():
        key = tuple(key)
        if len(key) != rank or not set(key) <= set(order):
            raise QmatError(f"coordinate {key!r} does not fit vertex {v!r}")
        sign, idx = _coordinate(key, order)
        if sign == 0:
            if value:
                return None
            continue
        sorted_key = tuple(rep.sets[v][i] for i in idx)
        val = idyll.signed(value, sign)
        if sorted_key in out and out[sorted_key] != val:
            return None
        out[sorted_key] = val
    return out


def check_qr_relations(points: Mapping[Hashable, object], rep: F1Rep, ranks: Mapping[Hashable, int],
                       idyll: Idyll = K) -> bool:
    """Whether per-vertex coordinates satisfy every quiver Plücker relation.

    ``points`` maps each vertex to a Matroid, a PlueckerVector or a plain
    mapping from label tuples to values.  A vertex whose coordinates are all
    zero fails.
    """
    coords = {}
    for v in rep.quiver.vertices:
        c = _coordinates_of(rep, v, points[v], idyll, ranks.get(v, 0))
        if c is None or not any(c.values()):
            return False
        coords[v] = c
    for rel in qr_relations(rep, ranks):
        terms = []
        for sign, (v1, k1), (v2, k2) in rel.terms:
            a = coords[v1].get(k1)
            b = coords[v2].get(k2)
            if a and b:
                terms.append(idyll.signed(idyll.mul(a, b), sign))
        if terms and not idyll.nulls(terms):
            return False
    return True


def enumerate_qr_points(rep: F1Rep, ranks: Mapping[Hashable, int], idyll: Idyll = K,
                        budget: int = DEFAULT_BUDGET) -> list[dict]:
    """Solve the quiver Plücker relations by backtracking over projective coordinates.

    Returns one dict per point: vertex -> {sorted label tuple: value}, each
    normalized so its first nonzero coordinate is 1.  Independent of the
    matroid catalogues used by ``enumerate_points``.
    """
    if not idyll.finite:
        raise QmatError(f"{idyll.name} is infinite")
    variables = []
    for v in rep.quiver.vertices:
        r = ranks.get(v, 0)
        if not 0 <= r <= len(rep.sets[v]):
            return []
        variables += [(v, key) for key in combinations(rep.sets[v], r)]
    where = {c: i for i, c in enumerate(variables)}
    due = [[] for _ in variables]
    for rel in qr_relations(rep, ranks):
        terms = tuple((sign, where[c1], where[c2]) for sign, c1, c2 in rel.terms)
        last = max(max(i, j) for _, i, j in terms)
        due[last].append(terms)
    last_of = {}
    for i, (v, _) in enumerate(variables):
        last_of[v] = i
    values = [idyll.zero] * len(variables)
    started = {v: False for v in rep.quiver.vertices}
    units = idyll.units()
    out = []
    visited = [0]

    def holds(terms):
        acc = []
        for sign, i, j in terms:
            a, b = values[i], values[j]
            if a and b:
                acc.append(idyll.signed(idyll.mul(a, b), sign))
        return not acc or idyll.nulls(acc)

    def step(k):
        if k == len(variables):
            point = {v: {} for v in rep.quiver.vertices}
            for (v, key), val in zip(variables, values):
                if val:
                    point[v][key] = val
            out.append(point)
            return
        v = variables[k][0]
        options = (idyll.zero,) + (units if started[v] else (idyll.one,))
        was = started[v]
        for val in options:
            visited[0] += 1
            if visited[0] > budget:
                raise BudgetExceeded(f"more than {budget} partial assignments visited")
            values[k] = val
            if val:
                started[v] = True
            if last_of[v] == k and not started[v]:
                started[v] = was
                continue
            if all(holds(t) for t in due[k]):
                step(k + 1)
            started[v] = was
        values[k] = idyll.zero

    if variables:
        step(0)
    else:
        out.append({v: {} for v in rep.quiver.vertices})
    return out


def point_coordinates(point: QuiverMatroid) -> dict:
    """Per-vertex sorted coordinate dicts of a quiver matroid, comparable with ``enumerate_qr_points``."""
    return {v: {tuple(M.ground[i] for i in k): val for k, val in M.values.items()}
            for v, M in point.vertex_matroids.items()}


# ---------------------------------------------------------------------------
# duality, minors, functors


def dual_qm(M: QuiverMatroid) -> QuiverMatroid:
    return QuiverMatroid(M.quiver.opposite(),
                         {v: dual(N) for v, N in M.vertex_matroids.items()},
                         {name: transpose(phi) for name, phi in M.arrow_maps.items()})


def underlying_rep(M: QuiverMatroid) -> F1Rep:
    maps = {}
    for name, phi in M.arrow_maps.items():
        maps[name] = dict(underlying_map(phi).mapping)
    return F1Rep(M.quiver, {v: N.ground for v, N in M.vertex_matroids.items()}, maps)


def _check_sub(M: QuiverMatroid, omega: Mapping[Hashable, Iterable]):
    rep = underlying_rep(M)
    if not is_subrepresentation(rep, omega):
        raise NotSubrepresentation("the chosen sets are not closed under the arrow maps")
    return {v: set(omega.get(v, ())) for v in M.quiver.vertices}


def restrict_qm(M: QuiverMatroid, omega: Mapping[Hashable, Iterable]) -> QuiverMatroid:
    chosen = _check_sub(M, omega)
    out = QuiverMatroid(
        M.quiver,
        {v: restrict(N, chosen[v]) for v, N in M.vertex_matroids.items()},
        {a.name: restrict_morphism(M.arrow_maps[a.name], chosen[a.source], chosen[a.target])
         for a in M.quiver.arrows})
    return validate_qm(out)


def contract_qm(M: QuiverMatroid, omega: Mapping[Hashable, Iterable]) -> QuiverMatroid:
    chosen = _check_sub(M, omega)
    out = QuiverMatroid(
        M.quiver,
        {v: contract(N, chosen[v]) for v, N in M.vertex_matroids.items()},
        {a.name: contract_morphism(M.arrow_maps[a.name], chosen[a.source], chosen[a.target])
         for a in M.quiver.arrows})
    return validate_qm(out)


def full_rank_matroid_functor(labels: Iterable[Hashable]) -> Matroid:
    """The K-matroid of full rank on the nonzero part of a pointed set."""
    labels = tuple(labels)
    return Matroid(K, labels, len(labels), {tuple(range(len(labels))): 1})


def full_rank_qm(rep: F1Rep) -> QuiverMatroid:
    """The quiver matroid with full-rank vertex matroids and the induced arrow matrices."""
    return QuiverMatroid(rep.quiver,
                         {v: full_rank_matroid_functor(rep.sets[v]) for v in rep.quiver.vertices},
                         {a.name: induced_arrow_matrix(rep, a.name, K) for a in rep.quiver.arrows})
