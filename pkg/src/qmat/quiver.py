"""Quivers, representations over F1, coefficient quivers, subrepresentations and gradings.

An F1-representation assigns a finite label set E_v to every vertex and a
partial injection E_s -> E_t to every arrow (``None`` is the zero element).
The elements of the coefficient quiver are pairs ``(vertex, label)``; a
grading maps each such pair to an integer.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import NotF1Linear, NotFound, QmatError

Element = tuple  # (vertex, label)


@dataclass(frozen=True)
class Arrow:
    name: Hashable
    source: Hashable
    target: Hashable


class Quiver:
    def __init__(self, vertices: Iterable[Hashable], arrows: Iterable):
        self.vertices = tuple(vertices)
        self.arrows = tuple(a if isinstance(a, Arrow) else Arrow(*a) for a in arrows)
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise QmatError("vertex names must be distinct")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise QmatError("arrow names must be distinct")
        for a in self.arrows:
            if a.source not in vs or a.target not in vs:
                raise QmatError(f"arrow {a.name!r} leaves the vertex set")
        self.arrow = {a.name: a for a in self.arrows}

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, [Arrow(a.name, a.target, a.source) for a in self.arrows])

    def __eq__(self, other):
        return isinstance(other, Quiver) and (self.vertices, self.arrows) == (other.vertices, other.arrows)

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"


class F1Rep:
    def __init__(self, quiver: Quiver, sets: Mapping[Hashable, Sequence], maps: Mapping[Hashable, Mapping]):
        self.quiver = quiver
        self.sets = {v: tuple(sets.get(v, ())) for v in quiver.vertices}
        for v, labels in self.sets.items():
            if len(set(labels)) != len(labels):
                raise QmatError(f"labels at vertex {v!r} repeat")
        self.maps = {}
        for a in quiver.arrows:
            given = maps.get(a.name, {})
            target = set(self.sets[a.target])
            m = {}
            for e in self.sets[a.source]:
                f = given.get(e)
                if f is not None and f not in target:
                    raise QmatError(f"arrow {a.name!r} sends {e!r} outside E_{a.target}")
                m[e] = f
            extra = set(given) - set(self.sets[a.source])
            if extra:
                raise QmatError(f"arrow {a.name!r} is defined on unknown labels {sorted(map(str, extra))}")
            hit = [f for f in m.values() if f is not None]
            if len(hit) != len(set(hit)):
                raise NotF1Linear(f"arrow {a.name!r} identifies two labels")
            self.maps[a.name] = m

    @property
    def elements(self) -> list[Element]:
        return [(v, e) for v in self.quiver.vertices for e in self.sets[v]]

    def dimension(self) -> dict:
        return {v: len(self.sets[v]) for v in self.quiver.vertices}

    def __eq__(self, other):
        return (isinstance(other, F1Rep) and self.quiver == other.quiver
                and self.sets == other.sets and self.maps == other.maps)

    def __repr__(self):
        return f"F1Rep(dim={self.dimension()})"


def dual_rep(rep: F1Rep) -> F1Rep:
    """Same label sets on the opposite quiver, with every arrow map replaced by its adjoint."""
    maps = {name: {f: e for e, f in m.items() if f is not None} for name, m in rep.maps.items()}
    return F1Rep(rep.quiver.opposite(), rep.sets, maps)


def coefficient_quiver(rep: F1Rep) -> Quiver:
    arrows = []
    for a in rep.quiver.arrows:
        for j, i in rep.maps[a.name].items():
            if i is not None:
                arrows.append(Arrow((a.name, i, j), (a.source, j), (a.target, i)))
    return Quiver(rep.elements, arrows)


class _Components:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[rx] = ry
        return True


def _acyclic_and_components(graph: Quiver):
    comp = _Components(graph.vertices)
    acyclic = True
    for a in graph.arrows:
        if not comp.union(a.source, a.target):
            acyclic = False
    roots = {comp.find(v) for v in graph.vertices}
    return acyclic, len(roots)


def is_forest(graph: Quiver) -> bool:
    """The underlying undirected multigraph has no cycle (loops and parallel edges count)."""
    return _acyclic_and_components(graph)[0]


def is_tree(graph: Quiver) -> bool:
    acyclic, parts = _acyclic_and_components(graph)
    return acyclic and parts == 1


def is_primitive_cycle(graph: Quiver, rep: F1Rep) -> bool:
    """A single undirected cycle, with at most one nonzero label per vertex of ``rep``."""
    if not graph.vertices or any(len(s) > 1 for s in rep.sets.values()):
        return False
    degree = {v: 0 for v in graph.vertices}
    for a in graph.arrows:
        degree[a.source] += 1
        degree[a.target] += 1
    _, parts = _acyclic_and_components(graph)
    return parts == 1 and all(d == 2 for d in degree.values())


# ---------------------------------------------------------------------------
# subrepresentations


def is_subrepresentation(rep: F1Rep, omega: Mapping[Hashable, Iterable]) -> bool:
    chosen = {v: set(omega.get(v, ())) for v in rep.quiver.vertices}
    for v, labels in chosen.items():
        if not labels <= set(rep.sets[v]):
            return False
    for a in rep.quiver.arrows:
        m = rep.maps[a.name]
        for e in chosen[a.source]:
            f = m[e]
            if f is not None and f not in chosen[a.target]:
                return False
    return True


def subrepresentations(rep: F1Rep, dims: Mapping[Hashable, int]) -> list[dict]:
    """All subrepresentations with the given dimension vector, in lexicographic order.

    Vertices are filled in quiver order; an arrow is checked as soon as both of
    its ends are filled.
    """
    vertices = rep.quiver.vertices
    for v in vertices:
        if not 0 <= dims.get(v, 0) <= len(rep.sets[v]):
            return []
    position = {v: k for k, v in enumerate(vertices)}
    ready = [[] for _ in vertices]
    for a in rep.quiver.arrows:
        ready[max(position[a.source], position[a.target])].append(a)
    out = []
    chosen: dict = {}

    def fill(k):
        if k == len(vertices):
            out.append({v: chosen[v] for v in vertices})
            return
        v = vertices[k]
        for combo in combinations(rep.sets[v], dims.get(v, 0)):
            chosen[v] = combo
            if all(_closed(rep, a, chosen) for a in ready[k]):
                fill(k + 1)
        chosen.pop(v, None)

    fill(0)
    return out


def _closed(rep, a, chosen) -> bool:
    target = chosen[a.target]
    m = rep.maps[a.name]
    for e in chosen[a.source]:
        f = m[e]
        if f is not None and f not in target:
            return False
    return True


def dual_dimension(rep: F1Rep, ranks: Mapping[Hashable, int]) -> dict:
    return {v: len(rep.sets[v]) - ranks.get(v, 0) for v in rep.quiver.vertices}


# ---------------------------------------------------------------------------
# gradings


def _mapped_pairs(rep: F1Rep):
    """For every arrow, the list of (source element, target element) with nonzero image."""
    for a in rep.quiver.arrows:
        yield a, [((a.source, e), (a.target, f)) for e, f in rep.maps[a.name].items() if f is not None]


def _check_total(grading: Mapping, rep: F1Rep):
    missing = [x for x in rep.elements if x not in grading]
    if missing:
        raise QmatError(f"grading misses {missing[0]!r}")


def is_nice_grading(grading: Mapping[Element, int], rep: F1Rep) -> bool:
    """The difference between an element and its image is constant along each arrow."""
    _check_total(grading, rep)
    for _, pairs in _mapped_pairs(rep):
        if len({grading[x] - grading[y] for x, y in pairs}) > 1:
            return False
    return True


def is_nice_relative(grading: Mapping[Element, int], priors: Sequence[Mapping[Element, int]], rep: F1Rep) -> bool:
    """Nice with respect to earlier gradings: only pairs tied in every prior are compared."""
    _check_total(grading, rep)
    for _, pairs in _mapped_pairs(rep):
        groups: dict = {}
        for x, y in pairs:
            key = tuple((p[x], p[y]) for p in priors)
            groups.setdefault(key, set()).add(grading[x] - grading[y])
        if any(len(diffs) > 1 for diffs in groups.values()):
            return False
    return True


def is_nice_sequence(seq: Sequence[Mapping[Element, int]], rep: F1Rep) -> bool:
    return all(is_nice_relative(g, seq[:k], rep) for k, g in enumerate(seq))


def distinguishes(seq: Sequence[Mapping[Element, int]], rep: F1Rep) -> bool:
    for g in seq:
        _check_total(g, rep)
    signatures = [tuple(g[x] for g in seq) for x in rep.elements]
    return len(set(signatures)) == len(signatures)


def _injective_candidates(rep: F1Rep):
    elements = rep.elements
    labels = [e for _, e in elements]
    try:
        numeric = [int(str(e)) for e in labels]
    except ValueError:
        numeric = None
    if numeric is not None and len(set(numeric)) == len(numeric):
        yield {x: n for x, n in zip(elements, numeric)}
    yield {x: k for k, x in enumerate(elements)}


def _propagate(graph: Quiver, weight, offsets_base: int) -> dict:
    """Integer values on a forest with value(source) - value(target) = weight(arrow).

    Each component is rooted at its first vertex and shifted by a multiple of
    ``offsets_base`` so that different components never share values.
    """
    adjacency = {v: [] for v in graph.vertices}
    for a in graph.arrows:
        w = weight(a)
        adjacency[a.source].append((a.target, -w))
        adjacency[a.target].append((a.source, w))
    value = {}
    component = 0
    for root in graph.vertices:
        if root in value:
            continue
        value[root] = component * offsets_base
        component += 1
        stack = [root]
        while stack:
            v = stack.pop()
            for u, step in adjacency[v]:
                if u not in value:
                    value[u] = value[v] + step
                    stack.append(u)
    return value


def _forest_sequence(rep: F1Rep, max_rounds: int) -> list[dict] | None:
    graph = coefficient_quiver(rep)
    if not is_forest(graph):
        return None
    n = max(len(graph.vertices), 1)
    base = 2 * n + 1
    seq: list[dict] = []
    classes = {x: () for x in graph.vertices}
    for _ in range(max_rounds):
        keys = {}
        for a in graph.arrows:
            keys.setdefault((a.name[0], classes[a.source], classes[a.target]), len(keys))
        span = base ** (len(keys) + 1)
        grading = _propagate(graph, lambda a: base ** keys[(a.name[0], classes[a.source], classes[a.target])], span)
        seq.append(grading)
        new_classes = {x: classes[x] + (grading[x],) for x in graph.vertices}
        if distinguishes(seq, rep):
            return seq
        if len(set(new_classes.values())) == len(set(classes.values())):
            return None
        classes = new_classes
    return None


def _searched_grading(rep: F1Rep, search_bound: int) -> dict | None:
    """Backtracking search for one injective nice grading with values in [0, #elements)."""
    elements = rep.elements
    n = len(elements)
    constraints = {x: [] for x in elements}
    for a, pairs in _mapped_pairs(rep):
        for x, y in pairs:
            constraints[x].append((a.name, x, y))
            constraints[y].append((a.name, x, y))
    grading: dict = {}
    used = set()
    diffs: dict = {}
    budget = [search_bound]

    def consistent(x):
        local = {}
        for name, s, t in constraints[x]:
            if s in grading and t in grading:
                d = grading[s] - grading[t]
                want = diffs.get(name, local.get(name))
                if want is not None and want != d:
                    return None
                local[name] = d
        return local

    def place(k):
        if k == n:
            return True
        x = elements[k]
        for value in range(n):
            if value in used:
                continue
            budget[0] -= 1
            if budget[0] < 0:
                return False
            grading[x] = value
            local = consistent(x)
            if local is not None:
                fresh = [name for name in local if name not in diffs]
                for name in fresh:
                    diffs[name] = local[name]
                used.add(value)
                if place(k + 1):
                    return True
                used.discard(value)
                for name in fresh:
                    del diffs[name]
            del grading[x]
        return False

    return dict(grading) if place(0) else None


def find_nice_sequence(rep: F1Rep, search_bound: int = 1 << 20) -> list[dict]:
    """A nice sequence of gradings that distinguishes elements, checked before it is returned.

    Tries injective gradings read off the labels, then a construction on
    acyclic coefficient quivers, then a bounded search for a single injective
    nice grading.  Raises ``NotFound`` when all three give up; that is not a
    proof that no sequence exists.
    """
    candidates = [[g] for g in _injective_candidates(rep)]
    forest = _forest_sequence(rep, max_rounds=len(rep.elements) + 1)
    if forest is not None:
        candidates.append(forest)
    for seq in candidates:
        if is_nice_sequence(seq, rep) and distinguishes(seq, rep):
            return seq
    found = _searched_grading(rep, search_bound)
    if found is not None and is_nice_grading(found, rep):
        return [found]
    raise NotFound("no nice distinguishing sequence within the search bound")


def grading_from_labels(rep: F1Rep, values: Mapping[str, int]) -> dict:
    """Resolve keys given as a bare label (when unambiguous) or as ``vertex:label``."""
    by_label: dict = {}
    for v, e in rep.elements:
        by_label.setdefault(str(e), []).append((v, e))
    out = {}
    for key, value in values.items():
        key = str(key)
        owners = by_label.get(key)
        if owners and len(owners) == 1:
            out[owners[0]] = int(value)
            continue
        if ":" in key:
            v, e = key.split(":", 1)
            hits = [x for x in rep.elements if str(x[0]) == v and str(x[1]) == e]
            if hits:
                out[hits[0]] = int(value)
                continue
        raise QmatError(f"grading key {key!r} does not name exactly one element")
    _check_total(out, rep)
    return out
