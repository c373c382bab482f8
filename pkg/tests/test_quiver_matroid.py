import random
from fractions import Fraction
from itertools import combinations, product

import pytest

from qmat.classical import ClassicalMatroid, is_classical_quotient
from qmat.errors import BudgetExceeded, GP2Violation, MorphismViolation, NotSubrepresentation, QmatError
from qmat.idyll import K, S, T, finite_field
from qmat.matroid import basis_families, catalogue, from_values, uniform
from qmat.morphism import identity
from qmat.quiver import F1Rep, Quiver, dual_rep, subrepresentations
from qmat.quiver_matroid import (
    QuiverMatroid,
    arrow_relations,
    check_qr_relations,
    contract_qm,
    dual_qm,
    enumerate_points,
    enumerate_qr_points,
    full_rank_matroid_functor,
    full_rank_qm,
    induced_arrow_matrix,
    is_valid_qm,
    point_coordinates,
    qr_relations,
    restrict_qm,
    underlying_rep,
    validate_qm,
)


def as_key(points):
    return {tuple(sorted((v, tuple(sorted(c.items()))) for v, c in p.items())) for p in points}


def relabel(rep, suffix, order=None):
    vertices = order or list(rep.quiver.vertices)
    quiver = Quiver(vertices, [(a.name, a.source, a.target) for a in rep.quiver.arrows])
    sets = {v: [e + suffix for e in reversed(rep.sets[v])] for v in vertices}
    maps = {name: {e + suffix: (None if f is None else f + suffix) for e, f in m.items()}
            for name, m in rep.maps.items()}
    return F1Rep(quiver, sets, maps)


def one_vertex(n):
    return F1Rep(Quiver(["v"], []), {"v": [str(i) for i in range(1, n + 1)]}, {})


# enumeration


def test_d4_has_13_points(d4, d4_ranks):
    points = enumerate_points(d4, d4_ranks)
    assert len(points) == 13
    assert all(is_valid_qm(p) for p in points)
    assert all(underlying_rep(p) == d4 for p in points)


def test_count_ignores_labels_and_vertex_order(d4, d4_ranks):
    assert len(enumerate_points(relabel(d4, "x"), d4_ranks)) == 13
    assert len(enumerate_points(relabel(d4, "y", ["v3", "v1", "v0", "v2"]), d4_ranks)) == 13


def test_threads_do_not_change_output(d4, d4_ranks):
    assert enumerate_points(d4, d4_ranks, threads=4) == enumerate_points(d4, d4_ranks)


def test_one_vertex_counts_match_catalogue():
    for n in range(1, 6):
        for r in range(n + 1):
            assert len(enumerate_points(one_vertex(n), {"v": r})) == len(basis_families(n, r))
    assert len(enumerate_points(one_vertex(3), {"v": 1}, S)) == len(catalogue(S, "123", 1))


def test_rank_zero_everywhere_gives_one_point(d4):
    points = enumerate_points(d4, {v: 0 for v in d4.quiver.vertices})
    assert len(points) == 1
    assert enumerate_points(d4, {"v0": 4}) == []


def test_enumeration_guards(d4, d4_ranks):
    with pytest.raises(BudgetExceeded):
        enumerate_points(d4, d4_ranks, budget=3)
    with pytest.raises(QmatError):
        enumerate_points(d4, d4_ranks, T)


def test_flag_type_matches_classical_quotients(a2_flag):
    ranks = {"v1": 1, "v2": 2}
    points = enumerate_points(a2_flag, ranks)
    expected = 0
    for big in catalogue(K, a2_flag.sets["v2"], 2):
        for small in catalogue(K, a2_flag.sets["v1"], 1):
            moved = small.with_ground(a2_flag.sets["v2"])
            if is_classical_quotient(ClassicalMatroid.from_matroid(big), ClassicalMatroid.from_matroid(moved)):
                expected += 1
    assert len(points) == expected == 22


def test_longer_flag_chain_matches_quotients():
    labels = {"a": list("123"), "b": list("456"), "c": list("789")}
    quiver = Quiver(["a", "b", "c"], [("x", "c", "b"), ("y", "b", "a")])
    maps = {"x": dict(zip(labels["c"], labels["b"])), "y": dict(zip(labels["b"], labels["a"]))}
    rep = F1Rep(quiver, labels, maps)
    ranks = {"a": 1, "b": 2, "c": 3}
    ground = list("123")
    chains = 0
    for top in catalogue(K, ground, 3):
        for mid in catalogue(K, ground, 2):
            for low in catalogue(K, ground, 1):
                c = [ClassicalMatroid.from_matroid(m) for m in (top, mid, low)]
                if is_classical_quotient(c[0], c[1]) and is_classical_quotient(c[1], c[2]):
                    chains += 1
    assert len(enumerate_points(rep, ranks)) == chains


# quiver Plücker relations


def test_d4_arrow_relations(d4, d4_ranks):
    shown = {str(r) for r in arrow_relations(d4, d4_ranks)}
    assert shown == {"T46T2 - T16T5", "T46T3 + T14T8", "-T16T7 + T14T9"}


def test_flag_relation(a2_flag):
    shown = [str(r) for r in arrow_relations(a2_flag, {"v1": 1, "v2": 2})]
    assert shown == ["T56T1 - T46T2 + T45T3"]


@pytest.mark.parametrize("idyll", [K, S, finite_field(2)], ids=lambda f: f.name)
def test_relations_agree_with_morphisms(d4, d4_ranks, idyll):
    points = enumerate_points(d4, d4_ranks, idyll)
    assert as_key(point_coordinates(p) for p in points) == as_key(enumerate_qr_points(d4, d4_ranks, idyll))
    for p in points:
        assert check_qr_relations(p.vertex_matroids, d4, d4_ranks, idyll)


def test_every_catalogue_tuple_is_classified_the_same_way(d4, d4_ranks):
    cats = {v: catalogue(K, d4.sets[v], d4_ranks[v]) for v in d4.quiver.vertices}
    matrices = {a.name: induced_arrow_matrix(d4, a.name) for a in d4.quiver.arrows}
    for choice in product(*cats.values()):
        vertex = dict(zip(cats, choice))
        by_morphisms = is_valid_qm(QuiverMatroid(d4.quiver, vertex, matrices))
        assert by_morphisms == check_qr_relations(vertex, d4, d4_ranks)


def test_check_qr_relations_on_raw_candidates(d4, d4_ranks):
    zero = {v: {} for v in d4.quiver.vertices}
    assert not check_qr_relations(zero, d4, d4_ranks)
    point = point_coordinates(enumerate_points(d4, d4_ranks)[0])
    assert check_qr_relations(point, d4, d4_ranks)
    # repeated labels carry a zero coordinate; a nonzero one breaks the alternating rule
    broken = dict(point)
    broken["v0"] = {**point["v0"], ("1", "1"): 1}
    assert not check_qr_relations(broken, d4, d4_ranks)
    with pytest.raises(QmatError):
        check_qr_relations({**point, "v1": {("2", "5"): 1}}, d4, d4_ranks)


def tropical_candidate(rng, rep, ranks):
    out = {}
    for v in rep.quiver.vertices:
        out[v] = {key: Fraction(rng.choice([0, 1, 1, 2])) for key in combinations(rep.sets[v], ranks[v])}
    return out


def test_tropical_relations_match_morphism_test(d4, d4_ranks):
    rng = random.Random(12)
    matrices = {a.name: induced_arrow_matrix(d4, a.name, T) for a in d4.quiver.arrows}
    agree = valid = 0
    for _ in range(400):
        cand = tropical_candidate(rng, d4, d4_ranks)
        try:
            vertex = {v: from_values(T, d4.sets[v], d4_ranks[v], cand[v]) for v in d4.quiver.vertices}
            by_morphisms = is_valid_qm(QuiverMatroid(d4.quiver, vertex, matrices))
        except (GP2Violation, QmatError):
            by_morphisms = False
        assert by_morphisms == check_qr_relations(cand, d4, d4_ranks, T)
        agree += 1
        valid += by_morphisms
    assert 0 < valid < agree


# construction, duality, minors


def test_validate_examples():
    single = QuiverMatroid(Quiver(["v"], []), {"v": uniform(2, "1234")}, {})
    assert validate_qm(single) is single
    chain = Quiver(["top", "low"], [("q", "top", "low")])
    flag = QuiverMatroid(chain, {"top": uniform(2, "123"), "low": uniform(1, "123")},
                         {"q": identity(K, "123")})
    assert is_valid_qm(flag)
    backwards = QuiverMatroid(chain, {"top": uniform(1, "123"), "low": uniform(2, "123")},
                              {"q": identity(K, "123")})
    with pytest.raises(MorphismViolation) as info:
        validate_qm(backwards)
    assert info.value.arrow == "q"


def test_incompatible_d4_tuple(d4):
    matrices = {a.name: induced_arrow_matrix(d4, a.name) for a in d4.quiver.arrows}
    vertex = {
        # the circuit {1, 4} of v0 maps onto {2, 5}, but 2 is a coloop at v1
        "v0": from_values(K, d4.sets["v0"], 2, {("1", "6"): 1, ("4", "6"): 1}),
        "v1": from_values(K, d4.sets["v1"], 1, {("2",): 1}),
        "v2": from_values(K, d4.sets["v2"], 1, {("3",): 1}),
        "v3": from_values(K, d4.sets["v3"], 1, {("7",): 1}),
    }
    with pytest.raises(MorphismViolation):
        validate_qm(QuiverMatroid(d4.quiver, vertex, matrices))


def test_induced_matrices(d4, a2_flag):
    assert induced_arrow_matrix(d4, "a1").rows() == [[1, 0, 0], [0, 1, 0]]
    quiver = Quiver(["v", "w"], [("a", "v", "w")])
    zero = F1Rep(quiver, {"v": ["1"], "w": ["2"]}, {})
    assert induced_arrow_matrix(zero, "a").rows() == [[0]]
    assert induced_arrow_matrix(a2_flag, "a").rows() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_dual_is_a_bijection_of_points(d4, d4_ranks):
    points = enumerate_points(d4, d4_ranks)
    dual_ranks = {v: len(d4.sets[v]) - r for v, r in d4_ranks.items()}
    duals = enumerate_points(dual_rep(d4), dual_ranks)
    image = {dual_qm(p) for p in points}
    assert image == set(duals)
    assert all(dual_qm(dual_qm(p)) == p for p in points)


def test_dual_of_flag_is_a_reversed_flag(a2_flag):
    for p in enumerate_points(a2_flag, {"v1": 1, "v2": 2}):
        d = validate_qm(dual_qm(p))
        assert d.ranks() == {"v1": 2, "v2": 1}


def test_minors_by_subrepresentations(d4, d4_ranks):
    empty = {v: () for v in d4.quiver.vertices}
    subreps = subrepresentations(d4, {"v0": 1, "v1": 1, "v2": 1, "v3": 1})
    for p in enumerate_points(d4, d4_ranks):
        assert contract_qm(p, empty) == p
        assert restrict_qm(p, d4.sets) == p
        for omega in subreps:
            restrict_qm(p, omega)
            contract_qm(p, omega)
    with pytest.raises(NotSubrepresentation):
        restrict_qm(p, {"v0": ("1",)})


def test_full_rank_functor(d4):
    assert full_rank_matroid_functor(["1", "2"]) == uniform(2, ["1", "2"])
    empty = full_rank_matroid_functor([])
    assert empty.rank == 0 and empty.ground == ()
    assert is_valid_qm(full_rank_qm(d4))


def test_relation_count_includes_vertices(d4, d4_ranks):
    assert len(qr_relations(d4, d4_ranks)) >= len(arrow_relations(d4, d4_ranks))
