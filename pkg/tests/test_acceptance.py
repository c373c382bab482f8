"""Acceptance gate: eleven end-to-end criteria, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
"""
import random
import sys
import time
from itertools import product
from math import comb

import pytest

from qmat import io
from qmat.classical import (
    ClassicalMatroid,
    StrongMapTest,
    all_classical,
    all_pointed_maps,
    k_morphism_to_strong,
    strong_to_k_morphism,
)
from qmat.idyll import K, S
from qmat.matroid import all_matroids, catalogue, dual, exchange_holds, vectors
from qmat.morphism import (
    all_submonomial,
    apply,
    is_morphism_circuits,
    is_morphism_pluecker,
    is_morphism_vectors,
    is_quotient,
    preimage,
    transpose,
)
from qmat.quiver import F1Rep, Quiver
from qmat.quiver_matroid import (
    QuiverMatroid,
    check_qr_relations,
    enumerate_points,
    enumerate_qr_points,
    induced_arrow_matrix,
    is_valid_qm,
    point_coordinates,
)
from qmat.tits import euler_via_tits, initial_matroid, initial_matroid_sequence, tits_space

D4_RANKS = {"v0": 2, "v1": 1, "v2": 1, "v3": 1}
FLAG_RANKS = {"v1": 1, "v2": 1}


def _rep(name):
    return io.rep_from_json(io.load_corpus(name))


def _one_vertex(n):
    return F1Rep(Quiver(["v"], []), {"v": [str(i) for i in range(1, n + 1)]}, {})


def _grounds(size):
    return [tuple(f"{tag}{i}" for i in range(size)) for tag in ("s", "t")]


# each criterion returns (passed, detail)


def d4_enumeration():
    points = enumerate_points(_rep("d4.json"), D4_RANKS)
    return len(points) == 13, f"{len(points)} points"


def d4_euler():
    report = euler_via_tits(_rep("d4.json"), D4_RANKS)
    expected = (6, 6, "Tree", 6)
    got = (report.tits_count, report.subrep_count, report.certificate, report.euler)
    return got == expected, f"tits {got[0]}, subreps {got[1]}, certificate {got[2]}, euler {got[3]}"


def grassmannian_tits():
    bad = []
    for n in range(1, 7):
        for r in range(1, n + 1):
            found = len(tits_space(_one_vertex(n), {"v": r}))
            if found != comb(n, r):
                bad.append((n, r, found))
    return not bad, f"{len(bad)} mismatches over 1 <= r <= n <= 6"


def _morphism_instances(idyll):
    """Every (phi, N, M) with both ground sets of size at most 3."""
    for a in range(4):
        source = _grounds(a)[0]
        sources = all_matroids(idyll, source)
        for b in range(4):
            target = _grounds(b)[1]
            targets = all_matroids(idyll, target)
            for phi in all_submonomial(idyll, source, target):
                for M in targets:
                    yield phi, sources, M


def cryptomorphism_concordance():
    checked = disagree = 0
    for idyll in (K, S):
        for phi, sources, M in _morphism_instances(idyll):
            pre = preimage(phi, M)
            for N in sources:
                answers = {
                    is_morphism_pluecker(phi, N, M),
                    is_morphism_circuits(phi, N, M),
                    is_morphism_vectors(phi, N, M),
                    is_quotient(N, pre),
                }
                checked += 1
                disagree += len(answers) > 1
    return disagree == 0, f"{checked} instances, {disagree} discrepancies"


def duality_suite():
    checked = bad = 0
    for idyll in (K, S):
        for size in range(4):
            for M in all_matroids(idyll, _grounds(size)[0]):
                bad += dual(dual(M)) != M
        for phi, sources, M in _morphism_instances(idyll):
            Md = dual(M)
            back = transpose(phi)
            for N in sources:
                checked += 1
                bad += is_morphism_pluecker(phi, N, M) != is_morphism_pluecker(back, Md, dual(N))
    return bad == 0, f"{checked} morphism instances, {bad} discrepancies"


def preimage_vectors():
    rng = random.Random(2024)
    catalogue = {n: all_matroids(K, _grounds(n)[1]) for n in range(5)}
    bad = 0
    trials = 600
    for _ in range(trials):
        a, b = rng.randint(0, 4), rng.randint(0, 4)
        source, target = _grounds(a)[0], _grounds(b)[1]
        phi = rng.choice(all_submonomial(K, source, target))
        M = rng.choice(catalogue[b])
        target_vectors = vectors(M)
        oracle = {x for x in _all_k_vectors(a) if apply(phi, x) in target_vectors}
        bad += vectors(preimage(phi, M)) != oracle
    return bad == 0, f"{trials} random instances, {bad} discrepancies"


def _all_k_vectors(n):
    return [tuple(m >> i & 1 for i in range(n)) for m in range(1 << n)]


def strong_maps():
    checked = bad = 0
    classical = {n: all_classical(_grounds(n)[0]) for n in range(5)}
    targets = {n: all_classical(_grounds(n)[1]) for n in range(5)}
    for a in range(5):
        for b in range(5):
            for sigma in all_pointed_maps(_grounds(a)[0], _grounds(b)[1]):
                for M in targets[b]:
                    test = StrongMapTest(sigma, M)
                    for N in classical[a]:
                        checked += 1
                        bad += not (test.by_cocircuits(N) == test.by_flats(N) == test.by_closure(N))
    rng = random.Random(7)
    trips = 0
    while trips < 250:
        a, b = rng.randint(0, 4), rng.randint(0, 4)
        source, target = _grounds(a)[0], _grounds(b)[1]
        N = rng.choice(all_matroids(K, source))
        M = rng.choice(all_matroids(K, target))
        phi = rng.choice(all_submonomial(K, source, target))
        if not is_morphism_pluecker(phi, N, M):
            continue
        trips += 1
        sigma = k_morphism_to_strong(phi, N, M)
        back = strong_to_k_morphism(sigma, ClassicalMatroid.from_matroid(N), ClassicalMatroid.from_matroid(M))
        bad += back != phi
    return bad == 0, f"{checked} criterion comparisons, {trips} round trips, {bad} discrepancies"


def initial_matroids():
    rng = random.Random(99)
    pool = {n: all_matroids(K, [str(i) for i in range(n)]) for n in range(1, 7)}
    bad = 0
    trials = 600
    for _ in range(trials):
        M = rng.choice(pool[rng.randint(1, 6)])
        grading = {e: rng.randint(-3, 3) for e in M.ground}
        low = initial_matroid(M, grading)
        ok = exchange_holds(low.basis_masks) and low.rank == M.rank and initial_matroid(low, grading) == low
        order = list(M.ground)
        rng.shuffle(order)
        injective = {e: k for k, e in enumerate(order)}
        last = initial_matroid_sequence(M, [grading, injective])
        ok = ok and len(last.values) == 1
        bad += not ok
    return bad == 0, f"{trials} random instances, {bad} failures"


def nice_grading_morphisms():
    rng = random.Random(5)
    pool = {n: all_matroids(K, [str(i) for i in range(n)]) for n in range(1, 5)}
    tried = bad = 0
    while tried < 250:
        a, b = rng.randint(1, 4), rng.randint(1, 4)
        N, M = rng.choice(pool[a]), rng.choice(pool[b])
        M = M.with_ground([f"t{i}" for i in range(b)])
        phi = rng.choice(all_submonomial(K, N.ground, M.ground))
        if not is_morphism_pluecker(phi, N, M):
            continue
        tried += 1
        target_grading = {t: rng.randint(-3, 3) for t in M.ground}
        shift = rng.randint(-2, 2)
        source_grading = {}
        for s in N.ground:
            image = phi.entries.get(s)
            source_grading[s] = target_grading[image[0]] + shift if image else rng.randint(-3, 3)
        low_n = initial_matroid(N, source_grading)
        low_m = initial_matroid(M, target_grading)
        bad += not is_morphism_pluecker(phi, low_n, low_m)
    return bad == 0, f"{tried} random morphisms, {bad} failures"


def degenerate_flag():
    rep = _rep("degenerate_flag.json")
    points = enumerate_points(rep, FLAG_RANKS)
    tits = tits_space(rep, FLAG_RANKS, points)
    # every pair of points of the two projective lines over K, filtered by the relations alone
    line = [{("1",): 1}, {("2",): 1}, {("1",): 1, ("2",): 1}]
    other = [{("3",): 1}, {("4",): 1}, {("3",): 1, ("4",): 1}]
    by_relations = [{"v1": x, "v2": y} for x in line for y in other
                    if check_qr_relations({"v1": x, "v2": y}, rep, FLAG_RANKS)]
    solved = enumerate_qr_points(rep, FLAG_RANKS)
    minimal = [p for p in by_relations
               if not any(q != p and all(set(q[v]) <= set(p[v]) for v in p) for q in by_relations)]
    counts = (len(points), len(tits), len(by_relations), len(solved), len(minimal))
    return counts == (5, 3, 5, 5, 3), "points {} / tits {} (morphisms); {} / {} / tits {} (relations)".format(*counts)


def _as_key(points):
    return {tuple(sorted((v, tuple(sorted(c.items()))) for v, c in p.items())) for p in points}


def _catalogue_tuples_agree(rep, ranks):
    cats = [catalogue(K, rep.sets[v], ranks[v]) for v in rep.quiver.vertices]
    matrices = {a.name: induced_arrow_matrix(rep, a.name) for a in rep.quiver.arrows}
    for choice in product(*cats):
        vertex = dict(zip(rep.quiver.vertices, choice))
        if is_valid_qm(QuiverMatroid(rep.quiver, vertex, matrices)) != check_qr_relations(vertex, rep, ranks):
            return False
    return True


def relations_match_morphisms():
    instances = [(_rep("d4.json"), D4_RANKS), (_rep("degenerate_flag.json"), FLAG_RANKS)]
    instances += [(_one_vertex(n), {"v": r}) for n in range(1, 7) for r in range(1, n + 1)]
    bad = 0
    for rep, ranks in instances:
        morphisms = _as_key(point_coordinates(p) for p in enumerate_points(rep, ranks))
        relations = _as_key(enumerate_qr_points(rep, ranks))
        bad += morphisms != relations
        if sum(len(rep.sets[v]) for v in rep.quiver.vertices) <= 9:
            bad += not _catalogue_tuples_agree(rep, ranks)
    return bad == 0, f"{len(instances)} instances, {bad} mismatches"


CRITERIA = [
    (1, "D4 enumeration gives 13 points", d4_enumeration, 5),
    (2, "D4 Euler pipeline gives 6/6/Tree/6", d4_euler, 5),
    (3, "Grassmannian Tits counts are binomials", grassmannian_tits, 60),
    (4, "four morphism tests agree over K and S", cryptomorphism_concordance, 120),
    (5, "duality suite", duality_suite, None),
    (6, "pre-image vector identity", preimage_vectors, None),
    (7, "strong-map criteria and round trip", strong_maps, None),
    (8, "initial-matroid properties", initial_matroids, None),
    (9, "nice gradings keep morphisms", nice_grading_morphisms, None),
    (10, "degenerate flag gives 5 points and 3 Tits points", degenerate_flag, None),
    (11, "relations and morphisms give the same points", relations_match_morphisms, None),
]


def evaluate(number, title, check, limit):
    start = time.perf_counter()
    passed, detail = check()
    elapsed = time.perf_counter() - start
    if limit is not None and elapsed >= limit:
        passed = False
        detail += f"; over the {limit} s limit"
    line = f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {title}: {detail} ({elapsed:.2f} s)"
    return passed, line


@pytest.mark.parametrize("number,title,check,limit", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, check, limit, capsys):
    passed, line = evaluate(number, title, check, limit)
    with capsys.disabled():
        print("\n" + line)
    assert passed, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(p for p, _ in results) else 1)
