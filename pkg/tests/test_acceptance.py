"""Acceptance criteria, one test per criterion, exact tolerances.

Each test prints a single [ACCEPTANCE] line; run with -s to see them.
"""

import functools
import math
import random
import time

import pytest

from icecluster.character import (CharacterInput, CoefficientRule,
                                  LocalizedObject, cc, cc_loc, cc_shift,
                                  multiplication_check)
from icecluster.errors import DomainError, InexactDivision
from icecluster.generators import catalog, triangle_example
from icecluster.laurent import LaurentPoly
from icecluster.mutation import mutate
from icecluster.potential import (CyclicWord, jacobian_dim_upto,
                                  jacobian_presentation, reduce_iqp)
from icecluster.quasi import QuasiMorphism, build_psi, verify
from icecluster.quiver import (IceQuiver, matched_arrow_map,
                               quiver_equal_up_to_labels)
from icecluster.reps import QuiverRep, euler_characteristic
from icecluster.seeds import (Seed, enumerate_pattern, hatted_y, mutate_seed,
                              specialize_seed, walk)

from tests.test_mutation import potentials_match_up_to_arrow_signs
from tests.test_quiver import random_two_cycle_free_quiver


def criterion(name):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                result = fn(*args, **kwargs)
            except BaseException:
                print("\n[ACCEPTANCE] %s: FAIL" % name)
                raise
            print("\n[ACCEPTANCE] %s: PASS" % name)
            return result
        return run
    return wrap


@criterion("golden triangle suite (variables, hatted y, Jacobian dimension)")
def test_golden_triangle_suite():
    start = time.time()
    entry = triangle_example()
    seed = Seed.initial(entry.quiver)
    names = seed.names

    registry = enumerate_pattern(seed, 4, dedupe=True)
    x1 = LaurentPoly.variable(names, 0)
    x1_prime = LaurentPoly(names, {(-1, 1, 0): 1, (-1, 0, 1): 1})
    found = {v.canonical_key() for v in registry.cluster_variables}
    assert found == {x1.canonical_key(), x1_prime.canonical_key()}
    assert len(registry.seeds) == 2

    assert hatted_y(seed, 1) == LaurentPoly(names, {(0, 1, -1): 1})

    pres = jacobian_presentation(entry.quiver, entry.potential)
    dims, stabilized = jacobian_dim_upto(pres, 6)
    assert stabilized and sum(dims) == 7

    assert time.time() - start < 1.0


def _exchange_cost(seed, k):
    """Upper estimate for the size of the exchange products at k."""
    cost = 1
    for a in seed.quiver.arrows_incident(k):
        other = a.tgt if a.src == k else a.src
        cost *= max(1, len(seed.entry(other).terms))
        if cost > 10 ** 6:
            return cost
    return cost


@criterion("seed involution on 200 randomized seeds")
def test_seed_involution_randomized():
    start = time.time()
    rng = random.Random(424242)
    checked = 0
    while checked < 200:
        q = random_two_cycle_free_quiver(rng, rng.randint(2, 5), max_mult=1)
        unfrozen = q.unfrozen_vertices
        if not unfrozen:
            continue
        seed = Seed.initial(q)
        for _ in range(rng.randint(0, 6)):
            feasible = [k for k in unfrozen if _exchange_cost(seed, k) <= 5000]
            if not feasible:
                break
            seed = mutate_seed(seed, rng.choice(feasible))
        k = min(unfrozen, key=lambda v: _exchange_cost(seed, v))
        double = mutate_seed(mutate_seed(seed, k), k)
        assert double.same_seed(seed)
        checked += 1
    assert time.time() - start < 30.0


@criterion("Laurent phenomenon on all catalog walks to depth 6")
def test_laurent_phenomenon_catalog():
    for entry in catalog():
        if entry.quiver.r == 0:
            continue
        try:
            registry = enumerate_pattern(Seed.initial(entry.quiver), 6,
                                         dedupe=True)
        except InexactDivision as exc:  # pragma: no cover - hard red
            pytest.fail("Laurent phenomenon violated on %s: %s"
                        % (entry.name, exc))
        assert registry.seeds


@criterion("QP mutation (frozen-source reduction and involution)")
def test_qp_mutation_catalog():
    entry = triangle_example()
    q3, w3, _ = mutate(entry.quiver, entry.potential, 3)
    assert sorted((a.id, a.src, a.tgt, a.frozen) for a in q3.arrows) == \
        [("b*", 2, 3, True), ("c*", 3, 1, False)]
    assert w3.is_zero()

    for entry in catalog():
        red_q, red_w, _ = reduce_iqp(entry.quiver, entry.potential)
        for k in red_q.unfrozen_vertices:
            if red_q.mutable_at(k):
                continue
            q1, w1, _ = mutate(red_q, red_w, k)
            q2, w2, _ = mutate(q1, w1, k)
            bijection = quiver_equal_up_to_labels(q2, red_q)
            assert bijection is not None, (entry.name, k)
            arrow_map = matched_arrow_map(q2, red_q, bijection)
            assert potentials_match_up_to_arrow_signs(w2, red_w, arrow_map), \
                (entry.name, k)


@criterion("cluster character (projectives, exchange partner, multiplication)")
def test_cluster_character_values():
    entry = triangle_example()
    rule = CoefficientRule(entry.quiver)
    names = rule.names
    assert cc(CharacterInput((1, 0, 0)), rule) == LaurentPoly.variable(names, 0)
    assert cc(CharacterInput((0, 1, 0)), rule) == LaurentPoly.variable(names, 1)
    assert cc(CharacterInput((0, 0, 1)), rule) == LaurentPoly.variable(names, 2)

    qbar = IceQuiver([1], [], [])
    partner = CharacterInput((-1, 0, 1), QuiverRep(qbar, [1]))
    x1_prime = LaurentPoly(names, {(-1, 1, 0): 1, (-1, 0, 1): 1})
    assert cc(partner, rule) == x1_prime

    diff = multiplication_check(
        CharacterInput((1, 0, 0)), partner,
        CharacterInput((0, 1, 0)), CharacterInput((0, 0, 1)), rule)
    assert diff is None


@criterion("Euler characteristics (binomials, direct F2/F3 checks, abort path)")
def test_euler_characteristics(monkeypatch):
    single = IceQuiver([1], [], [])
    for d in range(6):
        for e in range(d + 1):
            assert euler_characteristic(QuiverRep(single, [d]), [e]).chi == \
                math.comb(d, e)

    from icecluster.quiver import Arrow
    a2 = IceQuiver([1, 2], [], [Arrow("a", 1, 2)])
    rep = QuiverRep(a2, [1, 1], {"a": [[1]]})
    kernel_side = euler_characteristic(rep, [0, 1])
    assert kernel_side.chi == 1
    assert kernel_side.counts_by_prime[2] == 1
    assert kernel_side.counts_by_prime[3] == 1
    image_side = euler_characteristic(rep, [1, 0])
    assert image_side.chi == 0
    assert image_side.counts_by_prime[2] == 0
    assert image_side.counts_by_prime[3] == 0

    import icecluster.reps as reps_module
    monkeypatch.setattr(reps_module, "count_subreps",
                        lambda rep_p, e: int(rep_p.field.p == 2))
    with pytest.raises(DomainError):
        reps_module.euler_characteristic(QuiverRep(single, [2]), [1])


@criterion("localized character (frozen classes, suspension formulas)")
def test_cc_loc_and_shift():
    entry = triangle_example()
    rule = CoefficientRule(entry.quiver)
    names = rule.names

    # condition (3): a frozen-perfect object maps to its class monomial
    assert cc_loc(LocalizedObject((0, 1, 0)), rule) == \
        LaurentPoly.variable(names, 1)
    assert cc_loc(LocalizedObject((0, 3, -2)), rule) == \
        LaurentPoly(names, {(0, 3, -2): 1})

    # condition (2): zero frozen class restricts to the plain character
    qbar = IceQuiver([1], [], [])
    partner = CharacterInput((-1, 0, 1), QuiverRep(qbar, [1]))
    assert cc_loc(LocalizedObject((0, 0, 0), partner), rule) == \
        cc(partner, rule)

    # suspension values: shifted projective 1/p1, shifted simple x2/p2
    assert cc_shift(None, CharacterInput((0, 0, 0)), (0, 1, 0), rule) == \
        LaurentPoly(names, {(0, -1, 0): 1})
    x1_prime_over_p2 = LaurentPoly(names, {(-1, 1, -1): 1, (-1, 0, 0): 1})
    assert cc_shift(None, partner, (0, 0, 1), rule) == x1_prime_over_p2


@criterion("quasi-cluster verification (sigma, psi+, psi-, corrupted map)")
def test_quasi_cluster_suite():
    entry = triangle_example()
    root = Seed.initial(entry.quiver)
    names = root.names

    sigma = QuasiMorphism(root, root, {
        "x1": LaurentPoly(names, {(-1, 1, -1): 1, (-1, 0, 0): 1}),
        "p1": LaurentPoly(names, {(0, -1, 0): 1}),
        "p2": LaurentPoly(names, {(0, 0, -1): 1}),
    })
    assert verify(sigma, 2).passed

    assert verify(build_psi(3, "plus", entry.quiver), 3).passed
    assert verify(build_psi(2, "minus", entry.quiver), 3).passed

    corrupt = QuasiMorphism(root, root, {
        "x1": LaurentPoly.variable(names, 0),
        "p1": LaurentPoly.variable(names, 1),
        "p2": LaurentPoly(names, {(0, 0, 2): 1}),
    })
    report = verify(corrupt, 2)
    assert report.condition_c.status == "fail"
    assert report.condition_c.witness["image"] == \
        LaurentPoly(names, {(0, 1, -2): 1})
    assert not report.passed


@criterion("specialization commutes with mutation on the catalog to depth 4")
def test_specialization_commutes():
    for entry in catalog():
        if entry.quiver.r == 0:
            continue
        registry = enumerate_pattern(Seed.initial(entry.quiver), 4,
                                     dedupe=True)
        for seed in registry.seeds:
            for k in seed.quiver.unfrozen_vertices:
                if seed.quiver.mutable_at(k):
                    continue
                lhs = specialize_seed(mutate_seed(seed, k))
                rhs = mutate_seed(specialize_seed(seed), k)
                assert all(x == y for x, y in zip(lhs.cluster, rhs.cluster)), \
                    (entry.name, seed.tree_address, k)
