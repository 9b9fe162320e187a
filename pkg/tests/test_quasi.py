import random

import pytest

from icecluster.character import CharacterInput, CoefficientRule
from icecluster.errors import DomainError
from icecluster.laurent import LaurentPoly
from icecluster.quasi import (QuasiMorphism, apply, build_psi,
                              twist_from_conflations, verify)
from icecluster.quiver import IceQuiver
from icecluster.reps import QuiverRep
from icecluster.seeds import Seed


@pytest.fixture
def root(e1):
    return Seed.initial(e1)


@pytest.fixture
def sigma(root):
    """The appendix automorphism: x1 -> x1'/p2, p_i -> 1/p_i."""
    names = root.names
    return QuasiMorphism(root, root, {
        "x1": LaurentPoly(names, {(-1, 1, -1): 1, (-1, 0, 0): 1}),
        "p1": LaurentPoly(names, {(0, -1, 0): 1}),
        "p2": LaurentPoly(names, {(0, 0, -1): 1}),
    })


def test_sigma_sends_p_to_inverse(sigma, root):
    names = root.names
    p1 = LaurentPoly.variable(names, 1)
    assert apply(sigma, p1) == LaurentPoly(names, {(0, -1, 0): 1})


def test_apply_identity(root):
    ident = QuasiMorphism.identity(root)
    p = LaurentPoly(root.names, {(-1, 1, 0): 2, (3, 0, -2): 5})
    assert apply(ident, p) == p


def test_sigma_on_other_cluster_variable(sigma, root):
    names = root.names
    x1p = LaurentPoly(names, {(-1, 1, 0): 1, (-1, 0, 1): 1})
    assert apply(sigma, x1p) == LaurentPoly(names, {(1, -1, 0): 1})  # x1/p1


def test_apply_is_ring_morphism(sigma, root):
    # nonnegative x1-powers keep the images inside the Laurent ring, since
    # only the frozen images of sigma are invertible monomials
    rng = random.Random(23)
    names = root.names
    for _ in range(10):
        def rand_poly():
            terms = {}
            for _ in range(rng.randint(1, 3)):
                exps = (rng.randint(0, 2), rng.randint(-2, 2),
                        rng.randint(-2, 2))
                terms[exps] = rng.randint(-4, 4)
            return LaurentPoly(names, terms)
        f, g = rand_poly(), rand_poly()
        assert apply(sigma, f * g) == apply(sigma, f) * apply(sigma, g)
        assert apply(sigma, f + g) == apply(sigma, f) + apply(sigma, g)


def test_build_psi_plus(e1):
    psi = build_psi(3, "plus", e1)
    names = psi.target.names
    assert psi.images["x1"] == LaurentPoly.variable(names, 0)
    assert psi.images["p1"] == LaurentPoly.variable(names, 1)
    assert psi.images["p2"] == LaurentPoly(names, {(0, 1, -1): 1})


def test_build_psi_minus(e1):
    psi = build_psi(2, "minus", e1)
    names = psi.target.names
    assert psi.images["p1"] == LaurentPoly(names, {(0, -1, 1): 1})  # p2/p1


def test_build_psi_role_mismatch(e1):
    with pytest.raises(DomainError):
        build_psi(2, "plus", e1)
    with pytest.raises(DomainError):
        build_psi(3, "minus", e1)


def test_psi_pair_inverts(e1, root):
    """psi built at the mutated quiver undoes psi built at the original."""
    from icecluster.seeds import mutate_ice_quiver
    psi_plus = build_psi(3, "plus", e1)
    mutated = mutate_ice_quiver(e1, 3)
    psi_minus = build_psi(3, "minus", mutated)
    rng = random.Random(4)
    names = root.names
    for _ in range(8):
        terms = {tuple(rng.randint(-1, 2) for _ in names): rng.randint(-3, 3)
                 for _ in range(2)}
        p = LaurentPoly(names, terms)
        assert apply(psi_plus, apply(psi_minus, p)) == p


def test_verify_sigma(sigma):
    report = verify(sigma, 2)
    assert report.passed
    assert report.condition_a.status == "pass"
    assert report.condition_b.status == "pass"
    assert report.condition_c.status == "pass"


def test_verify_psi_both_directions(e1):
    assert verify(build_psi(3, "plus", e1), 3).passed
    assert verify(build_psi(2, "minus", e1), 3).passed


def test_corrupted_map_fails_condition_c(root):
    names = root.names
    corrupt = QuasiMorphism(root, root, {
        "x1": LaurentPoly.variable(names, 0),
        "p1": LaurentPoly.variable(names, 1),
        "p2": LaurentPoly(names, {(0, 0, 2): 1}),
    })
    report = verify(corrupt, 2)
    assert not report.passed
    assert report.condition_c.status == "fail"
    witness = report.condition_c.witness
    assert witness["vertex"] == 1
    assert witness["image"] == LaurentPoly(names, {(0, 1, -2): 1})


def test_condition_b_matrix_equality_is_exact(root, sigma):
    report = verify(sigma, 2)
    assert report.condition_b.status == "pass"


def test_twist_from_conflations_is_sigma(e1, root, sigma):
    qbar = IceQuiver([1], [], [])
    rule = CoefficientRule(e1)
    partner = CharacterInput((-1, 0, 1), QuiverRep(qbar, [1]))
    zero = CharacterInput((0, 0, 0))
    data = [
        (partner, (0, 0, 1)),   # suspended mutable summand, injective P2
        (zero, (0, 1, 0)),      # suspended projective at vertex 2
        (zero, (0, 0, 1)),      # suspended projective at vertex 3
    ]
    twist = twist_from_conflations(root, rule, data)
    for name in root.names:
        assert twist.images[name] == sigma.images[name]
    assert verify(twist, 2).passed


def test_twist_empty_quiver():
    empty = IceQuiver([], [], [])
    rule = CoefficientRule(empty)
    twist = twist_from_conflations(Seed.initial(empty), rule, [])
    assert twist.images == {}


def test_morphism_json_roundtrip(sigma):
    data = sigma.to_json()
    again = QuasiMorphism.from_json(data)
    assert again.images == sigma.images
    assert again.to_json() == data


def test_suspension_categorifies_sigma(e1, root, sigma):
    """The suspension square: shifting any indecomposable multiplies its
    character by the automorphism, checked on all four A2-type objects."""
    from icecluster.character import CharacterInput, CoefficientRule, cc, cc_shift
    rule = CoefficientRule(e1)
    qbar = IceQuiver([1], [], [])
    s1bar = QuiverRep(qbar, [1])
    zero = CharacterInput((0, 0, 0))
    mutable_proj = CharacterInput((1, 0, 0))        # CC = x1
    partner = CharacterInput((-1, 0, 1), s1bar)     # CC = x1'
    frozen_p1 = CharacterInput((0, 1, 0))           # CC = p1
    frozen_p2 = CharacterInput((0, 0, 1))           # CC = p2
    cases = [
        # (object, suspension data, injective class)
        (mutable_proj, partner, (0, 0, 1)),   # S1 -> P2 -> S2
        (partner, mutable_proj, (0, 1, 0)),   # S2 -> P1 -> S1
        (frozen_p1, zero, (0, 1, 0)),         # P1 injective
        (frozen_p2, zero, (0, 0, 1)),         # P2 injective
    ]
    for obj, suspension, injective in cases:
        shifted = cc_shift(None, suspension, injective, rule)
        assert shifted == apply(sigma, cc(obj, rule))


def test_verify_depth_guard(sigma):
    from icecluster.errors import GuardError
    import pytest as _pytest
    with _pytest.raises(GuardError):
        verify(sigma, 7)
