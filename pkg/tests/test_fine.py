import random
from fractions import Fraction

import pytest

from app.behaviour import Behaviour, all_relabelings, mix, uniform_behaviour
from app.classify import is_bell
from app.fine import (
    FineConstructionError,
    fine_joint_one_multi_party,
    model_from_certificate,
    partial_joint_from_model,
    verify_joint,
)
from app.polytopes import bell_vertices, membership, ns_vertices, pd_vertices
from app.scenario import InputCollection, Scenario, all_collections

HALF = Fraction(1, 2)


@pytest.fixture(scope="module")
def one_multi() -> Scenario:
    return Scenario.uniform([1, 2])


def test_product_formula_on_perfect_correlations(one_multi):
    correlated = Behaviour.from_function(one_multi, lambda x, a: HALF if a[0] == a[1] else 0)
    joint = fine_joint_one_multi_party(correlated)
    assert joint.probability(((0,), (0, 0)), ()) == HALF
    assert joint.probability(((1,), (1, 1)), ()) == HALF
    assert joint.probability(((0,), (0, 1)), ()) == 0
    assert verify_joint(joint, correlated)


def test_product_formula_with_a_vanishing_marginal(one_multi):
    # A always answers 0, B answers with its input
    wp = Behaviour.from_function(one_multi, lambda x, a: 1 if a == (0, x[1]) else 0)
    joint = fine_joint_one_multi_party(wp)
    assert joint.alpha_marginal(()) == {((0,), (0, 1)): 1}
    assert verify_joint(joint, wp)


def test_product_formula_needs_one_multi_input_party(chsh):
    with pytest.raises(FineConstructionError, match="at most one"):
        fine_joint_one_multi_party(uniform_behaviour(chsh))


def test_product_formula_needs_no_signalling(one_multi):
    signalling = Behaviour.from_function(one_multi, lambda x, a: 1 if a == (x[1], 0) else 0)
    with pytest.raises(FineConstructionError, match="no-signalling"):
        fine_joint_one_multi_party(signalling)


def test_lhv_model_of_the_uniform_behaviour(chsh):
    uniform = uniform_behaviour(chsh)
    bell = bell_vertices(chsh)
    model = model_from_certificate(uniform, membership(uniform, bell), bell)
    assert model.collection.is_full
    assert model.evaluate() == uniform
    joint = partial_joint_from_model(model)
    assert joint.outer is None
    assert sum(joint.alpha_marginal(()).values()) == 1
    assert verify_joint(joint, uniform)


def test_partial_joint_with_one_deterministic_input(chsh):
    uniform = uniform_behaviour(chsh)
    vertices = pd_vertices(chsh, InputCollection.from_mapping(chsh, {"A": ["1"]}))
    model = model_from_certificate(uniform, membership(uniform, vertices), vertices)
    joint = partial_joint_from_model(model)
    assert joint.outer.parties == ("A", "B")
    assert verify_joint(joint, uniform)


def test_partial_joint_of_a_partial_pr_box(tripartite, partial_boxes):
    box = partial_boxes[0]
    vertices = pd_vertices(tripartite, InputCollection.of_parties(tripartite, ["A"]))
    model = model_from_certificate(box, membership(box, vertices), vertices)
    assert len(model.terms) == 1
    joint = partial_joint_from_model(model)
    assert verify_joint(joint, box)
    for table in joint.tables.values():
        assert {alpha for alpha, _ in table} == {((0, 0),)}


def test_ns_certificate_gives_a_model_without_deterministic_block(chsh, box):
    ns = ns_vertices(chsh)
    model = model_from_certificate(box, membership(box, ns), ns)
    assert model.collection.is_empty
    assert all(t.deterministic is None for t in model.terms)
    assert verify_joint(partial_joint_from_model(model), box)


def test_outside_certificate_carries_no_model(chsh, box):
    bell = bell_vertices(chsh)
    with pytest.raises(FineConstructionError, match="Inside"):
        model_from_certificate(box, membership(box, bell), bell)


def test_joint_of_another_behaviour_fails_verification(chsh, box):
    uniform = uniform_behaviour(chsh)
    bell = bell_vertices(chsh)
    joint = partial_joint_from_model(model_from_certificate(uniform, membership(uniform, bell), bell))
    assert not verify_joint(joint, box)


def _random_mixture(rng: random.Random, vertices) -> Behaviour:
    vertices = list(vertices)
    raw = [rng.randint(0, 4) for _ in vertices]
    if not any(raw):
        raw[0] = 1
    return mix((Fraction(w, sum(raw)), v) for w, v in zip(raw, vertices))


def test_product_formula_on_random_behaviours():
    rng = random.Random(3)
    S = Scenario.uniform([1, 3])
    ns = ns_vertices(S)
    for _ in range(100):
        wp = _random_mixture(rng, ns)
        assert verify_joint(fine_joint_one_multi_party(wp), wp)


def test_local_models_exist_for_every_deterministic_collection(chsh, box):
    rng = random.Random(9)
    bell, ns = bell_vertices(chsh), ns_vertices(chsh)
    relabeled = [r.apply_behaviour(box) for r in all_relabelings(chsh)]
    behaviours = [box, uniform_behaviour(chsh)]
    for _ in range(48):
        t = Fraction(rng.randint(0, 10), 10)
        behaviours.append(mix([(t, rng.choice(relabeled)), (1 - t, _random_mixture(rng, ns))]))

    collections = [c for c in all_collections(chsh) if not c.is_empty]
    vertex_sets = [pd_vertices(chsh, c) for c in collections]
    verdicts = set()
    for wp in behaviours:
        local = membership(wp, bell).inside
        verdicts.add(local)
        for collection, vertices in zip(collections, vertex_sets):
            assert is_bell(chsh, collection)
            certificate = membership(wp, vertices)
            assert certificate.inside == local, collection.key()
            if local:
                joint = partial_joint_from_model(model_from_certificate(wp, certificate, vertices))
                assert verify_joint(joint, wp)
    assert verdicts == {True, False}
