import random
from fractions import Fraction

import pytest

from app.behaviour import (
    Behaviour,
    BehaviourError,
    Relabeling,
    SignallingError,
    all_relabelings,
    deterministic_behaviour,
    is_no_signalling,
    is_partially_predictable,
    is_partially_uncorrelated,
    is_predictable,
    is_uncorrelated,
    marginal,
    mix,
    project,
    restrict_behaviour,
    uniform_behaviour,
)
from app.polytopes import ns_vertices
from app.product import behaviour_product
from app.scenario import InputCollection, Scenario, all_collections, bipartition


def _signalling(chsh: Scenario) -> Behaviour:
    # Bob outputs Alice's input
    return Behaviour.from_function(chsh, lambda x, a: 1 if a == (0, x[0]) else 0)


def test_probabilities_are_exact_rationals(chsh):
    wp = uniform_behaviour(chsh)
    assert all(v == Fraction(1, 4) for v in wp.values)
    assert isinstance(wp.values[0], Fraction)


def test_context_must_be_normalised(chsh):
    with pytest.raises(BehaviourError, match="sums to"):
        Behaviour(chsh, tuple([Fraction(1, 4)] * 15 + [Fraction(1, 2)]))


def test_negative_entries_are_rejected(chsh):
    values = [Fraction(1, 4)] * 16
    values[0], values[1] = Fraction(-1, 4), Fraction(3, 4)
    with pytest.raises(BehaviourError, match="Negative"):
        Behaviour(chsh, tuple(values))


def test_wrong_length_is_rejected(chsh):
    with pytest.raises(BehaviourError, match="Expected 16"):
        Behaviour(chsh, (Fraction(1),) * 4)


def test_from_table_fills_missing_entries_with_zero(chsh):
    table = {(x, y): {("0", "0"): Fraction(1)} for x in ("1", "2") for y in ("1", "2")}
    wp = Behaviour.from_table(chsh, table)
    assert wp == deterministic_behaviour(chsh, [[0, 0], [0, 0]])
    assert wp.table[("2", "1")][("0", "0")] == 1


def test_vector_layout_is_checked(chsh, tripartite):
    wp = uniform_behaviour(chsh)
    assert Behaviour.from_vector(chsh, wp.to_vector()) == wp
    with pytest.raises(BehaviourError, match="layout"):
        Behaviour.from_vector(tripartite, wp.to_vector())


def test_no_signalling_check(chsh, box):
    assert is_no_signalling(box).holds
    check = is_no_signalling(_signalling(chsh))
    assert not check
    assert check.witness.party == "A"
    assert check.witness.value != check.witness.other_value


def test_marginal_of_pr_box_is_uniform(box):
    assert marginal(box, ["A"], (1, 0)) == {(0,): Fraction(1, 2), (1,): Fraction(1, 2)}
    assert marginal(box, [], (0, 0)) == {(): Fraction(1)}


def test_restriction_drops_parties_and_inputs(box, chsh):
    collection = InputCollection.from_mapping(chsh, {"A": ["2"], "B": ["1", "2"]})
    restricted = restrict_behaviour(box, collection)
    assert restricted.scenario.inputs == (("2",), ("1", "2"))
    # a xor b = x y with x = second input of A
    assert restricted.probability((0, 1), (0, 1)) == Fraction(1, 2)
    assert restricted.probability((0, 0), (0, 1)) == 0


def test_restriction_requires_no_signalling(chsh):
    collection = InputCollection.of_parties(chsh, ["B"])
    with pytest.raises(SignallingError):
        restrict_behaviour(_signalling(chsh), collection)
    # projection completes with the first input and skips the check
    assert project(_signalling(chsh), collection).probability((1,), (0,)) == 1


def test_mix(chsh, box):
    uniform = uniform_behaviour(chsh)
    assert mix([(Fraction(1, 2), box), (Fraction(1, 2), box)]) == box
    mixture = mix([(Fraction(1, 2), box), (Fraction(1, 2), uniform)])
    assert mixture.probability((0, 0), (0, 0)) == Fraction(3, 8)
    with pytest.raises(BehaviourError, match="sum to"):
        mix([(Fraction(1, 3), box)])
    with pytest.raises(BehaviourError, match="Nothing"):
        mix([])


def test_predictable_and_uncorrelated(chsh, box):
    deterministic = deterministic_behaviour(chsh, [[0, 1], [1, 1]])
    assert is_predictable(deterministic)
    assert is_uncorrelated(deterministic)
    assert is_uncorrelated(uniform_behaviour(chsh))
    assert not is_predictable(box)
    assert not is_uncorrelated(box)


def test_partial_predictability(tripartite, partial_boxes):
    c_box = partial_boxes[2]
    on_c = InputCollection.of_parties(tripartite, ["C"])
    on_a = InputCollection.of_parties(tripartite, ["A"])
    assert is_partially_predictable(c_box, on_c)
    assert is_partially_uncorrelated(c_box, on_c)
    assert not is_partially_predictable(c_box, on_a)
    assert not is_partially_uncorrelated(c_box, on_a)


def test_deterministic_strategy_is_validated(chsh):
    with pytest.raises(BehaviourError, match="Invalid strategy"):
        deterministic_behaviour(chsh, [[0, 2], [0, 0]])


def test_relabelings(chsh, box):
    relabelings = list(all_relabelings(chsh))
    assert len(relabelings) == 64
    swap_outputs = Relabeling(
        inputs=((0, 1), (0, 1)),
        outputs=(((1, 0), (1, 0)), ((0, 1), (0, 1))),
    )
    flipped = swap_outputs.apply_behaviour(box)
    assert flipped.probability((0, 0), (0, 1)) == Fraction(1, 2)
    assert Relabeling.identity(chsh).apply_behaviour(box) == box
    with pytest.raises(BehaviourError):
        Relabeling(inputs=((0, 0), (0, 1)), outputs=swap_outputs.outputs).validate(chsh)


def _random_strategy(rng: random.Random, scenario: Scenario) -> Behaviour:
    return deterministic_behaviour(scenario, [[rng.randrange(len(o)) for o in outs] for outs in scenario.outputs])


def _random_weights(rng: random.Random, n: int) -> list[Fraction]:
    raw = [rng.randint(0, 4) for _ in range(n)]
    if not any(raw):
        raw[0] = 1
    return [Fraction(w, sum(raw)) for w in raw]


def _random_mixture(rng: random.Random, vertices) -> Behaviour:
    vertices = list(vertices)
    return mix(zip(_random_weights(rng, len(vertices)), vertices))


@pytest.mark.parametrize("shape", [[2, 2], [2, 2, 2]])
def test_predictability_carries_over_to_smaller_collections(shape):
    rng = random.Random(11)
    S = Scenario.uniform(shape)
    collections = list(all_collections(S))
    # party blocks keep the free side small enough to enumerate in three-party scenarios
    larger = [c for c in collections if not c.is_empty and (len(shape) == 2 or c.is_party_blocks)]
    for collection in larger:
        for _ in range(3):
            if collection.is_full:
                wp = _random_strategy(rng, S)
            else:
                sides = bipartition(S, collection)
                wp = behaviour_product(
                    _random_strategy(rng, sides.inner), _random_mixture(rng, ns_vertices(sides.outer)), S, collection
                )
            assert is_partially_predictable(wp, collection)
            for smaller in collections:
                if smaller <= collection:
                    assert is_partially_predictable(wp, smaller), (collection.key(), smaller.key())


def test_restriction_commutes_with_mixing(chsh, tripartite, partial_boxes):
    rng = random.Random(5)
    ns = ns_vertices(chsh)
    samples = [(chsh, [_random_mixture(rng, ns) for _ in range(3)]) for _ in range(5)]
    samples.append((tripartite, [*partial_boxes, uniform_behaviour(tripartite)]))
    for scenario, behaviours in samples:
        weights = _random_weights(rng, len(behaviours))
        mixture = mix(zip(weights, behaviours))
        for target in all_collections(scenario):
            if target.is_empty:
                continue
            restricted = [restrict_behaviour(wp, target) for wp in behaviours]
            assert restrict_behaviour(mixture, target) == mix(zip(weights, restricted)), target.key()
