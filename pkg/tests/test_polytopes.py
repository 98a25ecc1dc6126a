from fractions import Fraction

import pytest

from app.behaviour import all_relabelings, is_no_signalling, uniform_behaviour
from app.exactgeom import BudgetExceededError, affine_rank, facets_from_vrep, vertices_from_hrep
from app.polytopes import (
    bell_vertices,
    e_vertices,
    membership,
    ns_hrep,
    ns_vertices,
    pd_vertices,
    vertex_set,
)
from app.scenario import InputCollection, Scenario, ScenarioError, all_collections
from app.vertexset import Family


def test_chsh_vertex_counts(chsh):
    assert len(e_vertices(chsh)) == 256
    assert len(bell_vertices(chsh)) == 16
    assert len(ns_vertices(chsh)) == 24


def test_bell_vertices_are_inside_ns(chsh, box):
    bell, ns = bell_vertices(chsh), ns_vertices(chsh)
    assert bell.issubset(ns)
    assert box in ns
    assert box not in bell
    assert all(is_no_signalling(v).holds for v in ns)


def test_ns_hrep_contains_its_vertices(chsh):
    hrep = ns_hrep(chsh)
    assert all(hrep.contains(v.values) for v in ns_vertices(chsh))


def test_chsh_facet_counts(chsh):
    assert len(facets_from_vrep(bell_vertices(chsh).vrep).inequalities) == 24
    assert len(facets_from_vrep(ns_vertices(chsh).vrep).inequalities) == 16


def test_some_bell_facet_is_violated_by_the_pr_box(chsh, box):
    hrep = facets_from_vrep(bell_vertices(chsh).vrep)
    assert any(not f.holds(box.values) for f in hrep.inequalities)


def test_single_input_parties_split_off():
    S = Scenario.uniform([1, 2, 2])
    assert len(ns_vertices(S)) == 48
    assert ns_vertices(Scenario.uniform([1, 2])).same_points(bell_vertices(Scenario.uniform([1, 2])))


def test_pd_of_redundant_collections(chsh):
    full = pd_vertices(chsh, InputCollection.full(chsh))
    empty = pd_vertices(chsh, InputCollection.empty(chsh))
    assert full.same_points(bell_vertices(chsh))
    assert empty.same_points(ns_vertices(chsh))
    assert full.family is Family.PD


def test_pd_with_one_deterministic_input_is_bell(chsh):
    vertices = pd_vertices(chsh, InputCollection.from_mapping(chsh, {"A": ["1"]}))
    assert len(vertices) == 16
    assert vertices.same_points(bell_vertices(chsh))
    assert vertices.label == "pd[A{1}|B{}]"


def test_pd_of_one_party_in_three(tripartite):
    vertices = pd_vertices(tripartite, InputCollection.of_parties(tripartite, ["A"]))
    assert len(vertices) == 96
    assert bell_vertices(tripartite).issubset(vertices)


def test_membership_certificates(chsh, box):
    uniform = uniform_behaviour(chsh)
    inside = membership(uniform, "bell")
    assert inside.inside
    assert len(inside.weights) == 16
    outside = membership(box, Family.BELL)
    assert not outside.inside
    assert outside.separator.value(box.values) > outside.separator.bound
    assert membership(box, "ns").inside


def test_membership_against_an_explicit_vertex_set(chsh, box):
    vertices = bell_vertices(chsh)
    mixture_point = membership(uniform_behaviour(chsh), vertices)
    assert sum(mixture_point.weights) == Fraction(1)
    with pytest.raises(ScenarioError):
        membership(box, bell_vertices(Scenario.uniform([2, 3])))


def test_pd_family_needs_a_collection(chsh):
    with pytest.raises(ScenarioError, match="needs an input collection"):
        vertex_set(chsh, "pd")


def test_budgets(tripartite):
    with pytest.raises(BudgetExceededError):
        e_vertices(tripartite, budget=100)
    with pytest.raises(BudgetExceededError):
        ns_vertices(tripartite, budget=200)


def test_inputs_with_different_output_counts():
    S = Scenario.build(
        ["A", "B"],
        {"A": ["x", "y"], "B": ["u", "v"]},
        {"A": {"x": ["0", "1", "2"], "y": ["0", "1"]}, "B": {"u": ["0", "1"], "v": ["0", "1"]}},
    )
    assert (S.ambient_dimension, S.full_dimension, S.pironio_dimension) == (20, 16, 11)
    bell = bell_vertices(S)
    assert len(bell) == 24
    assert affine_rank(bell.points) == 11


def test_affine_ranks_of_the_chsh_families(chsh):
    assert affine_rank(bell_vertices(chsh).points) == 8
    assert affine_rank(ns_vertices(chsh).points) == 8
    assert affine_rank(e_vertices(chsh).points) == 12


@pytest.mark.parametrize("build", [bell_vertices, ns_vertices])
def test_facets_give_back_the_vertices(chsh, build):
    vertices = build(chsh)
    recovered = vertices_from_hrep(facets_from_vrep(vertices.vrep))
    assert set(recovered.points) == vertices.points_set


def test_ns_is_bell_plus_the_relabeled_pr_boxes(chsh, box):
    ns, bell = ns_vertices(chsh), bell_vertices(chsh)
    boxes = {r.apply_behaviour(box).values for r in all_relabelings(chsh)}
    assert len(boxes) == 8
    assert ns.points_set == bell.points_set | boxes
    assert len(ns) == 24


def test_pd_shrinks_as_the_collection_grows(chsh):
    collections = list(all_collections(chsh))
    vertices = {c.key(): pd_vertices(chsh, c) for c in collections}
    for smaller in collections:
        for larger in collections:
            if smaller <= larger:
                assert vertices[larger.key()].issubset(vertices[smaller.key()]), (smaller.key(), larger.key())


def test_family_chain(chsh):
    e, ns, bell = e_vertices(chsh), ns_vertices(chsh), bell_vertices(chsh)
    assert bell.issubset(e)
    assert all(membership(v, e).inside for v in ns)
    for collection in all_collections(chsh):
        pd = pd_vertices(chsh, collection)
        assert bell.issubset(pd)
        assert pd.issubset(ns)
