import pytest

from app.classify import (
    BOTTOM_KEY,
    Relation,
    classify_all,
    compare,
    is_bell,
    is_ns,
    msf,
    relation_of_point_sets,
    representative,
    vertex_relation,
)
from app.exactgeom import BudgetExceededError
from app.polytopes import pd_vertices
from app.scenario import InputCollection, all_collections


def test_msf_of_chsh_collections(chsh):
    assert msf(chsh, InputCollection.from_mapping(chsh, {"A": ["1"]})).is_bottom
    fragment = msf(chsh, InputCollection.empty(chsh))
    assert fragment.key() == "A{1,2}|B{1,2}"
    assert msf(chsh, InputCollection.full(chsh)).key() == BOTTOM_KEY


def test_chsh_has_two_classes(chsh):
    report = classify_all(chsh)
    assert report.class_count == 2
    assert report.bell_class.size == 15
    assert report.ns_class.size == 1
    assert report.classes[0].is_bell


def test_tripartite_classes(tripartite):
    report = classify_all(tripartite)
    assert report.class_count == 5
    assert report.bell_class.size == 54
    pairs = [c for c in report.classes if not c.is_bell and c is not report.ns_class]
    assert sorted(c.size for c in pairs) == [3, 3, 3]
    assert sum(c.size for c in report.classes) == 64


def test_tripartite_hasse_relations(tripartite):
    report = classify_all(tripartite)
    bell, ns = report.bell_class, report.ns_class
    assert {r.relation for r in bell.relations} == {Relation.SUBSET}
    assert len(bell.relations) == 3
    assert {r.relation for r in ns.relations} == {Relation.SUPERSET}
    for c in report.classes:
        if c is bell or c is ns:
            continue
        relations = {(r.other, r.relation) for r in c.relations}
        assert relations == {(BOTTOM_KEY, Relation.SUPERSET), (ns.msf.key(), Relation.SUBSET)}


def test_class_representative_is_its_largest_member(tripartite):
    report = classify_all(tripartite)
    a = InputCollection.of_parties(tripartite, ["A"])
    cls = report.class_of(a)
    assert cls.representative == a
    assert all(m <= cls.representative for m in cls.members)
    assert representative(tripartite, msf(tripartite, InputCollection.full(tripartite))).is_full


def test_compare(tripartite):
    a = InputCollection.of_parties(tripartite, ["A"])
    b = InputCollection.of_parties(tripartite, ["B"])
    first_a = InputCollection.from_mapping(tripartite, {"A": ["1"]})
    assert compare(tripartite, first_a, a) is Relation.EQUAL
    assert compare(tripartite, a, b) is Relation.INCOMPARABLE
    assert compare(tripartite, InputCollection.full(tripartite), a) is Relation.SUBSET
    assert compare(tripartite, InputCollection.empty(tripartite), a) is Relation.SUPERSET


def test_bell_and_ns_predicates(tripartite, three_inputs):
    assert is_bell(tripartite, InputCollection.of_parties(tripartite, ["A", "B"]))
    assert is_ns(tripartite, InputCollection.empty(tripartite))
    # one deterministic input each keeps two inputs per party
    one_each = InputCollection.first_inputs(three_inputs, [1, 1])
    assert not is_bell(three_inputs, one_each)
    assert not is_ns(three_inputs, one_each)


def test_predicted_relations_match_enumeration(chsh, tripartite):
    a = InputCollection.of_parties(tripartite, ["A"])
    b = InputCollection.of_parties(tripartite, ["B"])
    assert vertex_relation(tripartite, a, b) is Relation.INCOMPARABLE
    assert vertex_relation(chsh, InputCollection.from_mapping(chsh, {"B": ["2"]}), InputCollection.full(chsh)) \
        is Relation.EQUAL
    assert vertex_relation(tripartite, InputCollection.full(tripartite), a) is Relation.SUBSET


def _point_sets(scenario, collections) -> dict[str, frozenset]:
    return {c.key(): pd_vertices(scenario, c).points_set for c in collections}


def test_predicted_relations_match_every_chsh_pair(chsh):
    collections = list(all_collections(chsh))
    points = _point_sets(chsh, collections)
    for first in collections:
        for second in collections:
            enumerated = relation_of_point_sets(points[first.key()], points[second.key()])
            assert compare(chsh, first, second) is enumerated, (first.key(), second.key())


@pytest.mark.slow
def test_predicted_relations_match_every_tripartite_pair(tripartite):
    # NS of the whole tripartite scenario is out of reach, so the empty collection is left out
    collections = [c for c in all_collections(tripartite) if not c.is_empty]
    points = _point_sets(tripartite, collections)
    for first in collections:
        for second in collections:
            enumerated = relation_of_point_sets(points[first.key()], points[second.key()])
            assert compare(tripartite, first, second) is enumerated, (first.key(), second.key())
    groups: dict[frozenset, set[str]] = {}
    for key, point_set in points.items():
        groups.setdefault(point_set, set()).add(key)
    classes = {
        frozenset(m.key() for m in c.members if not m.is_empty) for c in classify_all(tripartite).classes
    }
    assert {frozenset(keys) for keys in groups.values()} == classes - {frozenset()}


def test_three_input_bipartite_classes(three_inputs):
    report = classify_all(three_inputs)
    assert report.class_count == 17
    assert report.bell_class.size == 48


def test_collection_budget(three_inputs):
    with pytest.raises(BudgetExceededError):
        classify_all(three_inputs, budget=10)
