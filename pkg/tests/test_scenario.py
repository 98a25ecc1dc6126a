import pytest

from app.scenario import (
    InputCollection,
    Scenario,
    ScenarioError,
    all_collections,
    bipartition,
    collection_count,
    restrict_scenario,
)


def test_uniform_names_parties_inputs_and_outputs(chsh):
    assert chsh.parties == ("A", "B")
    assert chsh.inputs == (("1", "2"), ("1", "2"))
    assert chsh.outputs[0][1] == ("0", "1")


@pytest.mark.parametrize(
    "shape, ambient, full, dimension",
    [
        ([2, 2], 16, 12, 8),
        ([2, 2, 2], 64, 56, 26),
        ([3, 3], 36, 27, 15),
    ],
)
def test_dimensions(shape, ambient, full, dimension):
    S = Scenario.uniform(shape)
    assert S.ambient_dimension == ambient
    assert S.full_dimension == full
    assert S.pironio_dimension == dimension


def test_layout_is_context_major(chsh):
    assert chsh.layout[0] == ((0, 0), (0, 0))
    assert chsh.layout[4] == ((0, 1), (0, 0))
    assert chsh.coordinate((1, 1), (1, 1)) == 15
    assert list(chsh.context_slices[(1, 0)]) == [8, 9, 10, 11]


def test_build_reports_missing_entries():
    with pytest.raises(ScenarioError, match="Missing scenario entry"):
        Scenario.build(["A", "B"], {"A": ["x"]}, {"A": {"x": ["0", "1"]}})


def test_duplicate_identifiers_are_rejected():
    with pytest.raises(ScenarioError, match="Duplicate"):
        Scenario.build(["A", "A"], {"A": ["x"]}, {"A": {"x": ["0"]}})


def test_trivial_scenarios_are_valid():
    S = Scenario.uniform([1, 2])
    assert not S.is_nontrivial
    assert S.multi_input_parties == (1,)


def test_to_mapping_rebuilds_the_scenario(tripartite):
    mapping = tripartite.to_mapping()
    assert Scenario.build(mapping["parties"], mapping["inputs"], mapping["outputs"]) == tripartite


def test_collection_key_and_mapping(chsh):
    collection = InputCollection.from_mapping(chsh, {"A": ["1"]})
    assert collection.key() == "A{1}|B{}"
    assert collection.to_mapping() == {"A": ["1"]}
    assert collection.complement().key() == "A{2}|B{1,2}"


def test_collection_rejects_unknown_inputs(chsh):
    with pytest.raises(ScenarioError, match="Unknown input"):
        InputCollection.from_mapping(chsh, {"A": ["3"]})


def test_restriction_keeps_only_collected_inputs(tripartite):
    collection = InputCollection.from_mapping(tripartite, {"A": ["2"], "C": ["1", "2"]})
    restricted = restrict_scenario(tripartite, collection)
    assert restricted.parties == ("A", "C")
    assert restricted.inputs == (("2",), ("1", "2"))


def test_empty_restriction_is_an_error(chsh):
    with pytest.raises(ScenarioError, match="empty restriction"):
        restrict_scenario(chsh, InputCollection.empty(chsh))


def test_bipartition_of_a_redundant_collection(chsh):
    sides = bipartition(chsh, InputCollection.full(chsh))
    assert sides.inner == chsh
    assert sides.outer is None
    assert sides.redundant


def test_bipartition_of_party_blocks(tripartite):
    sides = bipartition(tripartite, InputCollection.of_parties(tripartite, ["B"]))
    assert sides.inner.parties == ("B",)
    assert sides.outer.parties == ("A", "C")
    assert not sides.redundant


def test_all_collections(chsh, tripartite):
    assert collection_count(chsh) == 16
    assert len(list(all_collections(chsh))) == 16
    assert len(list(all_collections(chsh, nontrivial=True))) == 14
    assert collection_count(tripartite) == 64


def test_first_inputs(three_inputs):
    collection = InputCollection.first_inputs(three_inputs, [2, 0])
    assert collection.key() == "A{1,2}|B{}"
    with pytest.raises(ScenarioError):
        InputCollection.first_inputs(three_inputs, [4, 0])


def test_collection_order_and_within(tripartite):
    small = InputCollection.from_mapping(tripartite, {"A": ["1"]})
    large = InputCollection.of_parties(tripartite, ["A", "B"])
    assert small < large
    assert not large <= small
    inside = small.within(large)
    assert inside.scenario.parties == ("A", "B")
    assert inside.key() == "A{1}|B{}"


def test_party_blocks(tripartite):
    assert InputCollection.of_parties(tripartite, ["A"]).is_party_blocks
    assert not InputCollection.from_mapping(tripartite, {"A": ["1"]}).is_party_blocks
