"""
Correlation scenarios, input collections, restrictions and dimension formulas.

A scenario S = (I, M, O) keeps parties, inputs and outputs in insertion order.
That order fixes the canonical coordinate layout shared by every behaviour vector,
vertex set and inequality in the package.
"""
from __future__ import annotations

import itertools
import string
from dataclasses import dataclass
from functools import cached_property
from math import prod
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

Context = tuple[int, ...]
Outcome = tuple[int, ...]


class ScenarioError(ValueError):
    """Raised when a scenario or an input collection is malformed."""


def _check_unique(kind: str, values: Sequence[str]) -> None:
    if len(set(values)) != len(values):
        raise ScenarioError(f"Duplicate {kind} identifiers: {list(values)}")


@dataclass(frozen=True)
class Scenario:
    """
    A correlation scenario S = (I, M, O).

    Trivial scenarios (single inputs or single outputs) are valid; they show up as
    restrictions of larger ones.

    Attributes:
        parties (tuple[str, ...]): Party identifiers I.
        inputs (tuple[tuple[str, ...], ...]): Input identifiers M_i of every party.
        outputs (tuple[tuple[tuple[str, ...], ...], ...]): Output identifiers O_{x_i}
            of every input of every party.
    """
    parties: tuple[str, ...]
    inputs: tuple[tuple[str, ...], ...]
    outputs: tuple[tuple[tuple[str, ...], ...], ...]

    def __post_init__(self):
        if not self.parties:
            raise ScenarioError("A scenario needs at least one party")
        if len(self.inputs) != len(self.parties) or len(self.outputs) != len(self.parties):
            raise ScenarioError("Inputs and outputs must be listed for every party")
        _check_unique("party", self.parties)
        for party, party_inputs, party_outputs in zip(self.parties, self.inputs, self.outputs):
            if not party_inputs:
                raise ScenarioError(f"Party {party!r} has no inputs")
            if len(party_outputs) != len(party_inputs):
                raise ScenarioError(f"Outputs are missing for some input of party {party!r}")
            _check_unique(f"input (party {party!r})", party_inputs)
            for x, outs in zip(party_inputs, party_outputs):
                if not outs:
                    raise ScenarioError(f"Input {x!r} of party {party!r} has no outputs")
                _check_unique(f"output (party {party!r}, input {x!r})", outs)

    @classmethod
    def build(
        cls,
        parties: Sequence[str],
        inputs: Mapping[str, Sequence[str]],
        outputs: Mapping[str, Mapping[str, Sequence[str]]]
    ) -> Scenario:
        """
        Build a scenario from plain mappings, the shape used by the JSON surface.

        Args:
            parties (Sequence[str]): Party identifiers.
            inputs (Mapping[str, Sequence[str]]): Inputs of every party.
            outputs (Mapping[str, Mapping[str, Sequence[str]]]): Outputs per party and input.

        Returns:
            Scenario: The validated scenario.

        Raises:
            ScenarioError: If an entry is missing or the data is inconsistent.
        """
        try:
            return cls(
                parties=tuple(parties),
                inputs=tuple(tuple(inputs[p]) for p in parties),
                outputs=tuple(tuple(tuple(outputs[p][x]) for x in inputs[p]) for p in parties),
            )
        except KeyError as e:
            raise ScenarioError(f"Missing scenario entry for {e.args[0]!r}") from e

    @classmethod
    def uniform(
        cls,
        inputs: Sequence[int],
        outputs: int = 2,
        parties: Sequence[str] | None = None
    ) -> Scenario:
        """
        Scenario where party i has `inputs[i]` inputs, each with `outputs` outputs.

        Parties default to A, B, C, ...; inputs are named "1", "2", ... and outputs
        "0", "1", ... in canonical order.
        """
        if parties is None:
            if len(inputs) > len(string.ascii_uppercase):
                raise ScenarioError("Name the parties explicitly for more than 26 parties")
            parties = string.ascii_uppercase[:len(inputs)]
        if len(parties) != len(inputs):
            raise ScenarioError("One input count per party is required")
        return cls(
            parties=tuple(parties),
            inputs=tuple(tuple(str(j + 1) for j in range(k)) for k in inputs),
            outputs=tuple(
                tuple(tuple(str(a) for a in range(outputs)) for _ in range(k)) for k in inputs
            ),
        )

    # --- identifiers -------------------------------------------------------------

    @property
    def n_parties(self) -> int:
        return len(self.parties)

    def party_index(self, party: str) -> int:
        try:
            return self.parties.index(party)
        except ValueError as e:
            raise ScenarioError(f"Unknown party {party!r}") from e

    def input_index(self, party: int, x: str) -> int:
        try:
            return self.inputs[party].index(x)
        except ValueError as e:
            raise ScenarioError(f"Unknown input {x!r} for party {self.parties[party]!r}") from e

    def output_index(self, party: int, x: int, a: str) -> int:
        try:
            return self.outputs[party][x].index(a)
        except ValueError as e:
            raise ScenarioError(
                f"Unknown output {a!r} for input {self.inputs[party][x]!r} of party {self.parties[party]!r}"
            ) from e

    def context_ids(self, context: Context) -> tuple[str, ...]:
        return tuple(self.inputs[i][x] for i, x in enumerate(context))

    def outcome_ids(self, context: Context, outcome: Outcome) -> tuple[str, ...]:
        return tuple(self.outputs[i][x][a] for i, (x, a) in enumerate(zip(context, outcome)))

    # --- canonical layout ----------------------------------------------------------

    @cached_property
    def contexts(self) -> tuple[Context, ...]:
        return tuple(itertools.product(*(range(len(m)) for m in self.inputs)))

    @cached_property
    def _outcomes(self) -> dict[Context, tuple[Outcome, ...]]:
        return {
            x: tuple(itertools.product(*(range(len(self.outputs[i][xi])) for i, xi in enumerate(x))))
            for x in self.contexts
        }

    def outcomes(self, context: Context) -> tuple[Outcome, ...]:
        return self._outcomes[context]

    @cached_property
    def layout(self) -> tuple[tuple[Context, Outcome], ...]:
        return tuple((x, a) for x in self.contexts for a in self._outcomes[x])

    @cached_property
    def _coordinates(self) -> dict[tuple[Context, Outcome], int]:
        return {entry: k for k, entry in enumerate(self.layout)}

    def coordinate(self, context: Context, outcome: Outcome) -> int:
        return self._coordinates[(context, outcome)]

    @cached_property
    def context_slices(self) -> dict[Context, range]:
        slices, start = {}, 0
        for x in self.contexts:
            size = len(self._outcomes[x])
            slices[x] = range(start, start + size)
            start += size
        return slices

    # --- dimensions --------------------------------------------------------------

    @property
    def ambient_dimension(self) -> int:
        """d: the number of probabilities p(a|x) in a behaviour table."""
        return len(self.layout)

    @property
    def full_dimension(self) -> int:
        """D̃: dimension of the set of all behaviours (normalisation removed)."""
        return self.ambient_dimension - prod(len(m) for m in self.inputs)

    @property
    def pironio_dimension(self) -> int:
        """D: dimension of the no-signalling and Bell polytopes."""
        # sum over nonempty party subsets V of prod_{i in V} s_i equals prod(1 + s_i) - 1
        free = [sum(len(outs) - 1 for outs in self.outputs[i]) for i in range(self.n_parties)]
        return prod(1 + s for s in free) - 1

    @property
    def is_nontrivial(self) -> bool:
        return all(
            len(self.inputs[i]) >= 2 and all(len(outs) >= 2 for outs in self.outputs[i])
            for i in range(self.n_parties)
        )

    @property
    def multi_input_parties(self) -> tuple[int, ...]:
        return tuple(i for i, m in enumerate(self.inputs) if len(m) >= 2)

    def to_mapping(self) -> dict:
        return {
            "parties": list(self.parties),
            "inputs": {p: list(self.inputs[i]) for i, p in enumerate(self.parties)},
            "outputs": {
                p: {x: list(self.outputs[i][j]) for j, x in enumerate(self.inputs[i])}
                for i, p in enumerate(self.parties)
            },
        }


class ContextPartition(NamedTuple):
    """F_x (parties whose input lies in the collection) and its complement."""
    inside: frozenset[int]
    outside: frozenset[int]


@dataclass(frozen=True)
class InputCollection:
    """
    A collection M′ of input subsets M′_i ⊆ M_i, one per party of a scenario.

    Members are stored as input indices of the parent scenario.
    """
    scenario: Scenario
    members: tuple[frozenset[int], ...]

    def __post_init__(self):
        if len(self.members) != self.scenario.n_parties:
            raise ScenarioError("An input collection needs one subset per party")
        for i, subset in enumerate(self.members):
            if any(x < 0 or x >= len(self.scenario.inputs[i]) for x in subset):
                raise ScenarioError(
                    f"Collection holds inputs outside M_i for party {self.scenario.parties[i]!r}"
                )

    @classmethod
    def from_mapping(cls, scenario: Scenario, mapping: Mapping[str, Iterable[str]]) -> InputCollection:
        """Parties missing from `mapping` get the empty subset."""
        members = [set() for _ in scenario.parties]
        for party, xs in mapping.items():
            i = scenario.party_index(party)
            members[i] = {scenario.input_index(i, x) for x in xs}
        return cls(scenario, tuple(frozenset(m) for m in members))

    @classmethod
    def full(cls, scenario: Scenario) -> InputCollection:
        return cls(scenario, tuple(frozenset(range(len(m))) for m in scenario.inputs))

    @classmethod
    def empty(cls, scenario: Scenario) -> InputCollection:
        return cls(scenario, tuple(frozenset() for _ in scenario.inputs))

    @classmethod
    def of_parties(cls, scenario: Scenario, parties: Iterable[str]) -> InputCollection:
        """M^{I′}: every input of the parties in I′, nothing elsewhere."""
        chosen = {scenario.party_index(p) for p in parties}
        return cls(scenario, tuple(
            frozenset(range(len(m))) if i in chosen else frozenset()
            for i, m in enumerate(scenario.inputs)
        ))

    @classmethod
    def first_inputs(cls, scenario: Scenario, counts: Sequence[int]) -> InputCollection:
        """The first `counts[i]` inputs of every party i."""
        if len(counts) != scenario.n_parties:
            raise ScenarioError("One count per party is required")
        for i, k in enumerate(counts):
            if k < 0 or k > len(scenario.inputs[i]):
                raise ScenarioError(
                    f"Party {scenario.parties[i]!r} has {len(scenario.inputs[i])} inputs, cannot take {k}"
                )
        return cls(scenario, tuple(frozenset(range(k)) for k in counts))

    @property
    def is_full(self) -> bool:
        return all(len(s) == len(m) for s, m in zip(self.members, self.scenario.inputs))

    @property
    def is_empty(self) -> bool:
        return not any(self.members)

    @property
    def is_redundant(self) -> bool:
        return self.is_full or self.is_empty

    @property
    def is_party_blocks(self) -> bool:
        """True when every M′_i is either empty or the whole of M_i."""
        return all(not s or len(s) == len(m) for s, m in zip(self.members, self.scenario.inputs))

    def complement(self) -> InputCollection:
        return InputCollection(self.scenario, tuple(
            frozenset(range(len(m))) - s for s, m in zip(self.members, self.scenario.inputs)
        ))

    def intersection(self, other: InputCollection) -> InputCollection:
        self._check_same_scenario(other)
        return InputCollection(self.scenario, tuple(a & b for a, b in zip(self.members, other.members)))

    def kept(self) -> tuple[tuple[int, tuple[int, ...]], ...]:
        """(party index, sorted input indices) for the parties with M′_i nonempty."""
        return tuple((i, tuple(sorted(s))) for i, s in enumerate(self.members) if s)

    def within(self, target: InputCollection) -> InputCollection:
        """This collection intersected with `target`, re-indexed onto S restricted to `target`."""
        self._check_same_scenario(target)
        restricted = restrict_scenario(self.scenario, target)
        members = []
        for i, xs in target.kept():
            members.append(frozenset(k for k, x in enumerate(xs) if x in self.members[i]))
        return InputCollection(restricted, tuple(members))

    def partition(self, context: Context) -> ContextPartition:
        inside = frozenset(i for i, x in enumerate(context) if x in self.members[i])
        return ContextPartition(inside, frozenset(range(len(context))) - inside)

    def to_mapping(self) -> dict[str, list[str]]:
        return {
            self.scenario.parties[i]: [self.scenario.inputs[i][x] for x in sorted(s)]
            for i, s in enumerate(self.members) if s
        }

    def key(self) -> str:
        return "|".join(
            f"{p}{{{','.join(self.scenario.inputs[i][x] for x in sorted(s))}}}"
            for i, (p, s) in enumerate(zip(self.scenario.parties, self.members))
        )

    def _check_same_scenario(self, other: InputCollection) -> None:
        if other.scenario != self.scenario:
            raise ScenarioError("Collections belong to different scenarios")

    def __le__(self, other: InputCollection) -> bool:
        self._check_same_scenario(other)
        return all(a <= b for a, b in zip(self.members, other.members))

    def __lt__(self, other: InputCollection) -> bool:
        return self <= other and self != other

    def __ge__(self, other: InputCollection) -> bool:
        return other <= self

    def __gt__(self, other: InputCollection) -> bool:
        return other < self


class Bipartition(NamedTuple):
    """(S_{|M′}, S_{|M′⊥}); a side is None when its collection is empty."""
    inner: Scenario | None
    outer: Scenario | None

    @property
    def redundant(self) -> bool:
        return self.inner is None or self.outer is None


def restrict_scenario(scenario: Scenario, collection: InputCollection) -> Scenario:
    """
    Restrict a scenario to an input collection.

    Args:
        scenario (Scenario): The parent scenario S.
        collection (InputCollection): M′, valid for S.

    Returns:
        Scenario: S_{|M′}, keeping parties with M′_i nonempty and their inputs in order.

    Raises:
        ScenarioError: If every M′_i is empty ("empty restriction") or M′ belongs elsewhere.
    """
    if collection.scenario != scenario:
        raise ScenarioError("Collection does not belong to this scenario")
    if collection.is_empty:
        raise ScenarioError("empty restriction")
    kept = collection.kept()
    return Scenario(
        parties=tuple(scenario.parties[i] for i, _ in kept),
        inputs=tuple(tuple(scenario.inputs[i][x] for x in xs) for i, xs in kept),
        outputs=tuple(tuple(scenario.outputs[i][x] for x in xs) for i, xs in kept),
    )


def complement(scenario: Scenario, collection: InputCollection) -> InputCollection:
    if collection.scenario != scenario:
        raise ScenarioError("Collection does not belong to this scenario")
    return collection.complement()


def bipartition(scenario: Scenario, collection: InputCollection) -> Bipartition:
    """Split S into S_{|M′} and S_{|M′⊥}; redundant splits carry None on the empty side."""
    perp = complement(scenario, collection)
    inner = None if collection.is_empty else restrict_scenario(scenario, collection)
    outer = None if perp.is_empty else restrict_scenario(scenario, perp)
    return Bipartition(inner, outer)


def all_collections(scenario: Scenario, nontrivial: bool = False) -> Iterator[InputCollection]:
    """
    Yield every input collection of a scenario.

    Order: parties vary slowest-first as in itertools.product; within a party the
    subsets follow their bitmask value (bit j set means input j is included).
    With `nontrivial=True` the full and the empty collection are skipped.
    """
    per_party = [
        [frozenset(j for j in range(len(m)) if mask >> j & 1) for mask in range(2 ** len(m))]
        for m in scenario.inputs
    ]
    for members in itertools.product(*per_party):
        collection = InputCollection(scenario, tuple(members))
        if nontrivial and collection.is_redundant:
            continue
        yield collection


def collection_count(scenario: Scenario) -> int:
    return prod(2 ** len(m) for m in scenario.inputs)


def ambient_dimension(scenario: Scenario) -> int:
    return scenario.ambient_dimension


def full_dimension(scenario: Scenario) -> int:
    return scenario.full_dimension


def pironio_dimension(scenario: Scenario) -> int:
    return scenario.pironio_dimension
