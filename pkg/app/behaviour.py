"""
Exact-rational behaviour tables wp(a|x) and the predicates, marginals and maps acting on them.

Values are stored as a flat tuple of Fractions in the scenario's canonical layout
(contexts in product order, outcomes in product order within a context).
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from app.scenario import Context, InputCollection, Outcome, Scenario, ScenarioError, restrict_scenario

ZERO = Fraction(0)
ONE = Fraction(1)


class BehaviourError(ValueError):
    """Raised when a behaviour table is malformed or behaviours do not fit together."""


class SignallingError(BehaviourError):
    """Raised when an operation defined on no-signalling behaviours receives a signalling one."""


def _as_fraction(value) -> Fraction:
    return value if type(value) is Fraction else Fraction(value)


class BehaviourVector(NamedTuple):
    """Flat vector of a behaviour with the (context ids, outcome ids) of every entry."""
    layout: tuple[tuple[tuple[str, ...], tuple[str, ...]], ...]
    entries: tuple[Fraction, ...]


@dataclass(frozen=True)
class Behaviour:
    """
    A behaviour on a scenario: a normalised distribution over outcomes for every context.

    Attributes:
        scenario (Scenario): The scenario the table lives on.
        values (tuple[Fraction, ...]): Probabilities in canonical layout order.
    """
    scenario: Scenario
    values: tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(_as_fraction(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if len(values) != self.scenario.ambient_dimension:
            raise BehaviourError(
                f"Expected {self.scenario.ambient_dimension} probabilities, got {len(values)}"
            )
        for k, v in enumerate(values):
            if v < 0:
                context, outcome = self.scenario.layout[k]
                raise BehaviourError(
                    f"Negative probability {v} at context {self.scenario.context_ids(context)}, "
                    f"outcome {self.scenario.outcome_ids(context, outcome)}"
                )
        for context, coordinates in self.scenario.context_slices.items():
            total = sum((values[k] for k in coordinates), ZERO)
            if total != 1:
                raise BehaviourError(
                    f"Context {self.scenario.context_ids(context)} sums to {total}, not 1"
                )

    @classmethod
    def from_function(cls, scenario: Scenario, fn: Callable[[Context, Outcome], object]) -> Behaviour:
        return cls(scenario, tuple(_as_fraction(fn(x, a)) for x, a in scenario.layout))

    @classmethod
    def from_table(
        cls,
        scenario: Scenario,
        table: Mapping[Sequence[str], Mapping[Sequence[str], object]]
    ) -> Behaviour:
        """
        Build a behaviour from a table keyed by input identifiers and output identifiers.

        Missing outcomes count as probability 0; unknown identifiers are rejected.
        """
        values = [ZERO] * scenario.ambient_dimension
        for context_ids, row in table.items():
            context = tuple(scenario.input_index(i, x) for i, x in enumerate(context_ids))
            if len(context) != scenario.n_parties:
                raise BehaviourError(f"Context {tuple(context_ids)} does not name every party")
            for outcome_ids, p in row.items():
                outcome = tuple(
                    scenario.output_index(i, context[i], a) for i, a in enumerate(outcome_ids)
                )
                if len(outcome) != scenario.n_parties:
                    raise BehaviourError(f"Outcome {tuple(outcome_ids)} does not name every party")
                values[scenario.coordinate(context, outcome)] = _as_fraction(p)
        return cls(scenario, tuple(values))

    @classmethod
    def from_vector(cls, scenario: Scenario, vector: BehaviourVector) -> Behaviour:
        expected = tuple(
            (scenario.context_ids(x), scenario.outcome_ids(x, a)) for x, a in scenario.layout
        )
        if tuple(vector.layout) != expected:
            raise BehaviourError("Vector layout does not match the scenario's canonical layout")
        return cls(scenario, tuple(vector.entries))

    def to_vector(self) -> BehaviourVector:
        layout = tuple(
            (self.scenario.context_ids(x), self.scenario.outcome_ids(x, a)) for x, a in self.scenario.layout
        )
        return BehaviourVector(layout, self.values)

    def probability(self, context: Context, outcome: Outcome) -> Fraction:
        return self.values[self.scenario.coordinate(context, outcome)]

    def distribution(self, context: Context) -> dict[Outcome, Fraction]:
        coordinates = self.scenario.context_slices[context]
        return dict(zip(self.scenario.outcomes(context), (self.values[k] for k in coordinates)))

    @property
    def table(self) -> dict[tuple[str, ...], dict[tuple[str, ...], Fraction]]:
        return {
            self.scenario.context_ids(x): {
                self.scenario.outcome_ids(x, a): p for a, p in self.distribution(x).items()
            }
            for x in self.scenario.contexts
        }


class SignallingWitness(NamedTuple):
    """One violated single-party no-signalling constraint."""
    party: str
    input: str
    other_input: str
    others_context: tuple[str, ...]
    others_outcome: tuple[str, ...]
    value: Fraction
    other_value: Fraction


class NoSignallingCheck(NamedTuple):
    holds: bool
    witness: SignallingWitness | None = None

    def __bool__(self) -> bool:
        return self.holds


def _party_indices(scenario: Scenario, parties: Iterable[int | str]) -> tuple[int, ...]:
    indices = set()
    for p in parties:
        if isinstance(p, str):
            indices.add(scenario.party_index(p))
        elif 0 <= p < scenario.n_parties:
            indices.add(p)
        else:
            raise ScenarioError(f"Party index {p} out of range")
    return tuple(sorted(indices))


def marginal(wp: Behaviour, parties: Iterable[int | str], context: Context) -> dict[Outcome, Fraction]:
    """
    Marginal distribution of the outcomes of a party subset V within a full context.

    Args:
        wp (Behaviour): The behaviour.
        parties (Iterable[int | str]): V, as indices or identifiers. Empty V gives {(): 1}.
        context (Context): A full context of the scenario.

    Returns:
        dict[Outcome, Fraction]: Probabilities of a_V, keyed by outcome indices of V in order.
    """
    V = _party_indices(wp.scenario, parties)
    if tuple(context) not in wp.scenario.context_slices:
        raise BehaviourError(f"{tuple(context)} is not a context of the scenario")
    result: dict[Outcome, Fraction] = defaultdict(Fraction)
    for a, p in wp.distribution(tuple(context)).items():
        result[tuple(a[i] for i in V)] += p
    return dict(result)


def marginal_at(wp: Behaviour, parties: Sequence[int], inputs: Sequence[int]) -> dict[Outcome, Fraction]:
    """
    Marginal of `parties` when they use `inputs`; the other parties take their first input.

    Only meaningful for no-signalling behaviours, where the choice of the completion
    does not matter.
    """
    context = [0] * wp.scenario.n_parties
    for i, x in zip(parties, inputs):
        context[i] = x
    return marginal(wp, parties, tuple(context))


def is_no_signalling(wp: Behaviour) -> NoSignallingCheck:
    """
    Check every single-party no-signalling constraint exactly.

    The marginal of I∖{i} must not depend on x_i, for every party i. Those constraints
    imply the ones for larger party subsets.

    Returns:
        NoSignallingCheck: `holds` plus, on failure, the first violated constraint.
    """
    S = wp.scenario
    for i in range(S.n_parties):
        others = [j for j in range(S.n_parties) if j != i]
        for context in S.contexts:
            if context[i] != 0:
                continue
            reference = marginal(wp, others, context)
            for x_alt in range(1, len(S.inputs[i])):
                alt_context = context[:i] + (x_alt,) + context[i + 1:]
                alternative = marginal(wp, others, alt_context)
                for a_rest in reference.keys() | alternative.keys():
                    left, right = reference.get(a_rest, ZERO), alternative.get(a_rest, ZERO)
                    if left != right:
                        rest_context = tuple(context[j] for j in others)
                        return NoSignallingCheck(False, SignallingWitness(
                            party=S.parties[i],
                            input=S.inputs[i][0],
                            other_input=S.inputs[i][x_alt],
                            others_context=tuple(S.inputs[j][x] for j, x in zip(others, rest_context)),
                            others_outcome=tuple(
                                S.outputs[j][x][a] for j, x, a in zip(others, rest_context, a_rest)
                            ),
                            value=left,
                            other_value=right,
                        ))
    return NoSignallingCheck(True)


def project(wp: Behaviour, collection: InputCollection) -> Behaviour:
    """Marginalise onto S_{|M′} without the no-signalling check (first-input completion)."""
    S = wp.scenario
    restricted = restrict_scenario(S, collection)
    kept = collection.kept()
    parties = [i for i, _ in kept]
    cache: dict[Context, dict[Outcome, Fraction]] = {}

    def value(context: Context, outcome: Outcome) -> Fraction:
        if context not in cache:
            cache[context] = marginal_at(wp, parties, [xs[k] for (_, xs), k in zip(kept, context)])
        return cache[context].get(outcome, ZERO)

    return Behaviour.from_function(restricted, value)


def restrict_behaviour(wp: Behaviour, collection: InputCollection) -> Behaviour:
    """
    Apply the restriction map R_{|M′} to a no-signalling behaviour.

    Args:
        wp (Behaviour): A no-signalling behaviour on S.
        collection (InputCollection): M′ with at least one nonempty M′_i.

    Returns:
        Behaviour: The image on S_{|M′}, obtained by summing out dropped parties and
        dropping contexts that use inputs outside M′.

    Raises:
        SignallingError: If wp is signalling (its marginals are ill-defined).
        ScenarioError: If M′ is empty or belongs to another scenario.
    """
    if collection.scenario != wp.scenario:
        raise ScenarioError("Collection does not belong to the behaviour's scenario")
    if collection.is_full:
        return wp
    check = is_no_signalling(wp)
    if not check.holds:
        raise SignallingError(f"Cannot restrict a signalling behaviour: {check.witness}")
    return project(wp, collection)


def mix(weighted: Iterable[tuple[object, Behaviour]]) -> Behaviour:
    """
    Convex combination of behaviours on one scenario.

    Raises:
        BehaviourError: On an empty list, negative weights, weights not summing to 1, or
            behaviours from different scenarios.
    """
    pairs = [(_as_fraction(w), b) for w, b in weighted]
    if not pairs:
        raise BehaviourError("Nothing to mix")
    if any(w < 0 for w, _ in pairs):
        raise BehaviourError("Mixture weights must be nonnegative")
    total = sum((w for w, _ in pairs), ZERO)
    if total != 1:
        raise BehaviourError(f"Mixture weights sum to {total}, not 1")
    scenario = pairs[0][1].scenario
    if any(b.scenario != scenario for _, b in pairs):
        raise BehaviourError("Cannot mix behaviours from different scenarios")
    values = [ZERO] * scenario.ambient_dimension
    for w, b in pairs:
        if w:
            for k, v in enumerate(b.values):
                if v:
                    values[k] += w * v
    return Behaviour(scenario, tuple(values))


def is_predictable(wp: Behaviour) -> bool:
    return all(v == 0 or v == 1 for v in wp.values)


def _factorises(joint: Mapping[Outcome, Fraction], groups: Sequence[Sequence[int]]) -> bool:
    factors = []
    for group in groups:
        m: dict[Outcome, Fraction] = defaultdict(Fraction)
        for a, p in joint.items():
            m[tuple(a[i] for i in group)] += p
        factors.append(m)
    return all(
        p == prod((f.get(tuple(a[i] for i in g), ZERO) for f, g in zip(factors, groups)), start=ONE)
        for a, p in joint.items()
    )


def is_uncorrelated(wp: Behaviour) -> bool:
    """True when wp(a|x) = prod_i wp(a_i|x) in every context."""
    singletons = [[i] for i in range(wp.scenario.n_parties)]
    return all(_factorises(wp.distribution(x), singletons) for x in wp.scenario.contexts)


def is_partially_predictable(wp: Behaviour, collection: InputCollection) -> bool:
    """
    Partial predictability w.r.t. M′: in every context, the marginal of F_x is 0/1-valued.

    Checking the maximal marginal F_x suffices; smaller marginals of a 0/1 distribution
    are 0/1 as well.
    """
    if collection.scenario != wp.scenario:
        raise ScenarioError("Collection does not belong to the behaviour's scenario")
    for context in wp.scenario.contexts:
        inside = collection.partition(context).inside
        if inside and not all(p == 0 or p == 1 for p in marginal(wp, inside, context).values()):
            return False
    return True


def is_partially_uncorrelated(wp: Behaviour, collection: InputCollection) -> bool:
    """True when every context factorises across F_x and I∖F_x."""
    if collection.scenario != wp.scenario:
        raise ScenarioError("Collection does not belong to the behaviour's scenario")
    for context in wp.scenario.contexts:
        inside, outside = collection.partition(context)
        if inside and outside:
            groups = [sorted(inside), sorted(outside)]
            # outcome tuples are indexed by party, so group by party positions
            if not _factorises(wp.distribution(context), groups):
                return False
    return True


def uniform_behaviour(scenario: Scenario) -> Behaviour:
    return Behaviour.from_function(
        scenario, lambda x, a: Fraction(1, len(scenario.outcomes(x)))
    )


def deterministic_behaviour(scenario: Scenario, strategy: Sequence[Sequence[int]]) -> Behaviour:
    """Local deterministic behaviour: party i answers `strategy[i][x_i]` on input x_i."""
    if len(strategy) != scenario.n_parties:
        raise BehaviourError("A strategy needs one output assignment per party")
    for i, answers in enumerate(strategy):
        if len(answers) != len(scenario.inputs[i]) or any(
            not 0 <= a < len(scenario.outputs[i][x]) for x, a in enumerate(answers)
        ):
            raise BehaviourError(f"Invalid strategy for party {scenario.parties[i]!r}: {answers}")
    return Behaviour.from_function(
        scenario,
        lambda x, a: ONE if all(strategy[i][xi] == ai for i, (xi, ai) in enumerate(zip(x, a))) else ZERO
    )


@dataclass(frozen=True)
class Relabeling:
    """
    A relabeling of inputs and outputs, party by party.

    Attributes:
        inputs (tuple[tuple[int, ...], ...]): inputs[i][x] is the new index of input x of party i.
        outputs (tuple[tuple[tuple[int, ...], ...], ...]): outputs[i][x][a] is the new index
            of output a of (old) input x of party i.
    """
    inputs: tuple[tuple[int, ...], ...]
    outputs: tuple[tuple[tuple[int, ...], ...], ...]

    @classmethod
    def identity(cls, scenario: Scenario) -> Relabeling:
        return cls(
            inputs=tuple(tuple(range(len(m))) for m in scenario.inputs),
            outputs=tuple(tuple(tuple(range(len(o))) for o in outs) for outs in scenario.outputs),
        )

    def validate(self, scenario: Scenario) -> None:
        if len(self.inputs) != scenario.n_parties or len(self.outputs) != scenario.n_parties:
            raise BehaviourError("Relabeling does not match the number of parties")
        for i in range(scenario.n_parties):
            n = len(scenario.inputs[i])
            if sorted(self.inputs[i]) != list(range(n)) or len(self.outputs[i]) != n:
                raise BehaviourError(f"Invalid input relabeling for party {scenario.parties[i]!r}")
            for x in range(n):
                k = len(scenario.outputs[i][x])
                if sorted(self.outputs[i][x]) != list(range(k)):
                    raise BehaviourError(f"Invalid output relabeling for party {scenario.parties[i]!r}")
                if len(scenario.outputs[i][self.inputs[i][x]]) != k:
                    raise BehaviourError("Relabeled inputs must carry equally many outputs")

    def coordinate_map(self, scenario: Scenario) -> list[int]:
        """New coordinate of every old coordinate."""
        self.validate(scenario)
        return [
            scenario.coordinate(
                tuple(self.inputs[i][xi] for i, xi in enumerate(x)),
                tuple(self.outputs[i][xi][ai] for i, (xi, ai) in enumerate(zip(x, a))),
            )
            for x, a in scenario.layout
        ]

    def apply(self, scenario: Scenario, values: Sequence[Fraction]) -> tuple[Fraction, ...]:
        mapping = self.coordinate_map(scenario)
        moved = [ZERO] * len(values)
        for old, new in enumerate(mapping):
            moved[new] = values[old]
        return tuple(moved)

    def apply_behaviour(self, wp: Behaviour) -> Behaviour:
        return Behaviour(wp.scenario, self.apply(wp.scenario, wp.values))


def all_relabelings(scenario: Scenario) -> Iterable[Relabeling]:
    """Every combination of input permutations and per-input output permutations."""
    per_party = []
    for i in range(scenario.n_parties):
        options = []
        n = len(scenario.inputs[i])
        for input_perm in itertools.permutations(range(n)):
            output_choices = [itertools.permutations(range(len(o))) for o in scenario.outputs[i]]
            for output_perms in itertools.product(*output_choices):
                options.append((tuple(input_perm), tuple(output_perms)))
        per_party.append(options)
    for choice in itertools.product(*per_party):
        relabeling = Relabeling(
            inputs=tuple(c[0] for c in choice),
            outputs=tuple(c[1] for c in choice),
        )
        try:
            relabeling.validate(scenario)
        except BehaviourError:
            continue
        yield relabeling
