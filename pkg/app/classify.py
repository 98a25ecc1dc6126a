"""
Equivalence classes of partially deterministic polytopes.

PD(S, M′) is determined by its maximal solid fragment: the inputs of the complement
M′⊥ held by parties with at least two non-deterministic inputs, provided at least two
parties keep such inputs. Otherwise the fragment is bottom and PD(S, M′) = B(S).
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from enum import Enum

from app.logger import logger

from app.config import Settings
from app.exactgeom import BudgetExceededError
from app.polytopes import pd_vertices
from app.scenario import InputCollection, Scenario, ScenarioError, all_collections, collection_count
from app.utils.parallel import fan_out

BOTTOM_KEY = "⊥"


class Relation(str, Enum):
    EQUAL = "equal"
    SUBSET = "subset"
    SUPERSET = "superset"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class Msf:
    """Maximal solid fragment; `fragment` is None for bottom."""
    fragment: InputCollection | None

    @property
    def is_bottom(self) -> bool:
        return self.fragment is None

    def key(self) -> str:
        return BOTTOM_KEY if self.fragment is None else self.fragment.key()


def msf(scenario: Scenario, collection: InputCollection) -> Msf:
    if collection.scenario != scenario:
        raise ScenarioError("Collection does not belong to this scenario")
    minimal = tuple(s if len(s) >= 2 else frozenset() for s in collection.complement().members)
    if sum(1 for s in minimal if s) < 2:
        return Msf(None)
    return Msf(InputCollection(scenario, minimal))


def compare_fragments(a: Msf, b: Msf) -> Relation:
    """Relation between the polytopes whose fragments are a and b."""
    if a.is_bottom and b.is_bottom:
        return Relation.EQUAL
    if a.is_bottom:
        return Relation.SUBSET
    if b.is_bottom:
        return Relation.SUPERSET
    if a.fragment == b.fragment:
        return Relation.EQUAL
    if a.fragment < b.fragment:
        return Relation.SUBSET
    if a.fragment > b.fragment:
        return Relation.SUPERSET
    return Relation.INCOMPARABLE


def compare(scenario: Scenario, first: InputCollection, second: InputCollection) -> Relation:
    """
    Predicted relation between PD(S, first) and PD(S, second), from the fragments alone.

    Returns:
        Relation: SUBSET means PD(S, first) is a strict subset of PD(S, second).
    """
    return compare_fragments(msf(scenario, first), msf(scenario, second))


def is_bell(scenario: Scenario, collection: InputCollection) -> bool:
    return msf(scenario, collection).is_bottom


def is_ns(scenario: Scenario, collection: InputCollection) -> bool:
    return msf(scenario, collection) == msf(scenario, InputCollection.empty(scenario))


def representative(scenario: Scenario, fragment: Msf) -> InputCollection:
    """Largest collection of a class: M*_i = M_i minus the fragment's inputs."""
    full = InputCollection.full(scenario)
    if fragment.is_bottom:
        return full
    return fragment.fragment.complement()


@dataclass(frozen=True)
class ClassRelation:
    other: str
    relation: Relation


@dataclass(frozen=True)
class EquivalenceClass:
    msf: Msf
    members: tuple[InputCollection, ...]
    representative: InputCollection
    relations: tuple[ClassRelation, ...] = ()

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def is_bell(self) -> bool:
        return self.msf.is_bottom


@dataclass(frozen=True)
class ClassificationReport:
    scenario: Scenario
    classes: tuple[EquivalenceClass, ...]

    @property
    def class_count(self) -> int:
        return len(self.classes)

    @property
    def bell_class(self) -> EquivalenceClass:
        return next(c for c in self.classes if c.is_bell)

    @property
    def ns_class(self) -> EquivalenceClass:
        key = msf(self.scenario, InputCollection.empty(self.scenario)).key()
        return next(c for c in self.classes if c.msf.key() == key)

    def class_of(self, collection: InputCollection) -> EquivalenceClass:
        key = msf(self.scenario, collection).key()
        return next(c for c in self.classes if c.msf.key() == key)


def _fragment_weight(fragment: Msf) -> int:
    return 0 if fragment.is_bottom else sum(len(s) for s in fragment.fragment.members)


def classify_all(scenario: Scenario, budget: int | None = None, threads: int | None = None) -> ClassificationReport:
    """
    Group every input collection of S by its maximal solid fragment.

    Classes are ordered bottom first, then by fragment size and key. Each class lists
    its Hasse neighbours: the classes it covers (SUPERSET) and those covering it (SUBSET).

    Raises:
        BudgetExceededError: If S has more collections than the budget allows.
    """
    budget = Settings.COLLECTION_BUDGET if budget is None else budget
    total = collection_count(scenario)
    if total > budget:
        logger.warning(f"Classification needs {total} collections, budget is {budget}")
        raise BudgetExceededError(f"{total} input collections exceed the budget of {budget}", 0)

    collections = list(all_collections(scenario))
    fragments = fan_out(lambda c: msf(scenario, c), collections, threads)
    groups: dict[str, list[InputCollection]] = defaultdict(list)
    by_key: dict[str, Msf] = {}
    for collection, fragment in zip(collections, fragments):
        groups[fragment.key()].append(collection)
        by_key[fragment.key()] = fragment

    keys = sorted(by_key, key=lambda k: (_fragment_weight(by_key[k]), k))
    relation = {(a, b): compare_fragments(by_key[a], by_key[b]) for a in keys for b in keys}

    def covers(low: str, high: str) -> bool:
        return relation[low, high] is Relation.SUBSET and not any(
            relation[low, mid] is Relation.SUBSET and relation[mid, high] is Relation.SUBSET for mid in keys
        )

    classes = []
    for k in keys:
        neighbours = [ClassRelation(other, Relation.SUPERSET) for other in keys if covers(other, k)]
        neighbours += [ClassRelation(other, Relation.SUBSET) for other in keys if covers(k, other)]
        classes.append(EquivalenceClass(
            msf=by_key[k],
            members=tuple(groups[k]),
            representative=representative(scenario, by_key[k]),
            relations=tuple(neighbours),
        ))
    logger.info(f"Classified {total} collections of {scenario.parties} into {len(classes)} classes")
    return ClassificationReport(scenario, tuple(classes))


def relation_of_point_sets(first: frozenset, second: frozenset) -> Relation:
    """Relation between two polytopes given by their vertex point sets."""
    if first == second:
        return Relation.EQUAL
    if first < second:
        return Relation.SUBSET
    if first > second:
        return Relation.SUPERSET
    return Relation.INCOMPARABLE


def vertex_relation(
    scenario: Scenario,
    first: InputCollection,
    second: InputCollection,
    budget: int | None = None
) -> Relation:
    """Relation between PD(S, first) and PD(S, second) from their enumerated vertex sets."""
    return relation_of_point_sets(
        pd_vertices(scenario, first, budget).points_set,
        pd_vertices(scenario, second, budget).points_set,
    )
