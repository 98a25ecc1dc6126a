"""Tagged, canonically ordered vertex lists of behaviour sets."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator

from app.behaviour import Behaviour, BehaviourError
from app.exactgeom import VRep
from app.scenario import InputCollection, Scenario

class Family(str, Enum):
    E = "e"
    BELL = "bell"
    NS = "ns"
    PD = "pd"
    COMPOSED = "composed"

@dataclass(frozen=True)
class VertexSet:
    """
    Vertices of a behaviour set, deduplicated and sorted by their value vectors.

    Attributes:
        scenario (Scenario): Scenario every vertex lives on.
        family (Family): Which construction produced the set.
        vertices (tuple[Behaviour, ...]): The vertices.
        collection (InputCollection | None): M′ for PD sets.
    """
    scenario: Scenario
    family: Family
    vertices: tuple[Behaviour, ...]
    collection: InputCollection | None = None

    @classmethod
    def build(
        cls,
        scenario: Scenario,
        family: Family,
        vertices: Iterable[Behaviour],
        collection: InputCollection | None = None
    ) -> VertexSet:
        unique: dict[tuple[Fraction, ...], Behaviour] = {}
        for v in vertices:
            if v.scenario != scenario:
                raise BehaviourError("Vertex does not belong to the vertex set's scenario")
            unique.setdefault(v.values, v)
        ordered = tuple(unique[k] for k in sorted(unique))
        return cls(scenario, family, ordered, collection)

    def tagged(self, family: Family, collection: InputCollection | None = None) -> VertexSet:
        return VertexSet(self.scenario, family, self.vertices, collection)

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[Behaviour]:
        return iter(self.vertices)

    def __contains__(self, wp: Behaviour) -> bool:
        return wp.scenario == self.scenario and wp.values in self.points_set

    @cached_property
    def points_set(self) -> frozenset[tuple[Fraction, ...]]:
        return frozenset(v.values for v in self.vertices)

    @property
    def points(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(v.values for v in self.vertices)

    @property
    def vrep(self) -> VRep:
        return VRep(self.scenario.ambient_dimension, self.points)

    def union(self, *others: VertexSet) -> VertexSet:
        """Merged vertex list (the extreme points of the convex hull of a union are among them)."""
        if any(o.scenario != self.scenario for o in others):
            raise BehaviourError("Cannot merge vertex sets of different scenarios")
        return VertexSet.build(
            self.scenario, Family.COMPOSED, (v for s in (self, *others) for v in s.vertices)
        )

    def issubset(self, other: VertexSet) -> bool:
        return self.scenario == other.scenario and self.points_set <= other.points_set

    def same_points(self, other: VertexSet) -> bool:
        return self.scenario == other.scenario and self.points_set == other.points_set

    @property
    def label(self) -> str:
        if self.family is Family.PD and self.collection is not None:
            return f"pd[{self.collection.key()}]"
        return self.family.value
