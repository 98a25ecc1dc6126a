"""Sequential Wigner's-friend scenarios and their Local Friendliness polytopes."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from app.behaviour import Behaviour
from app.exactgeom import MembershipCertificate
from app.polytopes import membership, pd_vertices
from app.scenario import InputCollection, Scenario, ScenarioError
from app.vertexset import VertexSet


@dataclass(frozen=True)
class SequentialScenario:
    """
    A scenario in which party i's first `queries[i]` inputs ask its friend for the
    friend's recorded outcome; a party with 0 queries has no friend.
    """
    base: Scenario
    queries: tuple[int, ...]

    def __post_init__(self):
        if len(self.queries) != self.base.n_parties:
            raise ScenarioError("One query count per party is required")
        for p, k, m in zip(self.base.parties, self.queries, self.base.inputs):
            if not 0 <= k <= len(m):
                raise ScenarioError(f"Party {p!r} has {len(m)} inputs, cannot have {k} queries")

    @classmethod
    def build(cls, base: Scenario, queries: Mapping[str, int]) -> SequentialScenario:
        counts = [0] * base.n_parties
        for party, k in queries.items():
            counts[base.party_index(party)] = k
        return cls(base, tuple(counts))

    @property
    def friends(self) -> tuple[str, ...]:
        return tuple(p for p, k in zip(self.base.parties, self.queries) if k)


def sequential_to_pd(sw: SequentialScenario) -> tuple[Scenario, InputCollection]:
    """The Local Friendliness set of sw is PD(S, M^Z), with M^Z the query inputs."""
    return sw.base, InputCollection.first_inputs(sw.base, sw.queries)


def lf_vertices(sw: SequentialScenario, budget: int | None = None) -> VertexSet:
    scenario, collection = sequential_to_pd(sw)
    return pd_vertices(scenario, collection, budget)


def lf_membership(wp: Behaviour, sw: SequentialScenario, budget: int | None = None) -> MembershipCertificate:
    scenario, collection = sequential_to_pd(sw)
    if wp.scenario != scenario:
        raise ScenarioError("Behaviour does not live on the sequential scenario's base")
    return membership(wp, "pd", collection, budget)
