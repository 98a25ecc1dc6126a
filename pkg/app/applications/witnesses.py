"""
Device-independent witnesses of inseparability with respect to collections of party
subsets, and the NS₂ and Svetlichny sets of three-party scenarios.

A behaviour outside PD(S, M^{I′}) cannot come from local measurements on a state that
is separable with respect to I′. The report only states behaviour-set membership; the
converse (membership implying separability) does not hold.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from app.logger import logger

from app.applications.inequalities import ShapeMismatchError
from app.behaviour import Behaviour
from app.exactgeom import MembershipCertificate
from app.polytopes import bell_vertices, e_vertices, membership, pd_vertices
from app.product import set_product
from app.scenario import InputCollection, Scenario, ScenarioError, bipartition
from app.utils.parallel import fan_out
from app.vertexset import VertexSet


@dataclass(frozen=True)
class PartySubsetCollection:
    """A collection of nonempty party subsets, each given by party identifiers."""
    subsets: tuple[frozenset[str], ...]

    def __post_init__(self):
        if not self.subsets:
            raise ScenarioError("A party subset collection needs at least one subset")
        if any(not s for s in self.subsets):
            raise ScenarioError("Party subsets must be nonempty")

    @classmethod
    def of(cls, subsets: Iterable[Iterable[str]]) -> PartySubsetCollection:
        return cls(tuple(frozenset(s) for s in subsets))

    @classmethod
    def maximal(cls, scenario: Scenario) -> PartySubsetCollection:
        """The |I| singletons."""
        return cls(tuple(frozenset({p}) for p in scenario.parties))


def _label(subset: frozenset[str], scenario: Scenario) -> str:
    return "{" + ",".join(p for p in scenario.parties if p in subset) + "}"


@dataclass(frozen=True)
class SubsetVerdict:
    parties: frozenset[str]
    collection: InputCollection
    certificate: MembershipCertificate

    @property
    def inside(self) -> bool:
        return self.certificate.inside


@dataclass(frozen=True)
class InseparabilityReport:
    """
    Membership of a behaviour in PD(S, M^{I′}) for every I′, and in the intersection,
    the union and the convex hull of the union of those polytopes.
    """
    scenario: Scenario
    verdicts: tuple[SubsetVerdict, ...]
    convex_hull: MembershipCertificate

    @property
    def in_intersection(self) -> bool:
        return all(v.inside for v in self.verdicts)

    @property
    def in_union(self) -> bool:
        return any(v.inside for v in self.verdicts)

    @property
    def in_convex_hull(self) -> bool:
        return self.convex_hull.inside

    @property
    def inseparable_wrt(self) -> tuple[frozenset[str], ...]:
        """Subsets I′ for which I′-inseparability is witnessed."""
        return tuple(v.parties for v in self.verdicts if not v.inside)

    @property
    def weakly_inseparable(self) -> bool:
        return not self.in_intersection

    @property
    def inseparable(self) -> bool:
        return not self.in_union

    @property
    def strongly_inseparable(self) -> bool:
        return not self.in_convex_hull

    def ladder(self) -> list[str]:
        """Witness statements that hold, weakest first."""
        statements = [f"{_label(s, self.scenario)}-inseparable" for s in self.inseparable_wrt]
        if self.weakly_inseparable:
            statements.append("weakly inseparable")
        if self.inseparable:
            statements.append("inseparable")
        if self.strongly_inseparable:
            statements.append("strongly inseparable")
        return statements


def inseparability_report(
    wp: Behaviour,
    subsets: PartySubsetCollection,
    budget: int | None = None,
    threads: int | None = None
) -> InseparabilityReport:
    """
    Check a behaviour against PD(S, M^{I′}) for every I′ in the collection.

    Returns:
        InseparabilityReport: Per-subset certificates plus the certificate against the
        merged vertex list of all the polytopes.
    """
    S = wp.scenario
    collections = [InputCollection.of_parties(S, s) for s in subsets.subsets]
    vertex_sets = fan_out(lambda c: pd_vertices(S, c, budget), collections, threads)
    certificates = fan_out(lambda vs: membership(wp, vs), vertex_sets, threads)
    verdicts = tuple(
        SubsetVerdict(s, c, cert) for s, c, cert in zip(subsets.subsets, collections, certificates)
    )
    merged = vertex_sets[0].union(*vertex_sets[1:])
    report = InseparabilityReport(S, verdicts, membership(wp, merged))
    logger.info(f"Inseparability report: {report.ladder() or ['no witness']}")
    return report


def _require_tripartite(scenario: Scenario) -> None:
    if scenario.n_parties != 3:
        raise ShapeMismatchError("This set is defined for three-party scenarios")


def ns2_vertices(scenario: Scenario, budget: int | None = None) -> VertexSet:
    """Vertices of the union of PD(S, M^{i}) over the three single parties."""
    _require_tripartite(scenario)
    parts = [pd_vertices(scenario, InputCollection.of_parties(scenario, [p]), budget) for p in scenario.parties]
    return parts[0].union(*parts[1:])


def svetlichny_vertices(scenario: Scenario, budget: int | None = None) -> VertexSet:
    """
    Vertices of the union over single parties i of B(S^{i}) ⊙ E(S^{rest}).

    The predictable factor may signal; the product is taken on whole-party blocks.
    """
    _require_tripartite(scenario)
    parts: list[VertexSet] = []
    for p in scenario.parties:
        collection = InputCollection.of_parties(scenario, [p])
        sides = bipartition(scenario, collection)
        parts.append(set_product(
            bell_vertices(sides.inner, budget), e_vertices(sides.outer, budget), scenario, collection
        ))
    return parts[0].union(*parts[1:])
