"""
Vertex sets of the predictable set E(S), the Bell polytope B(S), the no-signalling
polytope NS(S) and the partially deterministic polytopes PD(S, M′), plus membership
queries against any of them.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import prod

from app.logger import logger

from app.behaviour import Behaviour, deterministic_behaviour
from app.config import Settings
from app.exactgeom import (
    AffineEquality,
    AffineFunctional,
    BudgetExceededError,
    HRep,
    MembershipCertificate,
    lp_membership,
    vertices_from_hrep,
)
from app.product import set_product
from app.scenario import InputCollection, Scenario, ScenarioError, bipartition
from app.vertexset import Family, VertexSet

ONE = Fraction(1)


def _check_budget(count: int, budget: int | None, what: str) -> None:
    budget = Settings.VERTEX_BUDGET if budget is None else budget
    if count > budget:
        logger.warning(f"{what}: {count} vertices exceed the budget of {budget}")
        raise BudgetExceededError(f"{what} has {count} vertices, budget is {budget}", 0)


def e_vertices(scenario: Scenario, budget: int | None = None) -> VertexSet:
    """Every predictable behaviour: one outcome fixed per context, possibly signalling."""
    count = prod(len(scenario.outcomes(x)) for x in scenario.contexts)
    _check_budget(count, budget, "E(S)")
    slices = [scenario.context_slices[x] for x in scenario.contexts]
    d = scenario.ambient_dimension
    vertices = []
    for choice in itertools.product(*slices):
        values = [Fraction(0)] * d
        for k in choice:
            values[k] = ONE
        vertices.append(Behaviour(scenario, tuple(values)))
    return VertexSet.build(scenario, Family.E, vertices)


def bell_vertices(scenario: Scenario, budget: int | None = None) -> VertexSet:
    """Local deterministic behaviours: one output per input, chosen independently per party."""
    count = prod(len(o) for outs in scenario.outputs for o in outs)
    _check_budget(count, budget, "B(S)")
    per_party = [itertools.product(*(range(len(o)) for o in outs)) for outs in scenario.outputs]
    vertices = [deterministic_behaviour(scenario, strategy) for strategy in itertools.product(*per_party)]
    return VertexSet.build(scenario, Family.BELL, vertices)


def ns_hrep(scenario: Scenario) -> HRep:
    """Positivity, normalisation and single-party no-signalling constraints."""
    d = scenario.ambient_dimension

    def unit(k: int, sign: int = 1) -> list[Fraction]:
        row = [Fraction(0)] * d
        row[k] = Fraction(sign)
        return row

    inequalities = tuple(AffineFunctional(tuple(unit(k, -1)), 0) for k in range(d))
    equalities = []
    for x in scenario.contexts:
        row = [Fraction(0)] * d
        for k in scenario.context_slices[x]:
            row[k] = ONE
        equalities.append(AffineEquality(tuple(row), ONE))
    for i in range(scenario.n_parties):
        others = [j for j in range(scenario.n_parties) if j != i]
        for x in scenario.contexts:
            if x[i] != 0:
                continue
            for alt in range(1, len(scenario.inputs[i])):
                y = x[:i] + (alt,) + x[i + 1:]
                rows: dict[tuple[int, ...], list[Fraction]] = {}
                for context, sign in ((x, 1), (y, -1)):
                    for a in scenario.outcomes(context):
                        rest = tuple(a[j] for j in others)
                        row = rows.setdefault(rest, [Fraction(0)] * d)
                        row[scenario.coordinate(context, a)] += sign
                equalities.extend(AffineEquality(tuple(r), Fraction(0)) for r in rows.values())
    return HRep(d, inequalities, tuple(equalities))


def ns_vertices(scenario: Scenario, budget: int | None = None) -> VertexSet:
    """
    Vertices of the no-signalling polytope.

    With at most one multi-input party NS(S) = B(S). Otherwise the single-input parties V
    split off as NS(S) = B(S_V) ⊙ NS(S_rest); what remains goes through exact vertex
    enumeration of the H-representation.

    Raises:
        BudgetExceededError: If the enumeration outgrows the budget.
    """
    if len(scenario.multi_input_parties) <= 1:
        return bell_vertices(scenario, budget).tagged(Family.NS)
    single = [scenario.parties[i] for i in range(scenario.n_parties) if len(scenario.inputs[i]) == 1]
    if single:
        collection = InputCollection.of_parties(scenario, single)
        sides = bipartition(scenario, collection)
        composed = set_product(
            bell_vertices(sides.inner, budget), ns_vertices(sides.outer, budget), scenario, collection
        )
        return composed.tagged(Family.NS)

    vrep = vertices_from_hrep(ns_hrep(scenario), Settings.VERTEX_BUDGET if budget is None else budget)
    vertices = VertexSet.build(scenario, Family.NS, (Behaviour(scenario, p) for p in vrep.points))
    logger.info(f"NS(S) for {scenario.parties} has {len(vertices)} vertices")
    return vertices


def pd_vertices(scenario: Scenario, collection: InputCollection, budget: int | None = None) -> VertexSet:
    """
    Vertices of PD(S, M′): products of Bell vertices on S restricted to M′ with
    no-signalling vertices on S restricted to the complement.

    Args:
        scenario (Scenario): S.
        collection (InputCollection): M′.
        budget (int | None): Vertex budget passed to the NS enumeration.

    Returns:
        VertexSet: Tagged PD with the collection; M′ = M gives B(S) and M′ = ∅ gives NS(S).
    """
    if collection.scenario != scenario:
        raise ScenarioError("Collection does not belong to this scenario")
    if collection.is_full:
        result = bell_vertices(scenario, budget)
    elif collection.is_empty:
        result = ns_vertices(scenario, budget)
    else:
        sides = bipartition(scenario, collection)
        result = set_product(
            bell_vertices(sides.inner, budget), ns_vertices(sides.outer, budget), scenario, collection
        )
    logger.info(f"PD(S, {collection.key()}) has {len(result)} vertices")
    return result.tagged(Family.PD, collection)


def vertex_set(
    scenario: Scenario,
    family: Family | str,
    collection: InputCollection | None = None,
    budget: int | None = None
) -> VertexSet:
    family = Family(family)
    if family is Family.E:
        return e_vertices(scenario, budget)
    if family is Family.BELL:
        return bell_vertices(scenario, budget)
    if family is Family.NS:
        return ns_vertices(scenario, budget)
    if family is Family.PD:
        if collection is None:
            raise ScenarioError("The pd family needs an input collection")
        return pd_vertices(scenario, collection, budget)
    raise ScenarioError(f"Family {family.value!r} cannot be built from a scenario alone")


def membership(
    wp: Behaviour,
    family: Family | str | VertexSet,
    collection: InputCollection | None = None,
    budget: int | None = None
) -> MembershipCertificate:
    """
    Decide membership of a behaviour in the convex hull of a family's vertices.

    Args:
        wp (Behaviour): The query behaviour.
        family: A family tag, or an explicit VertexSet (e.g. a merged union).
        collection: M′ when the family is pd.
        budget: Vertex budget.

    Returns:
        MembershipCertificate: Inside with weights aligned to the vertex order, or
        Outside with a verified separator.
    """
    vertices = family if isinstance(family, VertexSet) else vertex_set(wp.scenario, family, collection, budget)
    if vertices.scenario != wp.scenario:
        raise ScenarioError("Behaviour and vertex set live on different scenarios")
    certificate = lp_membership(wp.values, vertices.vrep)
    logger.debug(f"Membership in {vertices.label}: {'inside' if certificate.inside else 'outside'}")
    return certificate
