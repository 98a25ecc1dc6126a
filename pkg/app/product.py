"""
The behaviour product on a bipartition of a scenario's inputs, set products and
block compositions.

For a context x with F_x the parties whose input lies in M′, the product is

    wp(a|x) = p(a_F | x_F) * q(a_rest | x_rest)

where both factors are marginals on the two restricted scenarios.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from app.logger import logger

from app.behaviour import (
    Behaviour,
    BehaviourError,
    SignallingError,
    is_no_signalling,
    marginal_at,
    restrict_behaviour,
)
from app.scenario import InputCollection, Outcome, Scenario, ScenarioError, bipartition, restrict_scenario
from app.utils.parallel import fan_out
from app.vertexset import Family, VertexSet


@dataclass(frozen=True)
class _Side:
    """Where each party of S sits inside one restricted scenario."""
    scenario: Scenario
    # party of S -> (party index in the side, {input of S: input of the side})
    placement: dict[int, tuple[int, dict[int, int]]]

    @classmethod
    def of(cls, scenario: Scenario, collection: InputCollection) -> _Side:
        placement = {
            i: (k, {x: j for j, x in enumerate(xs)}) for k, (i, xs) in enumerate(collection.kept())
        }
        return cls(restrict_scenario(scenario, collection), placement)

    def locate(self, parties: Sequence[int], context: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        placed = [self.placement[i] for i in parties]
        return tuple(k for k, _ in placed), tuple(m[context[i]] for i, (_, m) in zip(parties, placed))


@dataclass(frozen=True)
class ProductPlan:
    """Index bookkeeping of one nonredundant bipartition (S, M′)."""
    scenario: Scenario
    collection: InputCollection
    inner: _Side
    outer: _Side

    @classmethod
    def of(cls, scenario: Scenario, collection: InputCollection) -> ProductPlan:
        if collection.scenario != scenario:
            raise ScenarioError("Collection does not belong to this scenario")
        if collection.is_redundant:
            raise ScenarioError("A product plan needs a nonredundant bipartition")
        return cls(
            scenario,
            collection,
            _Side.of(scenario, collection),
            _Side.of(scenario, collection.complement()),
        )

    def combine(self, p: Behaviour, q: Behaviour) -> Behaviour:
        S = self.scenario
        cache: dict[tuple, dict[Outcome, Fraction]] = {}

        def factor(wp: Behaviour, side: _Side, parties: tuple[int, ...], context) -> dict[Outcome, Fraction]:
            where, inputs = side.locate(parties, context)
            key = (id(side), where, inputs)
            if key not in cache:
                cache[key] = marginal_at(wp, where, inputs)
            return cache[key]

        values: list[Fraction] = []
        for context in S.contexts:
            inside, outside = self.collection.partition(context)
            F, G = tuple(sorted(inside)), tuple(sorted(outside))
            left = factor(p, self.inner, F, context)
            right = factor(q, self.outer, G, context)
            for a in S.outcomes(context):
                pa = left.get(tuple(a[i] for i in F), Fraction(0))
                values.append(pa * right.get(tuple(a[i] for i in G), Fraction(0)) if pa else Fraction(0))
        return Behaviour(S, tuple(values))

    def check_factor(self, wp: Behaviour, side: _Side) -> None:
        if wp.scenario != side.scenario:
            raise BehaviourError("Factor does not live on its side of the bipartition")
        if self.collection.is_party_blocks:
            return
        check = is_no_signalling(wp)
        if not check.holds:
            raise SignallingError(
                f"Signalling factor on a mixed-input bipartition: {check.witness}"
            )


def behaviour_product(p: Behaviour, q: Behaviour, scenario: Scenario, collection: InputCollection) -> Behaviour:
    """
    Behaviour product p ⊙ q on S with respect to the input collection M′.

    Args:
        p (Behaviour): Behaviour on S restricted to M′.
        q (Behaviour): Behaviour on S restricted to the complement of M′.
        scenario (Scenario): The scenario S.
        collection (InputCollection): M′.

    Returns:
        Behaviour: The product on S. On a redundant bipartition the factor living on S
        itself is returned unchanged.

    Raises:
        SignallingError: If a factor is signalling and M′ is not a union of whole parties.
        BehaviourError: If a factor lives on the wrong scenario.
    """
    sides = bipartition(scenario, collection)
    if sides.outer is None:
        if p.scenario != scenario:
            raise BehaviourError("With M′ = M the left factor must live on S")
        return p
    if sides.inner is None:
        if q.scenario != scenario:
            raise BehaviourError("With M′ empty the right factor must live on S")
        return q
    plan = ProductPlan.of(scenario, collection)
    plan.check_factor(p, plan.inner)
    plan.check_factor(q, plan.outer)
    return plan.combine(p, q)


def set_product(
    left: VertexSet,
    right: VertexSet,
    scenario: Scenario,
    collection: InputCollection,
    threads: int | None = None
) -> VertexSet:
    """
    All pairwise products of two vertex sets living on the two sides of (S, M′).

    Returns:
        VertexSet: Deduplicated products tagged COMPOSED.
    """
    plan = ProductPlan.of(scenario, collection)
    for v in left:
        plan.check_factor(v, plan.inner)
    for v in right:
        plan.check_factor(v, plan.outer)

    def row(p: Behaviour) -> list[Behaviour]:
        return [plan.combine(p, q) for q in right]

    products = [b for chunk in fan_out(row, left.vertices, threads) for b in chunk]
    result = VertexSet.build(scenario, Family.COMPOSED, products, collection)
    logger.debug(f"Set product {len(left)} x {len(right)} -> {len(result)} vertices on {collection.key()}")
    return result


def _union(a: InputCollection, b: InputCollection) -> InputCollection:
    return InputCollection(a.scenario, tuple(x | y for x, y in zip(a.members, b.members)))


def compose_blocks(
    scenario: Scenario,
    blocks: Sequence[tuple[InputCollection, VertexSet]],
    threads: int | None = None
) -> VertexSet:
    """
    Fold set products over input-disjoint blocks, left to right.

    Each block is an input collection of S paired with a vertex set on the restriction
    of S to it. The blocks must be pairwise disjoint and cover every input of S.
    """
    if not blocks:
        raise ScenarioError("Nothing to compose")
    covered, acc = blocks[0]
    if acc.scenario != restrict_scenario(scenario, covered):
        raise BehaviourError("First block's vertex set does not live on its restriction")
    for collection, vertices in blocks[1:]:
        if any(x & y for x, y in zip(covered.members, collection.members)):
            raise ScenarioError("Composed blocks must be input-disjoint")
        union = _union(covered, collection)
        sub = restrict_scenario(scenario, union)
        acc = set_product(acc, vertices, sub, covered.within(union), threads)
        covered = union
    if not covered.is_full:
        raise ScenarioError("Composed blocks do not cover every input")
    return VertexSet.build(scenario, Family.COMPOSED, (Behaviour(scenario, v.values) for v in acc))


def restriction_distributivity_check(
    left: VertexSet,
    right: VertexSet,
    scenario: Scenario,
    collection: InputCollection,
    target: InputCollection
) -> bool:
    """
    Check R_V(p ⊙ q) = R_{M′∩V}(p) ⊙ R_{M′⊥∩V}(q) for every pair of vertices.

    Args:
        left, right: No-signalling vertex sets on the two sides of (S, M′).
        scenario: S.
        collection: M′, nonredundant.
        target: V, nonempty.
    """
    plan = ProductPlan.of(scenario, collection)
    perp = collection.complement()
    on_left = target.within(collection)
    on_right = target.within(perp)
    inner_v = collection.within(target)
    sub = restrict_scenario(scenario, target)
    for p in left:
        for q in right:
            lhs = restrict_behaviour(plan.combine(p, q), target)
            if on_left.is_empty:
                rhs = restrict_behaviour(q, on_right)
            elif on_right.is_empty:
                rhs = restrict_behaviour(p, on_left)
            else:
                rhs = behaviour_product(
                    restrict_behaviour(p, on_left), restrict_behaviour(q, on_right), sub, inner_v
                )
            if lhs.scenario != rhs.scenario or lhs.values != rhs.values:
                logger.info(f"Restriction identity fails on V = {target.key()}")
                return False
    return True
