"""
Joint distributions over the outputs of all inputs of a deterministic block, built
from behaviours and from partially deterministic models, with exact verification.

A joint for (S, M′) is a family of tables, one per context x⊥ of S restricted to M′⊥.
Each table is a distribution over pairs (α, β): α assigns an output to every input of
S restricted to M′, β is an outcome of the context x⊥.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Sequence

from app.logger import logger

from app.behaviour import Behaviour, is_no_signalling, marginal, marginal_at, mix, restrict_behaviour
from app.exactgeom import Inside, MembershipCertificate
from app.product import behaviour_product
from app.scenario import Context, InputCollection, Outcome, Scenario, restrict_scenario
from app.vertexset import Family, VertexSet

ZERO = Fraction(0)

# outputs of every input of every party of the deterministic block
Alpha = tuple[tuple[int, ...], ...]


class FineConstructionError(ValueError):
    """Raised when a joint distribution cannot be built from the given inputs."""


def _placement(collection: InputCollection) -> dict[int, tuple[int, dict[int, int]]]:
    return {i: (k, {x: j for j, x in enumerate(xs)}) for k, (i, xs) in enumerate(collection.kept())}


@dataclass(frozen=True)
class JointDistribution:
    """
    Attributes:
        scenario (Scenario): The full scenario S.
        collection (InputCollection): M′, the deterministic block.
        inner (Scenario | None): S restricted to M′.
        outer (Scenario | None): S restricted to M′⊥.
        tables (dict): Outer context (or () without an outer block) to {(α, β): probability}.
    """
    scenario: Scenario
    collection: InputCollection
    inner: Scenario | None
    outer: Scenario | None
    tables: dict[Context, dict[tuple[Alpha, Outcome], Fraction]]

    def alpha_marginal(self, outer_context: Context) -> dict[Alpha, Fraction]:
        result: dict[Alpha, Fraction] = defaultdict(Fraction)
        for (alpha, _), p in self.tables[outer_context].items():
            result[alpha] += p
        return {a: p for a, p in result.items() if p}

    def probability(self, alpha: Alpha, beta: Outcome, outer_context: Context = ()) -> Fraction:
        return self.tables[outer_context].get((alpha, beta), ZERO)


def fine_joint_one_multi_party(wp: Behaviour) -> JointDistribution:
    """
    Joint distribution over every output of every input, for no-signalling behaviours
    where at most one party j has several inputs:

        P(α) = prod_{x_j} wp(α_j[x_j], a_rest | x_j) / wp(a_rest)^(|M_j| - 1)

    and P(α) = 0 when the marginal wp(a_rest) vanishes.

    Raises:
        FineConstructionError: If two parties have several inputs or wp is signalling.
    """
    S = wp.scenario
    multi = S.multi_input_parties
    if len(multi) > 1:
        raise FineConstructionError(f"{len(multi)} parties have several inputs; at most one may")
    if not is_no_signalling(wp).holds:
        raise FineConstructionError("The product formula needs a no-signalling behaviour")
    j = multi[0] if multi else 0
    rest = [i for i in range(S.n_parties) if i != j]
    n_inputs = len(S.inputs[j])
    rest_marginal = marginal(wp, rest, tuple(0 for _ in S.parties))
    joints: dict[tuple[Alpha, Outcome], Fraction] = {}
    for a_rest in itertools.product(*(range(len(S.outputs[i][0])) for i in rest)):
        shared = rest_marginal.get(a_rest, ZERO)
        for alpha_j in itertools.product(*(range(len(o)) for o in S.outputs[j])):
            alpha = [None] * S.n_parties
            alpha[j] = tuple(alpha_j)
            for i, a in zip(rest, a_rest):
                alpha[i] = (a,)
            if shared == 0:
                value = ZERO
            else:
                factors = []
                for x in range(n_inputs):
                    context = tuple(x if i == j else 0 for i in range(S.n_parties))
                    outcome = tuple(alpha_j[x] if i == j else alpha[i][0] for i in range(S.n_parties))
                    factors.append(wp.probability(context, outcome))
                value = prod(factors, start=Fraction(1)) / shared ** (n_inputs - 1)
            if value:
                joints[(tuple(alpha), ())] = value
    logger.debug(f"Product-formula joint with {len(joints)} atoms")
    return JointDistribution(S, InputCollection.full(S), S, None, {(): joints})


@dataclass(frozen=True)
class ModelTerm:
    """One weighted product D ⊙ P; a side is None when its block is empty."""
    weight: Fraction
    deterministic: Behaviour | None
    free: Behaviour | None


@dataclass(frozen=True)
class PartiallyDeterministicModel:
    scenario: Scenario
    collection: InputCollection
    terms: tuple[ModelTerm, ...]

    def evaluate(self) -> Behaviour:
        """Recombine the terms into the behaviour they model."""
        parts = []
        for term in self.terms:
            if term.deterministic is None:
                parts.append((term.weight, term.free))
            elif term.free is None:
                parts.append((term.weight, term.deterministic))
            else:
                parts.append((term.weight, behaviour_product(
                    term.deterministic, term.free, self.scenario, self.collection
                )))
        return mix(parts)


def _collection_of(vertex_set: VertexSet) -> InputCollection:
    S = vertex_set.scenario
    if vertex_set.family is Family.BELL:
        return InputCollection.full(S)
    if vertex_set.family is Family.NS:
        return InputCollection.empty(S)
    if vertex_set.family is Family.PD and vertex_set.collection is not None:
        return vertex_set.collection
    raise FineConstructionError(f"No deterministic block is known for a {vertex_set.family.value} vertex set")


def model_from_certificate(
    wp: Behaviour,
    certificate: MembershipCertificate,
    vertex_set: VertexSet
) -> PartiallyDeterministicModel:
    """
    Read a partially deterministic model off an Inside certificate over PD vertices.

    Every vertex with positive weight splits into its restriction D to M′ (a local
    deterministic behaviour) and its restriction P to M′⊥ (a no-signalling vertex).

    Raises:
        FineConstructionError: On an Outside certificate, mismatched weights, or a
            model that does not reproduce wp.
    """
    if not isinstance(certificate, Inside):
        raise FineConstructionError("Only an Inside certificate carries a model")
    if len(certificate.weights) != len(vertex_set):
        raise FineConstructionError("Certificate weights do not match the vertex set")
    collection = _collection_of(vertex_set)
    perp = collection.complement()
    terms = []
    for weight, vertex in zip(certificate.weights, vertex_set):
        if not weight:
            continue
        terms.append(ModelTerm(
            weight=weight,
            deterministic=None if collection.is_empty else restrict_behaviour(vertex, collection),
            free=None if perp.is_empty else restrict_behaviour(vertex, perp),
        ))
    model = PartiallyDeterministicModel(wp.scenario, collection, tuple(terms))
    if model.evaluate() != wp:
        raise FineConstructionError("Model does not reproduce the behaviour")
    return model


def _alpha_of(deterministic: Behaviour) -> Alpha:
    S = deterministic.scenario
    alpha = []
    for k in range(S.n_parties):
        outputs = []
        for x in range(len(S.inputs[k])):
            m = marginal_at(deterministic, [k], [x])
            a = next((o[0] for o, p in m.items() if p == 1), None)
            if a is None:
                raise FineConstructionError("Deterministic block of a term is not deterministic")
            outputs.append(a)
        alpha.append(tuple(outputs))
    return tuple(alpha)


def partial_joint_from_model(model: PartiallyDeterministicModel) -> JointDistribution:
    """
    P(α, β | x⊥) = sum_terms t [α = α(D)] P(β | x⊥).

    With M′ = M this is the joint distribution over all outputs of all inputs.
    """
    S, collection = model.scenario, model.collection
    perp = collection.complement()
    inner = None if collection.is_empty else restrict_scenario(S, collection)
    outer = None if perp.is_empty else restrict_scenario(S, perp)
    outer_contexts: Sequence[Context] = outer.contexts if outer is not None else ((),)
    tables: dict[Context, dict[tuple[Alpha, Outcome], Fraction]] = {c: defaultdict(Fraction) for c in outer_contexts}
    for term in model.terms:
        alpha = () if term.deterministic is None else _alpha_of(term.deterministic)
        for c in outer_contexts:
            if term.free is None:
                tables[c][(alpha, ())] += term.weight
            else:
                for beta, p in term.free.distribution(c).items():
                    if p:
                        tables[c][(alpha, beta)] += term.weight * p
    return JointDistribution(S, collection, inner, outer, {c: dict(t) for c, t in tables.items()})


def verify_joint(joint: JointDistribution, wp: Behaviour) -> bool:
    """
    Check that the joint family is normalised, has one α-marginal across all x⊥, and
    recovers wp(a|x) for every context of S by marginalisation.
    """
    S = wp.scenario
    if joint.scenario != S:
        return False
    for table in joint.tables.values():
        if any(p < 0 for p in table.values()) or sum(table.values(), ZERO) != 1:
            return False
    alpha_marginals = [joint.alpha_marginal(c) for c in joint.tables]
    if any(m != alpha_marginals[0] for m in alpha_marginals[1:]):
        return False

    inner_at = _placement(joint.collection)
    outer_at = _placement(joint.collection.complement())
    for x in S.contexts:
        inside, outside = joint.collection.partition(x)
        outer_context = tuple(
            m[x[i]] if i in outside else 0
            for i, (_, m) in sorted(outer_at.items(), key=lambda item: item[1][0])
        )
        table = joint.tables.get(outer_context if joint.outer is not None else ())
        if table is None:
            return False
        recovered: dict[Outcome, Fraction] = defaultdict(Fraction)
        for (alpha, beta), p in table.items():
            a = [0] * S.n_parties
            for i in inside:
                k, m = inner_at[i]
                a[i] = alpha[k][m[x[i]]]
            for i in outside:
                a[i] = beta[outer_at[i][0]]
            recovered[tuple(a)] += p
        if any(recovered.get(a, ZERO) != p for a, p in wp.distribution(x).items()):
            return False
    return True
