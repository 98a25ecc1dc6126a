"""
Linear functionals in probability coordinates: correlators, the CH and CHSH
inequalities with their relabelings, the three-party Sliwa-3 family, and the PR boxes
that violate them.

Correlators use the canonical output order: the first output of an input counts as +1,
the second as -1. Parties not named by a correlator or marginal take their first input
and are summed out.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from app.behaviour import Behaviour, Relabeling, all_relabelings
from app.exactgeom import AffineFunctional
from app.scenario import Scenario

HALF = Fraction(1, 2)


class ShapeMismatchError(ValueError):
    """Raised when an inequality or box family is applied to a scenario of the wrong shape."""


def _complete(scenario: Scenario, parties: Sequence[int], inputs: Sequence[int]) -> tuple[int, ...]:
    context = [0] * scenario.n_parties
    for i, x in zip(parties, inputs):
        context[i] = x
    return tuple(context)


def correlator(scenario: Scenario, parties: Sequence[int], inputs: Sequence[int]) -> list[Fraction]:
    """Coefficient vector of the expectation of the product of ±1 outputs of `parties`."""
    context = _complete(scenario, parties, inputs)
    for i in parties:
        if len(scenario.outputs[i][context[i]]) != 2:
            raise ShapeMismatchError("Correlators need two outputs per input")
    row = [Fraction(0)] * scenario.ambient_dimension
    for a in scenario.outcomes(context):
        sign = 1
        for i in parties:
            if a[i]:
                sign = -sign
        row[scenario.coordinate(context, a)] += sign
    return row


def probability_term(
    scenario: Scenario,
    parties: Sequence[int],
    inputs: Sequence[int],
    outputs: Sequence[int]
) -> list[Fraction]:
    """Coefficient vector of the marginal p(a_V = outputs | x_V = inputs)."""
    context = _complete(scenario, parties, inputs)
    row = [Fraction(0)] * scenario.ambient_dimension
    for a in scenario.outcomes(context):
        if all(a[i] == o for i, o in zip(parties, outputs)):
            row[scenario.coordinate(context, a)] += 1
    return row


def _combine(terms: Sequence[tuple[int, list[Fraction]]]) -> tuple[Fraction, ...]:
    total = [Fraction(0)] * len(terms[0][1])
    for weight, row in terms:
        for k, v in enumerate(row):
            if v:
                total[k] += weight * v
    return tuple(total)


@dataclass(frozen=True)
class Inequality:
    """
    A linear inequality on behaviours of one scenario.

    Attributes:
        scenario (Scenario): Where the coefficients live.
        functional (AffineFunctional): coefficients . wp <= bound.
        tag (str): CH, CHSH, Sliwa3A, Sliwa3B, Sliwa3C or custom.
        relabeling (Relabeling | None): Relabeling applied to the base form, if any.
    """
    scenario: Scenario
    functional: AffineFunctional
    tag: str
    relabeling: Relabeling | None = None

    @classmethod
    def custom(cls, scenario: Scenario, coefficients: Sequence[Fraction], bound: Fraction, tag: str = "custom") -> Inequality:
        return cls(scenario, AffineFunctional(tuple(coefficients), bound), tag)

    @property
    def bound(self) -> Fraction:
        return self.functional.bound

    def value(self, wp: Behaviour) -> Fraction:
        if wp.scenario != self.scenario:
            raise ShapeMismatchError("Behaviour and inequality live on different scenarios")
        return self.functional.value(wp.values)

    def holds(self, wp: Behaviour) -> bool:
        return self.value(wp) <= self.bound

    def relabeled(self, relabeling: Relabeling) -> Inequality:
        coefficients = relabeling.apply(self.scenario, self.functional.coefficients)
        return Inequality(self.scenario, AffineFunctional(coefficients, self.bound), self.tag, relabeling)


def _require(scenario: Scenario, n_parties: int, tag: str) -> None:
    if scenario.n_parties != n_parties or any(
        len(m) != 2 or any(len(o) != 2 for o in outs) for m, outs in zip(scenario.inputs, scenario.outputs)
    ):
        raise ShapeMismatchError(
            f"{tag} needs {n_parties} parties with two inputs and two outputs each"
        )


# Sliwa-3 three-body terms (x_A, x_B, x_C, sign); B and C forms swap A with B and with C
_SLIWA_3A = ((0, 0, 0, 1), (1, 0, 0, 1), (0, 1, 1, 1), (1, 1, 1, -1))
_SLIWA_3B = ((0, 0, 0, 1), (0, 1, 0, 1), (1, 0, 1, 1), (1, 1, 1, -1))
_SLIWA_3C = ((0, 0, 0, 1), (0, 0, 1, 1), (1, 1, 0, 1), (1, 1, 1, -1))
SLIWA_TERMS = {"Sliwa3A": _SLIWA_3A, "Sliwa3B": _SLIWA_3B, "Sliwa3C": _SLIWA_3C}

INEQUALITY_TAGS = ("CH", "CHSH", *SLIWA_TERMS)


def build_inequality(scenario: Scenario, tag: str, relabeling: Relabeling | None = None) -> Inequality:
    """
    Build a named inequality in probability coordinates.

    Args:
        scenario (Scenario): Two parties for CH/CHSH, three for Sliwa3A/B/C; two inputs
            and two outputs everywhere.
        tag (str): One of INEQUALITY_TAGS.
        relabeling (Relabeling | None): Optional relabeling of the base form.

    Raises:
        ShapeMismatchError: On an unknown tag or a scenario of the wrong shape.
    """
    if tag == "CHSH":
        _require(scenario, 2, tag)
        terms = [(s, correlator(scenario, (0, 1), (x, y))) for x, y, s in ((0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, -1))]
        bound = Fraction(2)
    elif tag == "CH":
        _require(scenario, 2, tag)
        terms = [(s, probability_term(scenario, (0, 1), (x, y), (0, 0)))
                 for x, y, s in ((0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, -1))]
        terms += [(-1, probability_term(scenario, (0,), (0,), (0,))),
                  (-1, probability_term(scenario, (1,), (0,), (0,)))]
        bound = Fraction(0)
    elif tag in SLIWA_TERMS:
        _require(scenario, 3, tag)
        terms = [(s, correlator(scenario, (0, 1, 2), (x, y, z))) for x, y, z, s in SLIWA_TERMS[tag]]
        bound = Fraction(2)
    else:
        raise ShapeMismatchError(f"Unknown inequality {tag!r}")
    inequality = Inequality(scenario, AffineFunctional(_combine(terms), bound), tag)
    return inequality.relabeled(relabeling) if relabeling is not None else inequality


def chsh_family(scenario: Scenario) -> list[Inequality]:
    """Distinct CHSH functionals under all input and output relabelings."""
    base = build_inequality(scenario, "CHSH")
    seen: dict[tuple[Fraction, ...], Inequality] = {}
    for relabeling in all_relabelings(scenario):
        inequality = base.relabeled(relabeling)
        seen.setdefault(inequality.functional.coefficients, inequality)
    return [seen[k] for k in sorted(seen)]


def pr_box(scenario: Scenario, relabeling: Relabeling | None = None) -> Behaviour:
    """p(a, b | x, y) = 1/2 when a xor b = x * y over input and output indices."""
    _require(scenario, 2, "PR box")
    box = Behaviour.from_function(scenario, lambda x, a: HALF if (a[0] ^ a[1]) == (x[0] & x[1]) else 0)
    return relabeling.apply_behaviour(box) if relabeling is not None else box


def partial_pr_box(scenario: Scenario, party: int | str) -> Behaviour:
    """Party k always answers its first output; the other two share a PR box."""
    _require(scenario, 3, "Partial PR box")
    k = scenario.party_index(party) if isinstance(party, str) else party
    if not 0 <= k < 3:
        raise ShapeMismatchError(f"Party index {k} out of range")
    i, j = (p for p in range(3) if p != k)

    def value(x, a):
        if a[k] != 0:
            return 0
        return HALF if (a[i] ^ a[j]) == (x[i] & x[j]) else 0

    return Behaviour.from_function(scenario, value)
