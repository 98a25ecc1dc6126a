"""
End-to-end runs of the worked examples: each demo computes a handful of quantities
and compares them with their known values.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from app.logger import logger

from app.applications import (
    PartySubsetCollection,
    SequentialScenario,
    broadcast_local_vertices,
    build_inequality,
    inseparability_report,
    partial_pr_box,
    sequential_to_pd,
)
from app.behaviour import Behaviour, mix, uniform_behaviour
from app.classify import Relation, classify_all, compare, is_bell, is_ns
from app.fine import fine_joint_one_multi_party, model_from_certificate, partial_joint_from_model, verify_joint
from app.polytopes import bell_vertices, membership, pd_vertices
from app.scenario import InputCollection, Scenario


@dataclass(frozen=True)
class DemoCheck:
    name: str
    expected: str
    actual: str

    @property
    def passed(self) -> bool:
        return self.expected == self.actual


@dataclass(frozen=True)
class DemoResult:
    name: str
    checks: tuple[DemoCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _check(name: str, expected, actual) -> DemoCheck:
    return DemoCheck(name, str(expected), str(actual))


def demo_bipartite_classes() -> list[DemoCheck]:
    """Bipartite scenario with three binary inputs per party."""
    S = Scenario.uniform([3, 3])
    report = classify_all(S)
    single = [c for c in report.classes if not c.is_bell and c.msf.fragment.key() != InputCollection.full(S).key()]
    one_det = [c for c in single if sum(len(s) for s in c.representative.members) == 1]
    two_det = [c for c in single if sum(len(s) for s in c.representative.members) == 2]
    return [
        _check("classes", 17, report.class_count),
        _check("bell class size", 48, report.bell_class.size),
        _check("one-deterministic-input classes", 6, len(one_det)),
        _check("two-deterministic-input classes", 9, len(two_det)),
        _check(
            "two-input classes under exactly two others",
            True,
            all(sum(r.relation is Relation.SUBSET for r in c.relations) == 2 for c in two_det),
        ),
    ]


def demo_tripartite_classes() -> list[DemoCheck]:
    """Tripartite scenario with two binary inputs per party."""
    S = Scenario.uniform([2, 2, 2])
    report = classify_all(S)
    nontrivial = [c for c in report.classes if not c.is_bell and c is not report.ns_class]
    a, b = InputCollection.of_parties(S, ["A"]), InputCollection.of_parties(S, ["B"])
    first_a = InputCollection.from_mapping(S, {"A": ["1"]})
    return [
        _check("classes", 5, report.class_count),
        _check("bell class size", 54, report.bell_class.size),
        _check("nontrivial class sizes", [3, 3, 3], sorted(c.size for c in nontrivial)),
        _check("M^{x_A1} vs M^{A}", Relation.EQUAL.value, compare(S, first_a, a).value),
        _check("M^{A} vs M^{B}", Relation.INCOMPARABLE.value, compare(S, a, b).value),
        _check("|Ext PD(S, M^{A})|", 96, len(pd_vertices(S, a))),
    ]


def demo_sliwa() -> list[DemoCheck]:
    """Sliwa-3 inequalities on partial PR boxes and their mixtures."""
    S = Scenario.uniform([2, 2, 2])
    tags = ("Sliwa3A", "Sliwa3B", "Sliwa3C")
    inequalities = [build_inequality(S, t) for t in tags]
    boxes = [partial_pr_box(S, p) for p in S.parties]
    checks = []
    for k, (tag, inequality) in enumerate(zip(tags, inequalities)):
        values = [inequality.value(box) for box in boxes]
        expected = [Fraction(2) if j == k else Fraction(4) for j in range(3)]
        checks.append(_check(f"{tag} on partial PR boxes", expected, values))
    mixture = mix((Fraction(1, 3), box) for box in boxes)
    checks.append(_check(
        "Sliwa-3 on the one-third mixture", [Fraction(10, 3)] * 3, [i.value(mixture) for i in inequalities]
    ))
    report = inseparability_report(mixture, PartySubsetCollection.maximal(S))
    checks.append(_check("mixture outside every PD(S, M^{k})", True, report.inseparable))
    checks.append(_check("mixture inside the convex hull of the union", True, report.in_convex_hull))
    pair = mix([(Fraction(1, 2), boxes[0]), (Fraction(1, 2), boxes[1])])
    checks.append(_check(
        "Sliwa-3 on the A-B half mixture", [Fraction(3), Fraction(3), Fraction(4)],
        [i.value(pair) for i in inequalities],
    ))
    return checks


def demo_fine() -> list[DemoCheck]:
    """Joint distributions from behaviours and from certified models."""
    chsh = Scenario.uniform([2, 2])
    uniform = uniform_behaviour(chsh)
    bell = bell_vertices(chsh)
    model = model_from_certificate(uniform, membership(uniform, bell), bell)

    one_multi = Scenario.uniform([1, 2])
    correlated = Behaviour.from_function(one_multi, lambda x, a: Fraction(1, 2) if a[0] == a[1] else 0)

    partial = InputCollection.from_mapping(chsh, {"A": ["1"]})
    vertices = pd_vertices(chsh, partial)
    partial_model = model_from_certificate(uniform, membership(uniform, vertices), vertices)
    return [
        _check("LHV joint of the uniform behaviour", True, verify_joint(partial_joint_from_model(model), uniform)),
        _check("product-formula joint", True, verify_joint(fine_joint_one_multi_party(correlated), correlated)),
        _check("partial joint, one deterministic input", True,
               verify_joint(partial_joint_from_model(partial_model), uniform)),
    ]


def demo_broadcast() -> list[DemoCheck]:
    """Broadcast-local sets of the tripartite binary scenario."""
    S = Scenario.uniform([2, 2, 2])
    single = broadcast_local_vertices(S, local=["A"])
    separate = broadcast_local_vertices(S, blocks=[["A"], ["B"], ["C"]])
    paired = broadcast_local_vertices(S, blocks=[["A", "B"], ["C"]])
    return [
        _check("I_L = {A} equals PD(S, M^{A})", True,
               single.same_points(pd_vertices(S, InputCollection.of_parties(S, ["A"])))),
        _check("three single-party blocks give B(S)", True, separate.same_points(bell_vertices(S))),
        _check("blocks {A,B},{C} vertex count", 96, len(paired)),
    ]


def demo_lf() -> list[DemoCheck]:
    """Local Friendliness polytopes of bipartite sequential scenarios."""
    S = Scenario.uniform([3, 3])
    one = sequential_to_pd(SequentialScenario(S, (1, 1)))[1]
    two = sequential_to_pd(SequentialScenario(S, (2, 2)))[1]
    none = sequential_to_pd(SequentialScenario(S, (0, 0)))[1]
    return [
        _check("one query per side is Bell", False, is_bell(S, one)),
        _check("one query per side is NS", False, is_ns(S, one)),
        _check("two queries per side is Bell", True, is_bell(S, two)),
        _check("no friends is NS", True, is_ns(S, none)),
    ]


DEMOS: dict[str, Callable[[], list[DemoCheck]]] = {
    "bipartite_classes": demo_bipartite_classes,
    "tripartite_classes": demo_tripartite_classes,
    "sliwa": demo_sliwa,
    "fine": demo_fine,
    "broadcast": demo_broadcast,
    "lf": demo_lf,
}


def run_demo(name: str) -> DemoResult:
    """
    Raises:
        ValueError: If the demo name is unknown.
    """
    if name not in DEMOS:
        raise ValueError(f"Unknown demo {name!r}; choose from {sorted(DEMOS)}")
    logger.info(f"Running demo {name}")
    result = DemoResult(name, tuple(DEMOS[name]()))
    logger.info(f"Demo {name}: {'passed' if result.passed else 'FAILED'}")
    return result
