from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator

from app.applications import InseparabilityReport
from app.behaviour import Behaviour
from app.classify import ClassificationReport
from app.demos import DemoResult
from app.exactgeom import AffineFunctional, HRep, Inside, MembershipCertificate
from app.fine import JointDistribution
from app.scenario import InputCollection, Scenario
from app.utils.serialization import KEY_SEPARATOR, format_rational, join_key, parse_rational, split_key
from app.vertexset import VertexSet

FamilyType = Literal["e", "bell", "ns", "pd"]
RelationType = Literal["equal", "subset", "superset", "incomparable"]
DemoName = Literal["bipartite_classes", "tripartite_classes", "sliwa", "fine", "broadcast", "lf"]

# context key -> outcome key -> rational string
Table = dict[str, dict[str, str]]


class ScenarioModel(BaseModel):
    """
    JSON form of a scenario.
    Outputs default to "0" and "1" for every input when omitted.
    """
    parties: list[str] = Field(..., min_length=1, description="Party identifiers, in canonical order.")
    inputs: dict[str, list[str]] = Field(..., description="Input identifiers of every party.")
    outputs: Optional[dict[str, dict[str, list[str]]]] = Field(
        None, description="Output identifiers per party and input."
    )

    @field_validator("parties")
    @classmethod
    def no_separator(cls, parties: list[str]) -> list[str]:
        if any(KEY_SEPARATOR in p for p in parties):
            raise ValueError(f"Identifiers may not contain {KEY_SEPARATOR!r}")
        return parties

    def to_domain(self) -> Scenario:
        outputs = self.outputs
        if outputs is None:
            outputs = {p: {x: ["0", "1"] for x in self.inputs.get(p, [])} for p in self.parties}
        identifiers = [x for xs in self.inputs.values() for x in xs]
        identifiers += [a for per_input in outputs.values() for outs in per_input.values() for a in outs]
        if any(KEY_SEPARATOR in i for i in identifiers):
            raise ValueError(f"Identifiers may not contain {KEY_SEPARATOR!r}")
        return Scenario.build(self.parties, self.inputs, outputs)

    @classmethod
    def from_domain(cls, scenario: Scenario) -> ScenarioModel:
        return cls(**scenario.to_mapping())


def table_of(wp: Behaviour) -> Table:
    """Nonzero entries only."""
    return {
        join_key(context): {join_key(outcome): format_rational(p) for outcome, p in row.items() if p}
        for context, row in wp.table.items()
    }


class BehaviourModel(BaseModel):
    """A behaviour with its scenario; missing table entries are 0."""
    scenario: ScenarioModel
    table: Table = Field(..., description="Context key 'x1:x2:..' -> outcome key 'a1:a2:..' -> 'p/q'.")

    def to_domain(self) -> Behaviour:
        scenario = self.scenario.to_domain()
        return Behaviour.from_table(scenario, {
            split_key(context): {split_key(outcome): parse_rational(p) for outcome, p in row.items()}
            for context, row in self.table.items()
        })

    @classmethod
    def from_domain(cls, wp: Behaviour) -> BehaviourModel:
        return cls(scenario=ScenarioModel.from_domain(wp.scenario), table=table_of(wp))


def collection_of(scenario: Scenario, mapping: Optional[dict[str, list[str]]]) -> Optional[InputCollection]:
    return None if mapping is None else InputCollection.from_mapping(scenario, mapping)


class DimensionsResponse(BaseModel):
    ambient_dimension: int = Field(..., description="d, entries of a behaviour table.")
    full_dimension: int = Field(..., description="Dimension of the set of all behaviours.")
    dimension: int = Field(..., description="Dimension of the Bell and no-signalling polytopes.")
    nontrivial: bool
    collections: int

    @classmethod
    def from_domain(cls, scenario: Scenario) -> DimensionsResponse:
        from app.scenario import collection_count
        return cls(
            ambient_dimension=scenario.ambient_dimension,
            full_dimension=scenario.full_dimension,
            dimension=scenario.pironio_dimension,
            nontrivial=scenario.is_nontrivial,
            collections=collection_count(scenario),
        )


class VerticesRequest(BaseModel):
    scenario: ScenarioModel
    family: FamilyType = "bell"
    collection: Optional[dict[str, list[str]]] = Field(None, description="M′ for the pd family.")
    budget: Optional[int] = Field(None, gt=0)


class VertexSetModel(BaseModel):
    scenario: ScenarioModel
    family: str
    collection: Optional[dict[str, list[str]]] = None
    count: int
    vertices: list[Table]

    @classmethod
    def from_domain(cls, vertices: VertexSet) -> VertexSetModel:
        return cls(
            scenario=ScenarioModel.from_domain(vertices.scenario),
            family=vertices.family.value,
            collection=None if vertices.collection is None else vertices.collection.to_mapping(),
            count=len(vertices),
            vertices=[table_of(v) for v in vertices],
        )


class FunctionalModel(BaseModel):
    """coefficients . p <= bound, coefficients in canonical layout order."""
    coefficients: list[str]
    bound: str

    @classmethod
    def from_domain(cls, functional: AffineFunctional) -> FunctionalModel:
        return cls(
            coefficients=[format_rational(c) for c in functional.coefficients],
            bound=format_rational(functional.bound),
        )


class EqualityModel(BaseModel):
    coefficients: list[str]
    value: str


class HRepModel(BaseModel):
    layout: list[str] = Field(..., description="'context|outcome' label of every coordinate.")
    inequalities: list[FunctionalModel]
    equalities: list[EqualityModel]

    @classmethod
    def from_domain(cls, scenario: Scenario, hrep: HRep) -> HRepModel:
        return cls(
            layout=[
                f"{join_key(scenario.context_ids(x))}|{join_key(scenario.outcome_ids(x, a))}"
                for x, a in scenario.layout
            ],
            inequalities=[FunctionalModel.from_domain(f) for f in hrep.inequalities],
            equalities=[
                EqualityModel(coefficients=[format_rational(c) for c in e.coefficients], value=format_rational(e.value))
                for e in hrep.equalities
            ],
        )


class MembershipRequest(BaseModel):
    behaviour: BehaviourModel
    family: FamilyType = "bell"
    collection: Optional[dict[str, list[str]]] = None
    budget: Optional[int] = Field(None, gt=0)


class CertificateModel(BaseModel):
    inside: bool
    weights: Optional[list[str]] = Field(None, description="Convex weights, aligned with the vertex list.")
    separator: Optional[FunctionalModel] = None

    @classmethod
    def from_domain(cls, certificate: MembershipCertificate) -> CertificateModel:
        if isinstance(certificate, Inside):
            return cls(inside=True, weights=[format_rational(w) for w in certificate.weights])
        return cls(inside=False, separator=FunctionalModel.from_domain(certificate.separator))


class ClassifyRequest(BaseModel):
    scenario: ScenarioModel
    budget: Optional[int] = Field(None, gt=0)


class RelationModel(BaseModel):
    other: str
    relation: RelationType


class EquivalenceClassModel(BaseModel):
    msf: str = Field(..., description="Key of the maximal solid fragment, '⊥' for the Bell class.")
    size: int
    representative: dict[str, list[str]]
    members: list[str]
    relations: list[RelationModel]


class ClassificationModel(BaseModel):
    scenario: ScenarioModel
    class_count: int
    classes: list[EquivalenceClassModel]

    @classmethod
    def from_domain(cls, report: ClassificationReport) -> ClassificationModel:
        return cls(
            scenario=ScenarioModel.from_domain(report.scenario),
            class_count=report.class_count,
            classes=[
                EquivalenceClassModel(
                    msf=c.msf.key(),
                    size=c.size,
                    representative=c.representative.to_mapping(),
                    members=[m.key() for m in c.members],
                    relations=[RelationModel(other=r.other, relation=r.relation.value) for r in c.relations],
                )
                for c in report.classes
            ],
        )


class InseparabilityRequest(BaseModel):
    behaviour: BehaviourModel
    subsets: Optional[list[list[str]]] = Field(None, description="Party subsets; all singletons when omitted.")
    budget: Optional[int] = Field(None, gt=0)


class SubsetVerdictModel(BaseModel):
    parties: list[str]
    certificate: CertificateModel


class InseparabilityModel(BaseModel):
    verdicts: list[SubsetVerdictModel]
    in_intersection: bool
    in_union: bool
    in_convex_hull: bool
    ladder: list[str]

    @classmethod
    def from_domain(cls, report: InseparabilityReport) -> InseparabilityModel:
        order = report.scenario.parties
        return cls(
            verdicts=[
                SubsetVerdictModel(
                    parties=[p for p in order if p in v.parties],
                    certificate=CertificateModel.from_domain(v.certificate),
                )
                for v in report.verdicts
            ],
            in_intersection=report.in_intersection,
            in_union=report.in_union,
            in_convex_hull=report.in_convex_hull,
            ladder=report.ladder(),
        )


class JointRequest(BaseModel):
    behaviour: BehaviourModel
    family: Optional[FamilyType] = Field(None, description="Decompose over this family; product formula if omitted.")
    collection: Optional[dict[str, list[str]]] = None
    budget: Optional[int] = Field(None, gt=0)


class JointEntryModel(BaseModel):
    alpha: list[list[int]]
    beta: list[int]
    probability: str


class JointModel(BaseModel):
    collection: dict[str, list[str]]
    tables: dict[str, list[JointEntryModel]] = Field(..., description="Outer context key -> atoms.")

    @classmethod
    def from_domain(cls, joint: JointDistribution) -> JointModel:
        def context_key(context) -> str:
            if joint.outer is None:
                return ""
            return join_key(joint.outer.context_ids(context))

        return cls(
            collection=joint.collection.to_mapping(),
            tables={
                context_key(c): [
                    JointEntryModel(alpha=[list(a) for a in alpha], beta=list(beta), probability=format_rational(p))
                    for (alpha, beta), p in sorted(table.items())
                ]
                for c, table in joint.tables.items()
            },
        )


class DemoCheckModel(BaseModel):
    name: str
    expected: str
    actual: str
    passed: bool


class DemoResultModel(BaseModel):
    name: DemoName
    passed: bool
    checks: list[DemoCheckModel]

    @classmethod
    def from_domain(cls, result: DemoResult) -> DemoResultModel:
        return cls(
            name=result.name,
            passed=result.passed,
            checks=[DemoCheckModel(name=c.name, expected=c.expected, actual=c.actual, passed=c.passed)
                    for c in result.checks],
        )


class ComputationModel(BaseModel):
    """A cached computation, without its payload."""
    id: int
    kind: str
    family: Optional[str]
    collection_key: Optional[str]
    count: int
    created_at: str
