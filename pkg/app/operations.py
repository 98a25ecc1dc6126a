"""
Request-level operations shared by the HTTP API and the CLI.

Enumerations (vertices, facets, classifications) go through the computation cache
when a session is given.
"""
from __future__ import annotations

from typing import Optional

from sqlalchemy.orm import Session

from app import crud
from app.applications import PartySubsetCollection, inseparability_report
from app.classify import classify_all
from app.exactgeom import facets_from_vrep
from app.fine import fine_joint_one_multi_party, model_from_certificate, partial_joint_from_model
from app.logger import logger
from app.polytopes import membership, vertex_set
from app.schemas import (
    CertificateModel,
    ClassificationModel,
    ClassifyRequest,
    DimensionsResponse,
    HRepModel,
    InseparabilityModel,
    InseparabilityRequest,
    JointModel,
    JointRequest,
    MembershipRequest,
    ScenarioModel,
    VertexSetModel,
    VerticesRequest,
    collection_of,
)
from app.utils.serialization import decimal_output


def _cached(db: Optional[Session], kind: str, request: VerticesRequest | ClassifyRequest, compute, count_of) -> dict:
    # decimal renderings are lossy and never stored
    if db is None or decimal_output.get():
        return compute()
    family = getattr(request, "family", "")
    collection = getattr(request, "collection", None)
    key = crud.scenario_key(request.scenario)
    collection_key = ""
    if collection is not None:
        collection_key = collection_of(request.scenario.to_domain(), collection).key()
    hit = crud.get_cached(db, kind, key, family, collection_key)
    if hit is not None:
        return hit
    payload = compute()
    crud.save_result(db, kind, key, payload, count_of(payload), family, collection_key)
    return payload


def dimensions(scenario: ScenarioModel) -> DimensionsResponse:
    return DimensionsResponse.from_domain(scenario.to_domain())


def _vertex_set(request: VerticesRequest):
    scenario = request.scenario.to_domain()
    return vertex_set(scenario, request.family, collection_of(scenario, request.collection), request.budget)


def vertices(request: VerticesRequest, db: Optional[Session] = None) -> dict:
    def compute() -> dict:
        return VertexSetModel.from_domain(_vertex_set(request)).model_dump()

    return _cached(db, "vertices", request, compute, lambda payload: payload["count"])


def facets(request: VerticesRequest, db: Optional[Session] = None) -> dict:
    def compute() -> dict:
        vs = _vertex_set(request)
        hrep = facets_from_vrep(vs.vrep, request.budget)
        logger.info(f"{vs.label} has {len(hrep.inequalities)} facets")
        return HRepModel.from_domain(vs.scenario, hrep).model_dump()

    return _cached(db, "facets", request, compute, lambda payload: len(payload["inequalities"]))


def member(request: MembershipRequest) -> CertificateModel:
    wp = request.behaviour.to_domain()
    certificate = membership(
        wp, request.family, collection_of(wp.scenario, request.collection), request.budget
    )
    return CertificateModel.from_domain(certificate)


def classify(request: ClassifyRequest, db: Optional[Session] = None) -> dict:
    def compute() -> dict:
        report = classify_all(request.scenario.to_domain(), request.budget)
        return ClassificationModel.from_domain(report).model_dump()

    return _cached(db, "classify", request, compute, lambda payload: payload["class_count"])


def inseparability(request: InseparabilityRequest) -> InseparabilityModel:
    wp = request.behaviour.to_domain()
    subsets = (
        PartySubsetCollection.maximal(wp.scenario) if request.subsets is None
        else PartySubsetCollection.of(request.subsets)
    )
    return InseparabilityModel.from_domain(inseparability_report(wp, subsets, request.budget))


def joint(request: JointRequest) -> JointModel:
    """
    Fine joint distribution of a behaviour.

    With no family the product formula is used; otherwise the behaviour is decomposed
    over the family's vertices and the joint read off the certified model.
    """
    wp = request.behaviour.to_domain()
    if request.family is None:
        return JointModel.from_domain(fine_joint_one_multi_party(wp))
    vs = vertex_set(wp.scenario, request.family, collection_of(wp.scenario, request.collection), request.budget)
    model = model_from_certificate(wp, membership(wp, vs), vs)
    return JointModel.from_domain(partial_joint_from_model(model))
