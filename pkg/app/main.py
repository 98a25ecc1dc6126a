from datetime import datetime
from typing import List, Optional

from fastapi import Depends, FastAPI, HTTPException, Path, Query
from sqlalchemy.orm import Session

from app import crud, operations
from app.database import init_db
from app.demos import run_demo
from app.dependencies import get_db
from app.exactgeom import BudgetExceededError
from app.logger import logger
from app.schemas import (
    CertificateModel,
    ClassificationModel,
    ClassifyRequest,
    ComputationModel,
    DemoName,
    DemoResultModel,
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
)

app = FastAPI(title="pdpoly", summary="Partially deterministic polytopes of Bell scenarios")
init_db()


def _run(name: str, call, *args, **kwargs):
    """Map domain errors to HTTP statuses."""
    try:
        return call(*args, **kwargs)
    except BudgetExceededError as e:
        logger.warning(f"{name}: {e}")
        raise HTTPException(status_code=413, detail=f"{e} (partial count {e.partial})")
    except ValueError as e:
        logger.warning(f"{name}: {e}")
        raise HTTPException(status_code=400, detail=str(e))
    except Exception:
        logger.exception(f"Unhandled error in {name}")
        raise HTTPException(status_code=500, detail="Internal server error")


@app.post("/scenario/dimensions", response_model=DimensionsResponse, summary="Dimensions of a scenario")
def scenario_dimensions(scenario: ScenarioModel):
    """
    Ambient dimension d, the dimension of the set of all behaviours, the Bell and
    no-signalling dimension, and the number of input collections.
    """
    return _run("scenario_dimensions", operations.dimensions, scenario)


@app.post("/vertices", response_model=VertexSetModel, summary="Enumerate the vertices of a polytope")
def list_vertices(request: VerticesRequest, db: Session = Depends(get_db)):
    """
    Vertices of E(S), B(S), NS(S) or PD(S, M′).

    Returns:
        VertexSetModel: Canonically ordered vertices, nonzero table entries only.

    Raises:
        HTTPException 400: Malformed scenario or collection.
        HTTPException 413: The enumeration exceeds its budget.
    """
    return _run("list_vertices", operations.vertices, request, db)


@app.post("/facets", response_model=HRepModel, summary="Facets of a polytope")
def list_facets(request: VerticesRequest, db: Session = Depends(get_db)):
    """
    Facet inequalities (integer, primitive) and affine-hull equalities of the
    polytope named by the request.
    """
    return _run("list_facets", operations.facets, request, db)


@app.post("/membership", response_model=CertificateModel, summary="Decide membership of a behaviour")
def check_membership(request: MembershipRequest):
    """
    Returns convex weights over the family's vertices when the behaviour is inside,
    otherwise a separating inequality.
    """
    return _run("check_membership", operations.member, request)


@app.post("/classify", response_model=ClassificationModel, summary="Classify all input collections")
def classify(request: ClassifyRequest, db: Session = Depends(get_db)):
    """
    Equivalence classes of PD(S, M′) over every M′, with their Hasse relations.
    """
    return _run("classify", operations.classify, request, db)


@app.post("/inseparability", response_model=InseparabilityModel, summary="Party-inseparability witnesses")
def inseparability(request: InseparabilityRequest):
    return _run("inseparability", operations.inseparability, request)


@app.post("/joint", response_model=JointModel, summary="Fine joint distribution of a behaviour")
def joint_distribution(request: JointRequest):
    return _run("joint_distribution", operations.joint, request)


@app.get("/demos/{name}", response_model=DemoResultModel, summary="Run a worked example")
def demo(name: DemoName = Path(..., description="Worked example to run")):
    return _run("demo", lambda: DemoResultModel.from_domain(run_demo(name)))


@app.get("/computations", response_model=List[ComputationModel], summary="List cached computations")
def list_computations(
    kind: Optional[str] = Query(None, description="Filter by kind: 'vertices', 'facets' or 'classify'"),
    since: Optional[datetime] = Query(None, description="Only results stored after this datetime (ISO 8601)"),
    db: Session = Depends(get_db)
):
    try:
        return [
            ComputationModel(
                id=r.id,
                kind=r.kind,
                family=r.family or None,
                collection_key=r.collection_key or None,
                count=r.count,
                created_at=r.created_at.isoformat(),
            )
            for r in crud.get_computations(db=db, kind=kind, since=since)
        ]
    except Exception:
        logger.exception("Failed to fetch computations")
        raise HTTPException(status_code=500, detail="Internal server error")


@app.delete("/computations/{computation_id}", status_code=204, summary="Drop a cached computation")
def delete_computation(
    computation_id: int = Path(..., description="ID of the cached computation"),
    db: Session = Depends(get_db)
):
    try:
        crud.delete_computation(db=db, computation_id=computation_id)
    except ValueError as e:
        raise HTTPException(status_code=404, detail=str(e))
    except Exception:
        logger.exception("Failed to delete computation")
        raise HTTPException(status_code=500, detail="Internal server error")
