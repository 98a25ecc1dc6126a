import json
from datetime import datetime
from typing import List, Optional

from sqlalchemy.orm import Session

from app.logger import logger
from app.models import ComputationRecord
from app.schemas import ScenarioModel


def scenario_key(scenario: ScenarioModel) -> str:
    """Canonical JSON of a scenario, with the default binary outputs filled in."""
    return json.dumps(ScenarioModel.from_domain(scenario.to_domain()).model_dump(), sort_keys=True)


def get_cached(
    db: Session,
    kind: str,
    scenario: str,
    family: str = "",
    collection_key: str = ""
) -> Optional[dict]:
    """
    Look up a stored result.

    Args:
        db (Session): SQLAlchemy session.
        kind (str): "vertices", "facets" or "classify".
        scenario (str): Canonical scenario key from `scenario_key`.
        family (str): Family tag of the vertex set.
        collection_key (str): Key of M′, empty unless the family is pd.

    Returns:
        dict | None: The stored response body, or None on a miss.
    """
    record = (
        db.query(ComputationRecord)
        .filter(
            ComputationRecord.kind == kind,
            ComputationRecord.scenario_key == scenario,
            ComputationRecord.family == family,
            ComputationRecord.collection_key == collection_key,
        )
        .order_by(ComputationRecord.created_at.desc())
        .first()
    )
    if record is None:
        logger.debug(f"Cache miss for {kind} {family} {collection_key}")
        return None
    logger.info(f"Cache hit for {kind} {family} {collection_key} (record {record.id})")
    return json.loads(record.payload)


def save_result(
    db: Session,
    kind: str,
    scenario: str,
    payload: dict,
    count: int,
    family: str = "",
    collection_key: str = ""
) -> ComputationRecord:
    """
    Persist a computed result.

    Returns:
        ComputationRecord: The stored record.
    """
    record = ComputationRecord(
        kind=kind,
        scenario_key=scenario,
        family=family,
        collection_key=collection_key,
        count=count,
        payload=json.dumps(payload),
    )
    try:
        db.add(record)
        db.commit()
        db.refresh(record)
        logger.info(f"Stored {kind} result with ID {record.id}")
    except Exception:
        db.rollback()
        logger.exception("Database error while storing a computation")
        raise
    return record


def get_computations(
    db: Session,
    kind: Optional[str] = None,
    since: Optional[datetime] = None
) -> List[ComputationRecord]:
    """
    Retrieve stored computations filtered by kind and/or creation time, newest first.
    """
    query = db.query(ComputationRecord)

    if kind:
        query = query.filter(ComputationRecord.kind == kind)

    if since:
        query = query.filter(ComputationRecord.created_at >= since)

    return query.order_by(ComputationRecord.created_at.desc()).all()


def delete_computation(db: Session, computation_id: int) -> None:
    """
    Raises:
        ValueError: If no computation has that ID.
    """
    record = db.query(ComputationRecord).filter(ComputationRecord.id == computation_id).first()

    if not record:
        raise ValueError(f"Computation with ID {computation_id} not found")

    db.delete(record)
    db.commit()
    logger.info(f"Deleted computation {computation_id}")
