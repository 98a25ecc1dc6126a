from datetime import datetime, timedelta, timezone

import pytest

from app import crud
from app.database import SessionLocal, init_db
from app.schemas import ScenarioModel


@pytest.fixture
def db():
    init_db()
    session = SessionLocal()
    try:
        yield session
    finally:
        session.close()


def test_scenario_key_fills_default_outputs():
    short = ScenarioModel(parties=["A", "B"], inputs={"A": ["1", "2"], "B": ["1", "2"]})
    explicit = ScenarioModel(
        parties=["A", "B"],
        inputs={"A": ["1", "2"], "B": ["1", "2"]},
        outputs={p: {x: ["0", "1"] for x in ("1", "2")} for p in ("A", "B")},
    )
    assert crud.scenario_key(short) == crud.scenario_key(explicit)


def test_save_and_fetch(db):
    key = '{"test": "save_and_fetch"}'
    assert crud.get_cached(db, "vertices", key, "bell") is None
    record = crud.save_result(db, "vertices", key, {"count": 3}, 3, "bell")
    assert record.id is not None
    assert crud.get_cached(db, "vertices", key, "bell") == {"count": 3}
    assert crud.get_cached(db, "vertices", key, "ns") is None


def test_list_and_delete(db):
    key = '{"test": "list_and_delete"}'
    record = crud.save_result(db, "facets", key, {"inequalities": []}, 0, "ns")
    assert record.id in {r.id for r in crud.get_computations(db, kind="facets")}
    future = datetime.now(timezone.utc) + timedelta(days=1)
    assert record.id not in {r.id for r in crud.get_computations(db, since=future.replace(tzinfo=None))}
    crud.delete_computation(db, record.id)
    assert crud.get_cached(db, "facets", key, "ns") is None
    with pytest.raises(ValueError, match="not found"):
        crud.delete_computation(db, record.id)
