from sqlalchemy import Column, Integer, String, DateTime, Text
from sqlalchemy.orm import declarative_base
from datetime import datetime, timezone

Base = declarative_base()


class ComputationRecord(Base):
    """
    SQLAlchemy ORM model caching the result of an expensive enumeration.

    Attributes:
        id (int): Primary key.
        kind (str): What was computed ("vertices", "facets" or "classify").
        scenario_key (str): Canonical JSON of the scenario.
        family (str): Vertex family tag, empty for classifications.
        collection_key (str): Key of M′ for pd results, empty otherwise.
        count (int): Number of vertices, facets or classes in the payload.
        payload (str): The JSON response body.
        created_at (datetime): Time the result was stored.
    """

    __tablename__ = "computations"

    id = Column(Integer, primary_key=True, index=True)
    kind = Column(String, nullable=False, index=True)
    scenario_key = Column(Text, nullable=False, index=True)
    family = Column(String, default="")
    collection_key = Column(String, default="")
    count = Column(Integer, default=0)
    payload = Column(Text, nullable=False)
    created_at = Column(DateTime, default=lambda: datetime.now(timezone.utc))
