from contextlib import contextmanager
from typing import Iterator

from sqlalchemy import create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.orm import Session, sessionmaker

from app.config import Settings
from app.models import Base

settings = Settings()


def make_engine(url: str) -> Engine:
    """SQLite files are shared between API worker threads."""
    return create_engine(
        url,
        connect_args={"check_same_thread": False} if url.startswith("sqlite") else {},
        future=True
    )


engine = make_engine(settings.DATABASE_URL)

SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)


def init_db(bind: Engine = engine) -> None:
    Base.metadata.create_all(bind=bind)


@contextmanager
def session_scope(url: str | None = None) -> Iterator[Session]:
    """
    Session for one CLI invocation; a url other than the configured one opens its own engine.
    """
    bind = engine if url is None or url == settings.DATABASE_URL else make_engine(url)
    init_db(bind)
    session = Session(bind=bind, autoflush=False, future=True)
    try:
        yield session
    finally:
        session.close()
