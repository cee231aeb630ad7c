"""
Run ledger: optional SQLAlchemy tables recording workflow runs

Disabled unless FILLING_AUDIT_DB holds a database URL.
"""
from datetime import datetime
from functools import lru_cache
from typing import Optional

from sqlalchemy import JSON, Column, DateTime, Integer, String, create_engine
from sqlalchemy.orm import declarative_base, sessionmaker

from core.config.config import config

Base = declarative_base()


class RunRecord(Base):
    """One command invocation"""
    __tablename__ = 'runs'

    run_id = Column(String, primary_key=True)
    command = Column(String, nullable=False)
    config_hash = Column(String)
    seed = Column(Integer)
    outcome = Column(String)  # PASSED, FAILED, REFUSED, ERROR
    checks_total = Column(Integer, default=0)
    checks_failed = Column(Integer, default=0)
    refusals = Column(Integer, default=0)

    created_at = Column(DateTime, default=datetime.utcnow)
    finished_at = Column(DateTime)

    def __repr__(self):
        return f"<RunRecord(id={self.run_id}, command={self.command}, outcome={self.outcome})>"


class AuditLog(Base):
    """One node execution"""
    __tablename__ = 'audit_logs'

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_id = Column(String, nullable=False)
    node_name = Column(String)
    action = Column(String)
    result = Column(String)
    details = Column(JSON)
    timestamp = Column(DateTime, default=datetime.utcnow)


@lru_cache(maxsize=None)
def _engine(database_url: str):
    engine = create_engine(database_url)
    Base.metadata.create_all(engine)
    return engine


def ledger_enabled(database_url: Optional[str] = None) -> bool:
    return bool(database_url if database_url is not None else config.AUDIT_DB)


def init_db(database_url: Optional[str] = None):
    """Create the ledger tables; returns the engine"""
    return _engine(database_url or config.AUDIT_DB)


def get_session(database_url: Optional[str] = None):
    """Get database session"""
    Session = sessionmaker(bind=_engine(database_url or config.AUDIT_DB))
    return Session()
