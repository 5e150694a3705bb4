"""Database models for persisted sessions and verification runs."""
from datetime import datetime, timezone
from sqlalchemy import Boolean, Column, DateTime, Integer, String, Text
from sqlalchemy.orm import declarative_base

Base = declarative_base()


def _utcnow():
    return datetime.now(timezone.utc)


class PlaySession(Base):
    """One interrogation session played through the CLI."""

    __tablename__ = 'play_sessions'

    session_id = Column(Integer, primary_key=True, autoincrement=True)
    seed = Column(String(20), nullable=False)  # decimal u64
    variant = Column(String(20), nullable=False)
    hidden_world = Column(String(20), nullable=False)  # e.g. S4/da=no
    questions_asked = Column(Integer, default=0)
    verdict = Column(String(20), nullable=False)  # success, failure, abandoned
    transcript_json = Column(Text, nullable=False)
    created_at = Column(DateTime, default=_utcnow)

    def __repr__(self):
        return f"<PlaySession(session_id={self.session_id}, verdict={self.verdict})>"


class VerificationRun(Base):
    """One run of the verification suite."""

    __tablename__ = 'verification_runs'

    run_id = Column(Integer, primary_key=True, autoincrement=True)
    variant = Column(String(20), nullable=False)
    passed = Column(Boolean, nullable=False)
    failed_checks = Column(Text, nullable=True)  # comma separated check names
    report_json = Column(Text, nullable=False)
    created_at = Column(DateTime, default=_utcnow)

    def __repr__(self):
        return f"<VerificationRun(run_id={self.run_id}, passed={self.passed})>"
