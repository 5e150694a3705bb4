"""Database connection and session management."""
import logging
from typing import Awaitable, Callable, List, Optional, Sequence, TypeVar

from sqlalchemy.ext.asyncio import create_async_engine, AsyncSession, async_sessionmaker
from sqlalchemy.future import select

from godpuzzle.database.models import Base, PlaySession, VerificationRun
from godpuzzle.config import Config

logger = logging.getLogger(__name__)

T = TypeVar("T")


class Database:
    """Database manager for async operations."""

    def __init__(self, url: Optional[str] = None):
        self.url = url or Config.DATABASE_URL
        self.engine = create_async_engine(self.url, echo=False)
        self.async_session = async_sessionmaker(
            self.engine, class_=AsyncSession, expire_on_commit=False
        )

    async def init_db(self):
        """Initialize database tables."""
        async with self.engine.begin() as conn:
            await conn.run_sync(Base.metadata.create_all)

    async def close(self):
        await self.engine.dispose()

    async def save_play_session(
        self,
        seed: int,
        variant: str,
        hidden_world: str,
        questions_asked: int,
        verdict: str,
        transcript_json: str,
    ) -> PlaySession:
        """Store a finished play session."""
        async with self.async_session() as session:
            row = PlaySession(
                seed=str(seed),
                variant=variant,
                hidden_world=hidden_world,
                questions_asked=questions_asked,
                verdict=verdict,
                transcript_json=transcript_json,
            )
            session.add(row)
            await session.commit()
            await session.refresh(row)
            logger.info(f"Saved play session {row.session_id} ({verdict})")
            return row

    async def save_verification_run(
        self,
        variant: str,
        passed: bool,
        failed_checks: Sequence[str],
        report_json: str,
    ) -> VerificationRun:
        """Store the outcome of a verification run."""
        async with self.async_session() as session:
            row = VerificationRun(
                variant=variant,
                passed=passed,
                failed_checks=",".join(failed_checks) or None,
                report_json=report_json,
            )
            session.add(row)
            await session.commit()
            await session.refresh(row)
            logger.info(f"Saved verification run {row.run_id} (passed={passed})")
            return row

    async def get_recent_sessions(self, limit: int = 10) -> List[PlaySession]:
        """Get the most recent play sessions."""
        async with self.async_session() as session:
            result = await session.execute(
                select(PlaySession)
                .order_by(PlaySession.session_id.desc())
                .limit(limit)
            )
            return list(result.scalars().all())

    async def get_recent_runs(self, limit: int = 10) -> List[VerificationRun]:
        """Get the most recent verification runs."""
        async with self.async_session() as session:
            result = await session.execute(
                select(VerificationRun)
                .order_by(VerificationRun.run_id.desc())
                .limit(limit)
            )
            return list(result.scalars().all())


async def with_database(action: Callable[[Database], Awaitable[T]], url: Optional[str] = None) -> T:
    """Open a database, make sure the tables exist, run `action(db)` and close it."""
    db = Database(url)
    try:
        await db.init_db()
        return await action(db)
    finally:
        await db.close()
