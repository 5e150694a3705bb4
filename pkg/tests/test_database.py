import asyncio

from godpuzzle.database.database import with_database


def test_play_sessions_are_stored(db_url):
    async def scenario(db):
        await db.save_play_session(seed=7, variant="boolos", hidden_world="S4/da=no",
                                   questions_asked=3, verdict="success", transcript_json="{}")
        await db.save_play_session(seed=8, variant="rabern", hidden_world="S1/da=yes",
                                   questions_asked=1, verdict="failure", transcript_json="{}")
        return await db.get_recent_sessions(limit=5)

    sessions = asyncio.run(with_database(scenario, db_url))
    assert [s.seed for s in sessions] == ["8", "7"]
    assert sessions[1].hidden_world == "S4/da=no"
    assert sessions[0].created_at is not None


def test_verification_runs_are_stored(db_url):
    async def scenario(db):
        await db.save_verification_run("boolos", True, [], "{}")
        await db.save_verification_run("boolos", False, ["determinism", "q_admissibility"], "{}")
        return await db.get_recent_runs(limit=1)

    [latest] = asyncio.run(with_database(scenario, db_url))
    assert not latest.passed
    assert latest.failed_checks == "determinism,q_admissibility"


def test_database_survives_reopening(db_url):
    async def save(db):
        await db.save_verification_run("rabern", True, [], "{}")

    async def load(db):
        return await db.get_recent_runs()

    asyncio.run(with_database(save, db_url))
    [run] = asyncio.run(with_database(load, db_url))
    assert run.failed_checks is None
    assert run.variant == "rabern"


def test_full_range_seed_is_stored(db_url):
    seed = 2 ** 64 - 1

    async def scenario(db):
        await db.save_play_session(seed=seed, variant="boolos", hidden_world="S2/da=yes",
                                   questions_asked=0, verdict="abandoned", transcript_json="{}")
        return await db.get_recent_sessions(limit=1)

    [stored] = asyncio.run(with_database(scenario, db_url))
    assert int(stored.seed) == seed
