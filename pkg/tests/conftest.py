import pytest

from godpuzzle.puzzle.world import uniform_prior


@pytest.fixture
def uniform():
    return uniform_prior()


@pytest.fixture
def db_url(tmp_path):
    return f"sqlite+aiosqlite:///{tmp_path / 'godpuzzle-test.db'}"
