import pytest

from godpuzzle.config import Config


def test_defaults_are_valid():
    Config.validate()
    assert Config.PUZZLE_VARIANT in ("boolos", "rabern")


@pytest.mark.parametrize("name,value", [
    ("PUZZLE_VARIANT", "boolos-ish"),
    ("PUZZLE_SEED", -1),
    ("MAX_QUESTIONS", -1),
    ("SEARCH_MAX_STATES", 0),
    ("PROPERTY_SAMPLES", 0),
])
def test_invalid_values_rejected(monkeypatch, name, value):
    monkeypatch.setattr(Config, name, value)
    with pytest.raises(ValueError):
        Config.validate()
