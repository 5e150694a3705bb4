"""Input validation utilities."""
import re
from typing import Optional, Tuple

from godpuzzle.puzzle.question import Question, parse
from godpuzzle.puzzle.world import GodName, ScenarioId

_ASK = re.compile(r'^\s*ask\s+([A-Za-z]+)\s*:\s*(.*)$', re.IGNORECASE)
_GUESS = re.compile(r'^\s*guess\s+(\S+)\s*$', re.IGNORECASE)


def validate_god(text: str) -> Tuple[bool, Optional[str]]:
    """
    Validate a god name.

    Args:
        text: God name to validate

    Returns:
        Tuple of (is_valid, error_message)
    """
    if not text or not text.strip():
        return False, "Имя бога не может быть пустым"
    if text.strip().upper() not in GodName.__members__:
        return False, f"Неизвестный бог '{text.strip()}'. Используйте A, B или C."
    return True, None


def validate_scenario(text: str) -> Tuple[bool, Optional[str]]:
    """Validate a scenario name S1..S6."""
    if not re.match(r'^[sS][1-6]$', text.strip()):
        return False, f"Неизвестный сценарий '{text.strip()}'. Используйте S1..S6."
    return True, None


def parse_ask_command(line: str) -> Optional[Tuple[GodName, Question]]:
    """
    Parse "ask <god>: <question>".

    Returns:
        Tuple of (god, question) if valid, None if the line is not an ask command

    Raises:
        QuestionSyntaxError: the question part is malformed
        ValueError: the god is unknown
    """
    match = _ASK.match(line)
    if not match:
        return None
    is_valid, error = validate_god(match.group(1))
    if not is_valid:
        raise ValueError(error)
    return GodName(match.group(1).upper()), parse(match.group(2))


def parse_guess_command(line: str) -> Optional[ScenarioId]:
    """
    Parse "guess <S1..S6>".

    Returns:
        Scenario if valid, None if the line is not a guess command

    Raises:
        ValueError: the scenario is unknown
    """
    match = _GUESS.match(line)
    if not match:
        return None
    is_valid, error = validate_scenario(match.group(1))
    if not is_valid:
        raise ValueError(error)
    return ScenarioId(match.group(1).upper())
