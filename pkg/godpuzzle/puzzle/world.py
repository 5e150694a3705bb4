"""Sample space of the puzzle: gods, roles, scenarios, word meanings and priors."""
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Tuple

from godpuzzle.puzzle.errors import InvalidPriorError

logger = logging.getLogger(__name__)


class GodName(str, Enum):
    """The three gods, ordered A < B < C for tie-breaking."""

    A = "A"
    B = "B"
    C = "C"

    @property
    def index(self) -> int:
        return _GOD_ORDER.index(self)


_GOD_ORDER = (GodName.A, GodName.B, GodName.C)


class Role(str, Enum):
    TRUE = "True"
    FALSE = "False"
    RANDOM = "Random"


class ScenarioId(str, Enum):
    """One assignment of roles to gods A, B and C."""

    S1 = "S1"
    S2 = "S2"
    S3 = "S3"
    S4 = "S4"
    S5 = "S5"
    S6 = "S6"

    @property
    def index(self) -> int:
        return int(self.value[1:]) - 1


# Rows give the roles of A, B and C.
SCENARIO_TABLE: Dict[ScenarioId, Tuple[Role, Role, Role]] = {
    ScenarioId.S1: (Role.TRUE, Role.FALSE, Role.RANDOM),
    ScenarioId.S2: (Role.TRUE, Role.RANDOM, Role.FALSE),
    ScenarioId.S3: (Role.FALSE, Role.TRUE, Role.RANDOM),
    ScenarioId.S4: (Role.FALSE, Role.RANDOM, Role.TRUE),
    ScenarioId.S5: (Role.RANDOM, Role.TRUE, Role.FALSE),
    ScenarioId.S6: (Role.RANDOM, Role.FALSE, Role.TRUE),
}


class Answer(str, Enum):
    """The two words the gods answer with."""

    DA = "Da"
    JA = "Ja"


class LanguageMap(str, Enum):
    """Which of the two words means yes."""

    DA_YES = "da=yes"
    DA_NO = "da=no"

    def means_yes(self, answer: Answer) -> bool:
        """Return True when `answer` means yes under this map."""
        return (answer is Answer.DA) == (self is LanguageMap.DA_YES)


class CoinFace(str, Enum):
    HEADS = "Heads"
    TAILS = "Tails"


@dataclass(frozen=True)
class World:
    """A scenario paired with a word-meaning map."""

    scenario: ScenarioId
    language: LanguageMap

    @property
    def label(self) -> str:
        return f"{self.scenario.value}/{self.language.value}"

    @property
    def index(self) -> int:
        """Position in the canonical order of `all_worlds()`."""
        return self.scenario.index * 2 + (0 if self.language is LanguageMap.DA_YES else 1)

    def role_of(self, god: GodName) -> Role:
        return role_of(self.scenario, god)

    def __str__(self) -> str:
        return self.label


def role_of(scenario: ScenarioId, god: GodName) -> Role:
    """Look up a god's role in a scenario."""
    return SCENARIO_TABLE[scenario][god.index]


def random_god(scenario: ScenarioId) -> GodName:
    """Return the god who is Random in `scenario`."""
    return _GOD_ORDER[SCENARIO_TABLE[scenario].index(Role.RANDOM)]


@lru_cache(maxsize=None)
def _worlds() -> Tuple[World, ...]:
    return tuple(
        World(scenario, language)
        for scenario in ScenarioId
        for language in (LanguageMap.DA_YES, LanguageMap.DA_NO)
    )


def all_worlds() -> List[World]:
    """Return the 12 worlds, S1..S6 with da=yes before da=no."""
    return list(_worlds())


def parse_world(label: str) -> World:
    """
    Parse a world label such as "S4/da=no".

    Args:
        label: Scenario and language separated by a slash

    Returns:
        The matching world
    """
    try:
        scenario_text, language_text = label.strip().split("/")
        return World(ScenarioId(scenario_text.strip().upper()),
                     LanguageMap(language_text.strip().lower()))
    except ValueError as e:
        raise ValueError(f"Unknown world label: {label!r}") from e


@dataclass(frozen=True)
class WorldDistribution:
    """Exact weights over the 12 worlds in canonical order."""

    weights: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.weights) != 12:
            raise InvalidPriorError(f"Expected 12 weights, got {len(self.weights)}")
        if any(weight < 0 for weight in self.weights):
            raise InvalidPriorError("Weights must be nonnegative")
        total = sum(self.weights, Fraction(0))
        if total != 1:
            raise InvalidPriorError(f"Weights must sum to exactly 1, got {total}")

    def weight(self, world: World) -> Fraction:
        return self.weights[world.index]

    def support(self) -> List[World]:
        return [w for w in _worlds() if self.weights[w.index] > 0]

    def scenario_mass(self, scenario: ScenarioId) -> Fraction:
        i = scenario.index * 2
        return self.weights[i] + self.weights[i + 1]

    def scenario_marginals(self) -> Dict[ScenarioId, Fraction]:
        return {s: self.scenario_mass(s) for s in ScenarioId}

    def language_marginals(self) -> Dict[LanguageMap, Fraction]:
        return {
            LanguageMap.DA_YES: sum(self.weights[0::2], Fraction(0)),
            LanguageMap.DA_NO: sum(self.weights[1::2], Fraction(0)),
        }

    def items(self) -> Iterable[Tuple[World, Fraction]]:
        return zip(_worlds(), self.weights)


class Prior(WorldDistribution):
    """Prior weight per world."""


def uniform_prior() -> Prior:
    """Every world gets exactly 1/12."""
    return Prior(tuple(Fraction(1, 12) for _ in range(12)))


def concentrated_prior(world: World) -> Prior:
    """All mass on a single world."""
    return Prior(tuple(Fraction(int(w == world)) for w in _worlds()))


def prior_from_mapping(mapping: Mapping[str, object]) -> Prior:
    """
    Build a prior from a map of world label to weight.

    Missing worlds get weight 0. Weights may be "num/den" strings or integers.

    Args:
        mapping: World label to weight

    Returns:
        Validated prior
    """
    weights = [Fraction(0)] * 12
    for label, value in mapping.items():
        try:
            weights[parse_world(label).index] = Fraction(str(value))
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidPriorError(f"Bad prior entry {label!r}: {value!r}") from e
    prior = Prior(tuple(weights))
    logger.debug(f"Loaded prior with support {len(prior.support())}")
    return prior


def prior_to_mapping(distribution: WorldDistribution) -> Dict[str, str]:
    """Serialize weights as world label -> "num/den"."""
    return {
        world.label: f"{weight.numerator}/{weight.denominator}"
        for world, weight in distribution.items()
    }
