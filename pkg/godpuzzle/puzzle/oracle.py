"""How the gods answer: speaking modes, answer sets and admissibility."""
import logging
import random
from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Iterable, Optional, Tuple

from godpuzzle.puzzle.errors import NatureViolationError
from godpuzzle.puzzle.question import Question, evaluate
from godpuzzle.puzzle.world import (
    Answer,
    CoinFace,
    GodName,
    Role,
    World,
    all_worlds,
    random_god,
    role_of,
)

logger = logging.getLogger(__name__)

AnswerSet = FrozenSet[Answer]

BOTH_ANSWERS: AnswerSet = frozenset((Answer.DA, Answer.JA))


class SpeakingMode(str, Enum):
    TRUTHFUL = "Truthful"
    LYING = "Lying"


class RandomVariant(str, Enum):
    """How Random chooses its answer."""

    # Coin decides truthful or lying, then Random answers accordingly.
    COIN = "boolos"
    # Random ignores the question and utters a uniformly random word.
    UNIFORM = "rabern"


def speaking_mode(role: Role, coin: CoinFace) -> SpeakingMode:
    """Speaking mode of a god with `role` after `coin` was flipped."""
    if role is Role.TRUE:
        return SpeakingMode.TRUTHFUL
    if role is Role.FALSE:
        return SpeakingMode.LYING
    return SpeakingMode.TRUTHFUL if coin is CoinFace.HEADS else SpeakingMode.LYING


def modes_for(role: Role) -> Tuple[SpeakingMode, ...]:
    """Speaking modes a god with `role` may be in."""
    return tuple(dict.fromkeys(speaking_mode(role, coin) for coin in CoinFace))


def _ignores_content(world: World, addressee: GodName, variant: RandomVariant) -> bool:
    return variant is RandomVariant.UNIFORM and random_god(world.scenario) is addressee


def answer_set(q: Question, world: World, addressee: GodName, mode: SpeakingMode,
               variant: RandomVariant = RandomVariant.COIN) -> AnswerSet:
    """
    Words the addressee can utter without violating its nature.

    A word is possible when what it asserts (its meaning, read as yes/no) matches
    the truth of `q` given that very word as the answer (truthful mode), or
    contradicts it (lying mode).

    Args:
        q: Question asked
        world: Hidden world
        addressee: God asked
        mode: Speaking mode of the addressee for this question
        variant: Random's answering behavior

    Returns:
        Possibly empty set of answers; empty means inadmissible
    """
    if _ignores_content(world, addressee, variant):
        return BOTH_ANSWERS
    truthful = mode is SpeakingMode.TRUTHFUL
    return frozenset(
        answer for answer in Answer
        if (world.language.means_yes(answer) == evaluate(q, world, addressee, answer)) == truthful
    )


def admissible(q: Question, world: World, addressee: GodName, mode: SpeakingMode,
               variant: RandomVariant = RandomVariant.COIN) -> bool:
    """A question is admissible when the god can answer it with Da or Ja."""
    return bool(answer_set(q, world, addressee, mode, variant))


@dataclass(frozen=True)
class AskabilityWitness:
    """A world and mode in which a question cannot be answered."""

    world: World
    addressee: GodName
    mode: SpeakingMode

    @property
    def role(self) -> Role:
        return role_of(self.world.scenario, self.addressee)

    def describe(self) -> str:
        return (f"бог может оказаться {self.role.value} "
                f"(мир {self.world.label}, режим {self.mode.value})")


def askability_witness(q: Question, addressee: GodName, worlds: Iterable[World],
                       variant: RandomVariant = RandomVariant.COIN) -> Optional[AskabilityWitness]:
    """Return the first (world, mode) where `q` has no answer, or None."""
    for world in worlds:
        for mode in modes_for(role_of(world.scenario, addressee)):
            if not admissible(q, world, addressee, mode, variant):
                return AskabilityWitness(world, addressee, mode)
    return None


def askable(q: Question, addressee: GodName, belief,
            variant: RandomVariant = RandomVariant.COIN) -> bool:
    """
    Check admissibility in every world and mode the belief leaves open.

    Args:
        q: Question
        addressee: God to ask
        belief: Belief state (or prior) with non-empty support
        variant: Random's answering behavior

    Returns:
        True if the addressee could answer in every supported world and mode
    """
    return askability_witness(q, addressee, belief.support(), variant) is None


def admissible_roles(q: Question, coin: CoinFace,
                     variant: RandomVariant = RandomVariant.COIN) -> Tuple[Role, ...]:
    """Roles for which `q` is admissible in every world once `coin` is flipped."""
    roles = []
    for role in Role:
        cases = [
            (world, god) for world in all_worlds() for god in GodName
            if role_of(world.scenario, god) is role
        ]
        if all(admissible(q, world, god, speaking_mode(role, coin), variant) for world, god in cases):
            roles.append(role)
    return tuple(roles)


def draw_answer(q: Question, world: World, addressee: GodName, coin: CoinFace,
                rng: random.Random,
                variant: RandomVariant = RandomVariant.COIN) -> Answer:
    """
    Sample the answer the addressee gives.

    Args:
        q: Question asked
        world: Hidden world
        addressee: God asked
        coin: Coin face flipped for this question
        rng: Random source; consumed only when two answers are possible
        variant: Random's answering behavior

    Returns:
        The god's answer

    Raises:
        NatureViolationError: the god cannot answer in this world and mode
    """
    role = role_of(world.scenario, addressee)
    mode = speaking_mode(role, coin)
    options = answer_set(q, world, addressee, mode, variant)
    if not options:
        raise NatureViolationError(
            f"{addressee.value} ({role.value}, {mode.value}) cannot answer {q} in {world.label}"
        )
    if len(options) == 1:
        return next(iter(options))
    return (Answer.DA, Answer.JA)[rng.randrange(2)]
