"""Exact Bayesian belief over the 12 worlds."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict

from godpuzzle.puzzle.errors import ImpossibleObservationError, NatureViolationError
from godpuzzle.puzzle.oracle import RandomVariant, answer_set, modes_for
from godpuzzle.puzzle.question import Question
from godpuzzle.puzzle.world import (
    Answer,
    GodName,
    World,
    WorldDistribution,
    prior_to_mapping,
    role_of,
)

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class BeliefState(WorldDistribution):
    """What the interrogator knows: a distribution over worlds."""

    def to_mapping(self) -> Dict[str, str]:
        return prior_to_mapping(self)


def initial_belief(prior: WorldDistribution) -> BeliefState:
    """Start from the prior; rejects weights that do not sum to 1."""
    return BeliefState(tuple(prior.weights))


def likelihood(answer: Answer, q: Question, world: World, addressee: GodName,
               variant: RandomVariant = RandomVariant.COIN) -> Fraction:
    """
    Probability that `addressee` answers `answer` to `q` in `world`.

    A Random god's coin is marginalized: each speaking mode counts 1/2. When an
    answer set has two words, each is picked with probability 1/2.

    Args:
        answer: Observed word
        q: Question asked
        world: Candidate world
        addressee: God asked
        variant: Random's answering behavior

    Returns:
        Probability in {0, 1/2, 1}

    Raises:
        NatureViolationError: some speaking mode open in this world has no answer
    """
    role = role_of(world.scenario, addressee)
    modes = modes_for(role)
    total = Fraction(0)
    for mode in modes:
        options = answer_set(q, world, addressee, mode, variant)
        if not options:
            raise NatureViolationError(
                f"{addressee.value} cannot answer {q} in {world.label} ({mode.value})"
            )
        if answer in options:
            total += Fraction(1, len(options) * len(modes))
    return total


def answer_distribution(belief: WorldDistribution, q: Question, addressee: GodName,
                        variant: RandomVariant = RandomVariant.COIN) -> Dict[Answer, Fraction]:
    """Predictive probability of each answer under `belief`."""
    return {
        answer: sum(
            (weight * likelihood(answer, q, world, addressee, variant)
             for world, weight in belief.items() if weight),
            Fraction(0),
        )
        for answer in Answer
    }


def update(belief: WorldDistribution, q: Question, addressee: GodName, answer: Answer,
           variant: RandomVariant = RandomVariant.COIN) -> BeliefState:
    """
    Condition `belief` on `addressee` answering `answer` to `q`.

    Args:
        belief: Current belief
        q: Question asked (must be askable under `belief`)
        addressee: God asked
        answer: Observed word
        variant: Random's answering behavior

    Returns:
        Posterior belief

    Raises:
        ImpossibleObservationError: the answer has probability zero
    """
    raw = [
        weight * likelihood(answer, q, world, addressee, variant) if weight else Fraction(0)
        for world, weight in belief.items()
    ]
    total = sum(raw, Fraction(0))
    if total == 0:
        raise ImpossibleObservationError(
            f"{addressee.value} cannot answer {answer.value} to {q} under this belief"
        )
    posterior = BeliefState(tuple(weight / total for weight in raw))
    logger.debug(f"Update on {addressee.value}:{answer.value} -> support {len(posterior.support())}")
    return posterior

