"""Published chances of solving by luck, set beside the engine's optima."""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from godpuzzle.puzzle.oracle import RandomVariant, admissible, speaking_mode
from godpuzzle.puzzle.question import Question
from godpuzzle.puzzle.world import CoinFace, GodName, WorldDistribution, all_worlds, role_of
from godpuzzle.services.search import SearchService, search_service

logger = logging.getLogger(__name__)

THIRD = Fraction(1, 3)
HALF = Fraction(1, 2)

# Stated totals for solving with 0, 1 and 2 questions.
_CLAIMED = {0: Fraction(1, 6), 1: Fraction(1, 6), 2: Fraction(1, 3)}

# Case products from the proofs: (A is Random) then (A is not Random).
_CASE_FACTORS = {
    1: [(THIRD, HALF), (2 * THIRD, Fraction(1, 4))],
    2: [(THIRD, Fraction(1)), (2 * THIRD, Fraction(1), HALF)],
}


def _product(factors) -> Fraction:
    result = Fraction(1)
    for factor in factors:
        result *= factor
    return result


@dataclass(frozen=True)
class ClaimRow:
    k: int
    published_claim: Fraction
    published_case_terms: List[Fraction]
    engine_optimum: Fraction
    agrees_with_claim: bool
    agrees_with_case_sum: Optional[bool]

    @property
    def case_sum(self) -> Optional[Fraction]:
        if not self.published_case_terms:
            return None
        return sum(self.published_case_terms, Fraction(0))


@dataclass(frozen=True)
class ClaimReport:
    variant: RandomVariant
    rows: List[ClaimRow] = field(default_factory=list)

    @property
    def all_agree(self) -> bool:
        return all(row.agrees_with_claim for row in self.rows)


class ProbabilityService:
    """Transcribed constants and their comparison with search results."""

    def __init__(self, search: Optional[SearchService] = None):
        self.search = search or search_service

    def published_claim(self, k: int) -> Fraction:
        if k not in _CLAIMED:
            raise ValueError(f"k must be 0, 1 or 2, got {k}")
        return _CLAIMED[k]

    def published_case_terms(self, k: int) -> List[Fraction]:
        """Each case term of the proof for k questions, as the exact product of its factors."""
        if k not in _CASE_FACTORS:
            raise ValueError(f"k must be 1 or 2, got {k}")
        return [_product(factors) for factors in _CASE_FACTORS[k]]

    def first_step_admissibility(self, q: Question,
                                 variant: RandomVariant = RandomVariant.COIN
                                 ) -> Tuple[Fraction, Fraction]:
        """
        Chance that `q` is admissible as a first question, split by coin face.

        The addressee is uniform over the three gods and the world uniform over
        the twelve; each coin case carries weight 1/2.

        Returns:
            (heads case, tails case)
        """
        worlds = all_worlds()
        cases = []
        for coin in (CoinFace.HEADS, CoinFace.TAILS):
            hits = sum(
                1
                for god in GodName
                for world in worlds
                if admissible(q, world, god, speaking_mode(role_of(world.scenario, god), coin), variant)
            )
            cases.append(HALF * Fraction(hits, len(worlds) * len(GodName)))
        return cases[0], cases[1]

    def claim_report(self, prior: WorldDistribution,
                        variant: RandomVariant = RandomVariant.COIN) -> ClaimReport:
        """
        Stated totals, proof case terms and engine optima for k = 0, 1, 2.

        Agreement is computed, never assumed; both numbers always appear.
        """
        rows = []
        for k in (0, 1, 2):
            claimed = self.published_claim(k)
            terms = self.published_case_terms(k) if k in _CASE_FACTORS else []
            engine = self.search.optimal_success(k, prior, variant)
            case_sum = sum(terms, Fraction(0)) if terms else None
            rows.append(ClaimRow(
                k=k,
                published_claim=claimed,
                published_case_terms=terms,
                engine_optimum=engine,
                agrees_with_claim=engine == claimed,
                agrees_with_case_sum=None if case_sum is None else engine == case_sum,
            ))
            if engine != claimed:
                logger.info(f"k={k}: engine optimum {engine} differs from stated {claimed}")
        return ClaimReport(variant=variant, rows=rows)

