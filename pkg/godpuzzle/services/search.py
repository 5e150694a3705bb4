"""Exhaustive strategy search and the counting bound."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, List, Optional, Sequence, Tuple

from godpuzzle.config import Config
from godpuzzle.puzzle.belief import likelihood
from godpuzzle.puzzle.errors import SearchResourceError
from godpuzzle.puzzle.oracle import RandomVariant
from godpuzzle.puzzle.question import embedded_question, proposition_question
from godpuzzle.puzzle.world import (
    Answer,
    GodName,
    Role,
    ScenarioId,
    WorldDistribution,
    all_worlds,
    role_of,
)
from godpuzzle.services.strategy import Ask, Guess, StrategyTree

logger = logging.getLogger(__name__)

_WORLDS = all_worlds()
_SCENARIOS = list(ScenarioId)

# For each god, whether it is Random in each world (canonical order).
_IS_RANDOM: Dict[GodName, Tuple[bool, ...]] = {
    god: tuple(role_of(w.scenario, god) is Role.RANDOM for w in _WORLDS) for god in GodName
}

# A plan is ("guess", scenario_index) or ("ask", god, da_worlds, plan_da, plan_ja);
# da_worlds are the non-Random world indices on which the addressee answers Da.
Plan = tuple


@dataclass(frozen=True)
class SearchResult:
    """Verdict and optimum of an exhaustive search at one depth."""

    depth: int
    certain_solver_exists: bool
    witness: Optional[StrategyTree]
    optimal_success: Fraction
    optimal_witness: StrategyTree
    explored_classes: int
    memo_states: int
    upper_bound: Fraction


def counting_bound(m: int, n: int, k: int) -> bool:
    """
    True when k questions with n answers each cannot separate m possibilities.

    Args:
        m: Number of possibilities (m >= 1)
        n: Answers per question (n >= 1)
        k: Number of questions (k >= 0)

    Returns:
        n**k < m, i.e. certainty is impossible
    """
    if m < 1 or n < 1 or k < 0:
        raise ValueError(f"counting_bound needs m>=1, n>=1, k>=0; got {m}, {n}, {k}")
    return n ** k < m


def upper_bound(prior: WorldDistribution, depth: int) -> Fraction:
    """Sum of the 2**depth largest scenario masses: no tree of that depth does better."""
    masses = sorted((prior.scenario_mass(s) for s in ScenarioId), reverse=True)
    return sum(masses[:2 ** depth], Fraction(0))


def _masses(weights: Sequence[int]) -> List[int]:
    return [weights[2 * i] + weights[2 * i + 1] for i in range(6)]


def _best_leaf(weights: Sequence[int]) -> Tuple[int, Plan]:
    masses = _masses(weights)
    top = max(masses)
    return top, ("guess", masses.index(top))


class SearchService:
    """Depth-bounded exhaustive search over extensional questions."""

    def __init__(self, max_states: Optional[int] = None):
        self.max_states = Config.SEARCH_MAX_STATES if max_states is None else max_states
        self._memo: Dict[Tuple[int, Tuple[int, ...]], Tuple[int, Plan]] = {}
        self.explored_classes = 0

    def exhaustive_search(self, depth: int, prior: WorldDistribution,
                          variant: RandomVariant = RandomVariant.COIN) -> SearchResult:
        """
        Search all strategy trees of at most `depth` extensional questions.

        Questions are grouped by the answers they induce on the current support:
        for each addressee, one class per subset of the supported worlds where
        that god is not Random (the worlds answering Da). Random answers either
        word with probability 1/2 whatever the question, under both variants.

        Args:
            depth: Maximum questions, 0..3
            prior: Prior over worlds
            variant: Random's answering behavior

        Returns:
            Existence verdict, exact optimum and witnesses

        Raises:
            SearchResourceError: the memo table outgrew `max_states`
        """
        if depth not in (0, 1, 2, 3):
            raise ValueError(f"Search depth must be 0..3, got {depth}")
        self._memo = {}
        self.explored_classes = 0

        scale = lcm(*(w.denominator for w in prior.weights))
        weights = tuple(int(w * scale) for w in prior.weights)
        logger.info(f"Exhaustive search at depth {depth} ({variant.value})")
        value, plan = self._solve(weights, depth)
        optimum = Fraction(value, scale * 2 ** depth)
        tree = self._materialize(plan)
        certain = optimum == 1
        logger.info(
            f"Depth {depth}: optimum {optimum}, explored {self.explored_classes} classes, "
            f"{len(self._memo)} memo states"
        )
        return SearchResult(
            depth=depth,
            certain_solver_exists=certain,
            witness=tree if certain else None,
            optimal_success=optimum,
            optimal_witness=tree,
            explored_classes=self.explored_classes,
            memo_states=len(self._memo),
            upper_bound=upper_bound(prior, depth),
        )

    def optimal_success(self, depth: int, prior: WorldDistribution,
                        variant: RandomVariant = RandomVariant.COIN) -> Fraction:
        return self.exhaustive_search(depth, prior, variant).optimal_success

    def _solve(self, weights: Tuple[int, ...], depth: int) -> Tuple[int, Plan]:
        """Best value in units of (weight unit / 2**depth), with its plan."""
        if depth == 0:
            return _best_leaf(weights)
        common = gcd(*weights)
        if common == 0:
            return 0, ("guess", 0)
        key = (depth, tuple(w // common for w in weights))
        cached = self._memo.get(key)
        if cached is None:
            if len(self._memo) >= self.max_states:
                raise SearchResourceError(
                    f"Memo table exceeded {self.max_states} states",
                    explored_classes=self.explored_classes,
                    memo_states=len(self._memo),
                    depth=depth,
                )
            cached = self._solve_normalized(key[1], depth)
            self._memo[key] = cached
        value, plan = cached
        return value * common, plan

    def _solve_normalized(self, weights: Tuple[int, ...], depth: int) -> Tuple[int, Plan]:
        top, plan = _best_leaf(weights)
        best = top << depth
        masses = sorted(_masses(weights), reverse=True)
        bound = sum(masses[:2 ** depth]) << depth
        if best == bound:
            return best, plan

        for god in GodName:
            is_random = _IS_RANDOM[god]
            base = [w if r else 0 for w, r in zip(weights, is_random)]
            open_worlds = [i for i, w in enumerate(weights) if w and not is_random[i]]
            for mask in range(1 << len(open_worlds)):
                self.explored_classes += 1
                da, ja = list(base), list(base)
                da_worlds = []
                for bit, i in enumerate(open_worlds):
                    if mask >> bit & 1:
                        da[i] = 2 * weights[i]
                        da_worlds.append(i)
                    else:
                        ja[i] = 2 * weights[i]
                value_da, plan_da = self._solve(tuple(da), depth - 1)
                value_ja, plan_ja = self._solve(tuple(ja), depth - 1)
                value = value_da + value_ja
                if value > best:
                    best = value
                    plan = ("ask", god, tuple(da_worlds), plan_da, plan_ja)
                    if best == bound:
                        return best, plan
        return best, plan

    def _materialize(self, plan: Plan) -> StrategyTree:
        if plan[0] == "guess":
            return Guess(_SCENARIOS[plan[1]])
        _, god, da_worlds, plan_da, plan_ja = plan
        question = embedded_question(proposition_question(_WORLDS[i] for i in da_worlds))
        return Ask(god, question, self._materialize(plan_da), self._materialize(plan_ja))

    def brute_force_optimum(self, depth: int, prior: WorldDistribution,
                            variant: RandomVariant = RandomVariant.COIN) -> Fraction:
        """
        Optimum by direct enumeration of all 2**12 propositions per addressee.

        No grouping into classes and no memo; every question is put through the
        oracle. Only depths 0 and 1 are supported.
        """
        if depth == 0:
            return max(prior.scenario_mass(s) for s in ScenarioId)
        if depth != 1:
            raise ValueError("Brute force is limited to depth 0 and 1")
        best = Fraction(0)
        for god in GodName:
            for mask in range(1 << 12):
                question = proposition_question(w for i, w in enumerate(_WORLDS) if mask >> i & 1)
                value = Fraction(0)
                for answer in Answer:
                    branch = tuple(
                        weight * likelihood(answer, question, world, god, variant) if weight else Fraction(0)
                        for world, weight in prior.items()
                    )
                    value += max(branch[2 * i] + branch[2 * i + 1] for i in range(6))
                best = max(best, value)
        return best


# Global search service instance
search_service = SearchService()
