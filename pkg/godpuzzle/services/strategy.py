"""Strategy trees: validation, exact success probability and built-in plans."""
import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple, Union

from godpuzzle.config import Config
from godpuzzle.puzzle.belief import likelihood
from godpuzzle.puzzle.errors import QuestionSyntaxError, StrategyFormatError, StrategyValidationError
from godpuzzle.puzzle.oracle import AskabilityWitness, RandomVariant, askability_witness
from godpuzzle.puzzle.question import Question, parse, print_question
from godpuzzle.puzzle.world import (
    Answer,
    GodName,
    ScenarioId,
    WorldDistribution,
    all_worlds,
)

logger = logging.getLogger(__name__)

Weights = Tuple[Fraction, ...]

# Da from A exactly when B is Random, so Da clears C and Ja clears B.
FIND_NON_RANDOM = "da means yes iff (you are True iff B is Random)"


@dataclass(frozen=True)
class Guess:
    scenario: ScenarioId


@dataclass(frozen=True)
class Ask:
    addressee: GodName
    question: Question
    on_da: "StrategyTree"
    on_ja: "StrategyTree"

    def branch(self, answer: Answer) -> "StrategyTree":
        return self.on_da if answer is Answer.DA else self.on_ja


StrategyTree = Union[Ask, Guess]


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of walking a tree with belief propagation."""

    ok: bool
    path: Tuple[Answer, ...] = ()
    addressee: Optional[GodName] = None
    question: Optional[Question] = None
    witness: Optional[AskabilityWitness] = None

    @property
    def message(self) -> str:
        if self.ok:
            return "ok"
        where = "/".join(a.value for a in self.path) or "корень"
        return (f"вопрос '{print_question(self.question)}' к {self.addressee.value} в узле {where} "
                f"недопустим: {self.witness.describe()}")


def depth(tree: StrategyTree) -> int:
    """Maximum number of questions along any path."""
    if isinstance(tree, Guess):
        return 0
    return 1 + max(depth(tree.on_da), depth(tree.on_ja))


def scenario_masses(weights: Weights) -> List[Fraction]:
    return [weights[2 * i] + weights[2 * i + 1] for i in range(6)]


def best_guess(weights: Weights) -> ScenarioId:
    """Scenario with the largest mass; lowest index wins ties."""
    masses = scenario_masses(weights)
    return list(ScenarioId)[masses.index(max(masses))]


def _branch_weights(weights: Weights, node: Ask, answer: Answer,
                    variant: RandomVariant) -> Weights:
    return tuple(
        weight * likelihood(answer, node.question, world, node.addressee, variant) if weight else Fraction(0)
        for world, weight in zip(all_worlds(), weights)
    )


def _leaves(tree: StrategyTree, weights: Weights, variant: RandomVariant,
            path: Tuple[Answer, ...] = ()) -> Iterator[Tuple[Tuple[Answer, ...], Guess, Weights]]:
    """Yield every leaf with the joint (unnormalized) weights that reach it."""
    if isinstance(tree, Guess):
        yield path, tree, weights
        return
    for answer in Answer:
        yield from _leaves(tree.branch(answer), _branch_weights(weights, tree, answer, variant),
                           variant, path + (answer,))


class StrategyService:
    """Evaluates interrogation plans against a prior."""

    def validate(self, tree: StrategyTree, prior: WorldDistribution,
                 variant: RandomVariant = RandomVariant.COIN) -> ValidationReport:
        """
        Check that every question is askable where the tree asks it.

        Branches that cannot be reached carry no belief and are not checked.

        Args:
            tree: Strategy to check
            prior: Prior over worlds
            variant: Random's answering behavior

        Returns:
            Report; on failure it names the first offending node and a witness
        """
        return self._validate(tree, tuple(prior.weights), variant, ())

    def _validate(self, tree, weights, variant, path) -> ValidationReport:
        if isinstance(tree, Guess):
            return ValidationReport(ok=True)
        support = [w for w, weight in zip(all_worlds(), weights) if weight]
        if not support:
            return ValidationReport(ok=True)
        witness = askability_witness(tree.question, tree.addressee, support, variant)
        if witness is not None:
            return ValidationReport(False, path, tree.addressee, tree.question, witness)
        for answer in Answer:
            report = self._validate(tree.branch(answer), _branch_weights(weights, tree, answer, variant),
                                    variant, path + (answer,))
            if not report.ok:
                return report
        return ValidationReport(ok=True)

    def success_probability(self, tree: StrategyTree, prior: WorldDistribution,
                            variant: RandomVariant = RandomVariant.COIN) -> Fraction:
        """
        Exact probability that the reached guess names the true scenario.

        Raises:
            StrategyValidationError: the tree asks an unaskable question
        """
        report = self.validate(tree, prior, variant)
        if not report.ok:
            raise StrategyValidationError(report)
        return sum(
            (scenario_masses(weights)[leaf.scenario.index]
             for _, leaf, weights in _leaves(tree, tuple(prior.weights), variant)),
            Fraction(0),
        )

    def is_certain_solver(self, tree: StrategyTree, prior: WorldDistribution,
                          variant: RandomVariant = RandomVariant.COIN) -> bool:
        """True when the tree is valid and always guesses the true scenario."""
        if not self.validate(tree, prior, variant).ok:
            return False
        return self.success_probability(tree, prior, variant) == 1

    def outcome_distribution(self, tree: StrategyTree, prior: WorldDistribution,
                             variant: RandomVariant = RandomVariant.COIN
                             ) -> Dict[Tuple[Answer, ...], Fraction]:
        """Probability of reaching each leaf, keyed by its answer path."""
        return {
            path: sum(weights, Fraction(0))
            for path, _, weights in _leaves(tree, tuple(prior.weights), variant)
        }

    def fill_guesses(self, tree: StrategyTree, prior: WorldDistribution,
                     variant: RandomVariant = RandomVariant.COIN) -> StrategyTree:
        """Replace every leaf by the maximum-posterior guess at that leaf."""
        return self._fill(tree, tuple(prior.weights), variant)

    def _fill(self, tree, weights, variant):
        if isinstance(tree, Guess):
            return Guess(best_guess(weights))
        return Ask(
            tree.addressee,
            tree.question,
            self._fill(tree.on_da, _branch_weights(weights, tree, Answer.DA, variant), variant),
            self._fill(tree.on_ja, _branch_weights(weights, tree, Answer.JA, variant), variant),
        )

    def builtin_three_question(self) -> StrategyTree:
        """
        Certain three-question solver built from embedded questions.

        A tells us which of B and C is certainly not Random; that god then
        reveals whether it is True or False (True says Da to the Rome question,
        False says Ja), and finally whether A is Random. A False god answers the
        last question with Da exactly when A is not Random.
        """
        def identify(god: GodName, if_true: Tuple[ScenarioId, ScenarioId],
                     if_false: Tuple[ScenarioId, ScenarioId]) -> Ask:
            about_a = parse("da means yes iff A is Random")
            return Ask(
                god,
                parse("da means yes iff true"),
                Ask(god, about_a, Guess(if_true[0]), Guess(if_true[1])),
                Ask(god, about_a, Guess(if_false[0]), Guess(if_false[1])),
            )

        return Ask(
            GodName.A,
            parse(FIND_NON_RANDOM),
            identify(GodName.C, (ScenarioId.S6, ScenarioId.S4), (ScenarioId.S2, ScenarioId.S5)),
            identify(GodName.B, (ScenarioId.S5, ScenarioId.S3), (ScenarioId.S1, ScenarioId.S6)),
        )

    def two_question_fragment(self, prior: Optional[WorldDistribution] = None,
                                    variant: RandomVariant = RandomVariant.COIN) -> StrategyTree:
        """
        Two questions: find a god who is not Random, then ask it the Rome question.

        "Rome is in Italy" is the constant true. Leaves guess the scenario with
        the largest posterior mass (lowest index on ties).
        """
        from godpuzzle.puzzle.world import uniform_prior

        rome = parse("da means yes iff true")
        skeleton = Ask(
            GodName.A,
            parse(FIND_NON_RANDOM),
            Ask(GodName.C, rome, Guess(ScenarioId.S1), Guess(ScenarioId.S1)),
            Ask(GodName.B, rome, Guess(ScenarioId.S1), Guess(ScenarioId.S1)),
        )
        return self.fill_guesses(skeleton, prior or uniform_prior(), variant)


# File format

def tree_to_dict(tree: StrategyTree) -> Dict[str, Any]:
    if isinstance(tree, Guess):
        return {"guess": tree.scenario.value}
    return {
        "ask": {
            "to": tree.addressee.value,
            "q": print_question(tree.question),
            "da": tree_to_dict(tree.on_da),
            "ja": tree_to_dict(tree.on_ja),
        }
    }


def tree_from_dict(node: Any) -> StrategyTree:
    """Decode a strategy node; raises StrategyFormatError on bad input."""
    if not isinstance(node, dict) or len(node) != 1:
        raise StrategyFormatError(f"Expected a single 'ask' or 'guess' node, got {node!r}")
    if "guess" in node:
        try:
            return Guess(ScenarioId(str(node["guess"]).upper()))
        except ValueError:
            raise StrategyFormatError(f"Unknown scenario {node['guess']!r}") from None
    body = node.get("ask")
    if not isinstance(body, dict) or set(body) != {"to", "q", "da", "ja"}:
        raise StrategyFormatError(f"Malformed ask node: {body!r}")
    try:
        addressee = GodName(str(body["to"]).upper())
    except ValueError:
        raise StrategyFormatError(f"Unknown god {body['to']!r}") from None
    try:
        question = parse(body["q"])
    except QuestionSyntaxError as e:
        raise StrategyFormatError(f"Bad question {body['q']!r}: {e}") from None
    return Ask(addressee, question, tree_from_dict(body["da"]), tree_from_dict(body["ja"]))


def load_strategy(path: Union[str, Path], max_depth: Optional[int] = None,
                  enforce_depth: bool = True) -> StrategyTree:
    """
    Load a strategy file.

    Args:
        path: JSON strategy file
        max_depth: Depth cap (defaults to Config.MAX_STRATEGY_DEPTH)
        enforce_depth: Set False to accept deeper trees

    Returns:
        Decoded strategy tree
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise StrategyFormatError(f"{path}: {e}") from None
    tree = tree_from_dict(data)
    limit = Config.MAX_STRATEGY_DEPTH if max_depth is None else max_depth
    if enforce_depth and depth(tree) > limit:
        raise StrategyFormatError(f"Strategy depth {depth(tree)} exceeds {limit}")
    logger.info(f"Loaded strategy of depth {depth(tree)} from {path}")
    return tree


def save_strategy(tree: StrategyTree, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(tree_to_dict(tree), indent=2) + "\n", encoding="utf-8")


def render_tree(tree: StrategyTree, indent: str = "") -> str:
    """Indented plain-text rendering."""
    if isinstance(tree, Guess):
        return f"{indent}guess {tree.scenario.value}"
    lines = [f"{indent}ask {tree.addressee.value}: {print_question(tree.question)}"]
    for answer in Answer:
        lines.append(f"{indent}  on {answer.value}:")
        lines.append(render_tree(tree.branch(answer), indent + "    "))
    return "\n".join(lines)


# Global strategy service instance
strategy_service = StrategyService()
