"""Question AST, the question DSL and evaluation against a world."""
import logging
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Iterator, Optional, Tuple

import pyparsing as pp

from godpuzzle.puzzle.errors import MissingCandidateError, QuestionSyntaxError
from godpuzzle.puzzle.world import (
    Answer,
    GodName,
    LanguageMap,
    Role,
    ScenarioId,
    SCENARIO_TABLE,
    World,
    all_worlds,
    role_of,
)

logger = logging.getLogger(__name__)

__all__ = [
    "Answer", "Question", "ConstTrue", "ConstFalse", "IsRole", "DaMeansYes", "YouAre",
    "AnswerMeansNo", "Not", "And", "Or", "Implies", "Iff", "parse", "print_question",
    "is_self_referential", "evaluate", "likelihood_signature", "embedded_question",
    "proposition_question", "truth_set", "random_question",
]


class Question:
    """Base class for question nodes."""

    # Binding strength used by the printer; higher binds tighter.
    precedence = 5

    def children(self) -> Tuple["Question", ...]:
        return ()

    def walk(self) -> Iterator["Question"]:
        yield self
        for child in self.children():
            yield from child.walk()

    def holds(self, world: World, addressee: Optional[GodName],
              candidate: Optional[Answer]) -> bool:
        raise NotImplementedError

    def __str__(self) -> str:
        return print_question(self)


@dataclass(frozen=True)
class ConstTrue(Question):
    def holds(self, world, addressee, candidate):
        return True


@dataclass(frozen=True)
class ConstFalse(Question):
    def holds(self, world, addressee, candidate):
        return False


@dataclass(frozen=True)
class IsRole(Question):
    god: GodName
    role: Role

    def holds(self, world, addressee, candidate):
        return role_of(world.scenario, self.god) is self.role


@dataclass(frozen=True)
class DaMeansYes(Question):
    def holds(self, world, addressee, candidate):
        return world.language is LanguageMap.DA_YES


@dataclass(frozen=True)
class YouAre(Question):
    role: Role

    def holds(self, world, addressee, candidate):
        if addressee is None:
            raise ValueError("'you are' needs an addressee")
        return role_of(world.scenario, addressee) is self.role


@dataclass(frozen=True)
class AnswerMeansNo(Question):
    """True iff the answer being given means no."""

    def holds(self, world, addressee, candidate):
        if candidate is None:
            raise MissingCandidateError("'you answer no-word' needs a candidate answer")
        return not world.language.means_yes(candidate)


@dataclass(frozen=True)
class Not(Question):
    operand: Question
    precedence = 4

    def children(self):
        return (self.operand,)

    def holds(self, world, addressee, candidate):
        return not self.operand.holds(world, addressee, candidate)


@dataclass(frozen=True)
class _Binary(Question):
    left: Question
    right: Question
    keyword = ""

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class And(_Binary):
    precedence = 3
    keyword = "and"

    def holds(self, world, addressee, candidate):
        return (self.left.holds(world, addressee, candidate)
                and self.right.holds(world, addressee, candidate))


@dataclass(frozen=True)
class Or(_Binary):
    precedence = 2
    keyword = "or"

    def holds(self, world, addressee, candidate):
        return (self.left.holds(world, addressee, candidate)
                or self.right.holds(world, addressee, candidate))


@dataclass(frozen=True)
class Implies(_Binary):
    precedence = 1
    keyword = "implies"

    def holds(self, world, addressee, candidate):
        return (not self.left.holds(world, addressee, candidate)
                or self.right.holds(world, addressee, candidate))


@dataclass(frozen=True)
class Iff(_Binary):
    precedence = 1
    keyword = "iff"

    def holds(self, world, addressee, candidate):
        return (self.left.holds(world, addressee, candidate)
                == self.right.holds(world, addressee, candidate))


# Grammar

def _god(s, loc, tokens):
    text = tokens[0].upper()
    if text not in GodName.__members__:
        raise pp.ParseFatalException(s, loc, f"unknown god {tokens[0]!r}")
    return GodName(text)


def _role(s, loc, tokens):
    for role in Role:
        if role.value.lower() == tokens[0].lower():
            return role
    raise pp.ParseFatalException(s, loc, f"unknown role {tokens[0]!r}")


def _fold(cls):
    def action(tokens):
        return reduce(cls, tokens)
    return action


def _build_grammar() -> pp.ParserElement:
    K = pp.CaselessKeyword
    lpar, rpar = pp.Suppress("("), pp.Suppress(")")

    god = pp.Word(pp.alphas).set_parse_action(_god).set_name("god")
    role = pp.Word(pp.alphas).set_parse_action(_role).set_name("role")

    atom = (
        K("true").set_parse_action(lambda: ConstTrue())
        | K("false").set_parse_action(lambda: ConstFalse())
        | (K("da") + K("means") + K("yes")).set_parse_action(lambda: DaMeansYes())
        | (K("ja") + K("means") + K("yes")).set_parse_action(lambda: Not(DaMeansYes()))
        | (K("you") + K("answer") + K("no-word")).set_parse_action(lambda: AnswerMeansNo())
        | (pp.Suppress(K("you") + K("are")) + role).set_parse_action(lambda t: YouAre(t[0]))
        | (god + pp.Suppress(K("is")) + role).set_parse_action(lambda t: IsRole(t[0], t[1]))
    ).set_name("atom")

    formula = pp.Forward()
    unary = pp.Forward()
    unary <<= (
        (pp.Suppress(K("not")) + unary).set_parse_action(lambda t: Not(t[0]))
        | (lpar + formula + rpar)
        | atom
    )
    and_expr = (unary + pp.ZeroOrMore(pp.Suppress(K("and")) + unary)).set_parse_action(_fold(And))
    or_expr = (and_expr + pp.ZeroOrMore(pp.Suppress(K("or")) + and_expr)).set_parse_action(_fold(Or))

    def _connective(tokens):
        if len(tokens) == 1:
            return tokens[0]
        left, keyword, right = tokens
        return (Iff if keyword.lower() == "iff" else Implies)(left, right)

    formula <<= (or_expr + pp.Optional((K("iff") | K("implies")) + or_expr)).set_parse_action(_connective)
    return formula + pp.StringEnd()


_GRAMMAR = _build_grammar()


def parse(text: str) -> Question:
    """
    Parse question text in the DSL.

    Args:
        text: Question such as "da means yes iff B is Random"

    Returns:
        Question AST

    Raises:
        QuestionSyntaxError: on malformed input or unknown god/role names
    """
    if not text or not text.strip():
        raise QuestionSyntaxError("empty question", 0, text or "")
    try:
        return _GRAMMAR.parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as e:
        raise QuestionSyntaxError(e.msg, e.loc, text) from None


def _wrap(q: Question, parenthesize: bool) -> str:
    text = print_question(q)
    return f"({text})" if parenthesize else text


def print_question(q: Question) -> str:
    """Render a question in canonical DSL text; `parse` reads it back unchanged."""
    if isinstance(q, ConstTrue):
        return "true"
    if isinstance(q, ConstFalse):
        return "false"
    if isinstance(q, IsRole):
        return f"{q.god.value} is {q.role.value}"
    if isinstance(q, DaMeansYes):
        return "da means yes"
    if isinstance(q, YouAre):
        return f"you are {q.role.value}"
    if isinstance(q, AnswerMeansNo):
        return "you answer no-word"
    if isinstance(q, Not):
        bare = isinstance(q.operand, (ConstTrue, ConstFalse))
        return "not " + _wrap(q.operand, not bare)
    if isinstance(q, _Binary):
        if q.precedence == 1:
            # iff/implies do not chain
            left = _wrap(q.left, q.left.precedence <= 1)
        else:
            left = _wrap(q.left, q.left.precedence < q.precedence)
        right = _wrap(q.right, q.right.precedence <= q.precedence)
        return f"{left} {q.keyword} {right}"
    raise TypeError(f"Not a question node: {q!r}")


def is_self_referential(q: Question) -> bool:
    return any(isinstance(node, AnswerMeansNo) for node in q.walk())


def evaluate(q: Question, world: World, addressee: Optional[GodName] = None,
             candidate: Optional[Answer] = None) -> bool:
    """
    Truth value of `q` in `world` when put to `addressee`.

    Args:
        q: Question
        world: World to evaluate in
        addressee: God the question is put to (needed by "you" atoms)
        candidate: Answer being considered (needed by "you answer no-word")

    Returns:
        Truth value
    """
    return q.holds(world, addressee, candidate)


def likelihood_signature(q: Question, addressee: GodName, variant=None) -> tuple:
    """
    Canonical key for the answer behavior `q` induces when put to `addressee`.

    Per world: the answer set for the addressee's fixed speaking mode, or for a
    Random addressee the unordered pair of answer sets over the two coin faces.
    Questions with equal signatures are interchangeable in any strategy.
    """
    from godpuzzle.puzzle.oracle import RandomVariant, answer_set, modes_for

    variant = variant or RandomVariant.COIN
    signature = []
    for world in all_worlds():
        sets = {
            tuple(sorted(answer_set(q, world, addressee, mode, variant)))
            for mode in modes_for(role_of(world.scenario, addressee))
        }
        signature.append(tuple(sorted(sets)))
    return tuple(signature)


def embedded_question(p: Question) -> Question:
    """
    Wrap `p` as "da means yes iff (you are True iff p)".

    True and False both answer Da exactly when `p` holds. The bare form
    "da means yes iff p" gets Da from True iff p and from False iff not p.
    """
    return Iff(DaMeansYes(), Iff(YouAre(Role.TRUE), p))


def _scenario_term(scenario: ScenarioId) -> Question:
    roles = SCENARIO_TABLE[scenario]
    return And(IsRole(GodName.A, roles[0]), IsRole(GodName.B, roles[1]))


def proposition_question(worlds: Iterable[World]) -> Question:
    """
    Build an extensional question true exactly in the given worlds.

    Args:
        worlds: Worlds where the question should hold

    Returns:
        Question whose truth set equals `worlds`
    """
    chosen = set(worlds)
    if not chosen:
        return ConstFalse()
    if len(chosen) == 12:
        return ConstTrue()
    terms = []
    for scenario in ScenarioId:
        yes = World(scenario, LanguageMap.DA_YES) in chosen
        no = World(scenario, LanguageMap.DA_NO) in chosen
        if yes and no:
            terms.append(_scenario_term(scenario))
        elif yes:
            terms.append(And(_scenario_term(scenario), DaMeansYes()))
        elif no:
            terms.append(And(_scenario_term(scenario), Not(DaMeansYes())))
    return reduce(Or, terms)


def truth_set(q: Question, addressee: Optional[GodName] = None) -> frozenset:
    """Worlds where an extensional question holds."""
    return frozenset(w for w in all_worlds() if q.holds(w, addressee, None))


def random_question(rng, max_depth: int = 3, self_referential: bool = True) -> Question:
    """
    Draw a random question from `rng`.

    Args:
        rng: random.Random instance
        max_depth: Maximum connective nesting
        self_referential: Allow "you answer no-word" leaves

    Returns:
        Random question AST
    """
    if max_depth <= 0 or rng.random() < 0.3:
        kinds = ["true", "false", "is", "da", "you"] + (["no-word"] if self_referential else [])
        kind = rng.choice(kinds)
        if kind == "true":
            return ConstTrue()
        if kind == "false":
            return ConstFalse()
        if kind == "is":
            return IsRole(rng.choice(list(GodName)), rng.choice(list(Role)))
        if kind == "da":
            return DaMeansYes()
        if kind == "you":
            return YouAre(rng.choice(list(Role)))
        return AnswerMeansNo()
    connective = rng.choice([Not, And, Or, Implies, Iff])
    if connective is Not:
        return Not(random_question(rng, max_depth - 1, self_referential))
    return connective(random_question(rng, max_depth - 1, self_referential),
                      random_question(rng, max_depth - 1, self_referential))
