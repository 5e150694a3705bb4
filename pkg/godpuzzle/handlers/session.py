"""Interactive interrogation session."""
import asyncio
import logging
import random
from math import lcm
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, TextIO

from godpuzzle.config import Config
from godpuzzle.database.database import with_database
from godpuzzle.puzzle.belief import BeliefState, answer_distribution, initial_belief, update
from godpuzzle.puzzle.errors import QuestionSyntaxError
from godpuzzle.puzzle.oracle import RandomVariant, askability_witness, draw_answer
from godpuzzle.puzzle.question import print_question
from godpuzzle.puzzle.world import (
    CoinFace,
    GodName,
    Prior,
    ScenarioId,
    World,
    prior_to_mapping,
    role_of,
)
from godpuzzle.utils.formatting import dumps, fraction_text
from godpuzzle.utils.validators import parse_ask_command, parse_guess_command

logger = logging.getLogger(__name__)

# Session states
ASKING, FINISHED = range(2)

HELP_TEXT = (
    "Команды:\n"
    "  ask <A|B|C>: <вопрос>   например ask A: da means yes iff B is Random\n"
    "  guess <S1..S6>          назвать сценарий и закончить игру\n"
    "  quit                    сдаться\n"
)


def sample_world(prior: Prior, rng: random.Random) -> World:
    """Draw a world from the prior exactly, using one integer draw."""
    scale = lcm(*(w.denominator for w in prior.weights))
    pick = rng.randrange(scale)
    cumulative = 0
    for world, weight in prior.items():
        cumulative += int(weight * scale)
        if pick < cumulative:
            return world
    raise AssertionError("prior does not sum to one")


class InterrogationSession:
    """
    One seeded game: a hidden world, a question budget and a transcript.

    The seed drives world sampling, coin flips and the choice between two
    possible answers through a single random stream.
    """

    def __init__(self, seed: int, prior: Prior,
                 variant: RandomVariant = RandomVariant.COIN,
                 max_questions: Optional[int] = None):
        self.seed = seed
        self.prior = prior
        self.variant = variant
        self.max_questions = Config.MAX_QUESTIONS if max_questions is None else max_questions
        self.rng = random.Random(seed)
        self.world = sample_world(prior, self.rng)
        self.belief: BeliefState = initial_belief(prior)
        self.state = ASKING
        self.coin_faces: List[CoinFace] = []
        self.exchanges: List[Dict[str, Any]] = []
        self.rejections: List[Dict[str, str]] = []
        self.guess: Optional[ScenarioId] = None
        self.verdict: Optional[str] = None

    @property
    def questions_left(self) -> int:
        return self.max_questions - len(self.exchanges)

    def handle_line(self, line: str) -> str:
        """Process one input line and return the reply."""
        text = line.strip()
        if self.state == FINISHED:
            return "ℹ️ Игра окончена."
        if not text:
            return ""
        if text.lower() in ("help", "?"):
            return HELP_TEXT.rstrip()
        if text.lower() == "quit":
            return self._finish(None)

        try:
            guess = parse_guess_command(text)
        except ValueError as e:
            return self._reject(text, str(e))
        if guess is not None:
            return self._finish(guess)

        try:
            parsed = parse_ask_command(text)
        except QuestionSyntaxError as e:
            return self._reject(text, f"Синтаксическая ошибка: {e}")
        except ValueError as e:
            return self._reject(text, str(e))
        if parsed is None:
            return self._reject(text, "Неизвестная команда. Введите 'help'.")
        return self._ask(text, *parsed)

    def _reject(self, text: str, reason: str) -> str:
        logger.warning(f"Rejected input {text!r}: {reason}")
        self.rejections.append({"input": text, "reason": reason})
        return f"❌ {reason} (ход не потрачен)"

    def _ask(self, text, god, question) -> str:
        if self.questions_left <= 0:
            return self._reject(text, f"Вопросы закончились (всего {self.max_questions}), назовите сценарий")

        witness = askability_witness(question, god, self.belief.support(), self.variant)
        if witness is not None:
            return self._reject(text, f"Вопрос недопустим: {witness.describe()}")

        coin = CoinFace.HEADS if self.rng.randrange(2) == 0 else CoinFace.TAILS
        self.coin_faces.append(coin)
        answer = draw_answer(question, self.world, god, coin, self.rng, self.variant)
        predictive = answer_distribution(self.belief, question, god, self.variant)[answer]
        self.belief = update(self.belief, question, god, answer, self.variant)
        self.exchanges.append({
            "addressee": god.value,
            "question": print_question(question),
            "answer": answer.value,
            "answer_probability": fraction_text(predictive),
        })
        logger.info(f"Seed {self.seed}: asked {god.value}, answer {answer.value}")
        return f"💬 {god.value} отвечает: {answer.value.lower()}  (осталось вопросов: {self.questions_left})"

    def _finish(self, guess: Optional[ScenarioId]) -> str:
        self.state = FINISHED
        self.guess = guess
        hidden = self.world.scenario
        if guess is None:
            self.verdict = "abandoned"
        else:
            self.verdict = "success" if guess is hidden else "failure"
        roles = ", ".join(f"{g.value}={role_of(hidden, g).value}" for g in GodName)
        return (f"🎯 Загаданный мир: {self.world.label} ({roles}). "
                f"Вердикт: {self.verdict}")

    def transcript(self) -> Dict[str, Any]:
        """Everything needed to replay the session; no timestamps."""
        guess_mass = self.belief.scenario_mass(self.guess) if self.guess else None
        return {
            "seed": self.seed,
            "variant": self.variant.value,
            "max_questions": self.max_questions,
            "prior": prior_to_mapping(self.prior),
            "hidden_world": self.world.label,
            "coin_faces": [coin.value for coin in self.coin_faces],
            "exchanges": self.exchanges,
            "rejections": self.rejections,
            "guess": self.guess.value if self.guess else None,
            "guess_posterior": fraction_text(guess_mass),
            "final_belief": self.belief.to_mapping(),
            "verdict": self.verdict,
        }


def run_session(session: InterrogationSession, lines: Iterable[str], out: TextIO) -> Dict[str, Any]:
    """Feed input lines to a session until it finishes or input runs out."""
    out.write(f"Три бога: A, B и C. Задайте до {session.max_questions} вопросов, затем назовите сценарий.\n")
    out.write(HELP_TEXT)
    for line in lines:
        reply = session.handle_line(line)
        if reply:
            out.write(reply + "\n")
        if session.state == FINISHED:
            break
    if session.state != FINISHED:
        out.write(session.handle_line("quit") + "\n")
    return session.transcript()


def cmd_play(args, inp: TextIO, out: TextIO) -> int:
    """
    Play a seeded session reading commands from `inp`.

    Returns:
        Exit status
    """
    session = InterrogationSession(
        seed=args.seed,
        prior=args.prior,
        variant=RandomVariant(args.variant),
        max_questions=args.max_questions,
    )
    transcript = run_session(session, inp, out)
    text = dumps(transcript)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        logger.info(f"Transcript written to {args.out}")

    if args.persist:
        async def save(db):
            return await db.save_play_session(
                seed=session.seed,
                variant=session.variant.value,
                hidden_world=session.world.label,
                questions_asked=len(session.exchanges),
                verdict=session.verdict,
                transcript_json=text,
            )
        try:
            asyncio.run(with_database(save, args.db_url))
        except Exception as e:
            logger.error(f"Failed to persist play session: {e}")
    return 0
