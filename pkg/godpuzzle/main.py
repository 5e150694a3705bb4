"""Command-line entry point."""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, TextIO

from godpuzzle.config import Config
from godpuzzle.puzzle.errors import InvalidPriorError, PuzzleError, QuestionSyntaxError
from godpuzzle.puzzle.oracle import RandomVariant
from godpuzzle.puzzle.world import prior_from_mapping, uniform_prior

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """Configure logging; stdout stays reserved for reports and dialogue."""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    log_file = Config.LOG_FILE if log_file is None else log_file
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        level=getattr(logging, (level or Config.LOG_LEVEL).upper(), logging.INFO),
        handlers=handlers,
        force=True,
    )


def seed_value(text: str) -> int:
    """argparse type for an unsigned 64-bit seed."""
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed: {text!r}") from None
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must be in [0, 2^64): {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=seed_value, default=Config.PUZZLE_SEED)
    common.add_argument("--variant", type=RandomVariant, choices=[v.value for v in RandomVariant],
                        default=RandomVariant(Config.PUZZLE_VARIANT))
    common.add_argument("--prior", default=None,
                        help="JSON file mapping world labels (e.g. S1/da=yes) to \"num/den\"")
    common.add_argument("--format", choices=["json", "text"], default="text")
    common.add_argument("--out", default=None)
    common.add_argument("--max-states", type=int, default=Config.SEARCH_MAX_STATES)
    common.add_argument("--no-persist", dest="persist", action="store_false",
                        default=Config.PERSIST_RESULTS)
    common.add_argument("--db-url", default=None)
    common.add_argument("--log-level", default=None)

    parser = argparse.ArgumentParser(
        prog="godpuzzle",
        description="Exact engine for the three-gods puzzle",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    verify.add_argument("--samples", type=int, default=Config.PROPERTY_SAMPLES)

    search = sub.add_parser("search", parents=[common], help="exhaustive strategy search")
    search.add_argument("--depth", type=int, default=2)
    search.add_argument("--full-depth3", action="store_true",
                        help="allow the full depth-3 search")
    search.add_argument("--check-witness", action="store_true")
    search.add_argument("--save-witness", default=None, metavar="FILE",
                        help="write the optimal witness as a strategy file")

    strategy = sub.add_parser("strategy", parents=[common], help="evaluate a strategy file")
    strategy.add_argument("file")
    strategy.add_argument("--allow-deep", action="store_true",
                          help="accept trees deeper than MAX_STRATEGY_DEPTH")

    play = sub.add_parser("play", parents=[common], help="seeded interrogation session")
    play.add_argument("--max-questions", type=int, default=Config.MAX_QUESTIONS)
    play.add_argument("--script", default=None, help="read commands from a file instead of stdin")

    evaluate = sub.add_parser("eval", parents=[common], help="answer sets of one question")
    evaluate.add_argument("question")
    evaluate.add_argument("--world", default="all")
    evaluate.add_argument("--addressee", default="all")
    evaluate.add_argument("--mode", default="role",
                          choices=["role", "all", "truthful", "lying", "heads", "tails"])

    history = sub.add_parser("history", parents=[common], help="recently persisted results")
    history.add_argument("--limit", type=int, default=10)
    return parser


def load_prior(path: Optional[str]):
    if path is None:
        return uniform_prior()
    try:
        mapping = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise InvalidPriorError(f"{path}: {e}") from None
    return prior_from_mapping(mapping)


def main(argv: Optional[List[str]] = None, stdin: Optional[TextIO] = None,
         stdout: Optional[TextIO] = None) -> int:
    """Run one subcommand and return its exit status."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    setup_logging(args.log_level)

    from godpuzzle.handlers.commands import cmd_eval, cmd_history, cmd_search, cmd_strategy, cmd_verify
    from godpuzzle.handlers.session import cmd_play

    try:
        args.prior = load_prior(args.prior)
        if args.command == "verify":
            return cmd_verify(args, stdout)
        if args.command == "search":
            return cmd_search(args, stdout)
        if args.command == "strategy":
            return cmd_strategy(args, stdout)
        if args.command == "eval":
            return cmd_eval(args, stdout)
        if args.command == "history":
            return cmd_history(args, stdout)
        if args.script:
            with open(args.script, encoding="utf-8") as script:
                return cmd_play(args, script, stdout)
        return cmd_play(args, stdin, stdout)
    except (QuestionSyntaxError, InvalidPriorError, ValueError) as e:
        logger.error(f"Usage error: {e}")
        stdout.write(f"❌ Ошибка: {e}\n")
        return EXIT_USAGE
    except (PuzzleError, OSError) as e:
        logger.error(f"Command {args.command} failed: {e}")
        return EXIT_FAILED


if __name__ == '__main__':
    sys.exit(main())
