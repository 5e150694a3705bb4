import io
import json
import random

import pytest

from godpuzzle.handlers.session import InterrogationSession, run_session, sample_world
from godpuzzle.main import build_parser, main
from godpuzzle.puzzle.oracle import RandomVariant
from godpuzzle.puzzle.question import AnswerMeansNo, parse, print_question
from godpuzzle.puzzle.world import Answer, GodName, ScenarioId, concentrated_prior, parse_world
from godpuzzle.services.strategy import Ask, Guess, save_strategy, strategy_service

SCRIPT = "\n".join([
    "ask A: da means yes iff (you are True iff B is Random)",
    "ask C: da means yes iff true",
    "ask C: da means yes iff A is Random",
    "guess S4",
]) + "\n"


def _run(argv, stdin_text=""):
    out = io.StringIO()
    code = main(argv, stdin=io.StringIO(stdin_text), stdout=out)
    return code, out.getvalue()


def test_parser_defaults():
    parser = build_parser()
    args = parser.parse_args(["search"])
    assert args.command == "search"
    assert args.depth == 2
    assert args.format == "text"
    assert not args.full_depth3
    args = parser.parse_args(["play", "--seed", "11", "--variant", "rabern", "--max-questions", "5"])
    assert args.seed == 11
    assert args.variant is RandomVariant.UNIFORM
    assert args.max_questions == 5
    args = parser.parse_args(["eval", "true", "--world", "S1/da=yes"])
    assert args.mode == "role"
    assert args.addressee == "all"


def test_variant_flag_values(capsys):
    parser = build_parser()
    assert parser.parse_args(["eval", "true", "--variant", "boolos"]).variant is RandomVariant.COIN
    assert parser.parse_args(["eval", "true", "--variant", "rabern"]).variant is RandomVariant.UNIFORM
    assert _run(["eval", "true", "--variant", "rabern", "--format", "json", "--no-persist"])[0] == 0
    assert _run(["eval", "--help"])[0] == 0
    assert "{boolos,rabern}" in capsys.readouterr().out


def test_seed_range():
    parser = build_parser()
    assert parser.parse_args(["play", "--seed", str(2 ** 64 - 1)]).seed == 2 ** 64 - 1
    assert _run(["play", "--seed", str(2 ** 64), "--no-persist"], "quit\n")[0] == 2
    assert _run(["play", "--seed", "-1", "--no-persist"], "quit\n")[0] == 2
    assert _run(["play", "--seed", "abc", "--no-persist"], "quit\n")[0] == 2


def test_usage_errors():
    assert _run(["search", "--variant", "nonsense"])[0] == 2
    assert _run(["search", "--depth", "3", "--no-persist"])[0] == 2
    assert _run(["search", "--depth", "5", "--no-persist"])[0] == 2
    assert _run(["eval", "A is Purple", "--no-persist"])[0] == 2
    assert _run(["eval", "true", "--world", "S8/da=yes", "--no-persist"])[0] == 2


def test_eval_self_referential_question():
    code, text = _run(["eval", "you answer no-word", "--mode", "all", "--no-persist"])
    assert code == 0
    rows = [line for line in text.splitlines() if "/da=" in line]
    assert len(rows) == 12 * 3 * 2
    assert all(("∅" in row) == ("Truthful" in row) for row in rows)
    assert all(("{Da, Ja}" in row) == ("Lying" in row) for row in rows)


def test_eval_single_world():
    code, text = _run(["eval", "A is Random", "--world", "S5/da=no", "--addressee", "A",
                       "--mode", "heads", "--format", "json", "--no-persist"])
    assert code == 0
    assert json.loads(text) == [
        {"world": "S5/da=no", "addressee": "A", "role": "Random", "mode": "Truthful", "answers": "{Ja}"}
    ]


def test_search_depth_one_report(tmp_path):
    out_file = tmp_path / "search.json"
    code, text = _run(["search", "--depth", "1", "--format", "json", "--out", str(out_file), "--no-persist"])
    assert code == 0
    data = json.loads(text)
    assert data["optimal_success"] == "1/3"
    assert data["certain_solver_exists"] is False
    assert data["witness"] is None
    assert "ask" in data["optimal_witness"]
    assert out_file.read_text() == text


def test_search_resource_cap():
    code, text = _run(["search", "--depth", "2", "--max-states", "0", "--no-persist"])
    assert code == 3
    assert json.loads(text)["memo_states"] == 0


def test_search_depth_three_finds_certain_solver(tmp_path):
    witness_file = tmp_path / "witness.json"
    code, text = _run(["search", "--depth", "3", "--full-depth3", "--check-witness",
                       "--save-witness", str(witness_file), "--format", "json", "--no-persist"])
    assert code == 0
    data = json.loads(text)
    assert data["optimal_success"] == "1/1"
    assert data["certain_solver_exists"] is True
    assert data["witness_is_certain_solver"] is True

    code, text = _run(["strategy", str(witness_file), "--format", "json", "--no-persist"])
    assert code == 0
    report = json.loads(text)
    assert report["valid"] is True
    assert report["certain_solver"] is True
    assert report["success_probability"] == "1/1"
    assert report["depth"] <= 3


def test_strategy_command(tmp_path):
    builtin = tmp_path / "builtin.json"
    save_strategy(strategy_service.builtin_three_question(), builtin)
    code, text = _run(["strategy", str(builtin), "--no-persist"])
    assert code == 0
    assert "надёжный решатель: True" in text

    unaskable = tmp_path / "unaskable.json"
    save_strategy(Ask(GodName.A, AnswerMeansNo(), Guess(ScenarioId.S1), Guess(ScenarioId.S2)), unaskable)
    code, text = _run(["strategy", str(unaskable), "--format", "json", "--no-persist"])
    assert code == 1
    report = json.loads(text)
    assert report["valid"] is False
    assert "может оказаться True" in report["problem"]
    assert report["success_probability"] is None


def test_strategy_depth_cap(tmp_path):
    deep = Guess(ScenarioId.S1)
    for _ in range(4):
        deep = Ask(GodName.A, parse("da means yes iff true"), deep, deep)
    path = tmp_path / "deep.json"
    save_strategy(deep, path)
    assert _run(["strategy", str(path), "--no-persist"])[0] == 2
    code, text = _run(["strategy", str(path), "--allow-deep", "--format", "json", "--no-persist"])
    assert code == 0
    assert json.loads(text)["depth"] == 4


@pytest.mark.parametrize("seed", range(12))
@pytest.mark.parametrize("variant", list(RandomVariant))
def test_builtin_strategy_wins_every_session(uniform, seed, variant):
    session = InterrogationSession(seed, uniform, variant)
    tree = strategy_service.builtin_three_question()
    while isinstance(tree, Ask):
        session.handle_line(f"ask {tree.addressee.value}: {print_question(tree.question)}")
        tree = tree.branch(Answer(session.exchanges[-1]["answer"]))
    reply = session.handle_line(f"guess {tree.scenario.value}")
    assert session.verdict == "success"
    assert "Вердикт: success" in reply
    assert len(session.exchanges) == 3


def test_self_referential_first_question_is_rejected(uniform):
    session = InterrogationSession(3, uniform)
    reply = session.handle_line("ask A: you answer no-word")
    assert "Вопрос недопустим" in reply
    assert "может оказаться True" in reply
    assert session.exchanges == []
    assert session.questions_left == 3


def test_syntax_errors_and_unknown_commands_do_not_use_turns(uniform):
    session = InterrogationSession(3, uniform)
    assert "Синтаксическая ошибка" in session.handle_line("ask A: A is Purple")
    assert "Неизвестная команда" in session.handle_line("hello")
    assert "Неизвестный бог" in session.handle_line("ask D: true")
    assert "Неизвестный сценарий" in session.handle_line("guess S9")
    assert session.questions_left == 3
    assert len(session.rejections) == 4


def test_question_budget(uniform):
    session = InterrogationSession(3, uniform, max_questions=1)
    session.handle_line("ask A: true")
    reply = session.handle_line("ask B: true")
    assert "Вопросы закончились" in reply
    assert len(session.exchanges) == 1
    session.handle_line("guess S1")
    assert session.handle_line("ask A: true") == "ℹ️ Игра окончена."


def test_hidden_world_stays_hidden_until_the_end(uniform):
    session = InterrogationSession(5, uniform)
    out = io.StringIO()
    run_session(session, ["ask A: true", "ask B: true"], out)
    dialogue = out.getvalue()
    assert dialogue.index(session.world.label) > dialogue.index("B отвечает")
    assert session.verdict == "abandoned"


def test_sample_world_is_exact():
    prior = concentrated_prior(parse_world("S6/da=no"))
    assert all(sample_world(prior, random.Random(seed)).label == "S6/da=no" for seed in range(5))


def test_play_transcripts_replay_byte_for_byte(tmp_path):
    paths = [tmp_path / "first.json", tmp_path / "second.json"]
    outputs = [
        _run(["play", "--seed", "42", "--out", str(path), "--no-persist"], SCRIPT)
        for path in paths
    ]
    assert outputs[0] == outputs[1]
    assert outputs[0][0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    transcript = json.loads(paths[0].read_text())
    assert transcript["seed"] == 42
    assert len(transcript["exchanges"]) == 3
    assert len(transcript["coin_faces"]) == 3
    assert transcript["verdict"] in ("success", "failure")
    assert transcript["guess"] == "S4"


def test_verify_reports_resource_cap():
    code, text = _run(["verify", "--max-states", "0", "--samples", "10", "--format", "json", "--no-persist"])
    assert code == 3
    report = json.loads(text)
    limited = {c["name"] for c in report["checks"] if c["resource_limited"]}
    assert "impossibility_depth_1_2" in limited
    assert all(c["passed"] for c in report["checks"] if c["name"] == "counting_bound")


@pytest.mark.parametrize("variant", ["boolos", "rabern"])
def test_verify_passes(variant):
    code, text = _run(["verify", "--variant", variant, "--samples", "100", "--format", "json", "--no-persist"])
    report = json.loads(text)
    assert [c["name"] for c in report["checks"] if not c["passed"]] == []
    assert report["passed"] is True
    assert code == 0


def test_verify_text_report():
    code, text = _run(["verify", "--max-states", "0", "--samples", "5", "--no-persist"])
    assert code == 3
    assert text.startswith("🔍 Проверка (вариант boolos)")
    assert "✅ counting_bound" in text
    assert text.rstrip().endswith("❌ Есть непройденные проверки")


def test_verify_and_play_are_persisted(db_url):
    assert _run(["play", "--seed", "1", "--db-url", db_url], "guess S2\n")[0] == 0
    assert _run(["verify", "--max-states", "0", "--samples", "5", "--db-url", db_url])[0] == 3
    code, text = _run(["history", "--db-url", db_url])
    assert code == 0
    assert "success" in text or "failure" in text
    assert "impossibility_depth_1_2" in text


def test_largest_seed_is_played_and_persisted(db_url):
    seed = str(2 ** 64 - 1)
    assert _run(["play", "--seed", seed, "--db-url", db_url], "quit\n")[0] == 0
    code, text = _run(["history", "--db-url", db_url])
    assert code == 0
    assert seed in text
    assert "abandoned" in text
