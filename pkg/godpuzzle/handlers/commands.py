"""Batch command handlers: verify, search, strategy, eval and history."""
import asyncio
import io
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, TextIO

from godpuzzle.config import Config
from godpuzzle.database.database import with_database
from godpuzzle.puzzle.errors import SearchResourceError
from godpuzzle.puzzle.oracle import (
    RandomVariant,
    SpeakingMode,
    admissible,
    admissible_roles,
    answer_set,
    askable,
    modes_for,
    speaking_mode,
)
from godpuzzle.puzzle.question import (
    AnswerMeansNo,
    Not,
    embedded_question,
    evaluate,
    parse,
    proposition_question,
    random_question,
)
from godpuzzle.puzzle.world import (
    CoinFace,
    GodName,
    Role,
    all_worlds,
    parse_world,
    role_of,
)
from godpuzzle.services.probability import ProbabilityService
from godpuzzle.services.search import SearchService, counting_bound
from godpuzzle.services.strategy import depth, load_strategy, render_tree, save_strategy, strategy_service
from godpuzzle.utils.formatting import (
    answer_set_text,
    claim_report_to_dict,
    dumps,
    fraction_text,
    render_claim_table,
    render_table,
    search_result_to_dict,
)

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

QUESTION_Q = AnswerMeansNo()


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    resource_limited: bool = False
    data: Optional[Dict[str, Any]] = None


def _emit(args, text: str, out: TextIO) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
        logger.info(f"Report written to {args.out}")
    out.write(text if text.endswith("\n") else text + "\n")


# Verification checks

def check_counting_bound(args, search, probability) -> CheckResult:
    cases = {(6, 2, 1): True, (6, 2, 2): True, (6, 2, 3): False}
    got = {case: counting_bound(*case) for case in cases}
    return CheckResult("counting_bound", got == cases,
                       ", ".join(f"{m},{n},{k} -> {v}" for (m, n, k), v in got.items()))


def check_impossibility_depth_1_2(args, search, probability) -> CheckResult:
    verdicts = {d: search.exhaustive_search(d, args.prior, args.variant) for d in (1, 2)}
    passed = not any(r.certain_solver_exists for r in verdicts.values())
    return CheckResult("impossibility_depth_1_2", passed, "; ".join(
        f"глубина {d}: надёжный={r.certain_solver_exists}, просмотрено={r.explored_classes}"
        for d, r in verdicts.items()
    ))


def check_three_question_solver(args, search, probability) -> CheckResult:
    tree = strategy_service.builtin_three_question()
    report = strategy_service.validate(tree, args.prior, args.variant)
    certain = strategy_service.is_certain_solver(tree, args.prior, args.variant)
    success = strategy_service.success_probability(tree, args.prior, args.variant) if report.ok else None
    return CheckResult("three_question_solver", report.ok and certain and success == 1 and depth(tree) == 3,
                       f"корректна={report.ok}, надёжна={certain}, успех={fraction_text(success)}")


def q_admissibility_rows(variant: RandomVariant) -> List[List[str]]:
    """Per role and coin face: is (Q) admissible, and with which answers."""
    rows = []
    for role in Role:
        for coin in CoinFace:
            mode = speaking_mode(role, coin)
            sets = {
                answer_set_text(answer_set(QUESTION_Q, world, god, mode, variant))
                for world in all_worlds() for god in GodName
                if role_of(world.scenario, god) is role
            }
            rows.append([role.value, coin.value, mode.value, " | ".join(sorted(sets))])
    return rows


def check_q_admissibility(args, search, probability) -> CheckResult:
    problems = []
    for world in all_worlds():
        for god in GodName:
            role = role_of(world.scenario, god)
            if role is Role.RANDOM and args.variant is RandomVariant.UNIFORM:
                continue
            if answer_set(QUESTION_Q, world, god, SpeakingMode.TRUTHFUL, args.variant):
                problems.append(f"правдивый {god.value} в {world.label}")
            if len(answer_set(QUESTION_Q, world, god, SpeakingMode.LYING, args.variant)) != 2:
                problems.append(f"лгущий {god.value} в {world.label}")
    from godpuzzle.puzzle.belief import initial_belief
    belief = initial_belief(args.prior)
    first = [god.value for god in GodName if askable(QUESTION_Q, god, belief, args.variant)]
    if first:
        problems.append(f"допустим первым вопросом к {', '.join(first)}")
    table = render_table(["роль", "монета", "режим", "множества ответов"], q_admissibility_rows(args.variant))
    roles = "; ".join(
        f"{coin.value}: {', '.join(r.value for r in admissible_roles(QUESTION_Q, coin, args.variant)) or 'никого'}"
        for coin in CoinFace
    )
    return CheckResult("q_admissibility", not problems,
                       "; ".join(problems) or f"\n{table}\nдопустим для: {roles}")


def check_first_step_admissibility(args, search, probability) -> CheckResult:
    expected = {
        RandomVariant.COIN: (Fraction(1, 6), Fraction(1, 3)),
        RandomVariant.UNIFORM: (Fraction(1, 3), Fraction(1, 3)),
    }[args.variant]
    got = probability.first_step_admissibility(QUESTION_Q, args.variant)
    return CheckResult("first_step_admissibility", got == expected,
                       f"орёл {fraction_text(got[0])}, решка {fraction_text(got[1])}")


def check_published_constants(args, search, probability) -> CheckResult:
    claimed = [probability.published_claim(k) for k in (0, 1, 2)]
    terms = {k: probability.published_case_terms(k) for k in (1, 2)}
    passed = (claimed == [Fraction(1, 6), Fraction(1, 6), Fraction(1, 3)]
              and terms[1] == [Fraction(1, 6), Fraction(1, 6)]
              and terms[2] == [Fraction(1, 3), Fraction(1, 3)])
    return CheckResult("published_constants", passed,
                       f"заявлено {[fraction_text(c) for c in claimed]}, "
                       f"слагаемые {[[fraction_text(t) for t in terms[k]] for k in (1, 2)]}")


def check_optima_and_claim_report(args, search, probability) -> CheckResult:
    report = probability.claim_report(args.prior, args.variant)
    engine = {row.k: row.engine_optimum for row in report.rows}
    bounds_ok = all(engine[k] <= min(Fraction(1), 2 ** k * max(args.prior.scenario_marginals().values()))
                    for k in engine)
    nondecreasing = engine[0] <= engine[1] <= engine[2]
    explicit = strategy_service.success_probability(_explicit_depth_one_tree(), args.prior, args.variant)
    zero_ok = engine[0] == max(args.prior.scenario_marginals().values())
    passed = bounds_ok and nondecreasing and engine[1] >= explicit and zero_ok
    return CheckResult("optima_and_claim_report", passed, "\n" + render_claim_table(report),
                       data=claim_report_to_dict(report))


def check_uniform_contrast(args, search, probability) -> CheckResult:
    variant = RandomVariant.UNIFORM
    random_ok = all(
        admissible(QUESTION_Q, world, god, speaking_mode(Role.RANDOM, coin), variant)
        for world in all_worlds() for god in GodName for coin in CoinFace
        if role_of(world.scenario, god) is Role.RANDOM
    )
    true_blocked = not any(
        admissible(QUESTION_Q, world, god, SpeakingMode.TRUTHFUL, variant)
        for world in all_worlds() for god in GodName
        if role_of(world.scenario, god) is Role.TRUE
    )
    return CheckResult("uniform_contrast", random_ok and true_blocked,
                       f"Random отвечает={random_ok}, True заблокирован={true_blocked}")


def check_embedded_question_property(args, search, probability) -> CheckResult:
    rng = random.Random(args.seed)
    worlds = all_worlds()
    failures = 0
    for _ in range(args.samples):
        truth = [w for w in worlds if rng.randrange(2)]
        p = proposition_question(truth)
        world = rng.choice(worlds)
        god = rng.choice([g for g in GodName if role_of(world.scenario, g) is not Role.RANDOM])
        mode = modes_for(role_of(world.scenario, god))[0]
        options = answer_set(embedded_question(p), world, god, mode, args.variant)
        expected = "Da" if evaluate(p, world, god) else "Ja"
        if len(options) != 1 or next(iter(options)).value != expected:
            failures += 1
    return CheckResult("embedded_question_property", failures == 0,
                       f"примеров {args.samples}, ошибок {failures}")


def check_oracle_duality_property(args, search, probability) -> CheckResult:
    rng = random.Random(args.seed + 1)
    worlds = all_worlds()
    failures = 0
    for _ in range(args.samples):
        q = random_question(rng)
        world = rng.choice(worlds)
        god = rng.choice(list(GodName))
        for mode, dual in ((SpeakingMode.TRUTHFUL, SpeakingMode.LYING),
                           (SpeakingMode.LYING, SpeakingMode.TRUTHFUL)):
            if answer_set(Not(q), world, god, mode, args.variant) != answer_set(q, world, god, dual, args.variant):
                failures += 1
    return CheckResult("oracle_duality_property", failures == 0,
                       f"примеров {args.samples}, ошибок {failures}")


def check_determinism(args, search, probability) -> CheckResult:
    from godpuzzle.handlers.session import InterrogationSession, run_session

    first = SearchService(search.max_states).exhaustive_search(1, args.prior, args.variant)
    second = SearchService(search.max_states).exhaustive_search(1, args.prior, args.variant)
    script = ["ask A: da means yes iff B is Random", "ask B: da means yes iff true", "guess S1"]
    transcripts = []
    for _ in range(2):
        session = InterrogationSession(args.seed, args.prior, args.variant, Config.MAX_QUESTIONS)
        transcripts.append(dumps(run_session(session, script, io.StringIO())))
    passed = first.optimal_witness == second.optimal_witness and transcripts[0] == transcripts[1]
    return CheckResult("determinism", passed,
                       f"стратегии совпадают={first.optimal_witness == second.optimal_witness}, "
                       f"протоколы совпадают={transcripts[0] == transcripts[1]}")


def _explicit_depth_one_tree():
    from godpuzzle.services.strategy import FIND_NON_RANDOM, Ask, Guess
    from godpuzzle.puzzle.world import ScenarioId

    return Ask(GodName.A, parse(FIND_NON_RANDOM), Guess(ScenarioId.S2), Guess(ScenarioId.S1))


VERIFY_CHECKS: List[Callable[..., CheckResult]] = [
    check_counting_bound,
    check_impossibility_depth_1_2,
    check_three_question_solver,
    check_q_admissibility,
    check_first_step_admissibility,
    check_published_constants,
    check_optima_and_claim_report,
    check_uniform_contrast,
    check_embedded_question_property,
    check_oracle_duality_property,
    check_determinism,
]


def run_checks(args) -> List[CheckResult]:
    search = SearchService(args.max_states)
    probability = ProbabilityService(search)
    results = []
    for check in VERIFY_CHECKS:
        name = check.__name__.replace("check_", "")
        try:
            result = check(args, search, probability)
        except SearchResourceError as e:
            logger.error(f"Check {name} hit the resource cap: {e}")
            result = CheckResult(name, False, f"предел ресурсов: {e} "
                                 f"(просмотрено {e.explored_classes}, мемо {e.memo_states})", True)
        logger.info(f"Check {result.name}: {'passed' if result.passed else 'FAILED'}")
        results.append(result)
    return results


def cmd_verify(args, out: TextIO) -> int:
    """Run the acceptance suite; nonzero exit on any failed check."""
    results = run_checks(args)
    passed = all(r.passed for r in results)
    if args.format == "json":
        text = dumps({
            "variant": args.variant.value,
            "passed": passed,
            "checks": [
                {"name": r.name, "passed": r.passed, "detail": r.detail.strip(),
                 "resource_limited": r.resource_limited, "data": r.data}
                for r in results
            ],
        })
    else:
        lines = [f"🔍 Проверка (вариант {args.variant.value})"]
        for r in results:
            lines.append(f"{'✅' if r.passed else '❌'} {r.name}: {r.detail}")
        lines.append("✅ Все проверки пройдены" if passed else "❌ Есть непройденные проверки")
        text = "\n".join(lines) + "\n"
    _emit(args, text, out)

    if args.persist:
        failed = [r.name for r in results if not r.passed]

        async def save(db):
            return await db.save_verification_run(args.variant.value, passed, failed, text)
        try:
            asyncio.run(with_database(save, args.db_url))
        except Exception as e:
            logger.error(f"Failed to persist verification run: {e}")

    if passed:
        return EXIT_OK
    if any(r.resource_limited for r in results):
        return EXIT_RESOURCE
    return EXIT_CHECK_FAILED


def cmd_search(args, out: TextIO) -> int:
    """Exhaustive search at one depth; depth 3 needs --full-depth3."""
    if args.depth not in (1, 2, 3):
        out.write("❌ Глубина должна быть 1, 2 или 3\n")
        return EXIT_USAGE
    if args.depth == 3 and not args.full_depth3:
        out.write("❌ Поиск глубины 3 требует флага --full-depth3 (глубину 3 подтверждает встроенный решатель)\n")
        return EXIT_USAGE
    search = SearchService(args.max_states)
    try:
        result = search.exhaustive_search(args.depth, args.prior, args.variant)
    except SearchResourceError as e:
        logger.error(f"Search hit the resource cap: {e}")
        out.write(dumps({"error": str(e), "explored_classes": e.explored_classes,
                         "memo_states": e.memo_states}))
        return EXIT_RESOURCE

    data = search_result_to_dict(result)
    if args.check_witness and result.witness is not None:
        data["witness_is_certain_solver"] = strategy_service.is_certain_solver(
            result.witness, args.prior, args.variant)
    if args.save_witness:
        save_strategy(result.optimal_witness, args.save_witness)
        logger.info(f"Optimal witness saved to {args.save_witness}")
    if args.format == "json":
        text = dumps(data)
    else:
        lines = [
            f"глубина: {result.depth}",
            f"надёжный решатель существует: {result.certain_solver_exists}",
            f"оптимальная вероятность успеха: {fraction_text(result.optimal_success)}",
            f"верхняя оценка подсчётом: {fraction_text(result.upper_bound)}",
            f"просмотрено классов: {result.explored_classes}",
            f"состояний в мемо: {result.memo_states}",
        ]
        if "witness_is_certain_solver" in data:
            lines.append(f"свидетель надёжен: {data['witness_is_certain_solver']}")
        lines += ["оптимальная стратегия:", render_tree(result.optimal_witness, "  ")]
        text = "\n".join(lines) + "\n"
    _emit(args, text, out)
    return EXIT_OK


def eval_rows(question_text: str, world_spec: str, addressee_spec: str, mode_spec: str,
              variant: RandomVariant) -> List[List[str]]:
    """Answer sets of one question across the requested worlds, gods and modes."""
    q = parse(question_text)
    worlds = all_worlds() if world_spec == "all" else [parse_world(world_spec)]
    gods = list(GodName) if addressee_spec == "all" else [GodName(addressee_spec.upper())]
    rows = []
    for world in worlds:
        for god in gods:
            role = role_of(world.scenario, god)
            if mode_spec == "all":
                modes = list(SpeakingMode)
            elif mode_spec == "role":
                modes = list(modes_for(role))
            elif mode_spec in ("heads", "tails"):
                modes = [speaking_mode(role, CoinFace(mode_spec.capitalize()))]
            else:
                modes = [SpeakingMode(mode_spec.capitalize())]
            for mode in modes:
                rows.append([world.label, god.value, role.value, mode.value,
                             answer_set_text(answer_set(q, world, god, mode, variant))])
    return rows


def cmd_eval(args, out: TextIO) -> int:
    """Print the answer-set table for a question."""
    rows = eval_rows(args.question, args.world, args.addressee, args.mode, args.variant)
    if args.format == "json":
        text = dumps([
            {"world": r[0], "addressee": r[1], "role": r[2], "mode": r[3], "answers": r[4]}
            for r in rows
        ])
    else:
        text = render_table(["мир", "бог", "роль", "режим", "множество ответов"], rows) + "\n"
    _emit(args, text, out)
    return EXIT_OK


def cmd_history(args, out: TextIO) -> int:
    """List recently persisted sessions and verification runs."""
    async def load(db):
        return await db.get_recent_sessions(args.limit), await db.get_recent_runs(args.limit)

    sessions, runs = asyncio.run(with_database(load, args.db_url))
    out.write(render_table(
        ["сессия", "зерно", "вариант", "мир", "вопросов", "вердикт"],
        [[s.session_id, s.seed, s.variant, s.hidden_world, s.questions_asked, s.verdict] for s in sessions],
    ) + "\n\n")
    out.write(render_table(
        ["прогон", "вариант", "пройден", "проваленные проверки"],
        [[r.run_id, r.variant, r.passed, r.failed_checks or "-"] for r in runs],
    ) + "\n")
    return EXIT_OK


def cmd_strategy(args, out: TextIO) -> int:
    """Load a strategy file and report validity, success probability and certainty."""
    tree = load_strategy(args.file, enforce_depth=not args.allow_deep)
    report = strategy_service.validate(tree, args.prior, args.variant)
    success = strategy_service.success_probability(tree, args.prior, args.variant) if report.ok else None
    certain = report.ok and success == 1
    data = {
        "depth": depth(tree),
        "valid": report.ok,
        "problem": None if report.ok else report.message,
        "success_probability": fraction_text(success),
        "certain_solver": certain,
    }
    if args.format == "json":
        text = dumps(data)
    else:
        lines = [
            f"глубина: {data['depth']}",
            f"корректна: {report.ok}" + ("" if report.ok else f" ({report.message})"),
            f"вероятность успеха: {data['success_probability'] or '-'}",
            f"надёжный решатель: {certain}",
            render_tree(tree, "  "),
        ]
        text = "\n".join(lines) + "\n"
    _emit(args, text, out)
    return EXIT_OK if report.ok else EXIT_CHECK_FAILED
