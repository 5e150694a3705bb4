import random

import pytest
from hypothesis import given, settings, strategies as st

from godpuzzle.puzzle.belief import initial_belief
from godpuzzle.puzzle.errors import NatureViolationError
from godpuzzle.puzzle.oracle import (
    BOTH_ANSWERS,
    RandomVariant,
    SpeakingMode,
    admissible_roles,
    answer_set,
    askability_witness,
    askable,
    draw_answer,
    modes_for,
    speaking_mode,
)
from godpuzzle.puzzle.question import (
    AnswerMeansNo,
    DaMeansYes,
    Iff,
    Not,
    embedded_question,
    evaluate,
    parse,
    proposition_question,
    random_question,
)
from godpuzzle.puzzle.world import (
    Answer,
    CoinFace,
    GodName,
    Role,
    all_worlds,
    concentrated_prior,
    parse_world,
    role_of,
)

Q = AnswerMeansNo()
ROME = parse("da means yes iff true")


def _non_random_pairs():
    return [(w, g) for w in all_worlds() for g in GodName if role_of(w.scenario, g) is not Role.RANDOM]


def test_speaking_modes():
    assert speaking_mode(Role.RANDOM, CoinFace.HEADS) is SpeakingMode.TRUTHFUL
    assert speaking_mode(Role.RANDOM, CoinFace.TAILS) is SpeakingMode.LYING
    assert speaking_mode(Role.FALSE, CoinFace.HEADS) is SpeakingMode.LYING
    assert speaking_mode(Role.TRUE, CoinFace.TAILS) is SpeakingMode.TRUTHFUL
    assert modes_for(Role.TRUE) == (SpeakingMode.TRUTHFUL,)
    assert modes_for(Role.RANDOM) == (SpeakingMode.TRUTHFUL, SpeakingMode.LYING)


def test_self_referential_question_answer_sets():
    for world in all_worlds():
        for god in GodName:
            assert answer_set(Q, world, god, SpeakingMode.TRUTHFUL) == frozenset()
            assert answer_set(Q, world, god, SpeakingMode.LYING) == BOTH_ANSWERS


def test_rome_question_reveals_true_or_false():
    for world, god in _non_random_pairs():
        expected = Answer.DA if role_of(world.scenario, god) is Role.TRUE else Answer.JA
        mode = modes_for(role_of(world.scenario, god))[0]
        assert answer_set(ROME, world, god, mode) == frozenset({expected})


def test_truthful_word_meaning_yes():
    world = parse_world("S5/da=no")
    mode = speaking_mode(Role.RANDOM, CoinFace.HEADS)
    assert answer_set(parse("A is Random"), world, GodName.A, mode) == frozenset({Answer.JA})


def test_bare_embedded_question_flips_for_false():
    p = parse("B is Random")
    for world, god in _non_random_pairs():
        role = role_of(world.scenario, god)
        [answer] = answer_set(Iff(DaMeansYes(), p), world, god, modes_for(role)[0])
        holds = evaluate(p, world, god)
        assert (answer is Answer.DA) == (holds if role is Role.TRUE else not holds)


@settings(derandomize=True, max_examples=1000)
@given(st.integers(min_value=0, max_value=2 ** 32))
def test_embedded_question_answers_da_iff_proposition(seed):
    rng = random.Random(seed)
    p = proposition_question(w for w in all_worlds() if rng.randrange(2))
    world, god = rng.choice(_non_random_pairs())
    mode = modes_for(role_of(world.scenario, god))[0]
    options = answer_set(embedded_question(p), world, god, mode)
    assert len(options) == 1
    assert (next(iter(options)) is Answer.DA) == evaluate(p, world, god)


@settings(derandomize=True, max_examples=1000)
@given(st.integers(min_value=0, max_value=2 ** 32), st.sampled_from(list(RandomVariant)))
def test_negation_swaps_speaking_modes(seed, variant):
    rng = random.Random(seed)
    q = random_question(rng)
    world = rng.choice(all_worlds())
    god = rng.choice(list(GodName))
    assert answer_set(Not(q), world, god, SpeakingMode.TRUTHFUL, variant) == \
        answer_set(q, world, god, SpeakingMode.LYING, variant)
    assert answer_set(Not(q), world, god, SpeakingMode.LYING, variant) == \
        answer_set(q, world, god, SpeakingMode.TRUTHFUL, variant)


@settings(derandomize=True, max_examples=300)
@given(st.integers(min_value=0, max_value=2 ** 32))
def test_extensional_questions_have_one_answer(seed):
    rng = random.Random(seed)
    q = random_question(rng, self_referential=False)
    world = rng.choice(all_worlds())
    god = rng.choice(list(GodName))
    for mode in SpeakingMode:
        assert len(answer_set(q, world, god, mode)) == 1


def test_uniform_variant_random_ignores_question():
    variant = RandomVariant.UNIFORM
    for world in all_worlds():
        for god in GodName:
            role = role_of(world.scenario, god)
            for mode in SpeakingMode:
                if role is Role.RANDOM:
                    assert answer_set(Q, world, god, mode, variant) == BOTH_ANSWERS
                    assert answer_set(ROME, world, god, mode, variant) == BOTH_ANSWERS
            if role is Role.TRUE:
                assert answer_set(Q, world, god, SpeakingMode.TRUTHFUL, variant) == frozenset()


def test_self_referential_question_not_askable_first(uniform):
    belief = initial_belief(uniform)
    for variant in RandomVariant:
        for god in GodName:
            assert not askable(Q, god, belief, variant)
    witness = askability_witness(Q, GodName.A, uniform.support())
    assert witness.world.label == "S1/da=yes"
    assert "может оказаться True" in witness.describe()


def test_self_referential_question_askable_to_known_liar():
    belief = initial_belief(concentrated_prior(parse_world("S3/da=yes")))
    assert askable(Q, GodName.A, belief)
    assert not askable(Q, GodName.B, belief)


def test_admissible_roles_by_coin():
    assert admissible_roles(Q, CoinFace.HEADS) == (Role.FALSE,)
    assert admissible_roles(Q, CoinFace.TAILS) == (Role.FALSE, Role.RANDOM)
    assert admissible_roles(Q, CoinFace.HEADS, RandomVariant.UNIFORM) == (Role.FALSE, Role.RANDOM)
    assert admissible_roles(ROME, CoinFace.HEADS) == (Role.TRUE, Role.FALSE, Role.RANDOM)


def test_draw_answer():
    rng = random.Random(0)
    world = parse_world("S1/da=no")
    with pytest.raises(NatureViolationError):
        draw_answer(Q, world, GodName.A, CoinFace.HEADS, rng)
    assert draw_answer(ROME, world, GodName.A, CoinFace.TAILS, rng) is Answer.DA
    assert draw_answer(ROME, world, GodName.B, CoinFace.HEADS, rng) is Answer.JA
    drawn = {draw_answer(Q, world, GodName.B, CoinFace.HEADS, rng) for _ in range(50)}
    assert drawn == {Answer.DA, Answer.JA}


def test_draw_answer_is_seeded():
    world = parse_world("S2/da=yes")
    first = [draw_answer(Q, world, GodName.C, CoinFace.HEADS, random.Random(5)) for _ in range(3)]
    second = [draw_answer(Q, world, GodName.C, CoinFace.HEADS, random.Random(5)) for _ in range(3)]
    assert first == second
