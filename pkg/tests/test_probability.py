from fractions import Fraction

import pytest

from godpuzzle.puzzle.oracle import RandomVariant
from godpuzzle.puzzle.question import AnswerMeansNo, parse
from godpuzzle.services.probability import ProbabilityService
from godpuzzle.services.search import SearchService
from godpuzzle.utils.formatting import render_claim_table, claim_report_to_dict


@pytest.fixture
def probability():
    return ProbabilityService(SearchService())


def test_stated_totals(probability):
    assert [probability.published_claim(k) for k in (0, 1, 2)] == [Fraction(1, 6), Fraction(1, 6), Fraction(1, 3)]
    with pytest.raises(ValueError):
        probability.published_claim(3)


def test_case_terms(probability):
    assert probability.published_case_terms(1) == [Fraction(1, 6), Fraction(1, 6)]
    assert probability.published_case_terms(2) == [Fraction(1, 3), Fraction(1, 3)]
    with pytest.raises(ValueError):
        probability.published_case_terms(0)


@pytest.mark.parametrize("variant,expected", [
    (RandomVariant.COIN, (Fraction(1, 6), Fraction(1, 3))),
    (RandomVariant.UNIFORM, (Fraction(1, 3), Fraction(1, 3))),
])
def test_first_step_admissibility_of_self_reference(probability, variant, expected):
    assert probability.first_step_admissibility(AnswerMeansNo(), variant) == expected


def test_first_step_admissibility_of_extensional_question(probability):
    q = parse("da means yes iff B is Random")
    assert probability.first_step_admissibility(q) == (Fraction(1, 2), Fraction(1, 2))


def test_claim_report(probability, uniform):
    report = probability.claim_report(uniform)
    assert [row.k for row in report.rows] == [0, 1, 2]
    assert [row.engine_optimum for row in report.rows] == [Fraction(1, 6), Fraction(1, 3), Fraction(2, 3)]
    assert [row.agrees_with_claim for row in report.rows] == [True, False, False]
    assert [row.agrees_with_case_sum for row in report.rows] == [None, True, True]
    assert [row.case_sum for row in report.rows] == [None, Fraction(1, 3), Fraction(2, 3)]
    assert not report.all_agree

    data = claim_report_to_dict(report)
    assert data["rows"][2]["engine_optimum"] == "2/3"
    assert data["rows"][2]["published_claim"] == "1/3"
    table = render_claim_table(report)
    assert "РАСХОДИТСЯ" in table
    assert "1/6 + 1/6" in table
