"""Rendering of rationals, reports and answer tables."""
import json
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence

from godpuzzle.puzzle.world import Answer
from godpuzzle.services.search import SearchResult
from godpuzzle.services.probability import ClaimReport
from godpuzzle.services.strategy import tree_to_dict


def fraction_text(value: Optional[Fraction]) -> Optional[str]:
    """Render an exact rational as "num/den"."""
    if value is None:
        return None
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def answer_set_text(options: Iterable[Answer]) -> str:
    words = sorted(a.value for a in options)
    return "{" + ", ".join(words) + "}" if words else "∅"


def dumps(data: Any) -> str:
    """Stable JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def search_result_to_dict(result: SearchResult) -> Dict[str, Any]:
    return {
        "depth": result.depth,
        "certain_solver_exists": result.certain_solver_exists,
        "optimal_success": fraction_text(result.optimal_success),
        "upper_bound": fraction_text(result.upper_bound),
        "explored_classes": result.explored_classes,
        "memo_states": result.memo_states,
        "witness": tree_to_dict(result.witness) if result.witness is not None else None,
        "optimal_witness": tree_to_dict(result.optimal_witness),
    }


def claim_report_to_dict(report: ClaimReport) -> Dict[str, Any]:
    return {
        "variant": report.variant.value,
        "rows": [
            {
                "k": row.k,
                "published_claim": fraction_text(row.published_claim),
                "published_case_terms": [fraction_text(t) for t in row.published_case_terms],
                "published_case_sum": fraction_text(row.case_sum),
                "engine_optimum": fraction_text(row.engine_optimum),
                "agrees_with_claim": row.agrees_with_claim,
                "agrees_with_case_sum": row.agrees_with_case_sum,
            }
            for row in report.rows
        ],
    }


def render_table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """Aligned plain-text table."""
    cells = [[str(h) for h in headers]] + [["" if c is None else str(c) for c in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    lines = []
    for n, row in enumerate(cells):
        lines.append("  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())
        if n == 0:
            lines.append("  ".join("-" * width for width in widths))
    return "\n".join(lines)


def _flag(value: Optional[bool]) -> str:
    if value is None:
        return "-"
    return "да" if value else "РАСХОДИТСЯ"


def render_claim_table(report: ClaimReport) -> str:
    rows: List[List[Any]] = []
    for row in report.rows:
        rows.append([
            row.k,
            fraction_text(row.published_claim),
            " + ".join(fraction_text(t) for t in row.published_case_terms) or "-",
            fraction_text(row.case_sum) or "-",
            fraction_text(row.engine_optimum),
            _flag(row.agrees_with_claim),
            _flag(row.agrees_with_case_sum),
        ])
    return render_table(
        ["k", "заявлено", "слагаемые", "сумма слагаемых", "движок", "= заявленному", "= сумме"], rows
    )
