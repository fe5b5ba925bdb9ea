import io

import pytest
from hypothesis import given

from app.core.errors import CaseFormatError, ContradictoryFactsError, DuplicateCaseError, RuleSyntaxError
from app.models.caseset import CaseSet
from app.services.multiset import sigma_culpability, sigma_measure
from app.services.parser import build_caseset, parse_cases, parse_rules, read_cases, render_rules
from app.schemas.cases import CaseRecord
from conftest import lits, programs


def test_single_rule():
    program = parse_rules("platinumCustomer -> creditWorthy.")
    assert len(program) == 1
    rule = program.rules[0]
    assert rule.id == "r1"
    assert rule.body == frozenset(lits("platinumCustomer"))
    assert rule.head == lits("creditWorthy")[0]


def test_negated_head_and_alias():
    assert parse_rules("a -> -b.").rules[0].head == lits("-b")[0]
    assert parse_rules("a -> ¬b.") == parse_rules("a -> -b.")


def test_duplicates_collapse():
    program = parse_rules("a, b -> c. b,a -> c.")
    assert len(program) == 1


def test_comments_and_spans():
    program = parse_rules("% cabecera\na -> b.  % fin\n\n  c -> -d.\n")
    assert program.ids == ("r1", "r2")
    assert program.source_spans[1].line == 4


@pytest.mark.parametrize("text", ["a -> b", "a -> .", "-> b.", "a b -> c.", "1a -> b."])
def test_syntax_errors_carry_position(text):
    with pytest.raises(RuleSyntaxError) as info:
        parse_rules(text)
    assert info.value.line >= 1
    assert info.value.column >= 1


def test_facts_are_rejected_in_rules_file():
    with pytest.raises(RuleSyntaxError) as info:
        parse_rules("a -> b.\nq.")
    assert info.value.line == 2


@given(programs())
def test_render_round_trip(program):
    assert parse_rules(render_rules(program)) == program


def test_jsonl_cases():
    stream = io.StringIO('{"case_id": "c1", "facts": ["a", "c"]}\n\n{"case_id": "c2", "facts": ["-b"]}\n')
    cases = parse_cases(stream, "jsonl")
    assert [c.case_id for c in cases] == ["c1", "c2"]
    assert cases[0].literals == frozenset(lits("a", "c"))
    assert cases[1].facts == frozenset({"-b"})


def test_csv_cases():
    stream = io.StringIO("case_id,facts\nc3,a;y\nc4,\n")
    cases = parse_cases(stream, "csv")
    assert cases[0] == CaseRecord(case_id="c3", facts=["a", "y"])
    assert cases[1].facts == frozenset()


def test_csv_header_must_match():
    with pytest.raises(CaseFormatError):
        parse_cases(io.StringIO("id,facts\nc1,a\n"), "csv")


def test_malformed_line_reports_number():
    stream = io.StringIO('{"case_id": "c1", "facts": ["a"]}\n{"case_id": \n')
    with pytest.raises(CaseFormatError) as info:
        parse_cases(stream, "jsonl")
    assert info.value.line == 2


def test_byte_order_mark_is_ignored(tmp_path):
    csv_path = tmp_path / "cases.csv"
    csv_path.write_bytes("case_id,facts\nc1,a;b\n".encode("utf-8-sig"))
    assert read_cases(csv_path)[0].facts == frozenset({"a", "b"})
    jsonl_path = tmp_path / "cases.jsonl"
    jsonl_path.write_bytes('{"case_id": "c1", "facts": ["a"]}\n'.encode("utf-8-sig"))
    assert read_cases(jsonl_path)[0].case_id == "c1"


@pytest.mark.parametrize("suffix, first", [(".jsonl", b'{"case_id": "c1", "facts": []}\n'), (".csv", b"case_id,facts\n")])
def test_invalid_utf8_reports_its_line(tmp_path, suffix, first):
    path = tmp_path / f"cases{suffix}"
    path.write_bytes(first + b'{"case_id": "c2", "facts": ["\xff"]}\n')
    with pytest.raises(CaseFormatError) as info:
        read_cases(path)
    assert info.value.line == 2
    assert "línea 2" in str(info.value)


def test_duplicate_case_id():
    stream = io.StringIO('{"case_id": "c1", "facts": []}\n{"case_id": "c1", "facts": ["a"]}\n')
    with pytest.raises(DuplicateCaseError) as info:
        parse_cases(stream, "jsonl")
    assert info.value.line == 2


def test_contradictory_facts():
    line = '{"case_id": "c1", "facts": ["a", "-a"]}\n'
    with pytest.raises(ContradictoryFactsError):
        parse_cases(io.StringIO(line), "jsonl")
    cases = parse_cases(io.StringIO(line), "jsonl", allow_contradictory_facts=True)
    assert cases[0].contradiction() == "a"


def test_build_caseset_dedups_fact_sets(m1_program):
    records = [
        CaseRecord(case_id="b1", facts=["a", "c"]),
        CaseRecord(case_id="b2", facts=["c", "a"]),
        CaseRecord(case_id="b3", facts=["a", "y"]),
        CaseRecord(case_id="b4", facts=["a", "c", "y"]),
    ]
    caseset = build_caseset(m1_program, records)
    assert len(caseset) == 4
    assert len(caseset.classes) == 3
    assert caseset.classes[0].multiplicity == 2


def test_dedup_is_transparent(m1, limits):
    # Sin deduplicar: cada caso con un conjunto de hechos distinto pero equivalente.
    naive = sum(
        (sigma_measure(CaseSet.from_facts(m1.shared_rules, [facts]), "mi", limits) for _, facts in m1.cases),
        start=0,
    )
    assert sigma_measure(m1, "mi", limits) == naive == 5
    per_case = sum(
        sigma_culpability(CaseSet.from_facts(m1.shared_rules, [facts]), "chash", "r1", limits)
        for _, facts in m1.cases
    )
    assert sigma_culpability(m1, "chash", "r1", limits) == per_case
