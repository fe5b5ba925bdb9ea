import csv
import json

import pytest

from app.main import main
from conftest import M1_FACTS, M1_RULES


@pytest.fixture
def m1_files(tmp_path):
    rules = tmp_path / "rules.txt"
    rules.write_text(M1_RULES, encoding="utf-8")
    cases = tmp_path / "cases.jsonl"
    cases.write_text(
        "".join(json.dumps({"case_id": f"b{i}", "facts": list(facts)}) + "\n"
                for i, facts in enumerate(M1_FACTS, start=1)),
        encoding="utf-8",
    )
    return rules, cases


def test_analyze_writes_the_worked_example_report(m1_files, tmp_path):
    rules, cases = m1_files
    out = tmp_path / "report.json"
    code = main(["analyze", "--rules", str(rules), "--cases", str(cases),
                 "--measures", "mi,cd,chash,adj-shapley-mi", "--output", str(out)])
    assert code == 0
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["overall"] == {"measure": "mi", "value": "5"}
    assert [(r["rule"], r["values"]["chash"]) for r in report["rules"]][:2] == [("r1", "5"), ("r2", "3")]
    assert report["rules"][0]["values"]["adj-shapley-mi"] == "2"


def test_analyze_output_is_independent_of_case_order_and_workers(m1_files, tmp_path):
    rules, cases = m1_files
    lines = cases.read_text(encoding="utf-8").splitlines()
    reversed_cases = tmp_path / "reversed.jsonl"
    reversed_cases.write_text("\n".join(reversed(lines)) + "\n", encoding="utf-8")

    outputs = []
    for source, workers in ((cases, "1"), (reversed_cases, "2")):
        out = tmp_path / f"report-{workers}.json"
        assert main(["analyze", "--rules", str(rules), "--cases", str(source), "--workers", workers,
                     "--output", str(out)]) == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


def test_analyze_with_zero_cases(m1_files, tmp_path, capsys):
    rules, _ = m1_files
    empty = tmp_path / "empty.csv"
    empty.write_text("case_id,facts\n", encoding="utf-8")
    assert main(["analyze", "--rules", str(rules), "--cases", str(empty), "--measures", "mi,cd"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["overall"]["value"] == "0"
    assert report["cases"] == []


def test_analyze_rejects_contradictory_facts(m1_files, tmp_path, capsys):
    rules, _ = m1_files
    cases = tmp_path / "bad.jsonl"
    cases.write_text('{"case_id": "c1", "facts": ["a"]}\n{"case_id": "c2", "facts": ["a", "-a"]}\n',
                     encoding="utf-8")
    assert main(["analyze", "--rules", str(rules), "--cases", str(cases)]) == 1
    assert "línea 2" in capsys.readouterr().err
    assert main(["analyze", "--rules", str(rules), "--cases", str(cases),
                 "--allow-contradictory-facts", "--measures", "mi,cd"]) == 0


def test_analyze_budget_exhaustion_exit_code(m1_files):
    rules, cases = m1_files
    assert main(["analyze", "--rules", str(rules), "--cases", str(cases), "--budget-mis", "1"]) == 2


def test_analyze_input_errors(m1_files, tmp_path):
    rules, cases = m1_files
    assert main(["analyze", "--rules", str(tmp_path / "missing.txt"), "--cases", str(cases)]) == 1
    assert main(["analyze", "--rules", str(rules), "--cases", str(cases), "--measures", "nope"]) == 1
    broken = tmp_path / "broken.txt"
    broken.write_text("a -> b\n", encoding="utf-8")
    assert main(["analyze", "--rules", str(broken), "--cases", str(cases)]) == 1


def test_analyze_csv_and_rank_distribution(m1_files, tmp_path):
    rules, cases = m1_files
    out = tmp_path / "report.csv"
    ranks = tmp_path / "ranks.csv"
    assert main(["analyze", "--rules", str(rules), "--cases", str(cases), "--measures", "cd,chash",
                 "--format", "csv", "--top", "1", "--output", str(out), "--rank-distribution", str(ranks)]) == 0
    rows = list(csv.DictReader(out.open(encoding="utf-8")))
    assert rows == [{"rule": "r1", "rank": "1", "cd": "4", "cd_decimal": "4.000000",
                     "chash": "5", "chash_decimal": "5.000000"}]
    samples = list(csv.DictReader(ranks.open(encoding="utf-8")))
    assert len(samples) == 5 * 4


def test_generate_then_analyze(tmp_path):
    rules, cases = tmp_path / "gen.txt", tmp_path / "gen.jsonl"
    assert main(["generate", "--n-rules", "2", "--n-cases", "3", "--probability", "1.0",
                 "--out-rules", str(rules), "--out-cases", str(cases)]) == 0
    assert rules.read_text(encoding="utf-8") == "a -> -b.\nb -> -c.\n"
    assert [json.loads(line)["facts"] for line in cases.read_text(encoding="utf-8").splitlines()] == [
        ["a", "b", "c"]
    ] * 3
    assert main(["analyze", "--rules", str(rules), "--cases", str(cases), "--measures", "mi"]) == 0


def test_generate_rejects_bad_probability(tmp_path):
    assert main(["generate", "--n-rules", "2", "--n-cases", "3", "--probability", "2",
                 "--out-rules", str(tmp_path / "r.txt"), "--out-cases", str(tmp_path / "c.jsonl")]) == 1


def test_check_prints_matrix(capsys):
    assert main(["check", "--trials", "5", "--postulates", "RS,FM", "--measures", "cd"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split() == ["measure", "RS", "FM"]
    assert main(["check", "--postulates", "ZZ"]) == 1


def test_bench_writes_grid(tmp_path):
    out = tmp_path / "bench.csv"
    assert main(["bench", "--sizes", "3,4", "--cases", "20,40", "--output", str(out)]) == 0
    rows = list(csv.DictReader(out.open(encoding="utf-8")))
    assert [(r["size"], r["cases"]) for r in rows] == [("3", "20"), ("3", "40"), ("4", "20"), ("4", "40")]
    assert all(float(r["seconds"]) >= 0 for r in rows)
