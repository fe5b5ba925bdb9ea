import json

import pytest

from app.core.errors import UnknownPostulateError
from app.schemas.report import Postulate, Verdict
from app.services.postulates import check_postulate, render_table, replay_witness, table1

PROVEN = ("RS", "RM", "CO", "MO", "IN")
SHAPLEY_ONLY = ("DIS", "UB", "FM")
# 5 postulados × 2000 = 10⁴ intentos por medida.
SLOW_TRIALS = 2000


@pytest.mark.parametrize("measure", ["cd", "chash"])
def test_baselines_violate_fm_with_a_replayable_witness(measure):
    result = check_postulate("FM", measure, trials=200, seed=1)
    assert result.verdict == Verdict.COUNTEREXAMPLE
    assert result.witness.element.startswith("f:")
    assert replay_witness(result)


def test_adjusted_shapley_respects_fm_dis_ub():
    for postulate in SHAPLEY_ONLY:
        result = check_postulate(postulate, "adj-shapley-mi", trials=200, seed=2)
        assert result.verdict == Verdict.NO_COUNTEREXAMPLE, result.witness


@pytest.mark.parametrize("seed", [0, 1, 77])
def test_adjusted_shapley_is_monotone(seed):
    result = check_postulate("MO", "adj-shapley-mi", trials=400, seed=seed)
    assert result.verdict == Verdict.NO_COUNTEREXAMPLE, result.witness


def test_coalition_redistribution_breaks_monotony():
    result = check_postulate("MO", "adj-shapley-mi-coalition", trials=1500, seed=77)
    assert result.verdict == Verdict.COUNTEREXAMPLE
    assert result.witness.extra_rule is not None
    assert replay_witness(result)
    # El mismo multiconjunto no viola MO con el reparto por MI.
    assert not replay_witness(result.model_copy(update={"measure": "adj-shapley-mi"}))


def test_plain_shapley_is_not_fact_minimal():
    result = check_postulate("FM", "shapley-mi", trials=200, seed=3)
    assert result.verdict == Verdict.COUNTEREXAMPLE
    assert replay_witness(result)


def test_dis_and_ub_do_not_apply_to_baselines():
    for measure in ("cd", "chash"):
        assert check_postulate("DIS", measure, 10, 0).verdict == Verdict.NOT_APPLICABLE
        assert check_postulate(Postulate.UB, measure, 10, 0).verdict == Verdict.NOT_APPLICABLE


def test_unknown_postulate():
    with pytest.raises(UnknownPostulateError):
        check_postulate("XX", "cd", 1, 0)


def test_zero_trials_is_vacuous():
    table = table1(trials=0, seed=0)
    for result in table.results:
        assert result.verdict in (Verdict.NO_COUNTEREXAMPLE, Verdict.NOT_APPLICABLE)


def test_table_is_deterministic_and_renders():
    first = table1(trials=15, seed=5)
    assert first == table1(trials=15, seed=5)
    text = render_table(first)
    assert text.splitlines()[0].split() == ["measure", *[p.value for p in Postulate]]
    assert json.loads(render_table(first, "json"))["seed"] == 5


def test_no_witness_means_nothing_to_replay():
    assert not replay_witness(check_postulate("RS", "cd", 5, 0))


@pytest.mark.slow
@pytest.mark.parametrize("measure", ["cd", "chash", "adj-shapley-mi"])
@pytest.mark.parametrize("postulate", PROVEN)
def test_proven_postulates_hold(measure, postulate):
    result = check_postulate(postulate, measure, trials=SLOW_TRIALS, seed=20)
    assert result.verdict == Verdict.NO_COUNTEREXAMPLE, result.witness


@pytest.mark.slow
@pytest.mark.parametrize("postulate", SHAPLEY_ONLY)
def test_shapley_only_postulates_hold(postulate):
    result = check_postulate(postulate, "adj-shapley-mi", trials=SLOW_TRIALS, seed=21)
    assert result.verdict == Verdict.NO_COUNTEREXAMPLE, result.witness


@pytest.mark.slow
def test_table_pattern():
    table = table1(trials=300, seed=9)
    expected = {
        "cd": ["✓", "✓", "✓", "✓", "✓", "n/a", "n/a", "✗"],
        "chash": ["✓", "✓", "✓", "✓", "✓", "n/a", "n/a", "✗"],
        "adj-shapley-mi": ["✓"] * 8,
    }
    for measure, symbols in expected.items():
        assert [table.cell(measure, p).verdict.symbol for p in Postulate] == symbols
