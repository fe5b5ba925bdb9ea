import pytest
from pydantic import ValidationError

from app.schemas.config import GenConfig
from app.services.mi import enumerate_mi
from app.services.parser import parse_rules, render_rules
from app.services.synth import (
    atom_name,
    generate,
    generate_cases,
    generate_rules,
    generate_structured_rules,
    make_rng,
    random_caseset,
)
from conftest import lits


@pytest.mark.parametrize("index, name", [(0, "a"), (25, "z"), (26, "aa"), (27, "ab"), (51, "az"), (52, "ba"), (702, "aaa")])
def test_atom_names(index, name):
    assert atom_name(index) == name


def test_chain_rules():
    assert generate_rules(2) == parse_rules("a -> -b. b -> -c.")
    assert len(generate_rules(0)) == 0
    assert render_rules(generate_rules(1)) == "a -> -b.\n"


def test_probability_bounds():
    assert {facts for _, facts in generate_cases(GenConfig(n_rules=2, n_cases=5, fact_probability=1.0)).cases} == {
        frozenset(lits("a", "b", "c"))
    }
    assert {facts for _, facts in generate_cases(GenConfig(n_rules=2, n_cases=5, fact_probability=0.0)).cases} == {
        frozenset()
    }
    with pytest.raises(ValidationError):
        GenConfig(n_rules=2, n_cases=5, fact_probability=1.5)


def test_chain_case_with_two_facts_is_inconsistent():
    caseset = generate_cases(GenConfig(n_rules=2, n_cases=0))
    base = caseset.base_for(lits("a", "b"))
    assert {m.element_ids for m in enumerate_mi(base)} == {frozenset({"f:a", "f:b", "r1"})}


def test_generation_is_deterministic():
    config = GenConfig(n_rules=30, n_cases=200, fact_probability=0.3, seed=7)
    assert generate(config) == generate(config)
    other = generate(config.model_copy(update={"seed": 8}))
    assert other[1] != generate(config)[1]


def test_facts_are_positive_atoms_of_the_base():
    caseset = generate_cases(GenConfig(n_rules=28, n_cases=300, fact_probability=0.5, seed=3))
    atoms = {atom_name(i) for i in range(29)}
    for _, facts in caseset.cases:
        assert all(not lit.negated and lit.atom.name in atoms for lit in facts)


def test_structured_rules_mix_polarity():
    program = generate_structured_rules(make_rng(1), 40, 4)
    heads = {rule.head.negated for rule in program}
    assert heads == {True, False}
    assert all(1 <= len(rule.body) <= 2 for rule in program)


def test_fuzz_casesets_have_consistent_facts():
    rng = make_rng(11)
    for _ in range(50):
        caseset = random_caseset(rng)
        assert 1 <= len(caseset.shared_rules) <= 8
        assert 1 <= len(caseset) <= 6
        for _, facts in caseset.cases:
            assert not any(lit.negation() in facts for lit in facts)
