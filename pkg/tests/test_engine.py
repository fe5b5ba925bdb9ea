import itertools
import random
import time
from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

from app.models.rules import Atom, Literal, RuleBase, RuleProgram
from app.services.reasoning.engine import (
    conflicting_atoms,
    is_consistent,
    literal_set_consistent,
    minimal_model,
    supported_model,
)
from app.services.synth import atom_name
from conftest import lits, make_base, rule_bases


def test_minimal_model_loan_example(b1):
    assert minimal_model(b1) == frozenset(
        lits("mentalCondition", "platinumCustomer", "creditWorthy", "-creditWorthy")
    )
    assert not is_consistent(b1)
    assert conflicting_atoms(minimal_model(b1)) == [Atom("creditWorthy")]


def test_minimal_model_empty_base():
    assert minimal_model(RuleBase()) == frozenset()
    assert is_consistent(RuleBase())


def test_chain_closure():
    assert minimal_model(make_base(["a"], "a -> b. b -> c.")) == frozenset(lits("a", "b", "c"))


def test_rule_with_unmet_body_does_not_fire():
    base = make_base(["a"], "a, q -> b.")
    assert minimal_model(base) == frozenset(lits("a"))


def test_consistency_examples(b2):
    assert not is_consistent(b2)
    assert is_consistent(make_base(["a"], "a -> b."))


def test_literal_set_consistent():
    assert not literal_set_consistent(lits("a", "-a"))
    assert literal_set_consistent([])
    assert literal_set_consistent(lits("a", "-b"))


def _closed(model, base) -> bool:
    return all(not rule.body <= model or rule.head in model for rule in base)


def _brute_force_model(base: RuleBase) -> frozenset:
    universe = sorted({lit for el in base for lit in (*el.body, el.head)}, key=Literal.sort_key)
    seeds = {el.head for el in base.facts}
    for size in range(len(universe) + 1):
        for combo in itertools.combinations(universe, size):
            candidate = frozenset(combo)
            if seeds <= candidate and _closed(candidate, base):
                return candidate
    raise AssertionError("sin conjunto cerrado")


@given(rule_bases(max_facts=3, max_rules=5))
def test_model_is_closed_and_minimal(base):
    model = minimal_model(base)
    assert _closed(model, base)
    universe = {lit for el in base for lit in (*el.body, el.head)}
    if len(universe) <= 8:
        assert model == _brute_force_model(base)


@given(rule_bases(), st.randoms(use_true_random=False))
def test_model_does_not_depend_on_firing_order(base, rnd: random.Random):
    shuffled = list(base.elements)
    rnd.shuffle(shuffled)
    assert minimal_model(RuleBase(shuffled)) == minimal_model(base)


@given(rule_bases(max_rules=6), rule_bases(max_rules=3))
def test_derivation_is_monotone(base, extra):
    bigger = base.extend(replace(el, id=f"x:{el.id}") for el in extra)
    assert minimal_model(base) <= minimal_model(bigger)


@given(rule_bases())
def test_supported_model_covers_the_minimal_model(base):
    labels = supported_model(base, max_supports=10_000)
    assert set(labels) == set(minimal_model(base))
    for supports in labels.values():
        for s, t in itertools.combinations(supports, 2):
            assert s & t != s and s & t != t


def _chain_base(n_rules: int, closing: bool) -> RuleBase:
    """a → b → c → ... con el hecho a; si closing, la última cabeza contradice a a."""
    atoms = [Literal(Atom(atom_name(i))) for i in range(n_rules + 1)]
    pairs = [([atoms[i]], atoms[i + 1]) for i in range(n_rules)]
    if closing:
        pairs.append(([atoms[-1]], atoms[0].negation()))
    return RuleBase.from_parts([atoms[0]], RuleProgram.from_pairs(pairs).rules)


def _best_of(runs: int, func, *args) -> float:
    best = float("inf")
    for _ in range(runs):
        started = time.perf_counter()
        func(*args)
        best = min(best, time.perf_counter() - started)
    return best


@pytest.mark.slow
def test_consistency_check_scales_near_linearly_on_chains():
    assert is_consistent(_chain_base(100_000, closing=False))
    assert not is_consistent(_chain_base(100_000, closing=True))

    timings = {n: _best_of(3, is_consistent, _chain_base(n, closing=True)) for n in (25_000, 50_000, 100_000)}
    # Cuadruplicar la base no debe costar más de 8 veces (lineal con margen 2×).
    assert timings[100_000] <= 8 * timings[25_000] + 0.2
    assert timings[50_000] <= 4 * timings[25_000] + 0.2
