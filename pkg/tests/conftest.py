"""
Fixtures compartidas: los ejemplos de referencia y estrategias de Hypothesis
para bases y multiconjuntos aleatorios pequeños.
"""
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings as hyp_settings
from hypothesis import strategies as st

from app.core.config import Limits
from app.models.caseset import CaseSet
from app.models.rules import Atom, Literal, RuleBase, RuleProgram
from app.services.parser import parse_rules

hyp_settings.register_profile(
    "incmeter",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
hyp_settings.load_profile("incmeter")

ATOMS = ("a", "b", "c", "d")

LOAN_RULES = """
platinumCustomer -> creditWorthy.
mentalCondition -> -creditWorthy.
"""

# R(M_1): r1..r5 en este orden.
M1_RULES = """
a -> b.
c -> -b.
b -> x.
x -> z.
y -> -z.
"""

M1_FACTS = (("a", "c"), ("a", "c"), ("a", "y"), ("a", "c", "y"))


def lits(*items: str) -> list[Literal]:
    return [Literal.parse(item) for item in items]


def make_base(facts, rules_text: str = "") -> RuleBase:
    return RuleBase.from_parts(lits(*facts), parse_rules(rules_text).rules)


@pytest.fixture
def limits() -> Limits:
    return Limits(max_mis=10_000, max_supports=10_000, max_active=24)


@pytest.fixture
def b1() -> RuleBase:
    """Solicitud de préstamo: cliente platino con una condición mental."""
    return make_base(["mentalCondition", "platinumCustomer"], LOAN_RULES)


@pytest.fixture
def b2() -> RuleBase:
    return make_base(["a"], "a -> b. a -> -b.")


@pytest.fixture
def b3() -> RuleBase:
    return make_base(["a", "-b"], "a -> b.")


@pytest.fixture
def m1_program() -> RuleProgram:
    return parse_rules(M1_RULES)


@pytest.fixture
def m1(m1_program) -> CaseSet:
    return CaseSet(
        shared_rules=m1_program,
        cases=tuple((f"b{i}", frozenset(lits(*facts))) for i, facts in enumerate(M1_FACTS, start=1)),
    )


@pytest.fixture
def b4(m1) -> RuleBase:
    return m1.base_for(lits("a", "c", "y"))


def frac(text: str) -> Fraction:
    return Fraction(text)


# ──────────────────────────────────────────────────────────────────────────────
# Estrategias
# ──────────────────────────────────────────────────────────────────────────────

literals = st.builds(lambda name, neg: Literal(Atom(name), neg), st.sampled_from(ATOMS), st.booleans())

rule_pairs = st.tuples(st.frozensets(literals, min_size=1, max_size=2), literals)


@st.composite
def consistent_facts(draw, atoms=ATOMS):
    states = draw(st.lists(st.integers(0, 2), min_size=len(atoms), max_size=len(atoms)))
    return frozenset(Literal(Atom(name), state == 2) for name, state in zip(atoms, states) if state)


@st.composite
def programs(draw, max_rules: int = 8):
    return RuleProgram.from_pairs(draw(st.lists(rule_pairs, max_size=max_rules)))


@st.composite
def rule_bases(draw, max_facts: int = 4, max_rules: int = 8, consistent: bool = False):
    """Bases de a lo sumo max_facts + max_rules elementos sobre cuatro átomos."""
    if consistent:
        facts = draw(consistent_facts())
    else:
        facts = draw(st.frozensets(literals, max_size=max_facts))
    program = draw(programs(max_rules))
    return RuleBase.from_parts(facts, program.rules)


@st.composite
def casesets(draw, max_rules: int = 6, max_cases: int = 5):
    program = draw(programs(max_rules))
    fact_sets = draw(st.lists(consistent_facts(), min_size=0, max_size=max_cases))
    return CaseSet.from_facts(program, fact_sets)
