"""
Multiconjunto de bases de reglas: M = (F_1 ∪ R, ..., F_n ∪ R).

El conjunto de reglas R es compartido; cada caso aporta su conjunto de hechos.
Los conjuntos de hechos idénticos se agrupan en clases con multiplicidad, de
modo que cada base distinta se analiza una sola vez.
"""
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from app.models.rules import Literal, RuleBase, RuleProgram


@dataclass(frozen=True)
class FactClass:
    """Clase de casos con el mismo conjunto de hechos."""

    facts: frozenset[Literal]
    case_ids: tuple[str, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.case_ids)


@dataclass(frozen=True)
class CaseSet:
    shared_rules: RuleProgram
    cases: tuple[tuple[str, frozenset[Literal]], ...] = ()
    classes: tuple[FactClass, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        # Índice de deduplicación: conjunto de hechos → case_ids (orden de primera aparición).
        grouped: dict[frozenset[Literal], list[str]] = {}
        for case_id, facts in self.cases:
            grouped.setdefault(facts, []).append(case_id)
        object.__setattr__(
            self,
            "classes",
            tuple(FactClass(facts=facts, case_ids=tuple(ids)) for facts, ids in grouped.items()),
        )

    @classmethod
    def from_facts(cls, rules: RuleProgram, fact_sets: Iterable[Iterable[Literal]]) -> "CaseSet":
        """Atajo para pruebas y generadores: case_ids c1, c2, ..."""
        cases = tuple(
            (f"c{position}", frozenset(facts)) for position, facts in enumerate(fact_sets, start=1)
        )
        return cls(shared_rules=rules, cases=cases)

    def base_for(self, facts: Iterable[Literal]) -> RuleBase:
        return RuleBase.from_parts(facts, self.shared_rules.rules)

    def class_bases(self) -> Iterator[tuple[FactClass, RuleBase]]:
        for fact_class in self.classes:
            yield fact_class, self.base_for(fact_class.facts)

    def bases(self) -> Iterator[RuleBase]:
        """Una base por caso, sin deduplicar (construcción ingenua)."""
        for _, facts in self.cases:
            yield self.base_for(facts)

    @property
    def rule_ids(self) -> tuple[str, ...]:
        return self.shared_rules.ids

    @property
    def fact_ids(self) -> tuple[str, ...]:
        """Ids de todos los hechos que aparecen en algún caso (orden canónico)."""
        literals = {lit for _, facts in self.cases for lit in facts}
        return tuple(f"f:{lit}" for lit in sorted(literals, key=Literal.sort_key))

    def with_rule(self, body: Iterable[Literal], head: Literal) -> tuple["CaseSet", str]:
        """M ∪ {r}: la regla se añade a la base de cada caso."""
        program, rule_id = self.shared_rules.with_rule(body, head)
        return CaseSet(shared_rules=program, cases=self.cases), rule_id

    def permuted(self, order: Sequence[int]) -> "CaseSet":
        return CaseSet(shared_rules=self.shared_rules, cases=tuple(self.cases[i] for i in order))

    def __len__(self) -> int:
        return len(self.cases)
