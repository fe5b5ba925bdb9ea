"""
Modelo de datos de bases de reglas de negocio.

Una base de reglas es un conjunto de hechos (reglas de cuerpo vacío) y reglas
"l1,...,lm -> l0" sobre literales. Todos los tipos son inmutables tras su
construcción y pueden compartirse entre workers sin copias defensivas.

Ids de elementos:
  - reglas propias: r1, r2, ... en orden de programa (tras deduplicar)
  - hechos:         f:<literal>  (p. ej. f:a, f:-b), estables entre casos
"""
import re
import threading
from dataclasses import dataclass, field
from typing import ClassVar, Iterable, Iterator, NamedTuple, Optional, Sequence, TypeAlias

from app.core.errors import UnknownElementError

_ATOM_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

NEGATION_TOKENS = ("-", "¬")


class Atom:
    """
    Átomo proposicional internado.

    Dos átomos con el mismo nombre son el mismo objeto y comparten un id.
    """

    __slots__ = ("name", "id")

    _registry: ClassVar[dict[str, "Atom"]] = {}
    _lock: ClassVar[threading.Lock] = threading.Lock()

    name: str
    id: int

    def __new__(cls, name: str) -> "Atom":
        atom = cls._registry.get(name)
        if atom is not None:
            return atom
        if not isinstance(name, str) or not _ATOM_PATTERN.match(name):
            raise ValueError(f"nombre de átomo inválido: {name!r}")
        with cls._lock:
            atom = cls._registry.get(name)
            if atom is None:
                atom = super().__new__(cls)
                atom.name = name
                atom.id = len(cls._registry)
                cls._registry[name] = atom
        return atom

    def __reduce__(self):
        # Al deserializar en otro proceso se vuelve a internar por nombre.
        return (Atom, (self.name,))

    def __lt__(self, other: "Atom") -> bool:
        return self.name < other.name

    def __repr__(self) -> str:
        return f"Atom({self.name!r})"

    def __str__(self) -> str:
        return self.name


class Literal(NamedTuple):
    """Átomo con signo; negated=True representa ¬atom."""

    atom: Atom
    negated: bool = False

    @classmethod
    def parse(cls, text: str) -> "Literal":
        """Acepta 'a', '-a' y '¬a'."""
        token = text.strip()
        negated = False
        for mark in NEGATION_TOKENS:
            if token.startswith(mark):
                negated = True
                token = token[len(mark):].strip()
                break
        return cls(Atom(token), negated)

    def negation(self) -> "Literal":
        return Literal(self.atom, not self.negated)

    def sort_key(self) -> tuple[str, bool]:
        return (self.atom.name, self.negated)

    def __str__(self) -> str:
        return f"-{self.atom.name}" if self.negated else self.atom.name

    def __repr__(self) -> str:
        return f"Literal({self})"


LiteralSet: TypeAlias = frozenset[Literal]


def sorted_literals(literals: Iterable[Literal]) -> list[Literal]:
    return sorted(literals, key=Literal.sort_key)


@dataclass(frozen=True, slots=True)
class Rule:
    """
    Elemento de una base: regla "body -> head" o hecho (body vacío).

    La igualdad estructural que usa la deduplicación es `key` (cuerpo, cabeza);
    el id solo identifica al elemento dentro de la base.
    """

    id: str
    head: Literal
    body: frozenset[Literal] = frozenset()

    @classmethod
    def fact(cls, literal: Literal) -> "Rule":
        return cls(id=f"f:{literal}", head=literal)

    @property
    def is_fact(self) -> bool:
        return not self.body

    @property
    def key(self) -> tuple[frozenset[Literal], Literal]:
        return (self.body, self.head)

    def __str__(self) -> str:
        if self.is_fact:
            return f"{self.head}."
        body = ", ".join(str(lit) for lit in sorted_literals(self.body))
        return f"{body} -> {self.head}."


class RuleBase:
    """
    Conjunto de elementos (hechos y reglas) indexado por id.

    F(B) ∪ R(B) = B y F(B) ∩ R(B) = ∅ se cumplen por construcción: un elemento
    es hecho si y solo si su cuerpo está vacío. Los duplicados estructurales se
    colapsan conservando el primero.
    """

    __slots__ = ("_elements", "_index", "_hash")

    def __init__(self, elements: Iterable[Rule] = ()):
        index: dict[str, Rule] = {}
        seen: set[tuple[frozenset[Literal], Literal]] = set()
        kept: list[Rule] = []
        for element in elements:
            if element.key in seen:
                continue
            if element.id in index:
                raise ValueError(f"id de elemento duplicado en la base: {element.id}")
            seen.add(element.key)
            index[element.id] = element
            kept.append(element)
        self._elements: tuple[Rule, ...] = tuple(kept)
        self._index: dict[str, Rule] = index
        self._hash = hash(frozenset(kept))

    @classmethod
    def from_parts(cls, facts: Iterable[Literal], rules: Iterable[Rule]) -> "RuleBase":
        """Base F ∪ R con los hechos en orden canónico seguidos de las reglas."""
        return cls([Rule.fact(lit) for lit in sorted_literals(facts)] + list(rules))

    @property
    def elements(self) -> tuple[Rule, ...]:
        return self._elements

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(self._index)

    @property
    def facts(self) -> tuple[Rule, ...]:
        return tuple(el for el in self._elements if el.is_fact)

    @property
    def rules(self) -> tuple[Rule, ...]:
        return tuple(el for el in self._elements if not el.is_fact)

    def get(self, element_id: str) -> Optional[Rule]:
        return self._index.get(element_id)

    def restrict(self, element_ids: Iterable[str]) -> "RuleBase":
        """Sub-base con los ids dados (se conserva el orden de la base)."""
        wanted = set(element_ids)
        for element_id in wanted:
            if element_id not in self._index:
                raise UnknownElementError(element_id)
        return RuleBase(el for el in self._elements if el.id in wanted)

    def without(self, element_id: str) -> "RuleBase":
        if element_id not in self._index:
            raise UnknownElementError(element_id)
        return RuleBase(el for el in self._elements if el.id != element_id)

    def extend(self, elements: Iterable[Rule]) -> "RuleBase":
        return RuleBase([*self._elements, *elements])

    def __getitem__(self, element_id: str) -> Rule:
        try:
            return self._index[element_id]
        except KeyError:
            raise UnknownElementError(element_id) from None

    def __contains__(self, element_id: object) -> bool:
        return element_id in self._index

    def __iter__(self) -> Iterator[Rule]:
        return iter(self._elements)

    def __len__(self) -> int:
        return len(self._elements)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RuleBase):
            return NotImplemented
        return self._index == other._index

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "RuleBase({" + "; ".join(str(el) for el in self._elements) + "})"


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int


@dataclass(frozen=True)
class RuleProgram:
    """
    Conjunto compartido de reglas propias, en orden de programa.

    Un programa nunca contiene hechos: los hechos llegan con los casos.
    """

    rules: tuple[Rule, ...] = ()
    source_spans: tuple[Optional[SourceSpan], ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        for rule in self.rules:
            if rule.is_fact:
                raise ValueError(f"un programa de reglas no admite hechos: {rule}")

    @classmethod
    def from_pairs(
        cls,
        pairs: Iterable[tuple[Iterable[Literal], Literal]],
        spans: Optional[Sequence[Optional[SourceSpan]]] = None,
    ) -> "RuleProgram":
        """Construye el programa deduplicando y asignando ids r1, r2, ..."""
        rules: list[Rule] = []
        kept_spans: list[Optional[SourceSpan]] = []
        seen: set[tuple[frozenset[Literal], Literal]] = set()
        for position, (body, head) in enumerate(pairs):
            frozen = frozenset(body)
            if (frozen, head) in seen:
                continue
            seen.add((frozen, head))
            rules.append(Rule(id=f"r{len(rules) + 1}", head=head, body=frozen))
            kept_spans.append(spans[position] if spans is not None else None)
        return cls(rules=tuple(rules), source_spans=tuple(kept_spans))

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(rule.id for rule in self.rules)

    def get(self, rule_id: str) -> Optional[Rule]:
        for rule in self.rules:
            if rule.id == rule_id:
                return rule
        return None

    def atoms(self) -> list[Atom]:
        found = {lit.atom for rule in self.rules for lit in (*rule.body, rule.head)}
        return sorted(found)

    def with_rule(self, body: Iterable[Literal], head: Literal) -> tuple["RuleProgram", str]:
        """
        Añade una regla al conjunto compartido ("M ∪ {r}").

        Returns:
            (programa resultante, id de la regla). Si la regla ya existía
            estructuralmente se devuelve el programa sin cambios y su id original.
        """
        frozen = frozenset(body)
        for rule in self.rules:
            if rule.key == (frozen, head):
                return self, rule.id
        next_number = 1 + max((int(rule.id[1:]) for rule in self.rules if rule.id[1:].isdigit()), default=0)
        rule = Rule(id=f"r{next_number}", head=head, body=frozen)
        return (
            RuleProgram(rules=(*self.rules, rule), source_spans=(*self.source_spans, None)),
            rule.id,
        )

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)
