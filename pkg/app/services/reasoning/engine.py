"""
Motor de razonamiento sobre bases de reglas.

Calcula el modelo mínimo por encadenamiento hacia adelante semi-ingenuo:
cada regla lleva un contador de literales del cuerpo aún no derivados y se
dispara cuando llega a cero, de modo que el trabajo total es O(Σ|body|).

La clausura trata a y ¬a como símbolos independientes; la inconsistencia se
detecta después, sobre el modelo ya cerrado (semántica monótona, sin
negación por fallo).
"""
import logging
from collections import deque
from typing import Iterable, Sequence

from app.core.errors import BudgetExhaustedError
from app.models.rules import Atom, Literal, LiteralSet, Rule, RuleBase

logger = logging.getLogger(__name__)


def _closure(elements: Iterable[Rule]) -> set[Literal]:
    watchers: dict[Literal, list[int]] = {}
    remaining: list[int] = []
    heads: list[Literal] = []
    agenda: deque[Literal] = deque()

    for idx, element in enumerate(elements):
        heads.append(element.head)
        remaining.append(len(element.body))
        if not element.body:
            agenda.append(element.head)
        for lit in element.body:
            watchers.setdefault(lit, []).append(idx)

    model: set[Literal] = set()
    while agenda:
        lit = agenda.popleft()
        if lit in model:
            continue
        model.add(lit)
        for idx in watchers.get(lit, ()):
            remaining[idx] -= 1
            if remaining[idx] == 0:
                agenda.append(heads[idx])
    return model


def minimal_model(base: RuleBase) -> LiteralSet:
    """
    Menor conjunto de literales cerrado bajo todas las reglas de la base.

    Parte de las cabezas de F(B) y dispara toda regla cuyo cuerpo esté
    contenido en el conjunto actual hasta alcanzar el punto fijo. El
    resultado no depende del orden de disparo.
    """
    return frozenset(_closure(base.elements))


def literal_set_consistent(literals: Iterable[Literal]) -> bool:
    """True si el conjunto no contiene a la vez a y ¬a."""
    members = literals if isinstance(literals, (set, frozenset)) else set(literals)
    return not any(lit.negated and lit.negation() in members for lit in members)


def conflicting_atoms(literals: Iterable[Literal]) -> list[Atom]:
    members = set(literals)
    return sorted(lit.atom for lit in members if lit.negated and lit.negation() in members)


def is_consistent(base: RuleBase) -> bool:
    """Una base es consistente si su modelo mínimo lo es."""
    return literal_set_consistent(_closure(base.elements))


def elements_consistent(elements: Sequence[Rule]) -> bool:
    """Variante sin construir RuleBase (la usan los bucles sobre subconjuntos)."""
    return literal_set_consistent(_closure(elements))


# ──────────────────────────────────────────────────────────────────────────────
# Modelo con seguimiento de soportes
# ──────────────────────────────────────────────────────────────────────────────

def _add_support(label: list[int], support: int) -> bool:
    """Inserta un soporte en una antichain de máscaras; False si ya estaba subsumido."""
    for existing in label:
        if existing & support == existing:
            return False
    label[:] = [existing for existing in label if existing & support != support]
    label.append(support)
    return True


def _combine(labels: Sequence[list[int]], seed: int) -> list[int]:
    combos = [seed]
    for label in labels:
        combos = [combo | support for combo in combos for support in label]
    return combos


def supported_model(base: RuleBase, max_supports: int) -> dict[Literal, list[int]]:
    """
    Modelo mínimo con, para cada literal derivado, sus soportes mínimos.

    Un soporte es una máscara de bits sobre `base.elements` (bit i = elemento i)
    con los hechos y reglas usados en alguna derivación; la etiqueta de cada
    literal es la antichain de soportes ⊆-minimales. La propagación sigue
    hasta que ninguna etiqueta cambia.

    Raises:
        BudgetExhaustedError: si algún literal supera `max_supports` soportes.
    """
    elements = base.elements
    watchers: dict[Literal, list[int]] = {}
    labels: dict[Literal, list[int]] = {}
    agenda: deque[Literal] = deque()
    queued: set[Literal] = set()

    def push(lit: Literal) -> None:
        if lit not in queued:
            queued.add(lit)
            agenda.append(lit)

    for idx, element in enumerate(elements):
        if element.is_fact:
            if _add_support(labels.setdefault(element.head, []), 1 << idx):
                push(element.head)
        for lit in element.body:
            watchers.setdefault(lit, []).append(idx)

    while agenda:
        lit = agenda.popleft()
        queued.discard(lit)
        for idx in watchers.get(lit, ()):
            rule = elements[idx]
            body_labels = [labels.get(body_lit) for body_lit in rule.body]
            if any(not label for label in body_labels):
                continue
            head_label = labels.setdefault(rule.head, [])
            changed = False
            for support in _combine(body_labels, 1 << idx):
                if _add_support(head_label, support):
                    changed = True
            if len(head_label) > max_supports:
                raise BudgetExhaustedError(f"soportes mínimos por literal ({rule.head})", max_supports)
            if changed:
                push(rule.head)

    logger.debug("[ENGINE] modelo con soportes: %d literales derivados", len(labels))
    return labels
