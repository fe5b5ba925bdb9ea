"""
Motor de subconjuntos mínimos inconsistentes MI(B).

Enumeración por seguimiento de soportes: un MI es siempre la unión de un
soporte mínimo de a y uno de ¬a para algún átomo a. Se forman todas esas
uniones, se minimizan bajo ⊆ y cada superviviente se verifica con is_mi.
El oráculo de fuerza bruta recorre los 2^|B| subconjuntos y sirve de verdad
de referencia en las pruebas.
"""
import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from app.core.config import settings
from app.core.errors import BudgetExhaustedError, UnknownElementError
from app.models.rules import RuleBase
from app.services.reasoning.engine import elements_consistent, is_consistent, supported_model

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MISubset:
    element_ids: frozenset[str]

    def __contains__(self, element_id: object) -> bool:
        return element_id in self.element_ids

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self.element_ids))

    def __len__(self) -> int:
        return len(self.element_ids)


@dataclass(frozen=True)
class MICollection:
    """Antichain MI(B) de una base concreta."""

    subsets: frozenset[MISubset]
    base: RuleBase = field(compare=False, repr=False)

    def __iter__(self) -> Iterator[MISubset]:
        return iter(sorted(self.subsets, key=lambda m: (len(m), sorted(m.element_ids))))

    def __len__(self) -> int:
        return len(self.subsets)

    def containing(self, element_id: str) -> list[MISubset]:
        return [m for m in self if element_id in m]

    @property
    def participants(self) -> frozenset[str]:
        return frozenset(element_id for m in self.subsets for element_id in m.element_ids)

    def restrict(self, element_ids: Iterable[str]) -> "MICollection":
        """MI(B') para B' ⊆ B: los MI de B contenidos en B' (lógica monótona)."""
        kept = frozenset(element_ids)
        return MICollection(
            subsets=frozenset(m for m in self.subsets if m.element_ids <= kept),
            base=self.base.restrict(kept),
        )

    def masks(self, order: Sequence[str]) -> list[int]:
        """Cada MI como máscara de bits sobre `order` (ids fuera de `order` se ignoran)."""
        position = {element_id: i for i, element_id in enumerate(order)}
        result = []
        for m in self:
            mask = 0
            for element_id in m.element_ids:
                mask |= 1 << position[element_id]
            result.append(mask)
        return result


def _ids_of(base: RuleBase, mask: int) -> frozenset[str]:
    return frozenset(el.id for i, el in enumerate(base.elements) if mask >> i & 1)


def _minimize(masks: Iterable[int]) -> list[int]:
    kept: list[int] = []
    for mask in sorted(set(masks), key=lambda m: (m.bit_count(), m)):
        if not any(k & mask == k for k in kept):
            kept.append(mask)
    return kept


def is_mi(base: RuleBase, candidate: Iterable[str]) -> bool:
    """
    Decide M ∈ MI(B) en tiempo polinómico: M inconsistente y toda
    eliminación de un solo elemento consistente.

    Raises:
        UnknownElementError: si el candidato referencia ids fuera de la base.
    """
    ids = frozenset(candidate)
    sub = base.restrict(ids)
    if is_consistent(sub):
        return False
    return all(is_consistent(sub.without(element_id)) for element_id in ids)


def enumerate_mi(
    base: RuleBase,
    *,
    max_mis: Optional[int] = None,
    max_supports: Optional[int] = None,
) -> MICollection:
    """
    Devuelve exactamente MI(B).

    Raises:
        BudgetExhaustedError: si se supera el tope de MIs o de soportes por literal.
    """
    max_mis = max_mis or settings.budget_mis
    max_supports = max_supports or settings.budget_supports

    labels = supported_model(base, max_supports)
    candidates: set[int] = set()
    for lit, positive in labels.items():
        if lit.negated:
            continue
        negative = labels.get(lit.negation())
        if not negative:
            continue
        for s in positive:
            for t in negative:
                candidates.add(s | t)

    minimal = _minimize(candidates)
    if len(minimal) > max_mis:
        raise BudgetExhaustedError("MIs por base", max_mis)

    subsets = []
    for mask in minimal:
        ids = _ids_of(base, mask)
        if not is_mi(base, ids):
            # No debería ocurrir: la minimización ya descarta superconjuntos.
            logger.error("[MI] candidato descartado en la verificación: %s", sorted(ids))
            continue
        subsets.append(MISubset(ids))

    logger.debug("[MI] %d MIs en una base de %d elementos", len(subsets), len(base))
    return MICollection(subsets=frozenset(subsets), base=base)


def enumerate_mi_bruteforce(base: RuleBase, *, max_size: Optional[int] = None) -> MICollection:
    """
    Oráculo: recorre los 2^|B| subconjuntos en orden creciente de máscara.

    Un subconjunto es MI si es inconsistente y todas sus eliminaciones de un
    elemento son consistentes (la misma comprobación que is_mi, apoyada en la
    tabla de subconjuntos ya evaluados).

    Raises:
        BudgetExhaustedError: si |B| supera el tope del oráculo.
    """
    max_size = max_size or settings.bruteforce_max
    n = len(base)
    if n > max_size:
        raise BudgetExhaustedError("tamaño de base para fuerza bruta", max_size)

    elements = base.elements
    inconsistent = bytearray(1 << n)
    found: list[int] = []
    for mask in range(1, 1 << n):
        members = [i for i in range(n) if mask >> i & 1]
        if any(inconsistent[mask ^ (1 << i)] for i in members):
            inconsistent[mask] = 1
            continue
        if not elements_consistent([elements[i] for i in members]):
            inconsistent[mask] = 1
            found.append(mask)

    return MICollection(
        subsets=frozenset(MISubset(_ids_of(base, mask)) for mask in found),
        base=base,
    )


def participates(base: RuleBase, element_id: str, mis: Optional[MICollection] = None) -> bool:
    """True si el elemento aparece en al menos un MI de la base."""
    if element_id not in base:
        raise UnknownElementError(element_id)
    mis = mis if mis is not None else enumerate_mi(base)
    return element_id in mis.participants
