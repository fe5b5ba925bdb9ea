"""
Medidas de inconsistencia y de culpabilidad sobre una sola base.

  - I_MI(B)    = |MI(B)|
  - C_D(B, r)  = 1 si r pertenece a algún MI, 0 en otro caso
  - C_#(B, r)  = número de MIs que contienen a r

Todos los valores son racionales exactos (Fraction), incluso los enteros,
para que shapley y multiset trabajen con un único tipo numérico.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional, Sequence

from app.core.config import Limits, settings
from app.core.errors import UnknownElementError
from app.models.rules import RuleBase
from app.services.mi import MICollection, enumerate_mi

ZERO = Fraction(0)


class Property(str, Enum):
    """Propiedades primadas que una medida de inconsistencia declara cumplir."""
    CONSISTENCY               = "consistency'"
    MONOTONY                  = "monotony'"
    FREE_FORMULA_INDEPENDENCE = "free-formula-independence'"


ALL_PROPERTIES = frozenset(Property)


@dataclass(frozen=True)
class PayoffVector:
    """Valor racional por id de elemento de una base."""

    values: dict[str, Fraction]
    base: RuleBase = field(compare=False, repr=False)
    blame_unassigned: bool = False

    def __getitem__(self, element_id: str) -> Fraction:
        if element_id not in self.base:
            raise UnknownElementError(element_id)
        return self.values.get(element_id, ZERO)

    def total(self) -> Fraction:
        return sum(self.values.values(), ZERO)


def mis_for(base: RuleBase, limits: Optional[Limits] = None) -> MICollection:
    limits = limits or settings.limits
    return enumerate_mi(base, max_mis=limits.max_mis, max_supports=limits.max_supports)


@dataclass(frozen=True)
class InconsistencyMeasure:
    """
    Medida de inconsistencia registrada.

    `evaluate` recibe la base y su MI(B) ya calculado (las medidas que no lo
    necesiten lo ignoran). `evaluate_family`, si existe, calcula el valor solo
    a partir de las máscaras de los MIs contenidos en un subconjunto, lo que
    permite a shapley evaluar 2^n coaliciones sin reconstruir bases.
    """

    name: str
    evaluate: Callable[[RuleBase, MICollection], Fraction]
    declared_properties: frozenset[Property] = frozenset()
    evaluate_family: Optional[Callable[[Sequence[int]], int | Fraction]] = None

    def __call__(self, base: RuleBase, limits: Optional[Limits] = None) -> Fraction:
        return self.evaluate(base, mis_for(base, limits))


@dataclass(frozen=True)
class CulpabilityMeasure:
    """
    Medida de culpabilidad registrada.

    `base_measure` nombra la medida de inconsistencia cuya masa de culpa se
    reparte (familia Shapley); None para las medidas de referencia C_D y C_#,
    para las que DIS y UB no aplican.
    """

    name: str
    vector: Callable[[RuleBase, MICollection, Limits], PayoffVector]
    base_measure: Optional[str] = None

    def values(
        self,
        base: RuleBase,
        limits: Optional[Limits] = None,
        mis: Optional[MICollection] = None,
    ) -> PayoffVector:
        limits = limits or settings.limits
        return self.vector(base, mis if mis is not None else mis_for(base, limits), limits)

    def evaluate(self, base: RuleBase, element_id: str, limits: Optional[Limits] = None) -> Fraction:
        if element_id not in base:
            raise UnknownElementError(element_id)
        return self.values(base, limits)[element_id]


# ──────────────────────────────────────────────────────────────────────────────
# I_MI
# ──────────────────────────────────────────────────────────────────────────────

def i_mi_from(base: RuleBase, mis: MICollection) -> Fraction:
    return Fraction(len(mis))


def count_family(masks: Sequence[int]) -> int:
    return len(masks)


def i_mi(base: RuleBase, limits: Optional[Limits] = None) -> Fraction:
    """Número de subconjuntos mínimos inconsistentes."""
    return i_mi_from(base, mis_for(base, limits))


# ──────────────────────────────────────────────────────────────────────────────
# C_D y C_#
# ──────────────────────────────────────────────────────────────────────────────

def c_d_vector(base: RuleBase, mis: MICollection, limits: Optional[Limits] = None) -> PayoffVector:
    participants = mis.participants
    return PayoffVector(
        values={el.id: Fraction(1) if el.id in participants else ZERO for el in base},
        base=base,
    )


def c_hash_vector(base: RuleBase, mis: MICollection, limits: Optional[Limits] = None) -> PayoffVector:
    counts = dict.fromkeys(base.ids, 0)
    for m in mis.subsets:
        for element_id in m.element_ids:
            counts[element_id] += 1
    return PayoffVector(values={k: Fraction(v) for k, v in counts.items()}, base=base)


def c_d(base: RuleBase, element_id: str, limits: Optional[Limits] = None) -> Fraction:
    if element_id not in base:
        raise UnknownElementError(element_id)
    return c_d_vector(base, mis_for(base, limits))[element_id]


def c_hash(base: RuleBase, element_id: str, limits: Optional[Limits] = None) -> Fraction:
    if element_id not in base:
        raise UnknownElementError(element_id)
    return c_hash_vector(base, mis_for(base, limits))[element_id]


def free_formulas(base: RuleBase, limits: Optional[Limits] = None) -> frozenset[str]:
    """Elementos que no aparecen en ningún MI."""
    participants = mis_for(base, limits).participants
    return frozenset(element_id for element_id in base.ids if element_id not in participants)


I_MI = InconsistencyMeasure(
    name="mi",
    evaluate=i_mi_from,
    declared_properties=ALL_PROPERTIES,
    evaluate_family=count_family,
)
