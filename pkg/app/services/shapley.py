"""
Valores de inconsistencia de Shapley y valores de Shapley ajustados.

La masa de culpa I(B) se reparte entre los elementos con la forma estándar
de coalición: para cada α, Σ sobre subconjuntos B que contienen a α de
peso(|B|, n) · (I(B) − I(B∖{α})), con peso(b, n) = (b−1)!(n−b)!/n!.

El valor ajustado asigna 0 a los hechos y desplaza, coalición a coalición,
el pago que habrían recibido los hechos hacia las reglas no libres de esa
coalición. Toda la aritmética es racional exacta.

Los elementos libres son jugadores nulos (dummies) para medidas que cumplen
free-formula-independence', así que la enumeración se restringe a la unión
de los MIs con los pesos recalculados para el n reducido.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Optional

from app.core.config import Limits, settings
from app.core.errors import BudgetExhaustedError, MeasurePropertyError
from app.models.rules import RuleBase
from app.services.measures import (
    ALL_PROPERTIES,
    I_MI,
    ZERO,
    InconsistencyMeasure,
    PayoffVector,
    Property,
    mis_for,
)
from app.services.mi import MICollection

logger = logging.getLogger(__name__)


def coalition_weights(n: int) -> list[Fraction]:
    """weights[b] = (b−1)!(n−b)!/n! para b = 1..n (weights[0] no se usa)."""
    total = factorial(n)
    return [ZERO] + [Fraction(factorial(b - 1) * factorial(n - b), total) for b in range(1, n + 1)]


@dataclass(frozen=True)
class ActiveReduction:
    """Restricción de una base a la unión de sus MIs (reducción de dummies)."""

    base: RuleBase
    kept: tuple[str, ...]
    dropped: frozenset[str]
    original: RuleBase = field(compare=False, repr=False)

    def expand(self, values: dict[str, Fraction]) -> dict[str, Fraction]:
        """Re-expande a los ids de la base original; los descartados valen 0."""
        return {element_id: values.get(element_id, ZERO) for element_id in self.original.ids}


def reduce_to_active(
    base: RuleBase,
    mis: Optional[MICollection] = None,
    limits: Optional[Limits] = None,
) -> ActiveReduction:
    mis = mis if mis is not None else mis_for(base, limits)
    participants = mis.participants
    kept = tuple(element_id for element_id in base.ids if element_id in participants)
    return ActiveReduction(
        base=base.restrict(kept),
        kept=kept,
        dropped=frozenset(base.ids) - participants,
        original=base,
    )


def _coalition_values(
    base: RuleBase,
    order: tuple[str, ...],
    measure: InconsistencyMeasure,
    mis: MICollection,
    mi_masks: list[int],
) -> list:
    size = 1 << len(order)
    if measure.evaluate_family is not None:
        return [measure.evaluate_family([m for m in mi_masks if m & mask == m]) for mask in range(size)]

    values = []
    for mask in range(size):
        ids = [element_id for i, element_id in enumerate(order) if mask >> i & 1]
        values.append(measure.evaluate(base.restrict(ids), mis.restrict(ids)))
    return values


def _payoffs(
    base: RuleBase,
    measure: InconsistencyMeasure,
    mis: MICollection,
    limits: Limits,
    reduce: bool,
    adjusted: bool,
) -> PayoffVector:
    if reduce:
        reduction = reduce_to_active(base, mis)
        order = reduction.kept
    else:
        order = base.ids

    k = len(order)
    if k > limits.max_active:
        raise BudgetExhaustedError("elementos activos para Shapley exacto", limits.max_active)

    mi_masks = mis.masks(order)
    values = _coalition_values(base, order, measure, mis, mi_masks)
    weights = coalition_weights(k)

    fact_mask = 0
    for i, element_id in enumerate(order):
        if base[element_id].is_fact:
            fact_mask |= 1 << i
    rule_mask = ((1 << k) - 1) ^ fact_mask

    # Sumas de contribuciones marginales por elemento y tamaño de coalición.
    marginal = [[0] * (k + 1) for _ in range(k)]
    # Pago adicional por regla: (tamaño, reglas no libres) → Σ contribuciones de hechos.
    additional: list[dict[tuple[int, int], int | Fraction]] = [{} for _ in range(k)]
    blame_unassigned = False

    for mask in range(1, 1 << k):
        size = mask.bit_count()
        value = values[mask]
        fact_sum = 0
        rest = mask
        while rest:
            low = rest & -rest
            rest ^= low
            delta = value - values[mask ^ low]
            if delta:
                i = low.bit_length() - 1
                marginal[i][size] += delta
                if low & fact_mask:
                    fact_sum += delta

        if not adjusted or not fact_sum:
            continue

        nonfree = 0
        for m in mi_masks:
            if m & mask == m:
                nonfree |= m
        blamable = nonfree & rule_mask
        count = blamable.bit_count()
        if count == 0:
            blame_unassigned = True
            continue
        key = (size, count)
        while blamable:
            low = blamable & -blamable
            blamable ^= low
            bucket = additional[low.bit_length() - 1]
            bucket[key] = bucket.get(key, 0) + fact_sum

    result: dict[str, Fraction] = {}
    for i, element_id in enumerate(order):
        if adjusted and fact_mask >> i & 1:
            result[element_id] = ZERO
            continue
        payoff = sum((weights[b] * marginal[i][b] for b in range(1, k + 1) if marginal[i][b]), ZERO)
        for (size, count), total in additional[i].items():
            payoff += weights[size] * Fraction(total) / count
        result[element_id] = Fraction(payoff)

    if blame_unassigned:
        logger.warning(
            "[SHAPLEY] coalición con hechos contradictorios y sin reglas culpables: "
            "su masa de culpa queda sin asignar (blame_unassigned)"
        )

    return PayoffVector(
        values={element_id: result.get(element_id, ZERO) for element_id in base.ids},
        base=base,
        blame_unassigned=blame_unassigned,
    )


def shapley(
    base: RuleBase,
    measure: InconsistencyMeasure,
    *,
    limits: Optional[Limits] = None,
    mis: Optional[MICollection] = None,
    reduce: Optional[bool] = None,
) -> PayoffVector:
    """
    Valor de inconsistencia de Shapley de cada elemento respecto a `measure`.

    Si la medida declara free-formula-independence' se enumera solo la parte
    activa; con reduce=False se recorren los 2^|B| subconjuntos.

    Raises:
        BudgetExhaustedError: parte enumerada mayor que limits.max_active.
    """
    limits = limits or settings.limits
    mis = mis if mis is not None else mis_for(base, limits)
    if reduce is None:
        reduce = Property.FREE_FORMULA_INDEPENDENCE in measure.declared_properties
    return _payoffs(base, measure, mis, limits, reduce=reduce, adjusted=False)


def adjusted_shapley(
    base: RuleBase,
    measure: InconsistencyMeasure,
    *,
    limits: Optional[Limits] = None,
    mis: Optional[MICollection] = None,
    reduce: bool = True,
) -> PayoffVector:
    """
    Valor de Shapley ajustado: hechos a 0, reglas con su pago de coalición más
    la parte proporcional del pago de los hechos en cada coalición donde la
    regla no es libre.

    Con I_MI se publica como `adj-shapley-mi-coalition`. Añadir una regla puede
    bajar el valor de otra (no cumple MO); `adj-shapley-mi` usa el reparto por MI.

    Si en una coalición los hechos reciben pago pero no hay reglas no libres
    (solo posible con hechos contradictorios entre sí), ese pago no se asigna
    y el resultado lleva blame_unassigned=True.

    Raises:
        MeasurePropertyError: la medida no declara consistency', monotony' y
            free-formula-independence'.
        BudgetExhaustedError: parte enumerada mayor que limits.max_active.
    """
    missing = ALL_PROPERTIES - measure.declared_properties
    if missing:
        raise MeasurePropertyError(
            f"la medida '{measure.name}' no declara: {', '.join(sorted(p.value for p in missing))}"
        )
    limits = limits or settings.limits
    mis = mis if mis is not None else mis_for(base, limits)
    return _payoffs(base, measure, mis, limits, reduce=reduce, adjusted=True)


def shapley_mi_closedform(
    base: RuleBase,
    mis: Optional[MICollection] = None,
    limits: Optional[Limits] = None,
) -> PayoffVector:
    """Camino rápido para I_MI: S_α = Σ_{M ∈ MI(B), α ∈ M} 1/|M|."""
    mis = mis if mis is not None else mis_for(base, limits)
    values = dict.fromkeys(base.ids, ZERO)
    for m in mis.subsets:
        share = Fraction(1, len(m))
        for element_id in m.element_ids:
            values[element_id] += share
    return PayoffVector(values=values, base=base)


def adjusted_shapley_mi_local(
    base: RuleBase,
    mis: Optional[MICollection] = None,
    limits: Optional[Limits] = None,
) -> PayoffVector:
    """
    Reparto por MI: cada MI entrega su unidad de culpa a partes iguales entre
    sus reglas, S_r = Σ_{M ∈ MI(B), r ∈ M} 1/|R(M)|; hechos a 0.

    Es el valor que publica el registro como `adj-shapley-mi`. Añadir una regla
    no destruye ningún MI existente, así que ninguna regla pierde culpa (MO).

    Coincide con adjusted_shapley(B, I_MI) en toda base con a lo sumo un MI;
    con MIs solapados difiere porque el valor ajustado reparte la masa de los
    hechos de cada coalición entre todas sus reglas no libres.
    """
    mis = mis if mis is not None else mis_for(base, limits)
    values = dict.fromkeys(base.ids, ZERO)
    blame_unassigned = False
    for m in mis.subsets:
        rules = [element_id for element_id in m.element_ids if not base[element_id].is_fact]
        if not rules:
            blame_unassigned = True
            continue
        share = Fraction(1, len(rules))
        for element_id in rules:
            values[element_id] += share
    if blame_unassigned:
        logger.warning("[SHAPLEY] MI formado solo por hechos: su culpa queda sin asignar")
    return PayoffVector(values=values, base=base, blame_unassigned=blame_unassigned)


# Adaptadores con la firma (base, mis, limits) que usa el registro de medidas.

def shapley_mi_vector(base: RuleBase, mis: MICollection, limits: Limits) -> PayoffVector:
    return shapley_mi_closedform(base, mis)


def adjusted_shapley_mi_vector(base: RuleBase, mis: MICollection, limits: Limits) -> PayoffVector:
    return adjusted_shapley_mi_local(base, mis)


def adjusted_shapley_mi_coalition_vector(base: RuleBase, mis: MICollection, limits: Limits) -> PayoffVector:
    return adjusted_shapley(base, I_MI, limits=limits, mis=mis)
