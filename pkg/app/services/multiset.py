"""
Medidas Σ-inducidas sobre multiconjuntos de bases de reglas.

  m^Σ_I(M)    = Σ_{B ∈ M} I(B)
  m^Σ_C(M, r) = Σ_{B ∈ M} C(B, r)

Cada clase de casos con el mismo conjunto de hechos se analiza una sola vez
y su resultado se pondera por la multiplicidad. El análisis por clase es
independiente y se reparte entre procesos cuando workers > 1; el resultado se
reensambla por índice de clase, así que no depende del reparto.
"""
import csv
import io
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from app.core.config import Limits, settings
from app.core.errors import UnknownElementError
from app.models.caseset import CaseSet
from app.models.rules import Literal, RuleBase, Rule
from app.schemas.report import (
    CaseEntry,
    CulpabilityReport,
    OverallValue,
    RuleEntry,
    fraction_str,
    rank_number,
)
from app.services.measures import ZERO, CulpabilityMeasure, InconsistencyMeasure, mis_for
from app.services.registry import (
    DERIVED,
    get_culpability,
    get_measure,
    is_inconsistency_measure,
    is_registered,
    validate_names,
)

logger = logging.getLogger(__name__)

BLAME_UNASSIGNED = "blame_unassigned"


@dataclass(frozen=True)
class CulpabilityVector:
    """V^{C^m}(M): valor Σ por regla de R(M), en orden de programa."""

    measure: str
    values: dict[str, Fraction]

    @property
    def max_value(self) -> Fraction:
        """V̂: el mayor valor del vector (0 si no hay reglas)."""
        return max(self.values.values(), default=ZERO)

    def __getitem__(self, rule_id: str) -> Fraction:
        try:
            return self.values[rule_id]
        except KeyError:
            raise UnknownElementError(rule_id) from None

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ClassAnalysis:
    """Resultado del análisis de una clase de hechos (sin ponderar)."""

    index: int
    i_mi: int
    values: dict[str, dict[str, Fraction]] = field(default_factory=dict)
    participants: frozenset[str] = frozenset()
    blame_unassigned: bool = False


# ──────────────────────────────────────────────────────────────────────────────
# Análisis por clase (ejecutable en un proceso worker)
# ──────────────────────────────────────────────────────────────────────────────

def _analyze_class(
    payload: tuple[int, frozenset[Literal], tuple[Rule, ...], tuple[str, ...], Limits],
) -> ClassAnalysis:
    index, facts, rules, names, limits = payload
    base = RuleBase.from_parts(facts, rules)
    mis = mis_for(base, limits)
    values: dict[str, dict[str, Fraction]] = {}
    flagged = False
    for name in names:
        vector = get_culpability(name).values(base, limits, mis)
        values[name] = dict(vector.values)
        flagged = flagged or vector.blame_unassigned
    return ClassAnalysis(
        index=index,
        i_mi=len(mis),
        values=values,
        participants=mis.participants,
        blame_unassigned=flagged,
    )


def evaluate_classes(
    caseset: CaseSet,
    culpability_names: Sequence[str] = (),
    *,
    limits: Optional[Limits] = None,
    workers: Optional[int] = None,
) -> list[ClassAnalysis]:
    """
    Analiza cada clase de hechos: I_MI, participantes y los vectores pedidos.

    Raises:
        BudgetExhaustedError: si alguna clase supera un presupuesto.
    """
    limits = limits or settings.limits
    workers = workers or settings.workers
    rules = caseset.shared_rules.rules
    names = tuple(culpability_names)
    payloads = [(index, fc.facts, rules, names, limits) for index, fc in enumerate(caseset.classes)]

    if workers > 1 and len(payloads) > 1:
        chunksize = max(1, len(payloads) // (workers * 4))
        logger.info("[MULTISET] analizando %d clases con %d workers", len(payloads), workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_analyze_class, payloads, chunksize=chunksize))
    else:
        results = [_analyze_class(payload) for payload in payloads]

    results.sort(key=lambda result: result.index)
    logger.debug("[MULTISET] %d casos, %d clases distintas", len(caseset), len(results))
    return results


# ──────────────────────────────────────────────────────────────────────────────
# Medidas Σ-inducidas
# ──────────────────────────────────────────────────────────────────────────────

def _as_measure(measure: InconsistencyMeasure | str) -> InconsistencyMeasure:
    return get_measure(measure) if isinstance(measure, str) else measure


def _as_culpability(cmeasure: CulpabilityMeasure | str) -> CulpabilityMeasure:
    return get_culpability(cmeasure) if isinstance(cmeasure, str) else cmeasure


def sigma_measure(
    caseset: CaseSet,
    measure: InconsistencyMeasure | str,
    limits: Optional[Limits] = None,
) -> Fraction:
    """m^Σ_I(M): suma de I sobre todos los casos (multiplicidad incluida)."""
    measure = _as_measure(measure)
    limits = limits or settings.limits
    total = ZERO
    for fact_class, base in caseset.class_bases():
        total += fact_class.multiplicity * measure.evaluate(base, mis_for(base, limits))
    return total


def sigma_culpability(
    caseset: CaseSet,
    cmeasure: CulpabilityMeasure | str,
    element_id: str,
    limits: Optional[Limits] = None,
) -> Fraction:
    """
    m^Σ_C(M, r). Además de las reglas de R(M) admite ids de hechos (f:<lit>)
    para poder sondear FM; un hecho ausente de un caso aporta 0 en ese caso.

    Raises:
        UnknownElementError: id que no es regla de R(M) ni hecho de ningún caso.
    """
    cmeasure = _as_culpability(cmeasure)
    if element_id not in caseset.rule_ids and element_id not in caseset.fact_ids:
        raise UnknownElementError(element_id)
    limits = limits or settings.limits
    total = ZERO
    for fact_class, base in caseset.class_bases():
        if element_id in base:
            total += fact_class.multiplicity * cmeasure.values(base, limits)[element_id]
    return total


def culpability_vector(
    caseset: CaseSet,
    cmeasure: CulpabilityMeasure | str,
    limits: Optional[Limits] = None,
    workers: Optional[int] = None,
) -> CulpabilityVector:
    """Aplica sigma_culpability a cada regla de R(M)."""
    cmeasure = _as_culpability(cmeasure)
    limits = limits or settings.limits
    rule_ids = caseset.rule_ids
    totals = dict.fromkeys(rule_ids, ZERO)

    if is_registered(cmeasure):
        analyses = evaluate_classes(caseset, (cmeasure.name,), limits=limits, workers=workers)
        for analysis in analyses:
            weight = caseset.classes[analysis.index].multiplicity
            row = analysis.values[cmeasure.name]
            for rule_id in rule_ids:
                totals[rule_id] += weight * row.get(rule_id, ZERO)
    else:
        # Medidas no registradas (p. ej. en pruebas) no viajan a otros procesos.
        for fact_class, base in caseset.class_bases():
            row = cmeasure.values(base, limits)
            for rule_id in rule_ids:
                totals[rule_id] += fact_class.multiplicity * row[rule_id]

    return CulpabilityVector(measure=cmeasure.name, values=totals)


def multiset_free_formulas(caseset: CaseSet, limits: Optional[Limits] = None) -> frozenset[str]:
    """Reglas de R(M) que no aparecen en ningún MI de ningún caso."""
    limits = limits or settings.limits
    involved: set[str] = set()
    for _, base in caseset.class_bases():
        involved |= mis_for(base, limits).participants
    return frozenset(rule_id for rule_id in caseset.rule_ids if rule_id not in involved)


# ──────────────────────────────────────────────────────────────────────────────
# Ranking
# ──────────────────────────────────────────────────────────────────────────────

def rank_rules(values: Mapping[str, Fraction]) -> dict[str, Fraction]:
    """
    Rango descendente por valor; k reglas empatadas reciben la media de las
    posiciones que ocupan. (5, 3, 2, 2, 2) → (1, 2, 4, 4, 4).

    El orden de iteración de `values` desempata la salida, no el rango.
    """
    items = list(values.items())
    order = sorted(range(len(items)), key=lambda i: (-items[i][1], i))
    ranks: dict[str, Fraction] = {}
    position = 0
    while position < len(order):
        end = position
        value = items[order[position]][1]
        while end + 1 < len(order) and items[order[end + 1]][1] == value:
            end += 1
        # Posiciones 1-based position+1 .. end+1.
        shared = Fraction(position + 1 + end + 1, 2)
        for i in order[position:end + 1]:
            ranks[items[i][0]] = shared
        position = end + 1
    return ranks


def per_case_rank_distribution(
    caseset: CaseSet,
    cmeasure: CulpabilityMeasure | str = "chash",
    limits: Optional[Limits] = None,
) -> dict[str, list[Fraction]]:
    """
    Rangos locales (un caso cada vez) de cada regla según `cmeasure`.

    Solo cuentan los casos inconsistentes y se omiten las reglas que no
    participan en ninguna inconsistencia. Las muestras de cada regla siguen
    el orden de case_id.
    """
    cmeasure = _as_culpability(cmeasure)
    limits = limits or settings.limits
    local: dict[frozenset[Literal], Optional[dict[str, Fraction]]] = {}
    involved: set[str] = set()
    for fact_class, base in caseset.class_bases():
        mis = mis_for(base, limits)
        if not len(mis):
            local[fact_class.facts] = None
            continue
        involved |= mis.participants
        row = cmeasure.values(base, limits, mis)
        local[fact_class.facts] = rank_rules({rule_id: row[rule_id] for rule_id in caseset.rule_ids})

    distribution: dict[str, list[Fraction]] = {
        rule_id: [] for rule_id in caseset.rule_ids if rule_id in involved
    }
    for _, facts in sorted(caseset.cases, key=lambda case: case[0]):
        ranks = local[facts]
        if ranks is None:
            continue
        for rule_id, samples in distribution.items():
            samples.append(ranks[rule_id])
    return distribution


# ──────────────────────────────────────────────────────────────────────────────
# Informe
# ──────────────────────────────────────────────────────────────────────────────

def _columns(measures: Iterable[str]) -> tuple[list[str], list[str]]:
    """(columnas del informe, medidas de culpabilidad que hay que calcular)."""
    columns = [name for name in measures if not is_inconsistency_measure(name)]
    needed: list[str] = []
    for name in columns:
        for component in DERIVED.get(name, (name,)):
            if component not in needed:
                needed.append(component)
    return columns, needed


def build_report(
    caseset: CaseSet,
    measures: Sequence[str],
    *,
    rank_by: Optional[str] = None,
    top: Optional[int] = None,
    limits: Optional[Limits] = None,
    workers: Optional[int] = None,
) -> CulpabilityReport:
    """
    Informe de culpabilidad: valor global m^Σ_{I_MI}, vector Σ por medida y
    regla, ranking con rangos fraccionarios y desglose I_MI por caso.

    El ranking usa `rank_by` o, en su defecto, la primera columna pedida; sin
    columnas de culpabilidad todas las reglas empatan. `top` solo recorta las
    filas mostradas.
    """
    measures = validate_names(measures)
    columns, needed = _columns(measures)
    analyses = evaluate_classes(caseset, needed, limits=limits, workers=workers)

    rule_ids = caseset.rule_ids
    sums = {name: dict.fromkeys(rule_ids, ZERO) for name in needed}
    overall = 0
    flagged = False
    class_i_mi: dict[frozenset[Literal], int] = {}
    for analysis in analyses:
        fact_class = caseset.classes[analysis.index]
        class_i_mi[fact_class.facts] = analysis.i_mi
        overall += fact_class.multiplicity * analysis.i_mi
        flagged = flagged or analysis.blame_unassigned
        for name in needed:
            row = analysis.values[name]
            for rule_id in rule_ids:
                sums[name][rule_id] += fact_class.multiplicity * row.get(rule_id, ZERO)

    table: dict[str, dict[str, Fraction]] = {}
    for name in columns:
        if name in DERIVED:
            numerator, denominator = DERIVED[name]
            table[name] = {
                rule_id: (sums[numerator][rule_id] / sums[denominator][rule_id]
                          if sums[denominator][rule_id] else ZERO)
                for rule_id in rule_ids
            }
        else:
            table[name] = sums[name]

    key = rank_by or (columns[0] if columns else None)
    ranks = rank_rules(table[key]) if key is not None else rank_rules(dict.fromkeys(rule_ids, ZERO))
    position = {rule_id: i for i, rule_id in enumerate(rule_ids)}
    ordered = sorted(rule_ids, key=lambda rule_id: (ranks[rule_id], position[rule_id]))
    if top is not None:
        ordered = ordered[:top]

    if flagged:
        logger.warning("[MULTISET] parte de la culpa de hechos contradictorios quedó sin asignar")

    report = CulpabilityReport(
        overall=OverallValue(measure="mi", value=fraction_str(Fraction(overall))),
        rules=[
            RuleEntry(
                rule=rule_id,
                values={name: fraction_str(table[name][rule_id]) for name in columns},
                rank=rank_number(ranks[rule_id]),
            )
            for rule_id in ordered
        ],
        cases=[
            CaseEntry(case_id=case_id, i_mi=class_i_mi[facts])
            for case_id, facts in sorted(caseset.cases, key=lambda case: case[0])
        ],
        flags=[BLAME_UNASSIGNED] if flagged else [],
    )
    logger.info("[MULTISET] informe: %d casos, m^Σ_mi = %s", len(caseset), report.overall.value)
    return report


def dump_report(report: CulpabilityReport, fmt: str = "json") -> str:
    """JSON con claves estables, o CSV de `rules` con una columna decimal por medida."""
    if fmt == "json":
        return json.dumps(report.model_dump(mode="json"), indent=2, ensure_ascii=False) + "\n"

    columns = report.measures()
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["rule", "rank", *[c for name in columns for c in (name, f"{name}_decimal")]])
    for entry in report.rules:
        row: list[object] = [entry.rule, entry.rank]
        for name in columns:
            value = Fraction(entry.values[name])
            row.extend([entry.values[name], f"{float(value):.6f}"])
        writer.writerow(row)
    return buffer.getvalue()


def dump_rank_distribution(distribution: Mapping[str, Sequence[Fraction]]) -> str:
    """CSV `rule,rank`, una fila por muestra."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["rule", "rank"])
    for rule_id, samples in distribution.items():
        for rank in samples:
            writer.writerow([rule_id, rank_number(rank)])
    return buffer.getvalue()
