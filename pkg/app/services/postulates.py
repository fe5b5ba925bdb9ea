"""
Comprobador de postulados de racionalidad por pruebas aleatorias.

Para cada (medida, postulado) se generan multiconjuntos pequeños (≤ 8 reglas,
≤ 6 casos, hechos internamente consistentes) y se evalúa el predicado del
postulado. Un ✓ significa "sin contraejemplo en N intentos"; un ✗ lleva
siempre un testigo serializado que replay_witness vuelve a evaluar.

DIS y UB solo tienen sentido para medidas que reparten la masa de culpa de
una medida de inconsistencia (familia Shapley); para C_D y C_# son n/a.
"""
import json
import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from app.core.config import Limits, settings
from app.core.errors import UnknownPostulateError
from app.models.caseset import CaseSet
from app.models.rules import Literal, Rule
from app.schemas.report import (
    Postulate,
    PostulateResult,
    PostulateTable,
    PostulateWitness,
    Verdict,
    WitnessCase,
)
from app.services.measures import ZERO, CulpabilityMeasure, mis_for
from app.services.multiset import culpability_vector, multiset_free_formulas, sigma_measure
from app.services.parser import parse_rules, render_rules
from app.services.registry import get_culpability
from app.services.synth import make_rng, random_caseset, random_rule

logger = logging.getLogger(__name__)

DEFAULT_MEASURES = ("cd", "chash", "adj-shapley-mi")
NEEDS_BASE_MEASURE = frozenset({Postulate.DIS, Postulate.UB})


@dataclass(frozen=True)
class Probe:
    """Datos extra que necesita un predicado además del multiconjunto."""

    permutation: Optional[tuple[int, ...]] = None
    extra_rule: Optional[tuple[frozenset[Literal], Literal]] = None
    element: Optional[str] = None


def parse_postulate(name: str | Postulate) -> Postulate:
    if isinstance(name, Postulate):
        return name
    try:
        return Postulate(name.strip().upper())
    except ValueError:
        raise UnknownPostulateError(
            f"postulado desconocido: '{name}' (disponibles: {', '.join(p.value for p in Postulate)})"
        ) from None


def applicable(postulate: Postulate, measure: CulpabilityMeasure) -> bool:
    return postulate not in NEEDS_BASE_MEASURE or measure.base_measure is not None


# ──────────────────────────────────────────────────────────────────────────────
# Predicados: devuelven una descripción de la violación o None
# ──────────────────────────────────────────────────────────────────────────────

def _vector(caseset: CaseSet, measure: CulpabilityMeasure, limits: Limits):
    return culpability_vector(caseset, measure, limits=limits, workers=1)


def _all_consistent(caseset: CaseSet, limits: Limits) -> bool:
    return all(not len(mis_for(base, limits)) for _, base in caseset.class_bases())


def _violates_rs(caseset, measure, probe, limits):
    before = _vector(caseset, measure, limits).values
    after = _vector(caseset.permuted(probe.permutation), measure, limits).values
    if before != after:
        diff = [r for r in before if before[r] != after[r]]
        return f"el valor de {diff[0]} cambia al permutar los casos: {before[diff[0]]} → {after[diff[0]]}"
    return None


def _violates_rm(caseset, measure, probe, limits):
    if probe.element not in multiset_free_formulas(caseset, limits):
        return None
    value = _vector(caseset, measure, limits)[probe.element]
    return f"la regla libre {probe.element} vale {value}" if value != ZERO else None


def _violates_co(caseset, measure, probe, limits):
    top = _vector(caseset, measure, limits).max_value
    consistent = _all_consistent(caseset, limits)
    if (top == ZERO) != consistent:
        return f"V̂ = {top} con todos los casos {'consistentes' if consistent else 'no consistentes'}"
    return None


def _extended(caseset: CaseSet, probe: Probe) -> tuple[CaseSet, str]:
    body, head = probe.extra_rule
    return caseset.with_rule(body, head)


def _violates_mo(caseset, measure, probe, limits):
    extended, rule_id = _extended(caseset, probe)
    before = _vector(caseset, measure, limits).max_value
    after = _vector(extended, measure, limits).max_value
    return f"V̂ baja de {before} a {after} al añadir {rule_id}" if after < before else None


def _violates_in(caseset, measure, probe, limits):
    extended, rule_id = _extended(caseset, probe)
    if rule_id in caseset.rule_ids or rule_id not in multiset_free_formulas(extended, limits):
        return None
    before = _vector(caseset, measure, limits).max_value
    after = _vector(extended, measure, limits).max_value
    return f"V̂ pasa de {before} a {after} al añadir la regla libre {rule_id}" if after != before else None


def _violates_dis(caseset, measure, probe, limits):
    total = sum(_vector(caseset, measure, limits).values.values(), ZERO)
    expected = sigma_measure(caseset, measure.base_measure, limits)
    return f"Σ reglas = {total} ≠ m^Σ_{measure.base_measure} = {expected}" if total != expected else None


def _violates_ub(caseset, measure, probe, limits):
    top = _vector(caseset, measure, limits).max_value
    bound = sigma_measure(caseset, measure.base_measure, limits)
    return f"V̂ = {top} > m^Σ_{measure.base_measure} = {bound}" if top > bound else None


def _violates_fm(caseset, measure, probe, limits):
    total = ZERO
    for fact_class, base in caseset.class_bases():
        if probe.element in base:
            total += fact_class.multiplicity * measure.values(base, limits)[probe.element]
    return f"el hecho {probe.element} vale {total}" if total != ZERO else None


PREDICATES: dict[Postulate, Callable[[CaseSet, CulpabilityMeasure, Probe, Limits], Optional[str]]] = {
    Postulate.RS: _violates_rs,
    Postulate.RM: _violates_rm,
    Postulate.CO: _violates_co,
    Postulate.MO: _violates_mo,
    Postulate.IN: _violates_in,
    Postulate.DIS: _violates_dis,
    Postulate.UB: _violates_ub,
    Postulate.FM: _violates_fm,
}


# ──────────────────────────────────────────────────────────────────────────────
# Sondas por intento
# ──────────────────────────────────────────────────────────────────────────────

def _probes(postulate: Postulate, caseset: CaseSet, rng: np.random.Generator, limits: Limits) -> Iterable[Probe]:
    if postulate == Postulate.RS:
        yield Probe(permutation=tuple(int(i) for i in rng.permutation(len(caseset))))
    elif postulate == Postulate.RM:
        for rule_id in sorted(multiset_free_formulas(caseset, limits)):
            yield Probe(element=rule_id)
    elif postulate in (Postulate.MO, Postulate.IN):
        body, head = random_rule(rng, caseset)
        yield Probe(extra_rule=(frozenset(body), head))
    elif postulate == Postulate.FM:
        for fact_id in caseset.fact_ids:
            yield Probe(element=fact_id)
    else:
        yield Probe()


def _witness(caseset: CaseSet, probe: Probe, observed: str) -> PostulateWitness:
    extra = None
    if probe.extra_rule is not None:
        body, head = probe.extra_rule
        extra = str(Rule(id="extra", head=head, body=body))
    return PostulateWitness(
        rules=render_rules(caseset.shared_rules),
        cases=[
            WitnessCase(case_id=case_id, facts=[str(lit) for lit in sorted(facts, key=Literal.sort_key)])
            for case_id, facts in caseset.cases
        ],
        extra_rule=extra,
        element=probe.element,
        permutation=list(probe.permutation) if probe.permutation is not None else None,
        observed=observed,
    )


def check_postulate(
    postulate: str | Postulate,
    measure: str | CulpabilityMeasure,
    trials: int,
    seed: int,
    limits: Optional[Limits] = None,
) -> PostulateResult:
    """
    Evalúa el postulado sobre `trials` multiconjuntos aleatorios; se detiene
    en el primer contraejemplo. Determinista bajo la semilla.
    """
    postulate = parse_postulate(postulate)
    measure = get_culpability(measure) if isinstance(measure, str) else measure
    limits = limits or settings.limits

    if not applicable(postulate, measure):
        return PostulateResult(postulate=postulate, measure=measure.name, trials=0, verdict=Verdict.NOT_APPLICABLE)

    predicate = PREDICATES[postulate]
    rng = make_rng(seed)
    for trial in range(trials):
        caseset = random_caseset(rng)
        for probe in _probes(postulate, caseset, rng, limits):
            observed = predicate(caseset, measure, probe, limits)
            if observed is not None:
                logger.info("[POSTULADOS] %s viola %s en el intento %d: %s",
                            measure.name, postulate.value, trial + 1, observed)
                return PostulateResult(
                    postulate=postulate,
                    measure=measure.name,
                    trials=trial + 1,
                    verdict=Verdict.COUNTEREXAMPLE,
                    witness=_witness(caseset, probe, observed),
                )

    logger.debug("[POSTULADOS] %s / %s: sin contraejemplo en %d intentos", measure.name, postulate.value, trials)
    return PostulateResult(postulate=postulate, measure=measure.name, trials=trials, verdict=Verdict.NO_COUNTEREXAMPLE)


def replay_witness(result: PostulateResult, limits: Optional[Limits] = None) -> bool:
    """Reconstruye el contraejemplo guardado y devuelve True si sigue violando el postulado."""
    witness = result.witness
    if witness is None:
        return False
    program = parse_rules(witness.rules)
    caseset = CaseSet(
        shared_rules=program,
        cases=tuple(
            (case.case_id, frozenset(Literal.parse(item) for item in case.facts)) for case in witness.cases
        ),
    )
    extra = None
    if witness.extra_rule is not None:
        rule = parse_rules(witness.extra_rule).rules[0]
        extra = (rule.body, rule.head)
    probe = Probe(
        permutation=tuple(witness.permutation) if witness.permutation is not None else None,
        extra_rule=extra,
        element=witness.element,
    )
    measure = get_culpability(result.measure)
    return PREDICATES[result.postulate](caseset, measure, probe, limits or settings.limits) is not None


def table1(
    trials: int,
    seed: int,
    measures: Sequence[str] = DEFAULT_MEASURES,
    postulates: Sequence[str | Postulate] = tuple(Postulate),
    limits: Optional[Limits] = None,
) -> PostulateTable:
    """Matriz de cumplimiento medida × postulado."""
    chosen = [parse_postulate(p) for p in postulates]
    results = []
    for name in measures:
        for postulate in chosen:
            results.append(check_postulate(postulate, name, trials, seed, limits))
    logger.info("[POSTULADOS] matriz %d × %d con %d intentos (seed=%d)", len(measures), len(chosen), trials, seed)
    return PostulateTable(trials=trials, seed=seed, measures=list(measures), postulates=chosen, results=results)


def render_table(table: PostulateTable, fmt: str = "text") -> str:
    """Texto (✓ sin contraejemplo, ✗ contraejemplo, n/a) o JSON."""
    if fmt == "json":
        return json.dumps(table.model_dump(mode="json"), indent=2, ensure_ascii=False) + "\n"

    width = max([len("measure"), *(len(name) for name in table.measures)])
    header = "measure".ljust(width) + "".join(p.value.rjust(5) for p in table.postulates)
    lines = [header]
    for name in table.measures:
        cells = "".join(table.cell(name, p).verdict.symbol.rjust(5) for p in table.postulates)
        lines.append(name.ljust(width) + cells)
    lines.append(f"({table.trials} intentos por celda, seed={table.seed})")
    return "\n".join(lines) + "\n"
