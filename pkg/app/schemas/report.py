"""
Schemas de salida: informe de culpabilidad y matriz de postulados.

Los racionales viajan como texto "p/q" (o "p" si son enteros) para no perder
exactitud; las claves del informe JSON son estables.
"""
import enum
from fractions import Fraction
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


def fraction_str(value: Fraction) -> str:
    return str(Fraction(value))


def rank_number(value: Fraction) -> int | float:
    """Rango como número JSON: entero si es entero, decimal en otro caso (p. ej. 1.5)."""
    value = Fraction(value)
    return int(value) if value.denominator == 1 else float(value)


# ──────────────────────────────────────────────────────────────────────────────
# Informe de culpabilidad
# ──────────────────────────────────────────────────────────────────────────────

class OverallValue(BaseModel):
    measure: str
    value: str


class RuleEntry(BaseModel):
    """Fila del ranking: id de regla, valor Σ por medida y rango fraccionario."""
    rule: str
    values: dict[str, str]
    rank: int | float


class CaseEntry(BaseModel):
    case_id: str
    i_mi: int = Field(..., ge=0)


class CulpabilityReport(BaseModel):
    """
    Informe de `analyze`.

    `rules` está ordenado por (rango, orden de programa) y `cases` por
    case_id, de modo que la salida no depende del orden de los casos ni del
    número de workers.
    """
    model_config = ConfigDict(frozen=True)

    overall: OverallValue
    rules: list[RuleEntry] = Field(default_factory=list)
    cases: list[CaseEntry] = Field(default_factory=list)
    flags: list[str] = Field(default_factory=list)

    def measures(self) -> list[str]:
        return list(self.rules[0].values) if self.rules else []


# ──────────────────────────────────────────────────────────────────────────────
# Postulados
# ──────────────────────────────────────────────────────────────────────────────

class Postulate(str, enum.Enum):
    RS  = "RS"     # simetría respecto al orden de los casos
    RM  = "RM"     # las reglas libres valen 0
    CO  = "CO"     # V̂ = 0 si y solo si todos los casos son consistentes
    MO  = "MO"     # añadir una regla nunca reduce V̂
    IN  = "IN"     # añadir una regla libre no cambia V̂
    DIS = "DIS"    # los valores de las reglas suman la medida total
    UB  = "UB"     # ningún valor supera la medida total
    FM  = "FM"     # los hechos valen 0


class Verdict(str, enum.Enum):
    NO_COUNTEREXAMPLE = "no-counterexample"
    COUNTEREXAMPLE    = "counterexample"
    NOT_APPLICABLE    = "n/a"

    @property
    def symbol(self) -> str:
        return {"no-counterexample": "✓", "counterexample": "✗", "n/a": "n/a"}[self.value]


class WitnessCase(BaseModel):
    case_id: str
    facts: list[str]


class PostulateWitness(BaseModel):
    """
    Contraejemplo serializado y reproducible.

    `rules` es el programa en el DSL; `extra_rule` la regla añadida (MO, IN),
    `element` el id sondeado (RM, FM) y `permutation` el reorden de casos (RS).
    """
    rules: str
    cases: list[WitnessCase]
    extra_rule: Optional[str] = None
    element: Optional[str] = None
    permutation: Optional[list[int]] = None
    observed: str = ""


class PostulateResult(BaseModel):
    postulate: Postulate
    measure: str
    trials: int = Field(..., ge=0)
    verdict: Verdict
    witness: Optional[PostulateWitness] = None

    @model_validator(mode="after")
    def _witness_iff_counterexample(self) -> "PostulateResult":
        if (self.verdict == Verdict.COUNTEREXAMPLE) != (self.witness is not None):
            raise ValueError("el testigo existe si y solo si el veredicto es 'counterexample'")
        return self


class PostulateTable(BaseModel):
    """Matriz medida × postulado."""
    trials: int
    seed: int
    measures: list[str]
    postulates: list[Postulate]
    results: list[PostulateResult]

    def cell(self, measure: str, postulate: Postulate) -> PostulateResult:
        for result in self.results:
            if result.measure == measure and result.postulate == postulate:
                return result
        raise KeyError((measure, postulate))
