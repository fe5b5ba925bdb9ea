"""
Registro de medidas por nombre (tokens de la CLI `--measures`).

  mi                        medida de inconsistencia I_MI
  cd, chash                 medidas de culpabilidad de referencia C_D y C_#
  shapley-mi                valor de Shapley respecto a I_MI (forma cerrada)
  adj-shapley-mi            Shapley ajustado respecto a I_MI: cada MI reparte su
                            unidad de culpa entre sus reglas
  adj-shapley-mi-coalition  Shapley ajustado coalición a coalición (sin MO)
  chash-per-cd              columna derivada del informe: Σ C_# / Σ C_D por regla
                            (número medio de MIs por caso inconsistente; 0 si Σ C_D = 0)

Registrar una medida de inconsistencia nueva exige declarar cuáles de
consistency', monotony' y free-formula-independence' cumple: las garantías
del valor ajustado dependen de ellas.
"""
from typing import Iterable

from app.core.errors import UnknownMeasureError
from app.services.measures import (
    I_MI,
    CulpabilityMeasure,
    InconsistencyMeasure,
    c_d_vector,
    c_hash_vector,
)
from app.services.shapley import (
    adjusted_shapley_mi_coalition_vector,
    adjusted_shapley_mi_vector,
    shapley_mi_vector,
)

_INCONSISTENCY: dict[str, InconsistencyMeasure] = {}
_CULPABILITY: dict[str, CulpabilityMeasure] = {}

# Columnas derivadas: nombre → (numerador, denominador), ambos medidas de culpabilidad.
DERIVED: dict[str, tuple[str, str]] = {"chash-per-cd": ("chash", "cd")}


def register_measure(measure: InconsistencyMeasure) -> InconsistencyMeasure:
    if measure.name in _INCONSISTENCY or measure.name in _CULPABILITY:
        raise ValueError(f"medida ya registrada: {measure.name}")
    _INCONSISTENCY[measure.name] = measure
    return measure


def register_culpability(measure: CulpabilityMeasure) -> CulpabilityMeasure:
    if measure.name in _INCONSISTENCY or measure.name in _CULPABILITY:
        raise ValueError(f"medida ya registrada: {measure.name}")
    if measure.base_measure is not None and measure.base_measure not in _INCONSISTENCY:
        raise ValueError(f"medida base desconocida: {measure.base_measure}")
    _CULPABILITY[measure.name] = measure
    return measure


def get_measure(name: str) -> InconsistencyMeasure:
    try:
        return _INCONSISTENCY[name]
    except KeyError:
        raise UnknownMeasureError(f"medida de inconsistencia desconocida: '{name}'") from None


def get_culpability(name: str) -> CulpabilityMeasure:
    try:
        return _CULPABILITY[name]
    except KeyError:
        raise UnknownMeasureError(f"medida de culpabilidad desconocida: '{name}'") from None


def is_inconsistency_measure(name: str) -> bool:
    return name in _INCONSISTENCY


def is_registered(measure: CulpabilityMeasure) -> bool:
    """True si es exactamente el objeto registrado con ese nombre (resoluble en un worker)."""
    return _CULPABILITY.get(measure.name) is measure


def is_derived(name: str) -> bool:
    return name in DERIVED


def measure_names() -> list[str]:
    return [*_INCONSISTENCY, *_CULPABILITY, *DERIVED]


def validate_names(names: Iterable[str]) -> list[str]:
    """Comprueba tokens de la CLI y elimina repetidos conservando el orden."""
    result: list[str] = []
    for name in names:
        name = name.strip()
        if name not in _INCONSISTENCY and name not in _CULPABILITY and name not in DERIVED:
            raise UnknownMeasureError(
                f"medida desconocida: '{name}' (disponibles: {', '.join(measure_names())})"
            )
        if name not in result:
            result.append(name)
    return result


register_measure(I_MI)

CD = register_culpability(CulpabilityMeasure(name="cd", vector=c_d_vector))
CHASH = register_culpability(CulpabilityMeasure(name="chash", vector=c_hash_vector))
SHAPLEY_MI = register_culpability(
    CulpabilityMeasure(name="shapley-mi", vector=shapley_mi_vector, base_measure="mi")
)
ADJ_SHAPLEY_MI = register_culpability(
    CulpabilityMeasure(name="adj-shapley-mi", vector=adjusted_shapley_mi_vector, base_measure="mi")
)
ADJ_SHAPLEY_MI_COALITION = register_culpability(
    CulpabilityMeasure(name="adj-shapley-mi-coalition", vector=adjusted_shapley_mi_coalition_vector, base_measure="mi")
)
