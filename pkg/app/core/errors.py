"""
Jerarquía de excepciones de incmeter.

Cada excepción lleva el código de salida que la CLI devuelve al capturarla:
  1 → error de entrada (sintaxis, formato de casos, ids desconocidos)
  2 → presupuesto de cómputo agotado
"""
from typing import Optional


class IncmeterError(Exception):
    """Error base del paquete."""

    exit_code: int = 1


class InputError(IncmeterError):
    """Entrada inválida proporcionada por el usuario."""

    exit_code = 1


class RuleSyntaxError(InputError):
    """Error de sintaxis en un archivo de reglas, con posición."""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"línea {line}, columna {column}: {message}")


class CaseFormatError(InputError):
    """Línea malformada en un flujo de casos (JSONL o CSV)."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"línea {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class DuplicateCaseError(CaseFormatError):
    def __init__(self, case_id: str, line: int):
        self.case_id = case_id
        super().__init__(f"case_id duplicado '{case_id}'", line)


class ContradictoryFactsError(CaseFormatError):
    """Un caso contiene a la vez un átomo y su negación como hechos."""

    def __init__(self, case_id: str, atom: str, line: Optional[int] = None):
        self.case_id = case_id
        self.atom = atom
        super().__init__(
            f"el caso '{case_id}' contiene hechos contradictorios ({atom} y -{atom}); "
            "use --allow-contradictory-facts para admitirlos",
            line,
        )


class UnknownMeasureError(InputError):
    pass


class UnknownPostulateError(InputError):
    pass


class UnknownElementError(IncmeterError, KeyError):
    """Id de elemento (regla o hecho) inexistente en la base analizada."""

    exit_code = 1

    def __init__(self, element_id: str):
        self.element_id = element_id
        super().__init__(f"elemento desconocido: {element_id}")

    def __str__(self) -> str:
        return self.args[0]


class BudgetExhaustedError(IncmeterError):
    """Se superó un límite de cómputo; el resultado nunca se trunca en silencio."""

    exit_code = 2

    def __init__(self, budget: str, limit: int):
        self.budget = budget
        self.limit = limit
        super().__init__(f"presupuesto agotado: {budget} (límite {limit})")


class MeasurePropertyError(InputError):
    """La medida no declara las propiedades que exige la operación solicitada."""
