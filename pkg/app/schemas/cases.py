"""
Schemas de ingestión de casos.

Cada caso llega como {"case_id": str, "facts": [str, ...]} (JSONL) o como
fila case_id,facts con los literales separados por ';' (CSV). El prefijo
'-' (o '¬') marca la negación.
"""
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.models.rules import Literal


class CaseRecord(BaseModel):
    """Un caso: identificador y conjunto de hechos."""
    model_config = ConfigDict(frozen=True, extra="ignore")

    case_id: str = Field(..., min_length=1)
    facts: frozenset[str] = Field(default_factory=frozenset)

    @field_validator("case_id", mode="before")
    @classmethod
    def _coerce_case_id(cls, v):
        """Los ids numéricos de CSV/JSON se aceptan como texto."""
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            return str(v)
        return v

    @field_validator("facts", mode="before")
    @classmethod
    def _normalize_facts(cls, v):
        """Normaliza cada literal a su forma canónica ('-a'); valida el nombre del átomo."""
        if isinstance(v, str):
            raise ValueError("facts debe ser una lista de literales")
        if v is None:
            return frozenset()
        return frozenset(str(Literal.parse(str(item))) for item in v)

    @property
    def literals(self) -> frozenset[Literal]:
        return frozenset(Literal.parse(item) for item in self.facts)

    def contradiction(self) -> Optional[str]:
        """Nombre del primer átomo presente con ambas polaridades, si lo hay."""
        for item in sorted(self.facts):
            if item.startswith("-") and item[1:] in self.facts:
                return item[1:]
        return None
