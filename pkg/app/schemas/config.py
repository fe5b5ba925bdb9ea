"""
Schemas de configuración de los subcomandos.

Los valores por defecto de presupuestos y workers salen de Settings; los
flags de la CLI los sobreescriben campo a campo.
"""
import os
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.services.registry import get_culpability, is_derived, validate_names

MAX_SEED = 2**64 - 1


class GenConfig(BaseModel):
    """Parámetros del generador sintético."""
    model_config = ConfigDict(frozen=True)

    n_rules: int = Field(..., ge=0)
    n_cases: int = Field(..., ge=0)
    fact_probability: float = Field(default=0.3, ge=0.0, le=1.0)
    seed: int = Field(default=0, ge=0, le=MAX_SEED)
    shape: Literal["chain", "structured"] = "chain"
    # Solo para shape=structured; por defecto n_rules + 1 átomos.
    n_atoms: Optional[int] = Field(default=None, ge=1)


class AnalyzeConfig(BaseModel):
    """Configuración completa de `analyze`."""

    rules_path: Path
    cases_path: Path
    cases_format: Optional[Literal["jsonl", "csv"]] = None
    measures: list[str] = Field(..., min_length=1)
    rank_by: Optional[str] = None
    output: Optional[Path] = None
    output_format: Literal["json", "csv"] = "json"
    top: Optional[int] = Field(default=None, ge=1)
    rank_distribution: Optional[Path] = None

    budget_mis: int = Field(..., ge=1)
    budget_supports: int = Field(..., ge=1)
    shapley_max_active: int = Field(..., ge=1, le=30)
    allow_contradictory_facts: bool = False
    workers: int = Field(default=1, ge=1)

    @field_validator("measures")
    @classmethod
    def _known_measures(cls, v: list[str]) -> list[str]:
        return validate_names(v)

    @model_validator(mode="after")
    def _validate_paths(self) -> "AnalyzeConfig":
        """Las entradas deben ser legibles y las salidas escribibles antes de calcular nada."""
        for path in (self.rules_path, self.cases_path):
            if not path.is_file() or not os.access(path, os.R_OK):
                raise ValueError(f"archivo no legible: {path}")
        for path in (self.output, self.rank_distribution):
            if path is None:
                continue
            parent = path.parent if str(path.parent) else Path(".")
            if not parent.is_dir() or not os.access(parent, os.W_OK):
                raise ValueError(f"ruta de salida no escribible: {path}")
        if self.rank_by is not None:
            if self.rank_by not in self.measures:
                raise ValueError(f"--rank-by '{self.rank_by}' debe estar entre las medidas pedidas")
            if not is_derived(self.rank_by):
                get_culpability(self.rank_by)
        return self


class BenchConfig(BaseModel):
    """Rejilla (tamaños de base × número de casos) del benchmark."""

    sizes: list[int] = Field(..., min_length=1)
    cases: list[int] = Field(..., min_length=1)
    fact_probability: float = Field(default=0.3, ge=0.0, le=1.0)
    seed: int = Field(default=0, ge=0, le=MAX_SEED)
    measures: list[str] = Field(default_factory=lambda: ["mi", "cd", "chash"], min_length=1)
    workers: int = Field(default=1, ge=1)
    repeat: int = Field(default=1, ge=1)

    @field_validator("sizes", "cases")
    @classmethod
    def _non_negative(cls, v: list[int]) -> list[int]:
        if any(item < 0 for item in v):
            raise ValueError("los valores de la rejilla deben ser >= 0")
        return v

    @field_validator("measures")
    @classmethod
    def _known_measures(cls, v: list[str]) -> list[str]:
        return validate_names(v)
