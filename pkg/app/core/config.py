"""
Configuración global de incmeter usando Pydantic Settings (Twelve-Factor App).

Carga variables de entorno con prefijo INCMETER_ (y opcionalmente desde .env)
y valida la coherencia de los presupuestos de cómputo antes de analizar nada.
"""
import logging
from functools import lru_cache
from typing import NamedTuple

from pydantic import field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Limits(NamedTuple):
    """Presupuestos de cómputo que viajan explícitamente hasta los workers."""

    max_mis: int
    max_supports: int
    max_active: int


class Settings(BaseSettings):
    """
    Configuración principal del medidor de inconsistencia.

    Los presupuestos (budgets) son límites duros: superarlos produce un error
    explícito, nunca un resultado truncado en silencio.
    """

    model_config = SettingsConfigDict(
        env_prefix="INCMETER_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    app_name: str = "incmeter"
    log_level: str = "WARNING"

    # Presupuestos del motor MI.
    budget_mis: int = 1_000_000
    budget_supports: int = 10_000

    # Shapley definicional / ajustado: tamaño máximo de la parte activa (2^n subconjuntos).
    shapley_max_active: int = 24

    # Oráculo de fuerza bruta: 2^|B| subconjuntos.
    bruteforce_max: int = 20

    workers: int = 1
    allow_contradictory_facts: bool = False

    default_measures: list[str] = ["mi", "cd", "chash", "adj-shapley-mi"]

    @property
    def limits(self) -> Limits:
        return Limits(self.budget_mis, self.budget_supports, self.shapley_max_active)

    @field_validator("budget_mis", "budget_supports", "workers", "shapley_max_active", "bruteforce_max")
    @classmethod
    def _positive(cls, v: int) -> int:
        """Todos los límites deben ser enteros positivos."""
        if v < 1:
            raise ValueError(f"el valor debe ser >= 1 (recibido: {v})")
        return v

    @model_validator(mode="after")
    def _validate_coherence(self) -> "Settings":
        """
        Rechaza configuraciones que harían el cómputo exacto inviable o
        niveles de log desconocidos (fail-fast).
        """
        if self.shapley_max_active > 30:
            raise ValueError(
                f"INCMETER_SHAPLEY_MAX_ACTIVE={self.shapley_max_active} excede el máximo soportado (30)"
            )
        if self.bruteforce_max > 24:
            raise ValueError(
                f"INCMETER_BRUTEFORCE_MAX={self.bruteforce_max} excede el máximo soportado (24)"
            )

        level = self.log_level.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"INCMETER_LOG_LEVEL desconocido: {self.log_level}")
        object.__setattr__(self, "log_level", level)

        return self


@lru_cache
def get_settings() -> Settings:
    """Retorna la instancia cacheada de configuración (singleton thread-safe)."""
    return Settings()


settings = get_settings()
