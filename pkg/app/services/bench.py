"""
Benchmark de escalado: rejilla (reglas de la cadena × número de casos).

Cada celda genera el multiconjunto con el generador en cadena y mide solo el
análisis (build_report), no la generación.
"""
import csv
import io
import logging
import time
from dataclasses import dataclass
from typing import Iterable

from app.core.config import Limits, settings
from app.schemas.config import BenchConfig, GenConfig
from app.services.multiset import build_report
from app.services.synth import generate_cases

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BenchRow:
    size: int
    cases: int
    seconds: float
    overall: str


def run_bench(config: BenchConfig, limits: Limits | None = None) -> list[BenchRow]:
    limits = limits or settings.limits
    rows = []
    for size in config.sizes:
        for n_cases in config.cases:
            caseset = generate_cases(GenConfig(
                n_rules=size,
                n_cases=n_cases,
                fact_probability=config.fact_probability,
                seed=config.seed,
            ))
            best = float("inf")
            overall = ""
            for _ in range(config.repeat):
                started = time.perf_counter()
                report = build_report(caseset, config.measures, limits=limits, workers=config.workers)
                best = min(best, time.perf_counter() - started)
                overall = report.overall.value
            logger.info("[BENCH] %d reglas × %d casos: %.3fs (m^Σ_mi=%s)", size, n_cases, best, overall)
            rows.append(BenchRow(size=size, cases=n_cases, seconds=best, overall=overall))
    return rows


def dump_bench(rows: Iterable[BenchRow]) -> str:
    """CSV con columnas size,cases,seconds."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["size", "cases", "seconds"])
    for row in rows:
        writer.writerow([row.size, row.cases, f"{row.seconds:.6f}"])
    return buffer.getvalue()
