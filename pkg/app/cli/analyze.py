"""
Subcomando `analyze`: reglas + casos → informe de culpabilidad.

    incmeter analyze --rules rules.txt --cases cases.jsonl \
        --measures mi,cd,chash,adj-shapley-mi --output report.json
"""
import argparse
import logging
from pathlib import Path

from app.cli import comma_list, handle_errors, write_output
from app.core.config import Limits, get_settings
from app.schemas.config import AnalyzeConfig
from app.services.multiset import build_report, dump_rank_distribution, dump_report, per_case_rank_distribution
from app.services.parser import CASE_FORMATS, build_caseset, read_cases, read_rules

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("analyze", help="mide la culpabilidad de cada regla sobre un flujo de casos")
    parser.add_argument("--rules", required=True, type=Path, help="archivo de reglas")
    parser.add_argument("--cases", required=True, type=Path, help="casos en JSONL o CSV")
    parser.add_argument("--cases-format", choices=CASE_FORMATS, help="por defecto se infiere de la extensión")
    parser.add_argument("--measures", type=comma_list, help="lista separada por comas (p. ej. mi,cd,chash)")
    parser.add_argument("--rank-by", help="medida que ordena el ranking (por defecto la primera de culpabilidad)")
    parser.add_argument("--output", "-o", type=Path, help="archivo del informe (por defecto stdout)")
    parser.add_argument("--format", dest="output_format", choices=("json", "csv"), default="json")
    parser.add_argument("--top", type=int, help="muestra solo las k primeras reglas del ranking")
    parser.add_argument("--rank-distribution", type=Path, metavar="PATH",
                        help="escribe los rangos locales C_# por regla y caso (CSV rule,rank)")
    parser.add_argument("--budget-mis", type=int)
    parser.add_argument("--budget-supports", type=int)
    parser.add_argument("--shapley-max-active", type=int)
    parser.add_argument("--allow-contradictory-facts", action="store_true", default=None)
    parser.add_argument("--workers", type=int)
    parser.set_defaults(handler=run)


def _config(args: argparse.Namespace) -> AnalyzeConfig:
    settings = get_settings()

    def pick(value, default):
        return default if value is None else value

    return AnalyzeConfig(
        rules_path=args.rules,
        cases_path=args.cases,
        cases_format=args.cases_format,
        measures=pick(args.measures, settings.default_measures),
        rank_by=args.rank_by,
        output=args.output,
        output_format=args.output_format,
        top=args.top,
        rank_distribution=args.rank_distribution,
        budget_mis=pick(args.budget_mis, settings.budget_mis),
        budget_supports=pick(args.budget_supports, settings.budget_supports),
        shapley_max_active=pick(args.shapley_max_active, settings.shapley_max_active),
        allow_contradictory_facts=pick(args.allow_contradictory_facts, settings.allow_contradictory_facts),
        workers=pick(args.workers, settings.workers),
    )


@handle_errors
def run(args: argparse.Namespace) -> int:
    config = _config(args)
    limits = Limits(config.budget_mis, config.budget_supports, config.shapley_max_active)

    program = read_rules(config.rules_path)
    records = read_cases(
        config.cases_path,
        config.cases_format,
        allow_contradictory_facts=config.allow_contradictory_facts,
    )
    caseset = build_caseset(program, records)
    logger.info("[CLI] %d reglas, %d casos (%d conjuntos de hechos distintos)",
                len(program), len(caseset), len(caseset.classes))

    report = build_report(
        caseset,
        config.measures,
        rank_by=config.rank_by,
        top=config.top,
        limits=limits,
        workers=config.workers,
    )
    write_output(dump_report(report, config.output_format), config.output)

    if config.rank_distribution is not None:
        distribution = per_case_rank_distribution(caseset, "chash", limits)
        write_output(dump_rank_distribution(distribution), config.rank_distribution)
    return 0
