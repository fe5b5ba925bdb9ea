"""Subcomando `bench`: tiempos de análisis sobre una rejilla reglas × casos (CSV size,cases,seconds)."""
import argparse
from pathlib import Path

from app.cli import comma_list, handle_errors, int_list, write_output
from app.core.config import get_settings
from app.schemas.config import BenchConfig
from app.services.bench import dump_bench, run_bench


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("bench", help="mide el tiempo de análisis sobre el generador en cadena")
    parser.add_argument("--sizes", type=int_list, default=[10, 20], help="tamaños de la cadena, p. ej. 10,20,40")
    parser.add_argument("--cases", type=int_list, default=[1000, 2000], help="números de casos, p. ej. 5000,10000")
    parser.add_argument("--probability", type=float, default=0.3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--measures", type=comma_list, default=["mi", "cd", "chash"])
    parser.add_argument("--workers", type=int)
    parser.add_argument("--repeat", type=int, default=1)
    parser.add_argument("--output", "-o", type=Path)
    parser.set_defaults(handler=run)


@handle_errors
def run(args: argparse.Namespace) -> int:
    settings = get_settings()
    config = BenchConfig(
        sizes=args.sizes,
        cases=args.cases,
        fact_probability=args.probability,
        seed=args.seed,
        measures=args.measures,
        workers=args.workers or settings.workers,
        repeat=args.repeat,
    )
    write_output(dump_bench(run_bench(config, settings.limits)), args.output)
    return 0
