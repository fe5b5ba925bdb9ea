"""
Punto de entrada principal de la CLI incmeter.

    incmeter analyze | generate | check | bench

Códigos de salida: 0 éxito, 1 error de entrada, 2 presupuesto agotado.
"""
import argparse
import logging
import sys
from typing import Optional, Sequence

from app.cli import analyze, bench, check, generate
from app.core.config import get_settings

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = argparse.ArgumentParser(
        prog=settings.app_name,
        description="Medición de inconsistencia y culpabilidad de reglas sobre multiconjuntos de casos",
    )
    parser.add_argument("--log-level", default=None, type=str.upper,
                        choices=("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"),
                        help=f"nivel de log (por defecto {settings.log_level}, env INCMETER_LOG_LEVEL)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    analyze.register(subparsers)
    generate.register(subparsers)
    check.register(subparsers)
    bench.register(subparsers)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level or get_settings().log_level, format=LOG_FORMAT, stream=sys.stderr)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
