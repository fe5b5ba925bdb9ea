"""Subcomando `check`: matriz de postulados (✓ / ✗ / n/a) por pruebas aleatorias."""
import argparse
import logging
from pathlib import Path

from app.cli import comma_list, handle_errors, write_output
from app.core.config import get_settings
from app.core.errors import InputError
from app.schemas.report import Postulate
from app.services.postulates import DEFAULT_MEASURES, parse_postulate, render_table, table1
from app.services.registry import get_culpability

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("check", help="comprueba los postulados de racionalidad")
    parser.add_argument("--postulates", type=comma_list, default=[p.value for p in Postulate],
                        help="RS,RM,CO,MO,IN,DIS,UB,FM (por defecto todos)")
    parser.add_argument("--measures", type=comma_list, default=list(DEFAULT_MEASURES))
    parser.add_argument("--trials", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--format", dest="output_format", choices=("text", "json"), default="text")
    parser.add_argument("--output", "-o", type=Path)
    parser.set_defaults(handler=run)


@handle_errors
def run(args: argparse.Namespace) -> int:
    postulates = [parse_postulate(name) for name in args.postulates]
    for name in args.measures:
        get_culpability(name)
    if args.trials < 0:
        raise InputError("--trials debe ser >= 0")

    table = table1(args.trials, args.seed, args.measures, postulates, get_settings().limits)
    write_output(render_table(table, args.output_format), args.output)
    return 0
