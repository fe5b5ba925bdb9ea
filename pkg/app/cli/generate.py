"""Subcomando `generate`: escribe un archivo de reglas y un JSONL de casos sintéticos."""
import argparse
import logging
from pathlib import Path

from app.cli import handle_errors
from app.schemas.config import GenConfig
from app.services.parser import render_rules, write_cases
from app.services.synth import iter_case_records, make_rng, program_for

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("generate", help="genera reglas en cadena y casos aleatorios")
    parser.add_argument("--n-rules", type=int, required=True)
    parser.add_argument("--n-cases", type=int, required=True)
    parser.add_argument("--probability", type=float, default=0.3, help="probabilidad de cada hecho")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--shape", choices=("chain", "structured"), default="chain")
    parser.add_argument("--n-atoms", type=int, help="átomos para --shape structured")
    parser.add_argument("--out-rules", type=Path, required=True)
    parser.add_argument("--out-cases", type=Path, required=True)
    parser.set_defaults(handler=run)


@handle_errors
def run(args: argparse.Namespace) -> int:
    config = GenConfig(
        n_rules=args.n_rules,
        n_cases=args.n_cases,
        fact_probability=args.probability,
        seed=args.seed,
        shape=args.shape,
        n_atoms=args.n_atoms,
    )
    rng = make_rng(config.seed)
    program = program_for(config, rng)
    args.out_rules.write_text(render_rules(program), encoding="utf-8")

    # Los casos se escriben en streaming, sin materializar la lista completa.
    with open(args.out_cases, "w", encoding="utf-8") as stream:
        count = write_cases(iter_case_records(config, program, rng), stream)

    logger.info("[GEN] %d reglas → %s, %d casos → %s", len(program), args.out_rules, count, args.out_cases)
    return 0
