"""
Generador sintético de multiconjuntos de bases de reglas.

Forma `chain` (por defecto): reglas 𝔄_i → ¬𝔄_{i+1} sobre el alfabeto
a, b, c, ..., z, aa, ab, ...; cada caso incluye cada átomo de la base como
hecho positivo, de forma independiente, con probabilidad p.

Forma `structured`: cuerpos y cabezas aleatorios con polaridad mixta; la usa
el comprobador de postulados porque las cadenas solas no producen hechos
culpables para FM.

El PRNG es numpy PCG64: misma semilla, mismo resultado en cualquier plataforma.
"""
import logging
from typing import Iterator, Optional

import numpy as np

from app.models.caseset import CaseSet
from app.models.rules import Atom, Literal, RuleProgram
from app.schemas.cases import CaseRecord
from app.schemas.config import GenConfig

logger = logging.getLogger(__name__)

# Casos generados por bloque al emitir en streaming.
CHUNK_CASES = 4096


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def atom_name(index: int) -> str:
    """Numeración biyectiva en base 26: 0→a, 25→z, 26→aa, 27→ab, ..."""
    if index < 0:
        raise ValueError("el índice de átomo debe ser >= 0")
    letters = []
    index += 1
    while index:
        index, rest = divmod(index - 1, 26)
        letters.append(chr(ord("a") + rest))
    return "".join(reversed(letters))


def generate_rules(n_rules: int) -> RuleProgram:
    """Cadena a→¬b, b→¬c, ... con n_rules reglas."""
    if n_rules < 0:
        raise ValueError("n_rules debe ser >= 0")
    pairs = [
        ([Literal(Atom(atom_name(i)))], Literal(Atom(atom_name(i + 1)), negated=True))
        for i in range(n_rules)
    ]
    return RuleProgram.from_pairs(pairs)


def generate_structured_rules(
    rng: np.random.Generator,
    n_rules: int,
    n_atoms: int,
    max_body: int = 2,
) -> RuleProgram:
    """
    Reglas aleatorias: cuerpo de 1..max_body literales distintos y cabeza de
    polaridad aleatoria. Las repetidas colapsan, así que puede haber menos de
    n_rules reglas.
    """
    atoms = [Atom(atom_name(i)) for i in range(max(n_atoms, 1))]
    pairs = []
    for _ in range(n_rules):
        size = int(rng.integers(1, min(max_body, len(atoms)) + 1))
        chosen = rng.choice(len(atoms), size=size, replace=False)
        signs = rng.random(size) < 0.5
        body = [Literal(atoms[int(i)], bool(s)) for i, s in zip(chosen, signs)]
        head = Literal(atoms[int(rng.integers(len(atoms)))], bool(rng.random() < 0.5))
        pairs.append((body, head))
    return RuleProgram.from_pairs(pairs)


def _fact_atoms(config: GenConfig, program: RuleProgram) -> list[str]:
    if config.shape == "chain":
        # Orden de generación, no alfabético: "aa" va después de "z".
        return [atom_name(i) for i in range(config.n_rules + 1)] if config.n_rules else []
    return [atom.name for atom in program.atoms()]


def program_for(config: GenConfig, rng: Optional[np.random.Generator] = None) -> RuleProgram:
    if config.shape == "chain":
        return generate_rules(config.n_rules)
    rng = rng if rng is not None else make_rng(config.seed)
    return generate_structured_rules(rng, config.n_rules, config.n_atoms or config.n_rules + 1)


def iter_case_records(
    config: GenConfig,
    program: Optional[RuleProgram] = None,
    rng: Optional[np.random.Generator] = None,
) -> Iterator[CaseRecord]:
    """
    Emite los casos por bloques (c1, c2, ...); cada átomo de la base entra
    como hecho positivo con probabilidad fact_probability.
    """
    rng = rng if rng is not None else make_rng(config.seed)
    program = program if program is not None else program_for(config, rng)
    atoms = np.array(_fact_atoms(config, program), dtype=object)

    emitted = 0
    while emitted < config.n_cases:
        block = min(CHUNK_CASES, config.n_cases - emitted)
        draws = rng.random((block, len(atoms))) < config.fact_probability
        for row in draws:
            emitted += 1
            yield CaseRecord(case_id=f"c{emitted}", facts=atoms[row].tolist())


def generate(config: GenConfig) -> tuple[RuleProgram, list[CaseRecord]]:
    """Programa y casos de una configuración; determinista bajo la semilla."""
    rng = make_rng(config.seed)
    program = program_for(config, rng)
    records = list(iter_case_records(config, program, rng))
    logger.info(
        "[GEN] %d reglas (%s), %d casos, p=%.3f, seed=%d",
        len(program), config.shape, len(records), config.fact_probability, config.seed,
    )
    return program, records


def generate_cases(config: GenConfig) -> CaseSet:
    program, records = generate(config)
    return CaseSet(
        shared_rules=program,
        cases=tuple((record.case_id, record.literals) for record in records),
    )


def random_caseset(
    rng: np.random.Generator,
    *,
    max_rules: int = 8,
    max_cases: int = 6,
    max_atoms: int = 5,
) -> CaseSet:
    """
    Multiconjunto pequeño para el comprobador de postulados: reglas
    estructuradas y hechos de polaridad mixta pero internamente consistentes
    (cada átomo ausente, positivo o negativo).
    """
    n_atoms = int(rng.integers(2, max_atoms + 1))
    program = generate_structured_rules(rng, int(rng.integers(1, max_rules + 1)), n_atoms)
    atoms = [Atom(atom_name(i)) for i in range(n_atoms)]
    fact_sets = []
    for _ in range(int(rng.integers(1, max_cases + 1))):
        states = rng.integers(0, 3, size=n_atoms)
        fact_sets.append(
            frozenset(Literal(atom, state == 2) for atom, state in zip(atoms, states) if state)
        )
    return CaseSet.from_facts(program, fact_sets)


def random_rule(rng: np.random.Generator, caseset: CaseSet, max_atoms: int = 5) -> tuple[list[Literal], Literal]:
    """Regla aleatoria sobre los átomos del multiconjunto (más uno nuevo a veces)."""
    names = {atom.name for atom in caseset.shared_rules.atoms()}
    names |= {lit.atom.name for _, facts in caseset.cases for lit in facts}
    pool = [Atom(name) for name in sorted(names)] or [Atom(atom_name(0))]
    if rng.random() < 0.2:
        pool.append(Atom(atom_name(max_atoms + int(rng.integers(0, 3)))))
    size = int(rng.integers(1, min(2, len(pool)) + 1))
    chosen = rng.choice(len(pool), size=size, replace=False)
    body = [Literal(pool[int(i)], bool(rng.random() < 0.5)) for i in chosen]
    head = Literal(pool[int(rng.integers(len(pool)))], bool(rng.random() < 0.5))
    return body, head
