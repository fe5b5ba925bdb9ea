"""
Parser del DSL de reglas e ingestión de flujos de casos.

Gramática de reglas:
    rule    := body "->" literal "."
    body    := literal ("," literal)*
    literal := ["-"] atom            ('¬' se acepta como alias de '-')
    atom    := [A-Za-z_][A-Za-z0-9_]*
Los espacios no son significativos y '%' inicia un comentario de línea.
Un archivo de reglas no admite hechos: los hechos llegan con los casos.
"""
import csv
import json
import logging
from pathlib import Path
from typing import IO, Iterable, Iterator, Optional

from lark import Lark, Token, Tree
from lark.exceptions import UnexpectedEOF, UnexpectedInput
from pydantic import ValidationError

from app.core.errors import (
    CaseFormatError,
    ContradictoryFactsError,
    DuplicateCaseError,
    InputError,
    RuleSyntaxError,
)
from app.models.caseset import CaseSet
from app.models.rules import Atom, Literal, RuleProgram, SourceSpan
from app.schemas.cases import CaseRecord

logger = logging.getLogger(__name__)


RULES_GRAMMAR = r"""
    start: statement*

    statement: body? ARROW literal "."   -> rule
             | literal "."               -> fact

    body: literal ("," literal)*

    literal: NEG? ATOM

    ARROW: "->"
    NEG: "-" | "¬"
    ATOM: /[A-Za-z_][A-Za-z0-9_]*/
    COMMENT: /%[^\n]*/

    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

_RULES_PARSER = Lark(RULES_GRAMMAR, parser="lalr", propagate_positions=True)

CASE_FORMATS = ("jsonl", "csv")
_EXTENSIONS = {".jsonl": "jsonl", ".ndjson": "jsonl", ".json": "jsonl", ".csv": "csv"}


# ──────────────────────────────────────────────────────────────────────────────
# Reglas
# ──────────────────────────────────────────────────────────────────────────────

def _literal(node: Tree) -> Literal:
    negated = False
    name = ""
    for child in node.children:
        if isinstance(child, Token) and child.type == "NEG":
            negated = True
        elif isinstance(child, Token) and child.type == "ATOM":
            name = str(child)
    return Literal(Atom(name), negated)


def parse_rules(text: str) -> RuleProgram:
    """
    Analiza un programa de reglas; las reglas repetidas colapsan en una.

    Raises:
        RuleSyntaxError: error de sintaxis (con línea/columna), hecho o regla sin cuerpo.
    """
    try:
        tree = _RULES_PARSER.parse(text)
    except UnexpectedEOF as exc:
        lines = text.splitlines() or [""]
        raise RuleSyntaxError("fin de archivo inesperado (¿falta '.'?)", len(lines), len(lines[-1]) + 1) from exc
    except UnexpectedInput as exc:
        line = exc.line if isinstance(exc.line, int) and exc.line > 0 else 1
        column = exc.column if isinstance(exc.column, int) and exc.column > 0 else 1
        lines = text.splitlines()
        context = lines[line - 1][max(column - 6, 0):column + 10].strip() if line <= len(lines) else ""
        raise RuleSyntaxError(f"entrada inesperada cerca de {context!r}", line, column) from exc

    pairs: list[tuple[list[Literal], Literal]] = []
    spans: list[SourceSpan] = []
    for statement in tree.children:
        span = SourceSpan(statement.meta.line, statement.meta.column)
        if statement.data == "fact":
            raise RuleSyntaxError(
                "los hechos no se admiten en un archivo de reglas (pertenecen a los casos)",
                span.line, span.column,
            )
        body_nodes = [c for c in statement.children if isinstance(c, Tree) and c.data == "body"]
        if not body_nodes:
            raise RuleSyntaxError(
                "regla sin cuerpo: los hechos pertenecen a los casos", span.line, span.column
            )
        head_node = [c for c in statement.children if isinstance(c, Tree) and c.data == "literal"][-1]
        body = [_literal(node) for node in body_nodes[0].children]
        pairs.append((body, _literal(head_node)))
        spans.append(span)

    program = RuleProgram.from_pairs(pairs, spans)
    logger.debug("[PARSER] %d reglas leídas (%d tras deduplicar)", len(pairs), len(program))
    return program


def render_rules(program: RuleProgram) -> str:
    """Texto canónico que vuelve a analizarse a un programa igual."""
    return "".join(f"{rule}\n" for rule in program.rules)


def read_rules(path: Path) -> RuleProgram:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"no se puede leer el archivo de reglas {path}: {exc}") from exc
    return parse_rules(text)


# ──────────────────────────────────────────────────────────────────────────────
# Casos
# ──────────────────────────────────────────────────────────────────────────────

def infer_format(path: Path) -> str:
    fmt = _EXTENSIONS.get(Path(path).suffix.lower())
    if fmt is None:
        raise InputError(f"no se puede inferir el formato de casos de '{path}' (use --cases-format)")
    return fmt


def _text_lines(stream: IO) -> Iterator[str]:
    """Decodifica línea a línea para poder situar los bytes inválidos; ignora el BOM inicial."""
    for number, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8-sig" if number == 1 else "utf-8")
            except UnicodeDecodeError as exc:
                raise CaseFormatError(f"UTF-8 inválido en la columna de bytes {exc.start + 1}", number) from exc
        elif number == 1:
            raw = raw.removeprefix("\ufeff")
        yield raw


def _jsonl_records(stream: IO) -> Iterator[tuple[int, CaseRecord]]:
    for number, line in enumerate(_text_lines(stream), start=1):
        if not line.strip():
            continue
        try:
            payload = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CaseFormatError(f"JSON inválido: {exc.msg}", number) from exc
        if not isinstance(payload, dict):
            raise CaseFormatError("se esperaba un objeto JSON", number)
        try:
            yield number, CaseRecord.model_validate(payload)
        except ValidationError as exc:
            raise CaseFormatError(f"caso inválido: {exc.errors()[0]['msg']}", number) from exc


def _csv_records(stream: IO) -> Iterator[tuple[int, CaseRecord]]:
    reader = csv.reader(_text_lines(stream))
    header = next(reader, None)
    if header is None:
        return
    if [h.strip() for h in header] != ["case_id", "facts"]:
        raise CaseFormatError("la cabecera CSV debe ser exactamente 'case_id,facts'", 1)
    for row in reader:
        number = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise CaseFormatError(f"se esperaban 2 columnas, hay {len(row)}", number)
        facts = [item.strip() for item in row[1].split(";") if item.strip()]
        try:
            yield number, CaseRecord(case_id=row[0].strip(), facts=facts)
        except ValidationError as exc:
            raise CaseFormatError(f"caso inválido: {exc.errors()[0]['msg']}", number) from exc


def parse_cases(
    stream: IO,
    fmt: str,
    *,
    allow_contradictory_facts: bool = False,
) -> list[CaseRecord]:
    """
    Lee un flujo de casos conservando su orden.

    Raises:
        CaseFormatError: línea malformada (con número de línea).
        DuplicateCaseError: case_id repetido.
        ContradictoryFactsError: hechos a y -a en un caso sin el flag de permiso.
    """
    if fmt not in CASE_FORMATS:
        raise InputError(f"formato de casos desconocido: '{fmt}'")
    records = _jsonl_records(stream) if fmt == "jsonl" else _csv_records(stream)

    seen: set[str] = set()
    cases: list[CaseRecord] = []
    for number, record in records:
        if record.case_id in seen:
            raise DuplicateCaseError(record.case_id, number)
        clash = record.contradiction()
        if clash is not None:
            if not allow_contradictory_facts:
                raise ContradictoryFactsError(record.case_id, clash, number)
            logger.warning("[PARSER] caso '%s' con hechos contradictorios admitido (%s)", record.case_id, clash)
        seen.add(record.case_id)
        cases.append(record)
    return cases


def read_cases(
    path: Path,
    fmt: Optional[str] = None,
    *,
    allow_contradictory_facts: bool = False,
) -> list[CaseRecord]:
    fmt = fmt or infer_format(path)
    try:
        with open(path, "rb") as stream:
            cases = parse_cases(stream, fmt, allow_contradictory_facts=allow_contradictory_facts)
    except OSError as exc:
        raise InputError(f"no se puede leer el archivo de casos {path}: {exc}") from exc
    logger.info("[PARSER] %d casos leídos de %s", len(cases), path)
    return cases


def write_cases(records: Iterable[CaseRecord], stream: IO[str]) -> int:
    """Escribe casos en JSONL; devuelve cuántos se escribieron."""
    count = 0
    for record in records:
        facts = sorted(record.facts, key=lambda item: (item.lstrip("-"), item.startswith("-")))
        stream.write(json.dumps({"case_id": record.case_id, "facts": facts}) + "\n")
        count += 1
    return count


def build_caseset(program: RuleProgram, cases: Iterable[CaseRecord]) -> CaseSet:
    """
    M = ({F_1 ∪ R}, ..., {F_n ∪ R}) con ids de regla compartidos; los
    conjuntos de hechos idénticos se agrupan internamente con multiplicidad.
    """
    return CaseSet(
        shared_rules=program,
        cases=tuple((record.case_id, record.literals) for record in cases),
    )
