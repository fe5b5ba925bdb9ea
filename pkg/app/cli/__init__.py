"""
Subcomandos de la CLI. Cada módulo expone register(subparsers) y un
manejador run(args) -> código de salida.
"""
import functools
import logging
import sys
from pathlib import Path
from typing import Callable, Optional

from pydantic import ValidationError

from app.core.errors import IncmeterError

logger = logging.getLogger(__name__)


def comma_list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def int_list(text: str) -> list[int]:
    return [int(item) for item in comma_list(text)]


def write_output(text: str, path: Optional[Path]) -> None:
    """Escribe en `path` o, si no hay ruta, en stdout."""
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    Path(path).write_text(text, encoding="utf-8")
    logger.info("[CLI] salida escrita en %s", path)


def _validation_message(exc: ValidationError) -> str:
    first = exc.errors()[0]
    where = ".".join(str(part) for part in first.get("loc", ()))
    return f"{where}: {first['msg']}" if where else first["msg"]


def handle_errors(handler: Callable[..., int]) -> Callable[..., int]:
    """Traduce excepciones del dominio a 'error: ...' en stderr y su código de salida."""

    @functools.wraps(handler)
    def wrapper(*args, **kwargs) -> int:
        try:
            return handler(*args, **kwargs)
        except IncmeterError as exc:
            logger.error("[CLI] %s: %s", type(exc).__name__, exc)
            print(f"error: {exc}", file=sys.stderr)
            return exc.exit_code
        except ValidationError as exc:
            message = _validation_message(exc)
            logger.error("[CLI] configuración inválida: %s", message)
            print(f"error: {message}", file=sys.stderr)
            return 1
        except OSError as exc:
            logger.error("[CLI] error de E/S: %s", exc)
            print(f"error: {exc}", file=sys.stderr)
            return 1

    return wrapper
