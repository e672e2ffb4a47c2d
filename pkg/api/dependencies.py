from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional

import typer
from rich.console import Console

from core.config import get_settings
from core.logging import get_logger
from domain.exceptions import ThetaForgeError
from infrastructure.repositories.corpus_repository import CorpusRepository

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2

console = Console()
err_console = Console(stderr=True)


def get_repository(corpus_dir: Optional[Path] = None) -> CorpusRepository:
    return CorpusRepository(corpus_dir or get_settings().CORPUS_DIR)


def resolve_order(order: Optional[int], default: Optional[int] = None) -> int:
    """Flag value, else the configured default."""
    if order is not None:
        return order
    return default if default is not None else get_settings().ORDER


@contextmanager
def usage_errors(command: str) -> Iterator[None]:
    """Report domain and argument errors on stderr and exit with the usage code."""
    try:
        yield
    except (ThetaForgeError, ValueError) as e:
        logger.warning("command_failed", command=command, error_type=type(e).__name__, error=str(e))
        err_console.print(f"[red]error:[/red] {e}", highlight=False)
        raise typer.Exit(code=EXIT_USAGE)
