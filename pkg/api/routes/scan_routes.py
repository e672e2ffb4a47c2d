import asyncio
from enum import Enum
from io import StringIO
from pathlib import Path
from typing import List, Optional

import typer
from rich.console import Console
from rich.table import Table

from api.dependencies import console, resolve_order, usage_errors
from application.commands.scan_commands import ScanCommand, ScanParams, ScanResult, to_records
from core.config import get_settings
from core.logging import get_logger
from infrastructure.schema.report_schema import ScanResultSchema, dumps_list
from infrastructure.text_formats import format_record

logger = get_logger(__name__)

TABLE_WIDTH = 160


class OutputFormat(str, Enum):
    table = "table"
    json = "json"
    records = "records"


def scan(
    max_det: int = typer.Option(..., "--max-det", min=1, help="Largest determinant ac - b^2"),
    order: Optional[int] = typer.Option(None, "--order", "-n", min=1, help="Comparison order"),
    max_index: int = typer.Option(5, "--max-index", min=1, help="Largest |det B| of a diagonalizer"),
    lin_box: Optional[int] = typer.Option(None, "--box", min=0, help="Linear-part sweep |d_i| <= box"),
    output_format: OutputFormat = typer.Option(OutputFormat.table, "--format"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write output to this file"),
    workers: Optional[int] = typer.Option(None, "--workers", min=1),
) -> None:
    """Sweep determinants for forms with several diagonalizing matrices and emit verified identities."""
    params = ScanParams(
        max_det=max_det,
        order=resolve_order(order, get_settings().SCAN_ORDER),
        max_index=max_index,
        lin_box=lin_box,
    )
    with usage_errors("scan"):
        results = asyncio.run(ScanCommand(max_workers=workers).execute(params))

    if output_format is OutputFormat.table and out is None:
        console.print(_results_table(results, max_det))
        return

    if output_format is OutputFormat.json:
        text = dumps_list([ScanResultSchema.from_result(r) for r in results]) + "\n"
    elif output_format is OutputFormat.records:
        text = "\n".join(format_record(r) for r in to_records(results))
    else:
        text = _render_table(results, max_det)

    if out is not None:
        out.write_text(text, encoding="utf-8")
        logger.info("scan_written", path=str(out), format=output_format.value, bytes=len(text))
    else:
        typer.echo(text, nl=False)


def _results_table(results: List[ScanResult], max_det: int) -> Table:
    table = Table(title=f"scan up to determinant {max_det}")
    table.add_column("det", justify="right")
    table.add_column("form")
    table.add_column("diagonalizers")
    table.add_column("identities", justify="right")
    for r in results:
        found = ", ".join(f"{d.matrix}->{list(d.target)}" for d in r.diagonalizers)
        table.add_row(str(r.determinant), str(r.form), found, str(len(r.candidates)))
    return table


def _render_table(results: List[ScanResult], max_det: int) -> str:
    """The table as plain text, for files."""
    buffer = Console(file=StringIO(), width=TABLE_WIDTH, color_system=None)
    buffer.print(_results_table(results, max_det))
    return buffer.file.getvalue()


def register(app: typer.Typer) -> None:
    app.command("scan")(scan)
