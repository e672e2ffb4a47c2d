import asyncio
from pathlib import Path
from typing import List, Optional

import typer
from rich.table import Table

from api.dependencies import EXIT_FALSE, EXIT_USAGE, console, err_console, get_repository, resolve_order, usage_errors
from application.commands.verify_commands import CorpusRun, VerifyCorpusCommand
from core.config import get_settings
from core.logging import get_logger
from infrastructure.schema.report_schema import CorpusRunReport, dumps

logger = get_logger(__name__)


def _mismatch(value: Optional[int]) -> str:
    return "-" if value is None else f"q^{value}"


def _render(run: CorpusRun) -> None:
    table = Table(title="identities")
    table.add_column("id")
    table.add_column("ok")
    table.add_column("first mismatch")
    table.add_column("compared to", justify="right")
    table.add_column("ms", justify="right")
    for r in run.reports:
        status = "[green]ok[/green]" if r.ok else f"[red]{r.stage or 'FAIL'}[/red]"
        table.add_row(r.id, status, _mismatch(r.first_mismatch), str(r.compared_to), f"{r.elapsed_ms:.1f}")
    console.print(table)

    if run.derivations:
        table = Table(title="derivations")
        table.add_column("id")
        table.add_column("ok")
        table.add_column("failed stage")
        table.add_column("detail")
        for d in run.derivations:
            status = "[green]ok[/green]" if d.ok else "[red]FAIL[/red]"
            table.add_row(d.id, status, d.failed_stage or "-", d.detail or "")
        console.print(table)
    failed = sum(1 for r in run.reports if not r.ok) + sum(1 for d in run.derivations if not d.ok)
    console.print(f"{len(run.reports)} records, {failed} failed")


def verify(
    ids: Optional[List[str]] = typer.Argument(None, help="Record ids"),
    all_records: bool = typer.Option(False, "--all", help="Verify every record"),
    order: Optional[int] = typer.Option(None, "--order", "-n", min=10, help="Comparison order"),
    derivations: bool = typer.Option(False, "--derivations", "-d", help="Also re-derive lattice and product data"),
    derivation_order: Optional[int] = typer.Option(None, "--derivation-order", min=10),
    as_json: bool = typer.Option(False, "--json", help="Print a JSON report"),
    corpus_dir: Optional[Path] = typer.Option(None, "--corpus-dir", help="Directory of record files"),
    workers: Optional[int] = typer.Option(None, "--workers", min=1),
) -> None:
    """Verify corpus identities as q-series; exit 1 when any check fails."""
    if not ids and not all_records:
        err_console.print("[red]error:[/red] give record ids or --all", highlight=False)
        raise typer.Exit(code=EXIT_USAGE)
    with usage_errors("verify"):
        repository = get_repository(corpus_dir)
        records = repository.get_all() if all_records else repository.get_many(ids)
        command = VerifyCorpusCommand(max_workers=workers)
        run = asyncio.run(command.execute(
            records,
            resolve_order(order),
            derivations=derivations,
            derivation_order=resolve_order(derivation_order, get_settings().DERIVATION_ORDER),
        ))
    if as_json:
        typer.echo(dumps(CorpusRunReport.from_run(run)))
    else:
        _render(run)
    if not run.ok:
        raise typer.Exit(code=EXIT_FALSE)


def register(app: typer.Typer) -> None:
    app.command("verify")(verify)
