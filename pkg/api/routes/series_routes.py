from typing import Optional

import typer

from api.dependencies import console, resolve_order, usage_errors
from application.queries.series_queries import SeriesQuery
from core.logging import get_logger

logger = get_logger(__name__)


def series(
    expr: str = typer.Argument(..., help="Expression, e.g. 'phi(q)*phi(q^3)'"),
    order: Optional[int] = typer.Option(None, "--order", "-n", min=1, help="Number of coefficients"),
    pretty: bool = typer.Option(False, "--pretty", help="Print as a truncated series"),
) -> None:
    """
    Print the coefficients of q^0 .. q^(order-1) of an expression.

    A series with negative exponents starts at its valuation and the line
    is prefixed with that exponent, e.g. "q^-1: 1, 0, 2".
    """
    with usage_errors("series"):
        result = SeriesQuery().execute(expr, resolve_order(order))
    if pretty:
        console.print(str(result.series), highlight=False)
    else:
        line = ", ".join(str(c) for c in result.coefficients)
        if result.start < 0:
            line = f"q^{result.start}: {line}"
        typer.echo(line)


def register(app: typer.Typer) -> None:
    app.command("series")(series)
