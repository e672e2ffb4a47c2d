from typing import Optional

import typer
from rich.table import Table

from api.dependencies import EXIT_FALSE, console, usage_errors
from application.queries.lattice_queries import CheckEcsQuery, ExpandQuery, FindMatrixQuery, ReduceFormsQuery
from core.logging import get_logger
from domain.models.quadform import BinaryForm
from infrastructure.schema.report_schema import ExpansionSchema, dumps
from infrastructure.text_formats import (
    format_shifts,
    parse_form,
    parse_gram,
    parse_matrix,
    parse_shifts,
    parse_vector,
)

logger = get_logger(__name__)


def expand(
    form: str = typer.Option(..., "--form", help="'quad: 3,2,4 | lin: 1,4 | const: 0 | delta: 1,0'"),
    matrix: str = typer.Option(..., "--matrix", "-B", help="Rows separated by ';'"),
    shifts: str = typer.Option("auto", "--shifts", help="'auto', 'e<j>, lo..hi' or explicit vectors"),
    recheck_min_order: Optional[int] = typer.Option(None, "--recheck-min-order", min=0),
    split_units: bool = typer.Option(False, "--split-units", help="Write f(1,a) as 2*f(a,a^3)"),
    as_json: bool = typer.Option(False, "--json"),
) -> None:
    """Expand a lattice sum along the cosets of B*Z^n."""
    with usage_errors("expand"):
        extended = parse_form(form)
        b = parse_matrix(matrix)
        result = ExpandQuery().execute(extended, parse_shifts(shifts, b), recheck_min_order, split_units)
    schema = ExpansionSchema.from_result(result)
    if as_json:
        typer.echo(dumps(schema))
        return
    table = Table(title=f"{schema.form} under {result.system.b}")
    table.add_column("representative")
    table.add_column("term")
    for rep, term in zip(result.system.reps, schema.terms):
        table.add_row(str(rep), term)
    console.print(table)
    console.print(f"B^T(2A)B = {result.image}", highlight=False)
    typer.echo(schema.expression)


def find_matrix(
    gram: str = typer.Option(..., "--gram", help="Gram matrix, e.g. '3,1;1,4'"),
    target: str = typer.Option(..., "--target", help="Diagonal, e.g. '3,33'"),
    bound: Optional[int] = typer.Option(None, "--bound", min=1, help="Largest absolute entry"),
) -> None:
    """Print every B with B^T G B = diag(target); exit 1 when there is none."""
    with usage_errors("find-matrix"):
        result = FindMatrixQuery().execute(parse_gram(gram), parse_vector(target), bound)
    for m in result.matrices:
        typer.echo(str(m))
    if not result.matrices:
        console.print(f"no matrix with entries up to {result.bound}", highlight=False)
        raise typer.Exit(code=EXIT_FALSE)


def reduce_forms(
    det: Optional[int] = typer.Option(None, "--det", min=1, help="Determinant ac - b^2"),
    form: Optional[str] = typer.Option(None, "--form", help="Reduce one form 'a,2b,c' instead"),
) -> None:
    """List reduced primitive forms a x^2 + 2b xy + c y^2, printed as (a,2b,c)."""
    query = ReduceFormsQuery()
    with usage_errors("reduce-forms"):
        if form is not None:
            a, two_b, c = parse_vector(form)
            result = query.reduce(BinaryForm(a, two_b, c))
            typer.echo(f"{result.reduced}  U = {result.witness}")
            return
        if det is None:
            raise ValueError("give --det or --form")
        forms = query.execute(det)
    for f in forms:
        typer.echo(str(f))


def check_ecs(
    matrix: str = typer.Option(..., "--matrix", "-B"),
    reps: Optional[str] = typer.Option(None, "--reps", help="'e<j>, lo..hi' or vectors '0,0;1,0'"),
) -> None:
    """Check an exact covering system; exit 1 when the representatives do not cover exactly."""
    with usage_errors("check-ecs"):
        b = parse_matrix(matrix)
        result = CheckEcsQuery().execute(b, parse_shifts(reps, b) if reps else None)
    typer.echo(f"det = {result.determinant}")
    if result.simple is not None:
        typer.echo(f"simple covering: adjugate column {result.simple.j}")
    elif reps is None:
        typer.echo("not a simple covering matrix")
    if result.shift_range is not None:
        lo, hi = result.shift_range
        typer.echo(f"representatives: i*e{result.simple.j} for i = {lo}..{hi}")
    if result.canonical is not None:
        typer.echo(f"canonical cosets: {format_shifts(result.canonical)}")
    typer.echo("exact cover" if result.exact else "not an exact cover")
    if not result.exact:
        raise typer.Exit(code=EXIT_FALSE)


def register(app: typer.Typer) -> None:
    app.command("expand")(expand)
    app.command("find-matrix")(find_matrix)
    app.command("reduce-forms")(reduce_forms)
    app.command("check-ecs")(check_ecs)
