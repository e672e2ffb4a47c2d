import typer

from api.routes import corpus_routes, lattice_routes, scan_routes, series_routes
from core.config import get_settings
from core.logging import setup_logging

settings = get_settings()

app = typer.Typer(
    name=settings.APP_NAME,
    help="Exact q-series, theta identities and lattice-sum expansions.",
    no_args_is_help=True,
    add_completion=False,
)


@app.callback()
def main(
    log_level: str = typer.Option(settings.LOG_LEVEL, "--log-level", help="structlog level"),
) -> None:
    setup_logging(log_level)


series_routes.register(app)
corpus_routes.register(app)
lattice_routes.register(app)
scan_routes.register(app)

if __name__ == "__main__":
    app()
