import pytest
from pathlib import Path
from typing import Callable

from typer.testing import CliRunner

from core.config import get_settings
from domain.models.identity import IdentityRecord
from infrastructure.repositories.corpus_repository import CorpusRepository
from infrastructure.text_formats import parse_record


@pytest.fixture(scope="session")
def corpus() -> CorpusRepository:
    """The packaged corpus, loaded once per session."""
    return CorpusRepository(get_settings().CORPUS_DIR)


@pytest.fixture
def record(corpus: CorpusRepository) -> Callable[[str], IdentityRecord]:
    return corpus.get_record


@pytest.fixture
def record_from_text() -> Callable[[str], IdentityRecord]:
    def build(text: str) -> IdentityRecord:
        return parse_record(text, "<test>")
    return build


@pytest.fixture
def corpus_dir(tmp_path: Path) -> Callable[..., Path]:
    """Write record texts into a fresh directory and return it."""
    def write(*texts: str) -> Path:
        for index, text in enumerate(texts):
            (tmp_path / f"r{index:02d}.txt").write_text(text, encoding="utf-8")
        return tmp_path
    return write


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner(mix_stderr=False)


@pytest.fixture(autouse=True)
def fresh_settings():
    """Drop cached settings around each test."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()

