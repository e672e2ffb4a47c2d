from pathlib import Path
from typing import List, Optional, Sequence

from core.config import get_settings
from core.logging import get_logger
from domain.exceptions import RecordNotFoundError
from domain.models.identity import IdentityRecord
from infrastructure.text_formats import parse_record

from .base import FileRepository

logger = get_logger(__name__)


class CorpusRepository(FileRepository[IdentityRecord]):
    def __init__(self, directory: Optional[Path] = None):
        super().__init__(
            directory or get_settings().CORPUS_DIR,
            parse=parse_record,
            key=lambda record: record.id,
        )

    def get_record(self, id: str) -> IdentityRecord:
        record = self.get(id)
        if record is None:
            raise RecordNotFoundError(f"no corpus record with id '{id}'")
        return record

    def get_many(self, ids: Sequence[str]) -> List[IdentityRecord]:
        """Records in the order asked for; unknown ids raise RecordNotFoundError."""
        return [self.get_record(i) for i in ids]

    def with_tag(self, tag: str) -> List[IdentityRecord]:
        return [r for r in self.get_all() if tag in r.tags]
