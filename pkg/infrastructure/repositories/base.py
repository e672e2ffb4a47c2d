from pathlib import Path
from typing import Callable, Dict, Generic, List, Optional, TypeVar

from core.logging import get_logger
from domain.exceptions import FormatError

logger = get_logger(__name__)

ModelType = TypeVar("ModelType")


class FileRepository(Generic[ModelType]):
    """
    Read-only store of models kept one per text file in a directory.

    Files are parsed lazily on first access and cached; ``key`` names the
    model attribute used as its id.
    """

    def __init__(
        self,
        directory: Path,
        parse: Callable[[str, str], ModelType],
        key: Callable[[ModelType], str],
        suffix: str = ".txt",
    ):
        self.directory = Path(directory)
        self.parse = parse
        self.key = key
        self.suffix = suffix
        self._items: Optional[Dict[str, ModelType]] = None

    def _load(self) -> Dict[str, ModelType]:
        if self._items is not None:
            return self._items
        if not self.directory.is_dir():
            raise FormatError(f"directory {self.directory} does not exist")
        items: Dict[str, ModelType] = {}
        sources: Dict[str, str] = {}
        for path in sorted(self.directory.glob(f"*{self.suffix}")):
            item = self.parse(path.read_text(encoding="utf-8"), path.name)
            item_id = self.key(item)
            if item_id in items:
                raise FormatError(f"{path.name}: id '{item_id}' already defined in {sources[item_id]}")
            items[item_id] = item
            sources[item_id] = path.name
        logger.info("repository_loaded", directory=str(self.directory), count=len(items))
        self._items = items
        return items

    def get(self, id: str) -> Optional[ModelType]:
        return self._load().get(id)

    def get_all(self) -> List[ModelType]:
        items = self._load()
        return [items[k] for k in sorted(items)]

    def ids(self) -> List[str]:
        return sorted(self._load())
