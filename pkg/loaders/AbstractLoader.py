import logging
from abc import ABC, abstractmethod
from typing import Generic, Iterator, List, Set, TypeVar

T = TypeVar("T")

logger = logging.getLogger(__name__)


class AbstractLoader(ABC, Generic[T]):
    """
    Abstract base class for loading items (theorems, mutation records, proof states) from
    files on disk.

    Responsibilities:
    - Yield every item of the source once, in source order
    - Drop later items whose id repeats an earlier one
    - Count what was dropped, so callers can report it
    """

    def __init__(self):
        self.seen_ids: Set[str] = set()
        self.duplicates = 0

    def load_all(self) -> List[T]:
        return list(self.iter_items())

    def iter_items(self) -> Iterator[T]:
        """Yield items one at a time; the first occurrence of an id wins."""
        self.seen_ids.clear()
        self.duplicates = 0
        for item in self._iter_source():
            item_id = self.item_id(item)
            if item_id in self.seen_ids:
                self.duplicates += 1
                logger.warning("Duplicate item '%s' ignored", item_id)
                continue
            self.seen_ids.add(item_id)
            yield item

    @abstractmethod
    def item_id(self, item: T) -> str:
        pass

    @abstractmethod
    def _iter_source(self) -> Iterator[T]:
        """Every item of the data source, duplicates included."""
        pass
