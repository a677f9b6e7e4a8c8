import logging
from typing import Iterator

from errors import MutagenError
from loaders.AbstractLoader import AbstractLoader
from mutators.MutationRecord import MutationRecord
from utils import read_jsonl

logger = logging.getLogger(__name__)


class MutationRecordLoader(AbstractLoader[MutationRecord]):
    """Loads mutation records from the JSONL written by the `mutate` command."""

    def __init__(self, path: str):
        super().__init__()
        self.path = path
        self.errors = 0

    def item_id(self, item: MutationRecord) -> str:
        return item.id

    def _iter_source(self) -> Iterator[MutationRecord]:
        for row in read_jsonl(self.path):
            try:
                yield MutationRecord.from_dict(row)
            except (MutagenError, KeyError, ValueError) as e:
                self.errors += 1
                logger.warning("Skipping record %s: %s", row.get("mutated_name", "?"), e)
