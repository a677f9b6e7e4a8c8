import glob
import logging
import os
from typing import Iterator, List

from loaders.AbstractLoader import AbstractLoader
from parsers.LeanParser import SkipRecord, SourceUnit, parse_source
from statements.TheoremStatement import TheoremStatement

logger = logging.getLogger(__name__)


def lean_files(paths: List[str]) -> List[str]:
    """Expand directories into their `.lean` files (recursively, sorted); files pass through."""
    files = []
    for path in paths:
        if os.path.isdir(path):
            files += sorted(glob.glob(os.path.join(path, "**", "*.lean"), recursive=True))
        else:
            files.append(path)
    return files


def parse_corpus(path: str) -> SourceUnit:
    """Parse one `.lean` file. Unsupported declarations become skip records."""
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    unit = parse_source(text, file=path)
    logger.info("Parsed %s: %d theorems, %d skipped", path, len(unit.theorems), len(unit.skipped))
    return unit


class LeanFileLoader(AbstractLoader[TheoremStatement]):
    """
    Loads theorem statements from `.lean` files or directories of them.

    Theorem names are unique per file; across files the first occurrence wins.
    """

    def __init__(self, paths: List[str]):
        super().__init__()
        self.files = lean_files(paths)
        self.units: List[SourceUnit] = []
        self._parsed = False

    def item_id(self, item: TheoremStatement) -> str:
        return item.name

    def parse(self) -> List[SourceUnit]:
        if not self._parsed:
            self.units = [parse_corpus(f) for f in self.files]
            self._parsed = True
        return self.units

    @property
    def skipped(self) -> List[SkipRecord]:
        return [s for unit in self.parse() for s in unit.skipped]

    def _iter_source(self) -> Iterator[TheoremStatement]:
        for unit in self.parse():
            yield from unit.theorems
