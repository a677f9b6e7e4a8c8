import json
import logging
import os
import threading
from typing import Dict, Optional, Tuple

from utils import dump_json_line

logger = logging.getLogger(__name__)

Key = Tuple[str, str, int, int]


class ResponseArchive:
    """
    Raw generator responses under `<directory>/<role>.jsonl`, keyed by
    (role, problem id, seed, sample index). Lookups let a resumed run skip the endpoint.
    """

    def __init__(self, directory: str):
        self.directory = directory
        self._lock = threading.Lock()
        self._rows: Dict[Key, str] = {}
        os.makedirs(directory, exist_ok=True)
        self._load()

    def _path(self, role: str) -> str:
        return os.path.join(self.directory, f"{role}.jsonl")

    def _load(self):
        for fname in sorted(os.listdir(self.directory)):
            if not fname.endswith(".jsonl"):
                continue
            with open(os.path.join(self.directory, fname), encoding="utf-8") as f:
                for line in f:
                    try:
                        row = json.loads(line)
                        key = (row["role"], row["problem_id"], int(row["seed"]), int(row["index"]))
                    except (json.JSONDecodeError, KeyError, TypeError, ValueError):
                        # torn last line of a killed run
                        continue
                    self._rows[key] = row["response"]
        if self._rows:
            logger.info("Archive %s: %d cached responses", self.directory, len(self._rows))

    def get(self, role: str, problem_id: str, seed: int, index: int) -> Optional[str]:
        with self._lock:
            return self._rows.get((str(role), problem_id, seed, index))

    def put(self, role: str, problem_id: str, seed: int, index: int, response: str, prompt: str = None):
        row = {"role": str(role), "problem_id": problem_id, "seed": seed, "index": index, "response": response}
        if prompt is not None:
            row["prompt"] = prompt
        with self._lock:
            self._rows[(str(role), problem_id, seed, index)] = response
            with open(self._path(str(role)), "a", encoding="utf-8") as f:
                f.write(dump_json_line(row) + "\n")

    def __len__(self):
        return len(self._rows)
