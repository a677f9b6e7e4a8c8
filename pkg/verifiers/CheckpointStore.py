import json
import logging
import os
import threading
from typing import Dict, Optional

from pydantic import ValidationError

from utils import dump_json_line
from verifiers.ProofJob import ProofJob, VerificationResult, VerificationStatus

logger = logging.getLogger(__name__)


class CheckpointStore:
    """
    Append-only JSONL of verification results, keyed by job id.

    A stored result is reused only when its fingerprint matches the job and its status is
    terminal; protocol errors are always retried. Writes are serialized.
    """

    def __init__(self, path: str):
        self.path = path
        self.results: Dict[str, VerificationResult] = {}
        self.lock = threading.Lock()
        if os.path.exists(path):
            self._load()

    def _load(self):
        bad = 0
        with open(self.path, "r", encoding="utf-8") as f:
            for line in f:
                if not line.strip():
                    continue
                try:
                    result = VerificationResult.from_dict(json.loads(line))
                except (json.JSONDecodeError, ValidationError, TypeError):
                    # a torn last line after a kill
                    bad += 1
                    continue
                self.results[result.id] = result
        logger.info("Loaded %d checkpointed results from '%s' (%d unreadable lines)", len(self.results), self.path, bad)

    def lookup(self, job: ProofJob) -> Optional[VerificationResult]:
        result = self.results.get(job.id)
        if result is None or result.status == VerificationStatus.PROTOCOL_ERROR:
            return None
        if result.fingerprint != job.fingerprint():
            return None
        return result

    def record(self, result: VerificationResult) -> None:
        with self.lock:
            self.results[result.id] = result
            directory = os.path.dirname(self.path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as f:
                f.write(dump_json_line(result.to_dict()) + "\n")
                f.flush()
