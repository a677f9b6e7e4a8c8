import logging
from collections import defaultdict
from typing import Dict, List, Tuple

from utils import read_jsonl
from .LLMClient import LLMClient

logger = logging.getLogger(__name__)


class MockClient(LLMClient):
    """
    Scripted responses for offline runs, read from JSONL rows `{problem_id, role, response}`.

    Several rows for the same (problem id, role) are served in turn by sample index.
    `{witness}` in a scripted response is replaced by the witness the prompt was built with.
    Problems missing from the script get an empty response.
    """

    def __init__(self, script: Dict[Tuple[str, str], List[str]], role: str = None):
        self.script = script
        self.role = role

    @classmethod
    def from_file(cls, path: str, role: str = None) -> "MockClient":
        script = defaultdict(list)
        for row in read_jsonl(path):
            script[(row["problem_id"], row["role"])].append(row["response"])
        logger.info("Loaded mock script %s (%d entries)", path, len(script))
        return cls(dict(script), role=role)

    def __call__(self, prompt: str, **kwargs) -> str:
        return self.generate(prompt, n=1, **kwargs)[0]

    def generate(self, prompt: str, n: int = 1, seed: int = 0, **kwargs) -> List[str]:
        context = kwargs.get("context") or {}
        role = context.get("role", self.role)
        responses = self.script.get((context.get("problem_id"), role))
        if not responses:
            logger.debug("no scripted response for %s/%s", context.get("problem_id"), role)
            return [""] * n
        sample0 = context.get("sample_index", 0)
        out = []
        for i in range(n):
            text = responses[(sample0 + i) % len(responses)]
            if "{witness}" in text:
                text = text.replace("{witness}", context.get("witness") or "")
            out.append(text)
        return out
