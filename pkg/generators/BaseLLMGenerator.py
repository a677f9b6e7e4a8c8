import logging
from abc import ABC, abstractmethod
from typing import List, Optional

from generators.GeneratorConfig import GeneratorConfig, GeneratorRole
from generators.ResponseArchive import ResponseArchive
from llm.LLMClient import LLMClient

logger = logging.getLogger(__name__)


class BaseLLMGenerator(ABC):
    """
    Base class for the two generator roles.

    The flow for one problem:
    - Build a prompt (defined by subclasses)
    - Reuse archived responses, or sample the missing ones from the LLM
    - Archive the raw responses
    - Parse each response (defined by subclasses)
    """

    role: GeneratorRole

    def __init__(self, llm: LLMClient, cfg: GeneratorConfig, archive: Optional[ResponseArchive] = None):
        self.llm = llm
        self.cfg = cfg
        self.archive = archive

    def sample(self, problem_id: str, prompt: str, n: int, seed: int, **context) -> List[str]:
        """
        `n` raw responses for one prompt. Endpoint failures propagate as EndpointUnavailable.
        """
        cached = [self.archive.get(self.role, problem_id, seed, i) if self.archive else None for i in range(n)]
        missing = [i for i, r in enumerate(cached) if r is None]
        if not missing:
            return cached
        ctx = {"problem_id": problem_id, "role": str(self.role), "sample_index": missing[0], **context}
        fresh = self.llm.generate(
            prompt,
            n=len(missing),
            seed=seed + missing[0],
            temperature=self.cfg.temperature,
            max_tokens=self.cfg.max_tokens,
            context=ctx,
        )
        fresh = list(fresh) + [""] * (len(missing) - len(fresh))
        for i, text in zip(missing, fresh):
            cached[i] = text
            if self.archive:
                self.archive.put(self.role, problem_id, seed, i, text, prompt=prompt)
        logger.debug("%s: %d new responses for %s", self.role, len(missing), problem_id)
        return cached

    @abstractmethod
    def build_prompt(self, *args) -> str:
        """
        Subclasses must implement this to define how to prompt the LLM.
        """
        pass
