from abc import ABC, abstractmethod
from typing import List


class LLMClient(ABC):
    """Interface for LLM wrappers."""

    @abstractmethod
    def __call__(self, prompt: str, **kwargs) -> str:
        """Return the raw text output from the model."""
        raise NotImplementedError

    def generate(self, prompt: str, n: int = 1, seed: int = 0, **kwargs) -> List[str]:
        """
        Return `n` sampled completions. Sample i is drawn with seed `seed + i`.

        Clients that can batch samples override this; `context` (problem id, role, witness)
        is only meaningful to scripted clients and is dropped here.
        """
        kwargs.pop("context", None)
        return [self(prompt, seed=seed + i, **kwargs) for i in range(n)]
