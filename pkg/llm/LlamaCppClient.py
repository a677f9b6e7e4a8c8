import logging
from typing import List

from llama_cpp import Llama

from .LLMClient import LLMClient

logger = logging.getLogger(__name__)

# sampling parameters forwarded to Llama.__call__; anything else is generator bookkeeping
CALL_PARAMS = ("temperature", "max_tokens", "seed", "top_p", "stop")


def completion_text(out) -> str:
    """Text of a llama.cpp completion (dict with `choices`, or a plain string)."""
    if isinstance(out, str):
        return out
    if isinstance(out, dict):
        choices = out.get("choices") or []
        if choices and isinstance(choices[0].get("text"), str):
            return choices[0]["text"]
        raise ValueError("completion has no text field")
    raise ValueError(f"unexpected completion type: {type(out).__name__}")


class LlamaCppClient(LLMClient):
    """
    Local GGUF model through llama.cpp (`llama:<model.gguf>` endpoints).

    Samples are drawn one at a time, each with its own seed, so `generate(n=3, seed=s)`
    returns the same three texts as three calls with seeds s, s+1, s+2.
    """

    def __init__(self, model_path: str, n_ctx: int = 8192, **kwargs) -> None:
        kwargs.setdefault("verbose", False)
        logger.info("Loading %s (n_ctx=%d)", model_path, n_ctx)
        self._llama = Llama(model_path=model_path, n_ctx=n_ctx, **kwargs)

    def __call__(self, prompt: str, **gen_kwargs) -> str:
        params = {k: v for k, v in gen_kwargs.items() if k in CALL_PARAMS and v is not None}
        return completion_text(self._llama(prompt, **params))

    def generate(self, prompt: str, n: int = 1, seed: int = 0, **kwargs) -> List[str]:
        kwargs.pop("context", None)
        return [self(prompt, **{**kwargs, "seed": (seed + i) % (2 ** 31)}) for i in range(n)]
