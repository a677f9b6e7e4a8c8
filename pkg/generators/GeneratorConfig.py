from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, field_validator

import config


class GeneratorRole(str, Enum):
    PROPOSER = "proposer"
    PROVER = "prover"

    def __str__(self):
        return self.value


class GeneratorConfig(BaseModel):
    """
    Sampling settings of one generator role.

    `endpoint` is an HTTP address, `llama:<model.gguf>` for a local llama.cpp model, or
    `mock:<script.jsonl>` for scripted responses.
    """

    model_config = ConfigDict(frozen=True)

    role: GeneratorRole
    endpoint: Optional[str] = None
    temperature: float = config.TEMPERATURE
    max_tokens: int = config.MAX_TOKENS
    samples_per_call: int = 1
    retries: int = 3

    @field_validator("temperature")
    @classmethod
    def _non_negative(cls, v):
        if v < 0:
            raise ValueError("temperature must be non-negative")
        return v

    @field_validator("max_tokens", "samples_per_call")
    @classmethod
    def _positive(cls, v):
        if v <= 0:
            raise ValueError("must be positive")
        return v
