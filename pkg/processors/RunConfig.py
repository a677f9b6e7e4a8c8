import json
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

import config
from errors import ConfigError


class RunConfig(BaseModel):
    """
    Settings of one expert-iteration run.

    `problems` are JSONL files of mutation records. Endpoints follow `GeneratorConfig`;
    `verifier` is `toy` or `repl` (the REPL backend is reached through VERIFIER_CMD/VERIFIER_ADDR).
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    problems: List[str]
    holdout: int = 3000
    iterations: int = 56
    batch_size: int = 10000
    single_pass: bool = True
    alpha: float = config.ALPHA
    n_propose: int = 1
    n_prove: int = 1
    seed: int = 0
    hook: Optional[str] = None
    hook_fail_fast: bool = False
    eval_every: int = 0
    eval_limit: Optional[int] = None
    proposer: Optional[str] = config.PROPOSER_ADDR
    prover: Optional[str] = config.PROVER_ADDR
    temperature: float = config.TEMPERATURE
    max_tokens: int = config.MAX_TOKENS
    verifier: str = "toy"
    toy_bound: int = config.TOY_BOUND
    timeout_s: float = config.TIMEOUT_S
    parallelism: int = Field(default=config.PARALLELISM, ge=1)

    @field_validator("alpha")
    @classmethod
    def _unit_alpha(cls, v):
        if not 0.0 <= v <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        return v

    @field_validator("holdout", "eval_every")
    @classmethod
    def _non_negative(cls, v):
        if v < 0:
            raise ValueError("must be non-negative")
        return v

    @field_validator("iterations", "batch_size", "n_propose", "n_prove", "toy_bound")
    @classmethod
    def _positive(cls, v):
        if v <= 0:
            raise ValueError("must be positive")
        return v

    @field_validator("verifier")
    @classmethod
    def _backend(cls, v):
        if v not in ("toy", "repl"):
            raise ValueError("verifier must be 'toy' or 'repl'")
        return v

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")

    @classmethod
    def from_file(cls, path: str, **overrides) -> "RunConfig":
        """
        Raises:
            ConfigError: when the file is missing, not JSON, or fails validation.
        """
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read run config {path}: {e}") from e
        data.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return cls(**data)
        except ValidationError as e:
            raise ConfigError(f"invalid run config {path}: {e}") from e
