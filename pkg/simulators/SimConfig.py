import json

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

import config
from errors import ConfigError


class Difficulty(BaseModel):
    """Normal distribution of problem difficulties."""

    model_config = ConfigDict(frozen=True)

    mean: float
    std: float = 1.0

    @field_validator("std")
    @classmethod
    def _non_negative(cls, v):
        if v < 0:
            raise ValueError("std must be non-negative")
        return v


class SimConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    n_problems: int = 256
    n_eval: int = 256
    iterations: int = 56
    alpha: float = config.ALPHA
    eta: float = 0.35
    seed: int = 0
    initial_skill: float = 0.0
    d_M: Difficulty = Difficulty(mean=3.0, std=1.0)
    d_H: Difficulty = Difficulty(mean=0.0, std=1.0)
    attempts: int = 9

    @field_validator("alpha")
    @classmethod
    def _unit_alpha(cls, v):
        if not 0.0 <= v <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        return v

    @field_validator("eta")
    @classmethod
    def _non_negative_eta(cls, v):
        if v < 0:
            raise ValueError("eta must be non-negative")
        return v

    @field_validator("n_problems", "n_eval", "iterations", "attempts")
    @classmethod
    def _positive(cls, v):
        if v <= 0:
            raise ValueError("must be positive")
        return v

    @field_validator("attempts")
    @classmethod
    def _room_for_pass9(cls, v):
        if v < 9:
            raise ValueError("pass@9 needs at least 9 attempts")
        return v

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")

    @classmethod
    def from_file(cls, path: str, **overrides) -> "SimConfig":
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read simulation config {path}: {e}") from e
        data.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return cls(**data)
        except ValidationError as e:
            raise ConfigError(f"invalid simulation config {path}: {e}") from e
