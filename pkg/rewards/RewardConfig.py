from fractions import Fraction

from pydantic import BaseModel, ConfigDict, field_validator

import config


class RewardConfig(BaseModel):
    """Trade-off between the mutated-proof reward (α) and the dropped-hypothesis reward (1 − α)."""

    model_config = ConfigDict(frozen=True)

    alpha: float = config.ALPHA

    @field_validator("alpha")
    @classmethod
    def _unit_interval(cls, v):
        if not 0.0 <= v <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        return v

    @property
    def exact_alpha(self) -> Fraction:
        # from the decimal text, so that 1 - 0.8 is exactly 1/5
        return Fraction(repr(float(self.alpha)))

    @property
    def single_reward(self) -> bool:
        return self.alpha == 1.0
