from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, field_validator


class ExampleKind(str, Enum):
    COUNTEREXAMPLE = "counterexample-sft"
    PROOF = "proof-sft"

    def __str__(self):
        return self.value


class WeightedExample(BaseModel):
    """One supervised example with its sample weight; zero-weight examples are kept and flagged."""

    model_config = ConfigDict(frozen=True)

    kind: ExampleKind
    problem: str
    witness: Optional[str] = None
    completion: str
    weight: float
    alpha: float
    provenance: dict = {}

    @field_validator("weight")
    @classmethod
    def _unit_weight(cls, v):
        if not 0.0 <= v <= 1.0:
            raise ValueError("weight must lie in [0, 1]")
        return v

    @property
    def zero_weight(self) -> bool:
        return self.weight == 0

    def to_dict(self) -> dict:
        return {
            "kind": str(self.kind),
            "problem": self.problem,
            "witness": self.witness,
            "completion": self.completion,
            "weight": self.weight,
            "alpha": self.alpha,
            "provenance": dict(self.provenance, zero_weight=self.zero_weight),
        }
