from typing import Dict, List

from pydantic import BaseModel, Field, model_validator


class IterationCounts(BaseModel):
    problems: int = 0
    proposed: int = 0
    v_M: int = 0
    v_H: int = 0
    both: int = 0
    neither: int = 0

    @model_validator(mode="after")
    def _consistent(self):
        if self.both > min(self.v_M, self.v_H):
            raise ValueError("both cannot exceed min(v_M, v_H)")
        return self


class ErrorRecord(BaseModel):
    problem_id: str
    stage: str
    message: str


class IterationReport(BaseModel):
    """Outcome of one iteration. `wall_time` is kept out of the serialized report."""

    iteration: int
    counts: IterationCounts
    reward_mass: float
    nonzero_rewards: int
    alpha: float
    datasets: Dict[str, str]
    errors: List[ErrorRecord] = []
    wall_time: float = Field(default=0.0, exclude=True)

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")

    @classmethod
    def from_dict(cls, data: dict) -> "IterationReport":
        return cls(**data)
