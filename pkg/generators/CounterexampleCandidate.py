from typing import Optional

from pydantic import BaseModel, ConfigDict


class CounterexampleCandidate(BaseModel):
    """A proposed witness for one existential problem. Failed extractions are kept with `error` set."""

    model_config = ConfigDict(frozen=True)

    problem_id: str
    sample_index: int = 0
    seed: int = 0
    reasoning: str
    witness: Optional[str] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return bool(self.witness)

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")
