from pydantic import BaseModel, ConfigDict


class RewardRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    problem_id: str = ""
    v_M: bool
    v_H: bool
    alpha: float
    r_M: float
    r_H: float
    r: float

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")
