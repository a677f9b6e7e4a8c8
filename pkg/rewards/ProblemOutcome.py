from typing import Optional

from pydantic import BaseModel, ConfigDict

from generators.CounterexampleCandidate import CounterexampleCandidate
from generators.ProofScript import ProofScript
from mutators.MutationRecord import MutationRecord
from rewards.RewardRecord import RewardRecord


class ProblemOutcome(BaseModel):
    """Everything one training problem produced in an iteration: witness, both proofs, their verdicts, reward."""

    model_config = ConfigDict(frozen=True)

    record: MutationRecord
    candidate: CounterexampleCandidate
    proof_M: Optional[ProofScript] = None
    proof_H: Optional[ProofScript] = None
    reward: RewardRecord
    error: Optional[str] = None

    @property
    def problem_id(self) -> str:
        return self.record.id

    @property
    def v_M(self) -> bool:
        return self.reward.v_M

    @property
    def v_H(self) -> bool:
        return self.reward.v_H
