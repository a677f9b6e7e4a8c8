from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict


class ProofTarget(str, Enum):
    MUTATED = "mutated"
    DROPPED = "dropped"

    def __str__(self):
        return self.value


class ProofScript(BaseModel):
    """
    A proof produced by the prover for one problem and witness.

    `statement` is the problem's own declaration (up to `:=`); `proof` is the text after it.
    `header_rewritten` records that the response declared a different theorem.
    """

    model_config = ConfigDict(frozen=True)

    problem_id: str
    target: ProofTarget
    sample_index: int = 0
    statement: str
    proof: Optional[str] = None
    raw: str = ""
    header_rewritten: bool = False
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.proof is not None

    @property
    def proof_lines(self) -> int:
        return len(self.proof.splitlines()) if self.proof else 0

    @property
    def proof_chars(self) -> int:
        return len(self.proof) if self.proof else 0

    def to_job(self, job_id: str, limits=None):
        from verifiers.ProofJob import ProofJob, ProofLimits
        return ProofJob(id=job_id, statement=self.statement, proof=self.proof, limits=limits or ProofLimits())
