from typing import Dict, Iterator, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from extractors.ProofStep import ProofState
from loaders.AbstractLoader import AbstractLoader
from utils import read_jsonl


class ContextRow(BaseModel):
    name: str
    type: str


class ProofStateRow(BaseModel):
    """One line of a proof-state file: the goals around step `step_index` of proof `proof_id`."""

    model_config = ConfigDict(frozen=True)

    proof_id: str
    step_index: int
    before_goal: str
    after_goal: str = ""
    context: List[ContextRow] = []

    def to_state(self) -> ProofState:
        return ProofState(
            before_goal=self.before_goal,
            after_goal=self.after_goal,
            context=tuple((c.name, c.type) for c in self.context),
        )


class ProofStateLoader(AbstractLoader[ProofStateRow]):
    def __init__(self, path: Optional[str]):
        super().__init__()
        self.path = path

    def item_id(self, item: ProofStateRow) -> str:
        return f"{item.proof_id}#{item.step_index}"

    def _iter_source(self) -> Iterator[ProofStateRow]:
        if not self.path:
            return
        for row in read_jsonl(self.path):
            yield ProofStateRow.model_validate(row)

    def index(self) -> Dict[Tuple[str, int], ProofState]:
        """(proof_id, step_index) -> state; the first row for a step wins."""
        return {(r.proof_id, r.step_index): r.to_state() for r in self.iter_items()}
