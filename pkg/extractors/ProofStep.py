from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict

from statements.Term import Term


class StepStyle(str, Enum):
    DECLARATIVE = "declarative"
    PROCEDURAL = "procedural"

    def __str__(self):
        return self.value


class ContextEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    type: Term


class ProofState(BaseModel):
    """Goal and local context recorded by an external checker session around one step."""

    model_config = ConfigDict(frozen=True)

    before_goal: str
    after_goal: str = ""
    context: Tuple[Tuple[str, str], ...] = ()


class ProofStep(BaseModel):
    """
    One top-level step of a tactic proof.

    Declarative steps (`have`, `suffices`) carry their goal and a snapshot of the facts
    established by earlier declarative steps. `context_altered` is set once an earlier step
    changed the local context in a way the statement alone cannot reconstruct.
    """

    model_config = ConfigDict(frozen=True)

    style: StepStyle
    index: int
    text: str
    tactic: str
    name: Optional[str] = None
    goal: Optional[Term] = None
    context: Tuple[ContextEntry, ...] = ()
    context_altered: bool = False
    states: Optional[ProofState] = None

    @property
    def declarative(self) -> bool:
        return self.style == StepStyle.DECLARATIVE
