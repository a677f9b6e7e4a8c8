from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from statements.Term import Fixity, Term, TermKind, free_variables
from statements.TheoremStatement import Binder


class ProblemKind(str, Enum):
    MUTATED = "mutated"
    DROPPED = "dropped-hypothesis"

    def __str__(self):
        return self.value


class BodyForm(str, Enum):
    CONJUNCTION = "conjunction"
    IMPLICATION = "implication"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, text: str) -> "BodyForm":
        aliases = {"conj": cls.CONJUNCTION, "∧": cls.CONJUNCTION, "impl": cls.IMPLICATION, "→": cls.IMPLICATION}
        if text in aliases:
            return aliases[text]
        return cls(text)


class ProblemProvenance(BaseModel):
    model_config = ConfigDict(frozen=True)

    seed: Optional[str] = None
    drop_index: Optional[int] = None
    form: BodyForm = BodyForm.CONJUNCTION
    # set when `a ≠ b` was dropped and the body became `a = b`
    double_negation_eliminated: bool = False


class ExistentialProblem(BaseModel):
    """An existential counterexample problem `∃ binders, body` with its origin."""

    model_config = ConfigDict(frozen=True)

    name: str
    binders: Tuple[Binder, ...] = ()
    body: Term
    kind: ProblemKind = ProblemKind.MUTATED
    provenance: ProblemProvenance = ProblemProvenance()

    @model_validator(mode="after")
    def _check_dropped_body(self):
        if self.kind == ProblemKind.DROPPED and not is_negation_like(self.body, self.provenance):
            raise ValueError("a dropped-hypothesis body must be a negation")
        return self

    def binder_names(self):
        return [b.name for b in self.binders]

    def out_of_scope(self, local_names) -> set:
        """Names of the seed's local context used by the body but not bound by the problem."""
        return (free_variables(self.body) & set(local_names)) - set(self.binder_names())

    @property
    def id(self) -> str:
        return self.name

    def __str__(self):
        from parsers.LeanPrinter import print_problem
        return print_problem(self)


def is_negation_like(body: Term, provenance: ProblemProvenance) -> bool:
    if body.kind == TermKind.NOTATION and body.fixity == Fixity.PREFIX and body.text == "¬":
        return True
    if body.is_op("≠"):
        return True
    return provenance.double_negation_eliminated and body.is_op("=")
