from enum import Enum
from typing import FrozenSet, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from statements.Term import Term, free_variables


class BinderMode(str, Enum):
    EXPLICIT = "explicit"
    IMPLICIT = "implicit"
    INSTANCE = "instance-implicit"

    def __str__(self):
        return self.value


class SourceTag(str, Enum):
    LIBRARY = "library"
    EXTRACTED = "extracted"
    SYNTHETIC = "synthetic"

    def __str__(self):
        return self.value


class Binder(BaseModel):
    """A universally quantified variable of a theorem, e.g. `(x : X)`."""

    model_config = ConfigDict(frozen=True)

    name: str
    type: Term
    mode: BinderMode = BinderMode.EXPLICIT
    # `[Fintype α]` gets a synthesized `inst<i>` name and prints without it
    synthesized: bool = False

    @model_validator(mode="after")
    def _check_name(self):
        if not self.name:
            raise ValueError("binder name must be nonempty")
        return self


class Hypothesis(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    proposition: Term
    index: int
    # arrow antecedent without a name in the source (`a0`, `a1`, …)
    anonymous: bool = False


class Provenance(BaseModel):
    model_config = ConfigDict(frozen=True)

    source: SourceTag = SourceTag.LIBRARY
    seed: Optional[str] = None
    step_id: Optional[str] = None
    removed: Tuple[str, ...] = ()
    best_effort: bool = False


class HypothesisDependents(BaseModel):
    model_config = ConfigDict(frozen=True)

    hypotheses: FrozenSet[int] = frozenset()
    conclusion: bool = False
    binders: FrozenSet[str] = frozenset()

    def is_empty(self) -> bool:
        return not self.hypotheses and not self.conclusion and not self.binders


class TheoremStatement(BaseModel):
    """
    A parsed universal theorem: binders, ordered hypotheses, conclusion and an optional proof.

    The proof is kept as normalized text (`by` followed by two-space indented tactic lines),
    never as a tree.
    """

    model_config = ConfigDict(frozen=True)

    name: str
    binders: Tuple[Binder, ...] = ()
    hypotheses: Tuple[Hypothesis, ...] = ()
    conclusion: Term
    proof: Optional[str] = None
    provenance: Provenance = Field(default_factory=Provenance)
    keyword: str = "theorem"
    modifiers: str = ""

    @model_validator(mode="after")
    def _check_indices(self):
        for i, h in enumerate(self.hypotheses):
            if h.index != i:
                raise ValueError(f"hypothesis '{h.name}' has index {h.index}, expected {i}")
        return self

    def local_names(self) -> List[str]:
        return [b.name for b in self.binders] + [h.name for h in self.hypotheses]

    def hypothesis(self, name: str) -> Optional[Hypothesis]:
        for h in self.hypotheses:
            if h.name == name:
                return h
        return None

    def hypothesis_dependents(self, j: int) -> HypothesisDependents:
        """
        Later hypotheses, binders and the conclusion that mention hypothesis `j` by name.

        Raises:
            IndexError: if `j` is not a hypothesis index.
        """
        if not 0 <= j < len(self.hypotheses):
            raise IndexError(f"hypothesis index {j} out of range (0..{len(self.hypotheses) - 1})")
        name = self.hypotheses[j].name
        later = frozenset(
            h.index for h in self.hypotheses[j + 1:] if name in free_variables(h.proposition)
        )
        binders = frozenset(b.name for b in self.binders if name in free_variables(b.type))
        return HypothesisDependents(
            hypotheses=later,
            conclusion=name in free_variables(self.conclusion),
            binders=binders,
        )

    def without_hypotheses(self, names) -> "TheoremStatement":
        """Copy with the named hypotheses removed and indices renumbered; removals go to provenance."""
        names = set(names)
        if not names:
            return self
        kept = [h for h in self.hypotheses if h.name not in names]
        hyps = tuple(h.model_copy(update={"index": i}) for i, h in enumerate(kept))
        removed = tuple(h.name for h in self.hypotheses if h.name in names)
        prov = self.provenance.model_copy(update={"removed": self.provenance.removed + removed})
        return self.model_copy(update={"hypotheses": hyps, "provenance": prov})

    def structural_key(self) -> tuple:
        """Everything but provenance; two statements with equal keys print identically."""
        return (
            self.keyword,
            self.modifiers,
            self.name,
            self.binders,
            self.hypotheses,
            self.conclusion,
            self.proof,
        )

    def same_structure(self, other: "TheoremStatement") -> bool:
        return self.structural_key() == other.structural_key()

    def shape_key(self) -> tuple:
        """Binders, hypotheses and conclusion without names of the theorem; used for dedup."""
        return (
            tuple((b.name, b.type, b.mode) for b in self.binders),
            tuple((h.name, h.proposition) for h in self.hypotheses),
            self.conclusion,
        )

    def to_dict(self) -> dict:
        from parsers.LeanPrinter import print_theorem
        return {
            "name": self.name,
            "lean": print_theorem(self),
            "provenance": self.provenance.model_dump(mode="json"),
        }

    def __str__(self):
        from parsers.LeanPrinter import print_theorem
        return print_theorem(self)
