from pydantic import BaseModel, ConfigDict

from statements.ExistentialProblem import BodyForm, ExistentialProblem, ProblemKind


class MutationRecord(BaseModel):
    """The mutated problem and its dropped-hypothesis companion for one (seed, j) pair."""

    model_config = ConfigDict(frozen=True)

    seed: str
    drop_index: int
    form: BodyForm
    mutated: ExistentialProblem
    dropped: ExistentialProblem

    @property
    def id(self) -> str:
        return self.mutated.name

    def to_dict(self) -> dict:
        from parsers.LeanPrinter import print_problem
        return {
            "seed": self.seed,
            "drop_index": self.drop_index,
            "form": str(self.form),
            "mutated_name": self.mutated.name,
            "mutated_lean": print_problem(self.mutated),
            "dropped_name": self.dropped.name,
            "dropped_lean": print_problem(self.dropped),
            "provenance": {
                "seed": self.seed,
                "drop_index": self.drop_index,
                "form": str(self.form),
                "double_negation_eliminated": self.dropped.provenance.double_negation_eliminated,
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MutationRecord":
        from parsers.LeanParser import parse_problem
        from statements.ExistentialProblem import ProblemProvenance

        form = BodyForm(data["form"])
        prov = data.get("provenance") or {}
        base = ProblemProvenance(seed=data["seed"], drop_index=data["drop_index"], form=form)
        dropped_prov = base.model_copy(
            update={"double_negation_eliminated": bool(prov.get("double_negation_eliminated", False))}
        )
        return cls(
            seed=data["seed"],
            drop_index=data["drop_index"],
            form=form,
            mutated=parse_problem(data["mutated_lean"], ProblemKind.MUTATED, base),
            dropped=parse_problem(data["dropped_lean"], ProblemKind.DROPPED, dropped_prov),
        )
