import logging
from typing import Iterable, List, Sequence

from generators.ProofScript import ProofScript
from parsers.LeanPrinter import print_problem
from rewards.ProblemOutcome import ProblemOutcome
from rewards.WeightedExample import ExampleKind, WeightedExample
from statements.ExistentialProblem import ExistentialProblem
from utils import write_jsonl

logger = logging.getLogger(__name__)


def _problem_text(problem: ExistentialProblem) -> str:
    return print_problem(problem, with_proof=False)


def build_counterexample_sft(outcomes: Sequence[ProblemOutcome]) -> List[WeightedExample]:
    """One example per candidate, weighted by its combined reward. Zero weights are kept."""
    examples = []
    for o in outcomes:
        examples.append(
            WeightedExample(
                kind=ExampleKind.COUNTEREXAMPLE,
                problem=_problem_text(o.record.mutated),
                witness=o.candidate.witness,
                completion=o.candidate.reasoning,
                weight=o.reward.r,
                alpha=o.reward.alpha,
                provenance={
                    "problem_id": o.problem_id,
                    "seed": o.record.seed,
                    "drop_index": o.record.drop_index,
                    "v_M": o.v_M,
                    "v_H": o.v_H,
                    "extraction_error": o.candidate.error,
                },
            )
        )
    return examples


def _proof_example(o: ProblemOutcome, problem: ExistentialProblem, proof: ProofScript, weight: float):
    return WeightedExample(
        kind=ExampleKind.PROOF,
        problem=_problem_text(problem),
        witness=o.candidate.witness,
        completion=proof.proof,
        weight=weight,
        alpha=o.reward.alpha,
        provenance={
            "problem_id": problem.name,
            "mutation_id": o.problem_id,
            "target": str(proof.target),
            "seed": o.record.seed,
            "proof_lines": proof.proof_lines,
            "proof_chars": proof.proof_chars,
            "header_rewritten": proof.header_rewritten,
        },
    )


def build_proof_sft(outcomes: Sequence[ProblemOutcome]) -> List[WeightedExample]:
    """
    Verified proofs only. A proof of the mutated problem is weighted r_M, a proof of the
    dropped-hypothesis problem r_H; the latter is prompted with the dropped statement.
    """
    examples = []
    for o in outcomes:
        if o.v_M and o.proof_M is not None:
            examples.append(_proof_example(o, o.record.mutated, o.proof_M, o.reward.r_M))
        if o.v_H and o.proof_H is not None:
            examples.append(_proof_example(o, o.record.dropped, o.proof_H, o.reward.r_H))
    return examples


def build_retrain_set(examples: Iterable[WeightedExample]) -> List[WeightedExample]:
    """Verified mutated-problem proofs of a whole run, with unit weight."""
    out = []
    for ex in examples:
        if ex.kind == ExampleKind.PROOF and ex.provenance.get("target") == "mutated":
            out.append(ex.model_copy(update={"weight": 1.0}))
    return out


def nonzero(examples: Iterable[WeightedExample]) -> List[WeightedExample]:
    return [ex for ex in examples if not ex.zero_weight]


def write_examples(examples: Iterable[WeightedExample], path: str) -> int:
    count = write_jsonl((ex.to_dict() for ex in examples), path)
    logger.info("Wrote %d examples to %s", count, path)
    return count


def load_examples(path: str) -> List[WeightedExample]:
    from utils import read_jsonl
    rows = []
    for row in read_jsonl(path):
        prov = dict(row.get("provenance") or {})
        prov.pop("zero_weight", None)
        rows.append(WeightedExample(**{**row, "provenance": prov}))
    return rows
