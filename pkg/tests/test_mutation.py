import time

import pytest

from errors import NotDroppable, OracleUnavailable
from loaders.LeanFileLoader import parse_corpus
from mutators.CheckerUsageOracle import CheckerUsageOracle
from mutators.HypothesisMutator import (
    HypothesisMutator,
    droppable_hypotheses,
    mutate,
    mutate_all,
    negate,
    problem_names,
    prune_redundant,
)
from mutators.MutationRecord import MutationRecord
from mutators.StructuralUsageOracle import StructuralUsageOracle
from parsers.LeanParser import parse_problem, parse_term, parse_theorem
from parsers.LeanPrinter import print_problem, print_term
from statements.ExistentialProblem import BodyForm, ProblemKind
from utils import strip_ws

WORKED_MUTATION = (
    "∃ (x : ℕ → ℤ), (∀ n ≥ 5, x n = x (n - 1) - x (n - 2) + x (n - 3) - x (n - 4)) "
    "∧ x 10 = -267 ∧ x 11 = 211 ∧ x 12 = 375 ∧ x 14 ≠ 523"
)


def test_schema_golden_mutation(schema_seed):
    record = mutate(schema_seed, 0, BodyForm.IMPLICATION, names=("mutated_version", "dropped_hypothesis"))
    assert strip_ws(print_problem(record.mutated, with_proof=False)) == strip_ws(
        "theorem mutated_version : ∃ x : X, H₂ x → C x"
    )
    assert strip_ws(print_problem(record.dropped, with_proof=False)) == strip_ws(
        "theorem dropped_hypothesis : ∃ x : X, ¬ H₁ x"
    )


def test_worked_example_golden_mutation(aime_seed):
    record = mutate(aime_seed, 4, BodyForm.CONJUNCTION)
    assert record.mutated.name == "aimeII_2001_p3_mut_54_drop4"
    assert record.dropped.name == "aimeII_2001_p3_54_drop4"
    expected = f"theorem aimeII_2001_p3_mut_54_drop4 : {WORKED_MUTATION}"
    assert strip_ws(print_problem(record.mutated, with_proof=False)) == strip_ws(expected)
    assert strip_ws(print_problem(record.dropped, with_proof=False)) == strip_ws(
        "theorem aimeII_2001_p3_54_drop4 : ∃ (x : ℕ → ℤ), x 13 = 420"
    )
    assert record.dropped.provenance.double_negation_eliminated


def test_problem_names():
    assert problem_names("aimeII_2001_p3_g4_extracted_54", 4) == ("aimeII_2001_p3_mut_54_drop4", "aimeII_2001_p3_54_drop4")
    assert problem_names("foo", 1) == ("foo_mut_drop1", "foo_drop1")


def test_negate():
    assert print_term(negate(parse_term("a ≠ b"))[0]) == "a = b"
    assert negate(parse_term("a ≠ b"))[1]
    assert print_term(negate(parse_term("a = b"))[0]) == "a ≠ b"
    assert print_term(negate(parse_term("a < b"))[0]) == "¬a < b"


def test_structural_oracle_prunes_unreferenced():
    stmt = parse_theorem("theorem t (P Q : Prop) (h₁ : P) (h₂ : Q) : P := by exact h₁")
    pruned = prune_redundant(stmt, StructuralUsageOracle())
    assert [h.name for h in pruned.hypotheses] == ["h₁"]
    assert pruned.provenance.removed == ("h₂",)


def test_structural_oracle_keeps_context_consumers(aime_seed):
    pruned = prune_redundant(aime_seed, StructuralUsageOracle())
    assert len(pruned.hypotheses) == 5


def test_zero_hypotheses_unchanged():
    stmt = parse_theorem("theorem t : True := by trivial")
    assert prune_redundant(stmt, StructuralUsageOracle()) is stmt
    assert droppable_hypotheses(stmt) == []
    assert mutate_all(stmt) == []


def test_dependent_hypothesis_is_not_droppable():
    stmt = parse_theorem("theorem t (P : Prop) (Q : P → Prop) (h₁ : P) (h₂ : Q h₁) : True := by trivial")
    assert droppable_hypotheses(stmt) == [1]
    with pytest.raises(NotDroppable):
        mutate(stmt, 0)


def test_hypothesis_names_elsewhere_block_other_drops():
    stmt = parse_theorem(
        "theorem t (P R : Prop) (Q : P → Prop) (h₁ : P) (h₂ : Q h₁) (h₃ : R) : True := by trivial"
    )
    assert droppable_hypotheses(stmt) == [1]
    assert [r.drop_index for r in mutate_all(stmt)] == [1]


def test_worked_example_droppable(aime_seed):
    assert droppable_hypotheses(aime_seed) == [0, 1, 2, 3, 4]
    records = mutate_all(aime_seed)
    assert len(records) == 5
    for r in records:
        assert r.mutated.out_of_scope(aime_seed.local_names()) == set()
        assert r.dropped.out_of_scope(aime_seed.local_names()) == set()


def test_single_hypothesis_gives_bare_conclusion():
    stmt = parse_theorem("theorem t (n : ℕ) (h : n > 3) : n ≠ 0 := by omega")
    record = mutate(stmt, 0)
    assert print_term(record.mutated.body) == "n ≠ 0"


def test_mutation_leaves_other_hypotheses_untouched(aime_seed):
    record = mutate(aime_seed, 1)
    printed = print_problem(record.mutated)
    for h in aime_seed.hypotheses:
        if h.index != 1:
            assert print_term(h.proposition) in printed


def test_record_round_trip(aime_seed):
    record = mutate(aime_seed, 4)
    again = MutationRecord.from_dict(record.to_dict())
    assert print_problem(again.mutated) == print_problem(record.mutated)
    assert again.dropped.provenance.double_negation_eliminated


def test_printed_problems_reparse(aime_seed):
    for record in mutate_all(aime_seed):
        for problem in (record.mutated, record.dropped):
            parse_problem(print_problem(problem), problem.kind)


def test_corpus_ratio_and_throughput(corpus_path):
    seeds = parse_corpus(corpus_path).theorems
    start = time.perf_counter()
    records, stats = HypothesisMutator(show_progress=False).run(seeds)
    elapsed = time.perf_counter() - start
    assert stats.seeds == 50
    assert 1.0 <= stats.ratio <= 3.0
    assert stats.invalid == 0
    assert len(records) == stats.records
    assert elapsed < 10


class _StubVerifier:
    def __init__(self, result):
        self.result = result
        self.jobs = []

    def check_proof(self, job):
        self.jobs.append(job)
        return self.result


def test_checker_oracle_reads_unused_variable_diagnostics():
    from verifiers.ProofJob import Diagnostic, Severity, VerificationResult, VerificationStatus
    result = VerificationResult(
        id="usage:t",
        status=VerificationStatus.VERIFIED,
        diagnostics=[Diagnostic(severity=Severity.WARNING, message="unused variable `h₂`")],
    )
    stmt = parse_theorem("theorem t (P Q : Prop) (h₁ : P) (h₂ : Q) : P := by exact h₁")
    stub = _StubVerifier(result)
    assert CheckerUsageOracle(stub).unused_hypotheses(stmt) == {"h₂"}
    assert "sorry" not in stub.jobs[0].source()


def test_checker_oracle_needs_a_proof():
    stmt = parse_theorem("theorem t (P : Prop) (h : P) : P")
    with pytest.raises(OracleUnavailable):
        CheckerUsageOracle(_StubVerifier(None)).unused_hypotheses(stmt)
