import random

import pytest

from errors import OutsideFragment
from parsers.LeanParser import parse_problem, parse_term
from statements.ExistentialProblem import ProblemKind
from verifiers.ProofJob import ProofJob, VerificationStatus
from verifiers.ToyEvaluator import ToyEvaluator, ediv
from verifiers.ToyVerifier import ToyVerifier, toy_check, witness_texts


def _problem(text, kind=ProblemKind.MUTATED):
    return parse_problem(text, kind)


def test_dropped_problem_with_zero():
    p = _problem("theorem d : ∃ n : ℕ, ¬(n ≥ 1) := by sorry", ProblemKind.DROPPED)
    assert toy_check(p, {"n": 0}).verified


def test_square_witness():
    p = _problem("theorem m : ∃ n : ℕ, n ≥ 1 ∧ n * n = 4 := by sorry")
    assert toy_check(p, {"n": 2}).verified
    assert toy_check(p, {"n": 3}).status == VerificationStatus.FAILED


def test_function_witness_is_outside_fragment(aime_seed):
    from mutators.HypothesisMutator import mutate
    record = mutate(aime_seed, 4)
    with pytest.raises(OutsideFragment):
        toy_check(record.mutated, {"x": 0})


def test_natural_subtraction_truncates():
    p = _problem("theorem m : ∃ n : ℕ, n - 5 = 0 := by sorry")
    assert toy_check(p, {"n": 3}).verified


def test_integer_relation():
    p = _problem("theorem m : ∃ z : ℤ, z - 5 = -2 := by sorry")
    assert toy_check(p, {"z": 3}).verified
    assert not toy_check(p, {"z": 4}).verified


def test_negative_natural_witness_fails():
    p = _problem("theorem m : ∃ n : ℕ, n = n := by sorry")
    assert toy_check(p, {"n": -1}).status == VerificationStatus.FAILED


def test_bounded_universal():
    ev = ToyEvaluator(bound=50)
    assert ev.evaluate(parse_term("∀ n ≥ 5, n + 1 > n"), {}) is None
    assert ev.bound_hit
    assert ev.evaluate(parse_term("∀ n ≥ 5, n < 20"), {}) is False
    assert ToyEvaluator().evaluate(parse_term("∀ n < 10, n ≤ 9"), {}) is True
    assert ToyEvaluator().evaluate(parse_term("∃ n ≥ 3, n * n = 49"), {}) is True


def test_bound_exceeded_is_reported():
    p = _problem("theorem m : ∃ k : ℕ, ∀ n ≥ k, n + 1 > n := by sorry")
    result = toy_check(p, {"k": 0}, bound=30)
    assert result.status == VerificationStatus.FAILED
    assert result.diagnostics[0].message == "bound exceeded"


def test_kleene_negation_stays_sound():
    ev = ToyEvaluator(bound=20)
    assert ev.evaluate(parse_term("¬(∀ n ≥ 0, n ≥ 0)"), {}) is None


def test_euclidean_division():
    assert ediv(-7, 2) == (-4, 1)
    assert ediv(7, -2) == (-3, 1)
    assert ediv(5, 0) == (0, 5)


def _brute(op, a, b):
    return {"<": a < b, "≤": a <= b, "=": a == b, "≠": a != b, ">": a > b, "≥": a >= b}[op]


def test_agrees_with_direct_arithmetic():
    rng = random.Random(7)
    ev = ToyEvaluator()
    for _ in range(300):
        a, b, c = (rng.randint(-30, 30) for _ in range(3))
        op = rng.choice(["<", "≤", "=", "≠", ">", "≥"])
        term = parse_term(f"a * b + c {op} b - a")
        env = {"a": ("ℤ", a), "b": ("ℤ", b), "c": ("ℤ", c)}
        assert ev.evaluate(term, env) == _brute(op, a * b + c, b - a)


def test_witness_texts():
    assert witness_texts("by\n  use 3\n  norm_num") == ["3"]
    assert witness_texts("by\n  exists 4") == ["4"]
    assert witness_texts("by\n  exact ⟨2, by norm_num, rfl⟩") == ["2", "by norm_num", "rfl"]
    assert witness_texts("by\n  refine ⟨-1, ?_⟩\n  simp") == ["-1", "?_"]
    assert witness_texts("⟨5, rfl⟩") == ["5", "rfl"]
    assert witness_texts("by\n  simp") == []


def test_toy_verifier_reads_witness_from_proof():
    verifier = ToyVerifier()
    job = ProofJob(id="a", statement="theorem m : ∃ n : ℕ, n ≥ 1 ∧ n * n = 4", proof="by\n  use 2\n  norm_num")
    assert verifier.check_proof(job).verified
    wrong = job.model_copy(update={"proof": "by\n  use 3\n  norm_num"})
    assert not verifier.check_proof(wrong).verified


def test_toy_verifier_outside_fragment_fails_cleanly():
    job = ProofJob(id="a", statement="theorem m : ∃ f : ℕ → ℕ, f 0 = 0", proof="by\n  use fun n => n")
    result = ToyVerifier().check_proof(job)
    assert result.status == VerificationStatus.FAILED
    assert "outside the toy fragment" in result.errors()[0]


def test_toy_elaborate_accepts_placeholder():
    job = ProofJob(id="a", statement="theorem m : ∃ n : ℕ, n > 2", proof="by sorry")
    assert ToyVerifier().elaborate(job).well_formed()
