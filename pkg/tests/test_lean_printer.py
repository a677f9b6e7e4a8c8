from parsers.LeanParser import parse_problem, parse_theorem
from parsers.LeanPrinter import print_problem, print_theorem, problem_header
from statements.ExistentialProblem import ProblemKind
from utils import strip_ws


def test_theorem_layout(aime_seed):
    lines = print_theorem(aime_seed.model_copy(update={"proof": None})).split("\n")
    assert lines[0] == "theorem aimeII_2001_p3_g4_extracted_54"
    assert lines[1] == "  (x : ℕ → ℤ)"
    assert lines[-2] == "  (h₅ : x 13 ≠ 420) :"
    assert lines[-1] == "  x 14 ≠ 523"


def test_single_tactic_proof_is_inline():
    stmt = parse_theorem("theorem t : True := by\n  trivial")
    assert print_theorem(stmt) == "theorem t : True := by trivial"


def test_no_binder_theorem_is_a_fixpoint():
    text = "theorem t : 2 + 2 = 4 := by norm_num"
    assert print_theorem(parse_theorem(text)) == text


def test_arrow_hypotheses_print_back_as_arrows(schema_seed):
    printed = print_theorem(schema_seed)
    assert strip_ws(printed) == strip_ws("theorem original_version (x : X) : H₁ x → H₂ x → C x := by sorry")


def test_problem_round_trip():
    text = "theorem p : ∃ (x : ℕ → ℤ), x 10 = -267 ∧ x 14 ≠ 523 := by sorry"
    problem = parse_problem(text, ProblemKind.MUTATED)
    assert [b.name for b in problem.binders] == ["x"]
    assert print_problem(problem) == text
    assert problem_header(problem).endswith(":= by")


def test_problem_with_atom_binder_uses_short_form():
    problem = parse_problem("theorem p : ∃ (n : ℕ), n > 3 := by sorry")
    assert print_problem(problem, with_proof=False) == "theorem p : ∃ n : ℕ, n > 3"


def test_double_minus_and_factorial_stay_lexable():
    stmt = parse_theorem("theorem t (n : ℕ) : - -n = n ∧ n ! > 0 := by sorry")
    printed = print_theorem(stmt)
    assert "- -n" in printed and "n !" in printed
    assert parse_theorem(printed).same_structure(stmt)
