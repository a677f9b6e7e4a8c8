import pytest

from errors import SyntaxMalformed, SyntaxUnsupported
from loaders.LeanFileLoader import parse_corpus
from parsers.LeanParser import parse_source, parse_term, parse_theorem
from parsers.LeanPrinter import print_term, print_theorem
from statements.Term import TermKind


def test_schema_arrows_become_anonymous_hypotheses(schema_seed):
    assert [b.name for b in schema_seed.binders] == ["x"]
    assert [h.name for h in schema_seed.hypotheses] == ["a0", "a1"]
    assert all(h.anonymous for h in schema_seed.hypotheses)
    assert print_term(schema_seed.hypotheses[0].proposition) == "H₁ x"
    assert print_term(schema_seed.conclusion) == "C x"


def test_worked_example_statement(aime_seed):
    assert [b.name for b in aime_seed.binders] == ["x"]
    assert print_term(aime_seed.binders[0].type) == "ℕ → ℤ"
    assert [h.name for h in aime_seed.hypotheses] == ["h₁", "h₂", "h₃", "h₄", "h₅"]
    assert print_term(aime_seed.hypotheses[4].proposition) == "x 13 ≠ 420"
    assert print_term(aime_seed.conclusion) == "x 14 ≠ 523"
    assert aime_seed.proof.startswith("by\n  have h6")


def test_degenerate_declaration():
    stmt = parse_theorem("theorem t : True := by trivial")
    assert stmt.binders == () and stmt.hypotheses == ()
    assert print_term(stmt.conclusion) == "True"
    assert stmt.proof == "by\n  trivial"


def test_named_arrow_ascription_is_a_named_hypothesis():
    stmt = parse_theorem("theorem t (n : ℕ) : (h : n > 2) → n ≠ 0 := by omega")
    assert [h.name for h in stmt.hypotheses] == ["h"]
    assert not stmt.hypotheses[0].anonymous


def test_leading_forall_lifted_into_binders():
    stmt = parse_theorem("theorem t : ∀ (a b : ℕ), a + b = b + a := by omega")
    assert [b.name for b in stmt.binders] == ["a", "b"]
    assert print_term(stmt.conclusion) == "a + b = b + a"


def test_precedence_follows_lean():
    t = parse_term("¬a = b ∧ c ∨ d → e")
    assert t.text == "→"
    assert t.children[0].text == "∨"
    assert t.children[0].children[0].text == "∧"
    assert print_term(parse_term("a - (b - c)")) == "a - (b - c)"
    assert print_term(parse_term("(a - b) - c")) == "a - b - c"
    assert print_term(parse_term("2 ^ 3 ^ 2")) == "2 ^ 3 ^ 2"


def test_absolute_value_is_kept_verbatim():
    stmt = parse_theorem("theorem t (x : ℝ) (h : |x| < 1) : x < 1 := by sorry")
    assert stmt.hypotheses[0].proposition.kind == TermKind.RAW
    assert "x" in stmt.hypotheses[0].proposition.free_variables()


def test_comments_are_ignored():
    a = parse_theorem("theorem t (x : ℕ) -- a comment\n  (h : x > 0) : /- inline -/ x ≠ 0 := by omega")
    b = parse_theorem("theorem t (x : ℕ) (h : x > 0) : x ≠ 0 := by omega")
    assert a.same_structure(b)


@pytest.mark.parametrize("text", [
    "theorem t (n : ℕ) : (match n with | 0 => True | _ => True) := by sorry",
    "theorem t (n : ℕ := 3) : n = n := by rfl",
])
def test_unsupported_constructs(text):
    with pytest.raises(SyntaxUnsupported):
        parse_theorem(text)


def test_unbalanced_delimiters():
    with pytest.raises(SyntaxMalformed):
        parse_theorem("theorem t (x : ℕ : x = x := by rfl")


def test_parse_source_partitions_declarations():
    text = (
        "theorem a (x : ℕ) (h : x > 1) : x > 0 := by omega\n\n"
        "theorem b (n : ℕ) : (match n with | 0 => True | _ => True) := by sorry\n\n"
        "theorem c : True := by trivial\n"
    )
    unit = parse_source(text, file="three.lean")
    assert [t.name for t in unit.theorems] == ["a", "c"]
    assert len(unit.skipped) == 1
    assert unit.skipped[0].line == 3
    assert "match" in unit.skipped[0].reason


def test_duplicate_names_are_skipped():
    unit = parse_source("theorem a : True := by trivial\n\ntheorem a : True := by trivial\n")
    assert len(unit.theorems) == 1 and len(unit.skipped) == 1


def test_empty_source():
    unit = parse_source("")
    assert unit.theorems == [] and unit.skipped == []


def test_mini_corpus_parses_completely(corpus_path):
    unit = parse_corpus(corpus_path)
    assert len(unit.theorems) == 50
    assert unit.skipped == []


def test_mini_corpus_round_trips(corpus_path):
    for stmt in parse_corpus(corpus_path).theorems:
        printed = print_theorem(stmt)
        again = parse_theorem(printed)
        assert again.same_structure(stmt), stmt.name
        assert print_theorem(again) == printed, stmt.name
