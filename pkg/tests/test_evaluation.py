import json
from fractions import Fraction
from itertools import combinations

import pandas as pd
import pytest

from evaluators.BenchmarkEvaluator import BenchmarkEvaluator, solved_at, summarize_attempts
from evaluators.CurveEmitter import CurvePoint, emit_curves, read_curve
from evaluators.PassAtK import AttemptRow, pass_at_k, pass_at_k_exact, pass_at_k_usable
from generators.CounterexampleProposer import CounterexampleProposer
from generators.GeneratorConfig import GeneratorConfig, GeneratorRole
from generators.ProofWriter import ProofWriter
from llm.MockClient import MockClient
from parsers.LeanParser import parse_problem
from verifiers.ToyVerifier import ToyVerifier


def _brute_force(n, c, k):
    outcomes = [True] * c + [False] * (n - c)
    subsets = list(combinations(range(n), k))
    return Fraction(sum(1 for s in subsets if any(outcomes[i] for i in s)), len(subsets))


def test_estimator_matches_subset_enumeration():
    for n in range(1, 10):
        for c in range(n + 1):
            for k in range(1, n + 1):
                assert pass_at_k_exact(n, c, k) == _brute_force(n, c, k), (n, c, k)


def test_known_values():
    assert pass_at_k(9, 0, 4) == 0
    assert pass_at_k(9, 9, 1) == 1
    assert pass_at_k_exact(9, 1, 4) == Fraction(4, 9)


def test_monotone_in_k_and_c():
    for c in range(10):
        values = [pass_at_k_exact(9, c, k) for k in range(1, 10)]
        assert values == sorted(values)
    for k in range(1, 10):
        values = [pass_at_k_exact(9, c, k) for c in range(10)]
        assert values == sorted(values)


def test_k_larger_than_n():
    with pytest.raises(ValueError):
        pass_at_k(3, 1, 4)


def test_fewer_attempts_than_k():
    assert pass_at_k_usable(2, 1, 4) == 1
    assert pass_at_k_usable(2, 0, 4) == 0


def test_summary_over_a_known_count_vector():
    rows = [AttemptRow(problem_id=f"p{i}", n=9, c=c) for i, c in enumerate([9, 1, 0])]
    report = summarize_attempts(rows, seed=3)
    assert report.mean(4) == pytest.approx(float((1 + Fraction(4, 9) + 0) / 3))
    assert report.mean(9) == pytest.approx(2 / 3)
    assert report.solved(9) == 2
    assert report.solved(1) >= 1
    assert report.solved_any == 2
    assert not solved_at(rows[2], 9, seed=3)


def test_report_outputs(tmp_path):
    rows = [AttemptRow(problem_id="p", n=9, c=3)]
    paths = summarize_attempts(rows).write(str(tmp_path))
    df = pd.read_csv(paths["csv"])
    assert list(df.columns) == ["k", "solved", "mean_pass", "problems"]
    assert list(df["k"]) == [1, 4, 9]
    assert "mean_pass" in (tmp_path / "benchmark.txt").read_text(encoding="utf-8")
    assert json.loads((tmp_path / "benchmark.json").read_text(encoding="utf-8"))["solved_any"] == 1


def test_curve_csv(tmp_path):
    points = [CurvePoint(iteration=i, pass1=0.1 * i, pass4=0.15 * i, pass9=0.2 * i) for i in range(4)]
    csv = tmp_path / "curve.csv"
    png = tmp_path / "curve.png"
    df = emit_curves(points, str(csv), str(png))
    assert len(df) == 4
    assert csv.read_text(encoding="utf-8").splitlines()[0] == "iteration,pass1,pass4,pass9"
    assert png.exists()
    assert read_curve(str(csv)) == points


def test_single_point_curve(tmp_path):
    df = emit_curves([CurvePoint(iteration=0, pass1=0.5, pass4=0.6, pass9=0.7)], str(tmp_path / "c.csv"))
    assert len(df) == 1


def test_curve_needs_points(tmp_path):
    with pytest.raises(ValueError):
        emit_curves([], str(tmp_path / "c.csv"))


def _evaluator(script, tmp_path=None):
    proposer = CounterexampleProposer(MockClient(script), GeneratorConfig(role=GeneratorRole.PROPOSER))
    prover = ProofWriter(MockClient(script), GeneratorConfig(role=GeneratorRole.PROVER))
    return BenchmarkEvaluator(proposer, prover, ToyVerifier(), seed=1, parallelism=2, show_progress=False)


def test_benchmark_with_solvable_toy_problems():
    problems = [parse_problem(f"theorem t{i} : ∃ n : ℕ, n + {i} = {2 * i}") for i in range(10)]
    script = {}
    for i in range(10):
        script[(f"t{i}", "proposer")] = [f"n = {i} works: \\boxed{{{i}}}"]
        script[(f"t{i}", "prover")] = ["by\n  use {witness}\n  norm_num"]
    report = _evaluator(script).evaluate(problems)
    assert report.solved(1) == 10
    assert report.mean(1) == 1.0
    assert all(r.n == 9 and r.c == 9 for r in report.rows)


def test_benchmark_counts_model_failures():
    problems = [parse_problem("theorem hard : ∃ n : ℕ, n + 1 = 0"), parse_problem("theorem easy : ∃ n : ℕ, n = 2")]
    script = {
        ("hard", "proposer"): ["\\boxed{0}"],
        ("hard", "prover"): ["by\n  use {witness}"],
        ("easy", "proposer"): ["\\boxed{2}", "\\boxed{3}", "no idea"],
        ("easy", "prover"): ["by\n  use {witness}"],
    }
    report = _evaluator(script).evaluate(problems)
    hard, easy = report.rows
    assert (hard.n, hard.c) == (9, 0)
    assert (easy.n, easy.c) == (9, 3)
    assert report.solved(9) == 1


def test_benchmark_keeps_problems_with_the_same_name_apart():
    problems = [parse_problem("theorem same : ∃ n : ℕ, n = 2"), parse_problem("theorem same : ∃ n : ℕ, n + 1 = 0")]
    script = {("same", "proposer"): ["\\boxed{2}"], ("same", "prover"): ["by\n  use {witness}"]}
    report = _evaluator(script).evaluate(problems)
    assert [(r.n, r.c) for r in report.rows] == [(9, 9), (9, 0)]
    assert report.solved_any == 1
