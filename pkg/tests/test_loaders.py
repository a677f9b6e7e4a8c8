import json

from loaders.LeanFileLoader import LeanFileLoader, lean_files
from loaders.MutationRecordLoader import MutationRecordLoader
from loaders.ProofStateLoader import ProofStateLoader
from mutators.HypothesisMutator import mutate_all
from parsers.LeanParser import parse_theorem

SEED = "theorem toy (n : ℕ) (h₀ : n ≥ 3) (h₁ : n ≤ 5) : n + 1 ≠ 7 := by\n  omega\n"
OTHER = "theorem other (x : ℤ) (h₀ : x > 0) : x ≠ -1 := by\n  omega\n"


def test_directories_expand_to_sorted_lean_files(tmp_path):
    (tmp_path / "b.lean").write_text(SEED, encoding="utf-8")
    (tmp_path / "sub").mkdir()
    (tmp_path / "sub" / "a.lean").write_text(OTHER, encoding="utf-8")
    (tmp_path / "notes.txt").write_text("ignored", encoding="utf-8")
    files = lean_files([str(tmp_path)])
    assert [f.replace("\\", "/").rsplit("/", 2)[-1] for f in files] == ["b.lean", "a.lean"]


def test_first_theorem_of_a_name_wins(tmp_path):
    first, second = tmp_path / "a.lean", tmp_path / "b.lean"
    first.write_text(SEED, encoding="utf-8")
    second.write_text(SEED.replace("n + 1 ≠ 7", "n + 2 ≠ 8") + "\n" + OTHER, encoding="utf-8")
    loader = LeanFileLoader([str(first), str(second)])
    theorems = loader.load_all()
    assert [t.name for t in theorems] == ["toy", "other"]
    assert theorems[0].conclusion == parse_theorem(SEED).conclusion
    assert loader.duplicates == 1


def test_unsupported_declarations_are_reported(tmp_path):
    path = tmp_path / "a.lean"
    path.write_text("def f (n : ℕ) : ℕ := n + 1\n\n" + SEED, encoding="utf-8")
    loader = LeanFileLoader([str(path)])
    assert [t.name for t in loader.load_all()] == ["toy"]
    assert len(loader.skipped) == 1


def test_mutation_records_load_back(tmp_path):
    records = mutate_all(parse_theorem(SEED))
    path = tmp_path / "problems.jsonl"
    rows = [json.dumps(r.to_dict(), ensure_ascii=False) for r in records]
    path.write_text("\n".join(rows + ['{"mutated_name": "broken"}']) + "\n", encoding="utf-8")
    loader = MutationRecordLoader(str(path))
    loaded = loader.load_all()
    assert [r.id for r in loaded] == [r.id for r in records]
    assert loaded[0].mutated == records[0].mutated
    assert loader.errors == 1


def test_proof_state_index(tmp_path):
    path = tmp_path / "states.jsonl"
    rows = [
        {"proof_id": "p", "step_index": 0, "before_goal": "⊢ a = b", "context": [{"name": "a", "type": "ℕ"}]},
        {"proof_id": "p", "step_index": 1, "before_goal": "⊢ b = c", "after_goal": "no goals"},
        {"proof_id": "p", "step_index": 1, "before_goal": "⊢ ignored"},
    ]
    path.write_text("\n".join(json.dumps(r, ensure_ascii=False) for r in rows), encoding="utf-8")
    index = ProofStateLoader(str(path)).index()
    assert set(index) == {("p", 0), ("p", 1)}
    assert index[("p", 0)].context == (("a", "ℕ"),)
    assert index[("p", 1)].before_goal == "⊢ b = c"


def test_no_state_file_means_no_states():
    assert ProofStateLoader(None).index() == {}
