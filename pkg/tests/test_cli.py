import json
import os

import pytest

import config
from main import build_parser, main
from utils import read_jsonl

SEED = "theorem toy (n : ℕ) (h₀ : n ≥ 3) (h₁ : n ≤ 5) : n + 1 ≠ 7 := by\n  omega\n"


def _manifest(path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def _toy_config(tmp_path, **update):
    """A 20-problem toy run config with `update` written over its fields."""
    from workloads.ToyWorkload import build_workload

    workload = build_workload(str(tmp_path / "workload"), n_problems=20, seed=0, batch_size=2, holdout=2)
    with open(workload.config_path, encoding="utf-8") as f:
        data = json.load(f)
    data.update(update)
    with open(workload.config_path, "w", encoding="utf-8") as f:
        json.dump(data, f)
    return workload.config_path


def test_global_flags_work_on_either_side():
    parser = build_parser()
    before = parser.parse_args(["--seed", "5", "simulate"])
    after = parser.parse_args(["simulate", "--seed", "5"])
    assert before.seed == after.seed == 5
    assert parser.parse_args(["simulate"]).runs == 20


def test_mutate(tmp_path):
    seeds = tmp_path / "seeds.lean"
    seeds.write_text(SEED, encoding="utf-8")
    out = tmp_path / "problems.jsonl"
    assert main(["mutate", "--in", str(seeds), "--out", str(out), "--no-progress"]) == 0
    rows = list(read_jsonl(str(out)))
    assert [r["drop_index"] for r in rows] == [0, 1]
    assert (tmp_path / "problems.lean").read_text(encoding="utf-8").count("theorem") == 4
    manifest = _manifest(tmp_path / "problems.manifest.json")
    assert manifest["command"] == "mutate"
    assert manifest["stats"]["records"] == 2
    assert str(seeds) in manifest["inputs"]


def test_check(tmp_path):
    jobs = tmp_path / "jobs.jsonl"
    rows = [
        {"id": "good", "statement": "theorem m : ∃ n : ℕ, n ≥ 1 ∧ n * n = 4", "proof": "by\n  use 2\n  norm_num"},
        {"id": "bad", "statement": "theorem m : ∃ n : ℕ, n ≥ 1 ∧ n * n = 4", "proof": "by\n  use 3\n  norm_num"},
    ]
    jobs.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")
    out = tmp_path / "results.jsonl"
    assert main(["check", "--jobs", str(jobs), "--out", str(out), "--no-progress"]) == 0
    results = {r["id"]: r["status"] for r in read_jsonl(str(out))}
    assert results == {"good": "verified", "bad": "failed"}
    assert _manifest(tmp_path / "results.manifest.json")["stats"] == {"verified": 1, "failed": 1}


def test_iterate_toy_workload(tmp_path):
    run_dir = tmp_path / "run"
    code = main(["iterate", "--toy", "20", "--run-dir", str(run_dir), "--no-progress"])
    assert code == 0
    manifest = _manifest(run_dir / "manifest.json")
    assert manifest["complete"]
    assert len(manifest["iterations"]) == 9
    assert os.path.exists(run_dir / "retrain_sft.jsonl")


def test_simulate_compare(tmp_path, capsys):
    code = main(["simulate", "--compare", "single:1.0", "multi:0.8", "--runs", "2", "--iterations", "6",
                 "--run-dir", str(tmp_path), "--no-progress"])
    assert code == 0
    assert "wins" in capsys.readouterr().out
    for name in ("curves.csv", "curves.png", "comparison.json", "manifest.json"):
        assert (tmp_path / "simulate" / name).exists()


def test_simulate_single_setting(tmp_path):
    assert main(["simulate", "--iterations", "4", "--run-dir", str(tmp_path)]) == 0
    assert (tmp_path / "simulate" / "curve.csv").exists()


def test_bad_compare_setting(tmp_path):
    assert main(["simulate", "--compare", "single", "multi:0.8", "--run-dir", str(tmp_path)]) == 2


def test_missing_config_exits_with_2(tmp_path, capsys):
    code = main(["iterate", "--config", str(tmp_path / "nope.json"), "--run-dir", str(tmp_path), "--json-errors"])
    assert code == 2
    error = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert error["error"] == "ConfigError"


def test_invalid_alpha_exits_with_2(tmp_path):
    assert main(["simulate", "--alpha", "1.5", "--run-dir", str(tmp_path)]) == 2


def test_iterate_without_config(tmp_path):
    assert main(["iterate", "--run-dir", str(tmp_path)]) == 2


def test_unknown_command():
    with pytest.raises(SystemExit):
        main(["train"])


def test_timeout_and_parallelism_flags():
    parser = build_parser()
    args = parser.parse_args(["check", "--jobs", "j", "--out", "o", "--timeout-s", "12.5", "--parallelism", "3"])
    assert args.timeout == 12.5
    assert args.parallelism == 3
    assert parser.parse_args(["--timeout-s", "30", "simulate"]).timeout == 30.0
    assert parser.parse_args(["simulate"]).timeout is None


def test_check_uses_timeout_flag(tmp_path):
    jobs = tmp_path / "jobs.jsonl"
    jobs.write_text(json.dumps({"id": "a", "statement": "theorem m : ∃ n : ℕ, n = 2", "proof": "by\n  use 2"}) + "\n",
                    encoding="utf-8")
    out = tmp_path / "results.jsonl"
    assert main(["check", "--jobs", str(jobs), "--out", str(out), "--timeout-s", "9", "--no-progress"]) == 0
    assert _manifest(tmp_path / "results.manifest.json")["arguments"]["timeout"] == 9.0


def test_iterate_flags_override_the_config(tmp_path):
    config_path = _toy_config(tmp_path, parallelism=config.PARALLELISM + 3, timeout_s=60.0, temperature=0.9, max_tokens=4096)
    run_dir = tmp_path / "run"
    code = main(["iterate", "--config", config_path, "--run-dir", str(run_dir), "--no-progress",
                 "--parallelism", str(config.PARALLELISM), "--timeout-s", "7",
                 "--temperature", "0.3", "--max-tokens", "128"])
    assert code == 0
    used = _manifest(run_dir / "run.json")["config"]
    assert used["parallelism"] == config.PARALLELISM
    assert used["timeout_s"] == 7.0
    assert used["temperature"] == 0.3
    assert used["max_tokens"] == 128


def test_iterate_keeps_config_values_without_flags(tmp_path):
    config_path = _toy_config(tmp_path, parallelism=config.PARALLELISM + 3, timeout_s=config.TIMEOUT_S + 5)
    run_dir = tmp_path / "run"
    assert main(["iterate", "--config", config_path, "--run-dir", str(run_dir), "--no-progress"]) == 0
    used = _manifest(run_dir / "run.json")["config"]
    assert used["parallelism"] == config.PARALLELISM + 3
    assert used["timeout_s"] == config.TIMEOUT_S + 5


def test_simulate_manifest_records_the_config_seed(tmp_path):
    sim = tmp_path / "sim.json"
    sim.write_text(json.dumps({"seed": 7, "iterations": 3}), encoding="utf-8")
    assert main(["simulate", "--config", str(sim), "--run-dir", str(tmp_path), "--no-progress"]) == 0
    manifest = _manifest(tmp_path / "simulate" / "manifest.json")
    assert manifest["seed"] == 7
    assert manifest["arguments"]["seed"] is None


def test_manifest_seed_defaults_to_zero(tmp_path):
    seeds = tmp_path / "seeds.lean"
    seeds.write_text(SEED, encoding="utf-8")
    out = tmp_path / "problems.jsonl"
    assert main(["mutate", "--in", str(seeds), "--out", str(out), "--no-progress"]) == 0
    assert _manifest(tmp_path / "problems.manifest.json")["seed"] == 0
    assert main(["--seed", "11", "mutate", "--in", str(seeds), "--out", str(out), "--no-progress"]) == 0
    assert _manifest(tmp_path / "problems.manifest.json")["seed"] == 11


def test_extract_manifest_hashes_directory_inputs(tmp_path):
    corpus = tmp_path / "corpus"
    (corpus / "sub").mkdir(parents=True)
    (corpus / "a.lean").write_text(SEED, encoding="utf-8")
    (corpus / "sub" / "b.lean").write_text(SEED.replace("toy", "toy2"), encoding="utf-8")
    out = tmp_path / "extracted.lean"
    assert main(["extract", "--in", str(corpus), "--out", str(out), "--no-progress"]) == 0
    inputs = _manifest(tmp_path / "extracted.manifest.json")["inputs"]
    assert sorted(inputs) == sorted([str(corpus / "a.lean"), str(corpus / "sub" / "b.lean")])
    assert all(len(h) == 64 for h in inputs.values())
