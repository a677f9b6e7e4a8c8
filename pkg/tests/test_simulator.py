import pandas as pd
import pytest
from pydantic import ValidationError

from simulators.RewardDynamicsSimulator import compare_settings, simulate
from simulators.SimConfig import Difficulty, SimConfig


def test_same_seed_same_curves():
    cfg = SimConfig(seed=11, iterations=10)
    assert simulate(cfg).curve == simulate(cfg).curve


def test_zero_learning_rate_is_flat():
    result = simulate(SimConfig(eta=0.0, iterations=12))
    assert len({p.pass1 for p in result.curve}) == 1
    assert len({p.pass9 for p in result.curve}) == 1


def test_trivial_problems_saturate():
    cfg = SimConfig(d_M=Difficulty(mean=-40.0), d_H=Difficulty(mean=-50.0), iterations=5)
    for alpha in (0.8, 1.0):
        result = simulate(cfg.model_copy(update={"alpha": alpha}))
        assert result.curve[2].pass1 > 0.99


def test_harder_mutations_never_help():
    easy = simulate(SimConfig(seed=5, iterations=20))
    hard = simulate(SimConfig(seed=5, iterations=20, d_M=Difficulty(mean=3.5)))
    for e, h in zip(easy.curve, hard.curve):
        assert h.pass1 <= e.pass1


def test_dense_reward_carries_more_mass():
    for seed in range(10):
        multi = simulate(SimConfig(seed=seed, iterations=1, alpha=0.8))
        single = simulate(SimConfig(seed=seed, iterations=1, alpha=1.0))
        assert multi.reward_mass[0] >= single.reward_mass[0]


def test_multi_reward_converges_faster_and_higher(tmp_path):
    report = compare_settings(
        SimConfig(alpha=0.8), SimConfig(alpha=1.0), runs=20, seed=0, labels=("multi", "single"), out_dir=str(tmp_path)
    )
    assert report.wins_a >= 16
    assert report.iterations_to_90_a < report.iterations_to_90_b
    assert report.final_pass1_a > report.final_pass1_b

    curves = pd.read_csv(tmp_path / "curves.csv")
    assert len(curves) == 20 * 2 * 56
    multi = pd.read_csv(tmp_path / "curve_multi.csv")
    single = pd.read_csv(tmp_path / "curve_single.csv")
    assert list(multi["iteration"]) == list(single["iteration"]) == list(range(56))
    assert (tmp_path / "comparison.json").exists()
    assert "multi wins" in report.to_text()


def test_identical_settings_split_the_win_rate():
    cfg = SimConfig(iterations=8)
    report = compare_settings(cfg, cfg, runs=4)
    assert report.win_rate_a == 0.5
    assert report.ties == 4


def test_one_run_is_enough():
    report = compare_settings(SimConfig(iterations=5), SimConfig(iterations=5, alpha=1.0), runs=1)
    assert report.runs == 1
    with pytest.raises(ValueError):
        compare_settings(SimConfig(), SimConfig(), runs=0)


@pytest.mark.parametrize("bad", [{"alpha": 1.2}, {"eta": -1}, {"attempts": 4}, {"iterations": 0}])
def test_invalid_configs(bad):
    with pytest.raises(ValidationError):
        SimConfig(**bad)
