import logging
import os
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel

from evaluators.CurveEmitter import CurvePoint, curve_frame, plot_curves
from evaluators.PassAtK import pass_at_k
from rewards.RewardCalculator import compute_reward
from rewards.RewardConfig import RewardConfig
from simulators.SimConfig import SimConfig
from utils import atomic_write_json, derive_seed, map_bounded

logger = logging.getLogger(__name__)

KS = (1, 4, 9)


def success_probability(skill: float, difficulty: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(skill - difficulty, -60.0, 60.0)))


class SimResult(BaseModel):
    config: SimConfig
    curve: List[CurvePoint]
    reward_mass: List[float]
    skill: List[float]

    @property
    def final_pass1(self) -> float:
        return self.curve[-1].pass1

    def iterations_to(self, fraction: float = 0.9) -> int:
        """First iteration whose pass@1 reaches `fraction` of the final pass@1."""
        target = fraction * self.final_pass1
        return next(p.iteration for p in self.curve if p.pass1 >= target)


class _Draws:
    """Every random number of one run, drawn up front in a fixed layout."""

    def __init__(self, cfg: SimConfig):
        rng = np.random.default_rng(cfg.seed)
        shape = (cfg.iterations, cfg.n_problems)
        self.z_M = rng.standard_normal(shape)
        self.z_H = rng.standard_normal(shape)
        self.u_M = rng.random(shape)
        self.u_H = rng.random(shape)
        self.z_eval = rng.standard_normal(cfg.n_eval)
        self.u_eval = rng.random((cfg.n_eval, cfg.attempts))


def simulate(cfg: SimConfig) -> SimResult:
    """
    Train a one-number learner for `cfg.iterations` rounds.

    Each round draws fresh problems, samples both proof outcomes from the logistic success
    model, rewards them, and moves the skill by η times the batch's mean reward. After the
    update, pass@1/4/9 is measured on a fixed held-out set with `cfg.attempts` attempts each.
    """
    draws = _Draws(cfg)
    rewards = RewardConfig(alpha=cfg.alpha)
    table = np.array([[compute_reward(m, h, rewards).r for h in (False, True)] for m in (False, True)])
    pass_table = {k: np.array([pass_at_k(cfg.attempts, c, k) for c in range(cfg.attempts + 1)]) for k in KS}

    d_eval = cfg.d_M.mean + cfg.d_M.std * draws.z_eval
    skill = cfg.initial_skill
    curve, masses, skills = [], [], []
    for k in range(cfg.iterations):
        d_M = cfg.d_M.mean + cfg.d_M.std * draws.z_M[k]
        d_H = cfg.d_H.mean + cfg.d_H.std * draws.z_H[k]
        v_M = draws.u_M[k] < success_probability(skill, d_M)
        v_H = draws.u_H[k] < success_probability(skill, d_H)
        mass = float(table[v_M.astype(int), v_H.astype(int)].mean())
        skill += cfg.eta * mass

        c = (draws.u_eval < success_probability(skill, d_eval)[:, None]).sum(axis=1)
        scores = {f"pass{kk}": float(pass_table[kk][c].mean()) for kk in KS}
        curve.append(CurvePoint(iteration=k, **scores))
        masses.append(mass)
        skills.append(skill)
    return SimResult(config=cfg, curve=curve, reward_mass=masses, skill=skills)


class CompareReport(BaseModel):
    label_a: str
    label_b: str
    runs: int
    final_pass1_a: float
    final_pass1_b: float
    iterations_to_90_a: float
    iterations_to_90_b: float
    wins_a: int
    ties: int
    win_rate_a: float

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")

    def to_text(self) -> str:
        df = pd.DataFrame(
            {
                "setting": [self.label_a, self.label_b],
                "final_pass1": [self.final_pass1_a, self.final_pass1_b],
                "iterations_to_90pct": [self.iterations_to_90_a, self.iterations_to_90_b],
            }
        )
        text = df.to_string(index=False, float_format=lambda v: f"{v:.4f}")
        return f"{text}\n{self.label_a} wins {self.wins_a}/{self.runs} (ties {self.ties}, win rate {self.win_rate_a:.3f})"


def compare_settings(
    cfg_a: SimConfig,
    cfg_b: SimConfig,
    runs: int = 20,
    seed: int = 0,
    labels: Sequence[str] = ("a", "b"),
    out_dir: Optional[str] = None,
    parallelism: int = 1,
    show_progress: bool = False,
) -> CompareReport:
    """
    Paired runs of two settings: run i of both uses the same derived seed, hence the same
    problems and random draws. A tie counts half a win in `win_rate_a`.
    """
    if runs < 1:
        raise ValueError("runs must be at least 1")
    seeds = [derive_seed(seed, "sim-run", i) for i in range(runs)]
    jobs = [(cfg.model_copy(update={"seed": s}), side) for s in seeds for side, cfg in ((0, cfg_a), (1, cfg_b))]
    results = map_bounded(lambda job: simulate(job[0]), jobs, parallelism, "Simulating", show_progress)
    for r in results:
        if isinstance(r, Exception):
            raise r
    pairs = [(results[2 * i], results[2 * i + 1]) for i in range(runs)]

    wins = sum(1 for a, b in pairs if a.final_pass1 > b.final_pass1)
    ties = sum(1 for a, b in pairs if a.final_pass1 == b.final_pass1)
    report = CompareReport(
        label_a=labels[0],
        label_b=labels[1],
        runs=runs,
        final_pass1_a=float(np.mean([a.final_pass1 for a, _ in pairs])),
        final_pass1_b=float(np.mean([b.final_pass1 for _, b in pairs])),
        iterations_to_90_a=float(np.mean([a.iterations_to(0.9) for a, _ in pairs])),
        iterations_to_90_b=float(np.mean([b.iterations_to(0.9) for _, b in pairs])),
        wins_a=wins,
        ties=ties,
        win_rate_a=(wins + 0.5 * ties) / runs,
    )
    if out_dir:
        write_comparison(report, pairs, out_dir)
    return report


def write_comparison(report: CompareReport, pairs, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    frames = []
    for i, pair in enumerate(pairs):
        for label, result in zip((report.label_a, report.label_b), pair):
            df = curve_frame(result.curve)
            df.insert(0, "setting", label)
            df.insert(0, "run", i)
            frames.append(df)
    curves = pd.concat(frames, ignore_index=True)
    curves.to_csv(os.path.join(out_dir, "curves.csv"), index=False)
    means = {
        label: curves[curves["setting"] == label].groupby("iteration", as_index=False)[["pass1", "pass4", "pass9"]].mean()
        for label in (report.label_a, report.label_b)
    }
    for label, df in means.items():
        df.to_csv(os.path.join(out_dir, f"curve_{label}.csv"), index=False)
    plot_curves(means, os.path.join(out_dir, "curves.png"))
    atomic_write_json(os.path.join(out_dir, "comparison.json"), report.to_dict())
    logger.info("Wrote comparison of %d paired runs to %s", report.runs, out_dir)
