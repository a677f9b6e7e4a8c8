from fractions import Fraction

from rewards.RewardConfig import RewardConfig
from rewards.RewardRecord import RewardRecord


def compute_reward(v_M: bool, v_H: bool, cfg: RewardConfig = None, problem_id: str = "") -> RewardRecord:
    """r = α·[v_M] + (1 − α)·[v_H], computed exactly."""
    cfg = cfg or RewardConfig()
    alpha = cfg.exact_alpha
    r_M = alpha if v_M else Fraction(0)
    r_H = (1 - alpha) if v_H else Fraction(0)
    return RewardRecord(
        problem_id=problem_id,
        v_M=bool(v_M),
        v_H=bool(v_H),
        alpha=cfg.alpha,
        r_M=float(r_M),
        r_H=float(r_H),
        r=float(r_M + r_H),
    )


def reward_mass(records) -> float:
    return float(sum((Fraction(repr(r.r)) for r in records), Fraction(0)))


def nonzero_count(records) -> int:
    return sum(1 for r in records if r.r > 0)
