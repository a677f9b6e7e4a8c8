import logging
import os
from typing import Dict, List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402
from pydantic import BaseModel  # noqa: E402

logger = logging.getLogger(__name__)

CURVE_COLUMNS = ["iteration", "pass1", "pass4", "pass9"]


class CurvePoint(BaseModel):
    iteration: int
    pass1: float
    pass4: float
    pass9: float

    @classmethod
    def from_report(cls, iteration: int, report) -> "CurvePoint":
        return cls(iteration=iteration, pass1=report.mean(1), pass4=report.mean(4), pass9=report.mean(9))


def curve_frame(points: Sequence[CurvePoint]) -> pd.DataFrame:
    return pd.DataFrame([p.model_dump() for p in points], columns=CURVE_COLUMNS)


def emit_curves(points: Sequence[CurvePoint], csv_path: str, plot_path: Optional[str] = None,
                label: str = None) -> pd.DataFrame:
    """
    Write the pass@1/4/9 curve as CSV (`iteration,pass1,pass4,pass9`) and optionally a plot.

    Raises:
        ValueError: when there is no evaluation point.
    """
    if not points:
        raise ValueError("at least one evaluation point is needed")
    df = curve_frame(points)
    os.makedirs(os.path.dirname(os.path.abspath(csv_path)), exist_ok=True)
    df.to_csv(csv_path, index=False)
    if plot_path:
        plot_curves({label or "run": df}, plot_path)
    logger.info("Wrote %d curve points to %s", len(df), csv_path)
    return df


def plot_curves(curves: Dict[str, pd.DataFrame], path: str) -> None:
    """One panel per k, one line per labelled curve."""
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.5), sharex=True)
    for ax, col in zip(axes, CURVE_COLUMNS[1:]):
        for label, df in curves.items():
            ax.plot(df["iteration"], df[col], label=label)
        ax.set_title(col.replace("pass", "pass@"))
        ax.set_xlabel("iteration")
        ax.set_ylim(0, 1)
        ax.grid(alpha=0.3)
    axes[0].legend()
    fig.tight_layout()
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)


def read_curve(path: str) -> List[CurvePoint]:
    df = pd.read_csv(path)
    return [
        CurvePoint(iteration=int(r.iteration), pass1=float(r.pass1), pass4=float(r.pass4), pass9=float(r.pass9))
        for r in df.itertuples(index=False)
    ]
