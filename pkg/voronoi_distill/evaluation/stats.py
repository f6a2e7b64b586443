from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np
import pandas as pd

WHISKER = 1.5


@dataclass
class SpreadStats:
    """Box-plot summary of a return sample, outliers by Tukey's rule."""

    min: float
    max: float
    mean: float
    std: float
    q1: float
    median: float
    q3: float
    iqr: float
    outlier_count: int
    outlier_values: list
    coverage: float
    sample_count: int
    outlier_mean: Optional[float] = None
    outlier_std: Optional[float] = None
    outlier_min: Optional[float] = None
    outlier_max: Optional[float] = None
    lower_outlier_count: int = 0
    upper_outlier_count: int = 0
    lower_outlier_fraction: Optional[float] = None
    upper_outlier_fraction: Optional[float] = None
    lower_outlier_mean: Optional[float] = None
    lower_outlier_std: Optional[float] = None
    upper_outlier_mean: Optional[float] = None
    upper_outlier_std: Optional[float] = None

    @property
    def lower_fence(self) -> float:
        return self.q1 - WHISKER * self.iqr

    @property
    def upper_fence(self) -> float:
        return self.q3 + WHISKER * self.iqr

    def to_dict(self) -> dict:
        return asdict(self)


def spread_stats(returns: Sequence[float]) -> SpreadStats:
    """
    Computes the spread statistics of ``returns``.

    Quartiles interpolate linearly between order statistics (pandas' default),
    the standard deviation divides by n. Outliers are also summarised per side
    of the whiskers; the side fractions are shares of all outliers.

    Raises:
        ValueError: empty sample.
    """
    sample = pd.Series(returns, dtype=float)
    if sample.empty:
        raise ValueError("spread_stats needs at least one return")

    q1, median, q3 = (float(v) for v in sample.quantile([0.25, 0.5, 0.75], interpolation="linear"))
    iqr = q3 - q1
    low, high = q1 - WHISKER * iqr, q3 + WHISKER * iqr
    below, above = sample[sample < low], sample[sample > high]
    outliers = sample[(sample < low) | (sample > high)]
    n = len(sample)

    stats = SpreadStats(
        min=float(sample.min()),
        max=float(sample.max()),
        mean=float(sample.mean()),
        std=float(sample.std(ddof=0)),
        q1=q1,
        median=median,
        q3=q3,
        iqr=iqr,
        outlier_count=int(len(outliers)),
        outlier_values=[float(v) for v in outliers],
        coverage=(n - len(outliers)) / n,
        sample_count=n,
    )
    if len(outliers):
        stats.outlier_mean = float(outliers.mean())
        stats.outlier_std = float(outliers.std(ddof=0))
        stats.outlier_min = float(outliers.min())
        stats.outlier_max = float(outliers.max())
    for side, values in (("lower", below), ("upper", above)):
        setattr(stats, f"{side}_outlier_count", int(len(values)))
        if len(outliers):
            setattr(stats, f"{side}_outlier_fraction", len(values) / len(outliers))
        if len(values):
            setattr(stats, f"{side}_outlier_mean", float(values.mean()))
            setattr(stats, f"{side}_outlier_std", float(values.std(ddof=0)))
    return stats


def policy_means(returns: Sequence[float], n_episodes: int) -> list[float]:
    """Mean return of each policy in a pooled sample laid out policy by policy."""
    sample = pd.Series(returns, dtype=float)
    if n_episodes < 1 or len(sample) % n_episodes:
        raise ValueError(f"{len(sample)} returns do not split into runs of {n_episodes}")
    return [float(v) for v in sample.groupby(sample.index // n_episodes).mean()]


def success_rate(returns: Sequence[float]) -> float:
    """Fraction of strictly positive returns; on MountainCar a positive return means the goal was reached."""
    values = np.asarray(returns, dtype=float)
    return float(np.mean(values > 0.0)) if values.size else 0.0
