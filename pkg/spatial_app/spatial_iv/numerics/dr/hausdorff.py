from typing import Iterable, Tuple

import numpy as np

from spatial_iv.exceptions import InvalidInterval

Interval = Tuple[float, float]


def _check(interval: Interval):
    lo, hi = interval
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo > hi:
        raise InvalidInterval(f"not an interval: {interval}")


def hausdorff(i1: Interval, i2: Interval) -> float:
    _check(i1)
    _check(i2)
    return max(abs(i1[0] - i2[0]), abs(i1[1] - i2[1]))


def avg_hausdorff(pairs: Iterable[Tuple[Interval, Interval]]) -> float:
    distances = [hausdorff(i1, i2) for i1, i2 in pairs]
    if not distances:
        raise InvalidInterval("no interval pairs to average")
    return float(np.mean(distances))
