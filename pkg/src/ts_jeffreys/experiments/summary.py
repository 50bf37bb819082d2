from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

from ts_jeffreys.bandit.models import RegretTrace
from ts_jeffreys.storage.models import RegretCheckpoint


def checkpoints(horizon: int) -> list[int]:
    """⌈10^{j/4}⌉ for j >= 1 up to ``horizon``, plus ``horizon`` itself."""
    points = set()
    j = 1
    while (t := math.ceil(10 ** (j / 4))) <= horizon:
        points.add(t)
        j += 1
    points.add(horizon)
    return sorted(p for p in points if p >= 2) or [horizon]


def run_seeds(seed: int, runs: int) -> list[int]:
    """Per-run episode seeds derived from one experiment seed."""
    state = np.random.SeedSequence(seed).generate_state(runs)
    return [int(s) for s in state]


def summarize_regret(
    traces: Sequence[RegretTrace], lr_coefficient: float | None
) -> list[RegretCheckpoint]:
    """Mean and standard error of pseudo-regret across runs at log-spaced t."""
    if not traces:
        return []
    horizon = min(trace.horizon for trace in traces)
    rows = []
    for t in checkpoints(horizon):
        values = np.asarray([trace.cum_pseudo_regret[t - 1] for trace in traces])
        mean = float(values.mean())
        stderr = (
            float(values.std(ddof=1) / math.sqrt(values.size))
            if values.size > 1
            else 0.0
        )
        rows.append(
            RegretCheckpoint(
                t=t,
                mean_regret=mean,
                stderr_regret=stderr,
                lr_coefficient=lr_coefficient,
                regret_over_log_t=mean / math.log(t) if t > 1 else math.nan,
            )
        )
    return rows
