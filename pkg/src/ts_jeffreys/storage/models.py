from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class RegretCheckpoint:
    """One summary row: pseudo-regret across runs at horizon ``t``."""

    t: int
    mean_regret: float
    stderr_regret: float
    lr_coefficient: float | None
    regret_over_log_t: float


@dataclass
class RunProgress:
    """Snapshot of a running experiment for progress reporting."""

    phase: str = "idle"  # simulate, concentration, writing, complete
    completed: int = 0
    total: int = 0
    current_action: str = ""
    percent_complete: float = 0.0
    is_running: bool = False
