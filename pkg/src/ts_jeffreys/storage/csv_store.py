"""Flat CSV result files.

Reals are written with 17 significant digits and ``.`` as decimal separator;
rows always come out in (run, t) or u order, so identical inputs give
byte-identical files.
"""

from __future__ import annotations

import csv
import logging
from collections.abc import Iterable, Sequence
from pathlib import Path

from ts_jeffreys.bandit.models import RegretTrace
from ts_jeffreys.lab.models import TailEstimate
from ts_jeffreys.storage.models import RegretCheckpoint

logger = logging.getLogger(__name__)

TRACE_HEADER = ("run", "t", "arm", "reward", "cum_pseudo_regret")
SUMMARY_HEADER = (
    "T",
    "mean_regret",
    "stderr_regret",
    "lr_coefficient",
    "regret_over_logT",
)
CONCENTRATION_HEADER = (
    "u",
    "empirical",
    "bound_or_rate",
    "trials",
    "passed_event_fraction",
)


def format_real(x: float | None) -> str:
    if x is None:
        return ""
    return format(float(x), ".17g")


class ResultStore:
    TRACE_FILE = "traces.csv"
    SUMMARY_FILE = "summary.csv"
    CONCENTRATION_FILE = "concentration.csv"

    def __init__(self, out_dir: Path) -> None:
        self.out_dir = out_dir

    def prepare(self) -> None:
        self.out_dir.mkdir(parents=True, exist_ok=True)

    @property
    def trace_path(self) -> Path:
        return self.out_dir / self.TRACE_FILE

    @property
    def summary_path(self) -> Path:
        return self.out_dir / self.SUMMARY_FILE

    @property
    def concentration_path(self) -> Path:
        return self.out_dir / self.CONCENTRATION_FILE

    def write_traces(self, traces: Sequence[RegretTrace]) -> Path:
        def rows() -> Iterable[list[str]]:
            for run, trace in enumerate(traces):
                for t in range(trace.horizon):
                    yield [
                        str(run),
                        str(t + 1),
                        str(int(trace.chosen[t])),
                        format_real(trace.rewards[t]),
                        format_real(trace.cum_pseudo_regret[t]),
                    ]

        return self._write(self.trace_path, TRACE_HEADER, rows())

    def write_summary(self, checkpoints: Sequence[RegretCheckpoint]) -> Path:
        rows = (
            [
                str(c.t),
                format_real(c.mean_regret),
                format_real(c.stderr_regret),
                format_real(c.lr_coefficient),
                format_real(c.regret_over_log_t),
            ]
            for c in checkpoints
        )
        return self._write(self.summary_path, SUMMARY_HEADER, rows)

    def write_concentration(self, estimates: Sequence[TailEstimate]) -> Path:
        rows = (
            [
                str(e.u),
                format_real(e.empirical_prob),
                format_real(e.bound),
                str(e.trials_used),
                format_real(e.passed_fraction),
            ]
            for e in estimates
        )
        return self._write(self.concentration_path, CONCENTRATION_HEADER, rows)

    @staticmethod
    def read_rows(path: Path) -> list[dict[str, str]]:
        with path.open(newline="", encoding="utf-8") as fh:
            return list(csv.DictReader(fh))

    def _write(
        self, path: Path, header: Sequence[str], rows: Iterable[Sequence[str]]
    ) -> Path:
        self.prepare()
        count = 0
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow(row)
                count += 1
        logger.info("Wrote %d rows to %s", count, path)
        return path
