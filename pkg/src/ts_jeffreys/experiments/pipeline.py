from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path

from ts_jeffreys.bandit.episode import lai_robbins_coefficient, run_batch
from ts_jeffreys.bandit.models import RegretTrace, format_policy
from ts_jeffreys.config import ExperimentSpec
from ts_jeffreys.errors import BoundViolationError, ConfigError
from ts_jeffreys.experiments.summary import run_seeds, summarize_regret
from ts_jeffreys.lab.experiments import (
    exceeds_chernoff_bound,
    fit_decay_slope,
    posterior_tail_experiment,
    suffstat_tail_experiment,
)
from ts_jeffreys.lab.models import TailEstimate
from ts_jeffreys.storage.csv_store import ResultStore
from ts_jeffreys.storage.models import RegretCheckpoint, RunProgress

logger = logging.getLogger(__name__)

ProgressCallback = Callable[[RunProgress], None]


@dataclass
class SimulationResult:
    traces: list[RegretTrace]
    checkpoints: list[RegretCheckpoint]
    lr_coefficient: float | None
    files: list[Path] = field(default_factory=list)


@dataclass
class ConcentrationResult:
    estimates: list[TailEstimate]
    violations: list[TailEstimate]
    decay_slope: float | None
    files: list[Path] = field(default_factory=list)


class _Pipeline:
    def __init__(
        self,
        spec: ExperimentSpec,
        store: ResultStore,
        progress_callback: ProgressCallback | None = None,
    ) -> None:
        self._spec = spec
        self._store = store
        self._progress_callback = progress_callback

    def _report(
        self,
        phase: str,
        action: str,
        completed: int = 0,
        total: int = 0,
        running: bool = True,
    ) -> None:
        if self._progress_callback is None:
            return
        self._progress_callback(
            RunProgress(
                phase=phase,
                completed=completed,
                total=total,
                current_action=action,
                percent_complete=completed / total if total else 0.0,
                is_running=running,
            )
        )


class SimulationPipeline(_Pipeline):
    """Seeded batch of bandit episodes, written as trace and summary CSVs."""

    def run(self) -> SimulationResult:
        spec = self._spec
        instance = spec.build_instance()
        policy = spec.build_policy()
        lr = None
        if instance.single_family:
            lr = lai_robbins_coefficient(instance)
        else:
            logger.warning("Mixed-family instance: no Lai-Robbins coefficient")

        label = f"{format_policy(policy)} on {instance.to_spec()}"
        self._report(
            "simulate", f"Running {spec.runs} episodes of {label}", 0, spec.runs
        )

        def on_done(done: int, total: int) -> None:
            self._report("simulate", f"Episode {done}/{total} finished", done, total)

        traces = run_batch(
            instance,
            policy,
            spec.horizon,
            run_seeds(spec.seed, spec.runs),
            workers=spec.workers,
            on_done=on_done,
        )
        checkpoints = summarize_regret(traces, lr)

        self._report("writing", f"Writing results to {self._store.out_dir}")
        files = [
            self._store.write_traces(traces),
            self._store.write_summary(checkpoints),
        ]
        final = checkpoints[-1]
        self._report(
            "complete",
            f"Mean regret {final.mean_regret:.4f} at T={final.t} "
            f"(R/ln T = {final.regret_over_log_t:.4f})",
            spec.runs,
            spec.runs,
            running=False,
        )
        return SimulationResult(traces, checkpoints, lr, files)


class ConcentrationPipeline(_Pipeline):
    """Tail experiments for one family; a bound violation fails the run."""

    def run(self) -> ConcentrationResult:
        spec = self._spec
        cfg = spec.build_lab_config()
        total = len(cfg.sample_sizes)

        done: list[TailEstimate] = []

        def on_estimate(estimate: TailEstimate) -> None:
            done.append(estimate)
            self._report(
                "concentration",
                f"u={estimate.u}: tail {estimate.empirical_prob:.4g}",
                len(done),
                total,
            )

        self._report(
            "concentration", f"Sampling {cfg.family} ({spec.lab_mode})", 0, total
        )
        slope = None
        if spec.lab_mode == "suffstat":
            estimates = suffstat_tail_experiment(cfg, on_estimate)
            violations = [e for e in estimates if exceeds_chernoff_bound(e)]
        else:
            estimates = posterior_tail_experiment(cfg, on_estimate)
            violations = []
            try:
                slope = fit_decay_slope(estimates, cfg.trials * cfg.posterior_draws)
            except ConfigError as e:
                logger.warning("No decay slope: %s", e)
            else:
                logger.info(
                    "Fitted decay slope %.4f vs rate %.4f", slope, estimates[0].bound
                )

        files = [self._store.write_concentration(estimates)]
        self._report("complete", f"{len(estimates)} rows written", total, total, False)
        if violations:
            worst = max(violations, key=lambda e: e.empirical_prob - e.bound)
            raise BoundViolationError(
                f"{len(violations)} tail estimate(s) exceed 2exp(-uK) beyond slack; "
                f"worst u={worst.u}: {worst.empirical_prob:.6g} > {worst.bound:.6g}"
            )
        return ConcentrationResult(estimates, violations, slope, files)
