from pathlib import Path
from unittest.mock import MagicMock, patch

import pytest

from ts_jeffreys.config import ExperimentSpec
from ts_jeffreys.errors import BoundViolationError, ConfigError
from ts_jeffreys.experiments.pipeline import ConcentrationPipeline, SimulationPipeline
from ts_jeffreys.storage.csv_store import ResultStore
from ts_jeffreys.storage.models import RunProgress


def simulate(spec: ExperimentSpec, callback: MagicMock | None = None) -> list[Path]:
    return SimulationPipeline(spec, ResultStore(spec.out), callback).run().files


# --- simulation ---


def test_simulation_writes_results(small_spec: ExperimentSpec) -> None:
    callback = MagicMock()
    result = SimulationPipeline(small_spec, ResultStore(small_spec.out), callback).run()

    assert [p.name for p in result.files] == ["traces.csv", "summary.csv"]
    assert len(result.traces) == 3
    assert result.lr_coefficient == pytest.approx(1.9112, abs=1e-4)
    assert result.checkpoints[-1].t == 200

    traces = ResultStore.read_rows(result.files[0])
    assert len(traces) == 3 * 200
    assert traces[-1]["run"] == "2"
    assert traces[-1]["t"] == "200"

    summary = ResultStore.read_rows(result.files[1])
    assert [int(row["T"]) for row in summary] == [
        2, 4, 6, 10, 18, 32, 57, 100, 178, 200
    ]


def test_simulation_reports_progress(small_spec: ExperimentSpec) -> None:
    callback = MagicMock()
    SimulationPipeline(small_spec, ResultStore(small_spec.out), callback).run()

    updates = [c.args[0] for c in callback.call_args_list]
    assert all(isinstance(u, RunProgress) for u in updates)
    assert updates[0].phase == "simulate"
    assert updates[0].total == 3
    assert "3 episodes of ts on bernoulli@0.5;bernoulli@" in updates[0].current_action
    assert [u.completed for u in updates if u.phase == "simulate"][-1] == 3
    assert updates[-1].phase == "complete"
    assert not updates[-1].is_running
    assert updates[-1].percent_complete == 1.0


def test_simulation_is_deterministic(
    small_spec: ExperimentSpec, tmp_path: Path
) -> None:
    first = simulate(small_spec)
    second = simulate(small_spec.model_copy(update={"out": tmp_path / "again"}))
    for a, b in zip(first, second, strict=True):
        assert a.read_bytes() == b.read_bytes()


def test_simulation_mixed_families(small_spec: ExperimentSpec) -> None:
    spec = small_spec.model_copy(update={"arms": "bernoulli@0.5;poisson@0.25"})
    result = SimulationPipeline(spec, ResultStore(spec.out)).run()
    assert result.lr_coefficient is None
    summary = ResultStore.read_rows(result.files[1])
    assert all(row["lr_coefficient"] == "" for row in summary)


# --- concentration ---


def test_suffstat_concentration(small_spec: ExperimentSpec) -> None:
    spec = small_spec.model_copy(update={"command": "concentration"})
    callback = MagicMock()
    result = ConcentrationPipeline(spec, ResultStore(spec.out), callback).run()

    assert result.violations == []
    assert result.decay_slope is None
    assert [e.u for e in result.estimates] == [10, 50]
    rows = ResultStore.read_rows(result.files[0])
    assert [row["u"] for row in rows] == ["10", "50"]
    assert all(row["trials"] == "2000" for row in rows)
    assert callback.call_args_list[-1].args[0].phase == "complete"


def test_suffstat_violation_still_writes_file(small_spec: ExperimentSpec) -> None:
    spec = small_spec.model_copy(update={"command": "concentration"})
    store = ResultStore(spec.out)
    with (
        patch(
            "ts_jeffreys.experiments.pipeline.exceeds_chernoff_bound", return_value=True
        ),
        pytest.raises(BoundViolationError, match="2 tail estimate"),
    ):
        ConcentrationPipeline(spec, store).run()
    assert store.concentration_path.is_file()


def test_posterior_concentration(small_spec: ExperimentSpec) -> None:
    spec = small_spec.model_copy(
        update={
            "command": "concentration",
            "lab_mode": "posterior",
            "delta": 0.05,
            "sample_sizes": "19,38",
            "posterior_draws": 200,
        }
    )
    result = ConcentrationPipeline(spec, ResultStore(spec.out)).run()
    assert result.violations == []
    assert [e.u for e in result.estimates] == [19, 38]
    assert all(e.bound == pytest.approx(0.0889, abs=1e-4) for e in result.estimates)
    assert all(0.1 <= e.passed_fraction <= 1.0 for e in result.estimates)


def test_posterior_mode_inadmissible(small_spec: ExperimentSpec) -> None:
    spec = small_spec.model_copy(
        update={"command": "concentration", "lab_mode": "posterior", "delta": 0.25}
    )
    with pytest.raises(ConfigError, match="1 − δC₂"):
        ConcentrationPipeline(spec, ResultStore(spec.out)).run()
