from pathlib import Path

import numpy as np

from ts_jeffreys.bandit.models import RegretTrace
from ts_jeffreys.lab.models import TailEstimate
from ts_jeffreys.storage.csv_store import (
    CONCENTRATION_HEADER,
    SUMMARY_HEADER,
    TRACE_HEADER,
    ResultStore,
    format_real,
)
from ts_jeffreys.storage.models import RegretCheckpoint


def make_trace(seed: int) -> RegretTrace:
    return RegretTrace(
        horizon=3,
        chosen=np.array([0, 1, 0], dtype=np.int64),
        rewards=np.array([1.0, 0.0, 0.1]),
        pulls=np.array([2, 1], dtype=np.int64),
        cum_pseudo_regret=np.array([0.0, 0.25, 0.25]),
        seed=seed,
    )


def test_format_real() -> None:
    assert format_real(0.1) == "0.10000000000000001"
    assert format_real(2.0) == "2"
    assert format_real(np.float64(0.25)) == "0.25"
    assert format_real(None) == ""
    assert format_real(float("nan")) == "nan"


def test_trace_file(tmp_path: Path) -> None:
    store = ResultStore(tmp_path / "out")
    path = store.write_traces([make_trace(1), make_trace(2)])
    assert path == tmp_path / "out" / "traces.csv"

    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == ",".join(TRACE_HEADER)
    assert lines[1] == "0,1,0,1,0"
    assert lines[2] == "0,2,1,0,0.25"
    assert lines[3] == "0,3,0,0.10000000000000001,0.25"
    assert lines[4].startswith("1,1,")
    assert len(lines) == 7


def test_summary_file(tmp_path: Path) -> None:
    store = ResultStore(tmp_path)
    rows = [
        RegretCheckpoint(2, 0.5, 0.1, 1.9112, 0.72134752044448169),
        RegretCheckpoint(4, 0.75, 0.2, None, 0.54101),
    ]
    store.write_summary(rows)
    read = ResultStore.read_rows(store.summary_path)
    assert list(read[0]) == list(SUMMARY_HEADER)
    assert read[0]["T"] == "2"
    assert read[0]["lr_coefficient"] == "1.9112"
    assert float(read[0]["regret_over_logT"]) == 0.72134752044448169
    assert read[1]["lr_coefficient"] == ""


def test_concentration_file(tmp_path: Path) -> None:
    store = ResultStore(tmp_path)
    store.write_concentration(
        [TailEstimate(10, 0.125, 0.5, 1000), TailEstimate(20, 0.0, 0.08, 400, 0.4)]
    )
    read = ResultStore.read_rows(store.concentration_path)
    assert list(read[0]) == list(CONCENTRATION_HEADER)
    assert read[0] == {
        "u": "10",
        "empirical": "0.125",
        "bound_or_rate": "0.5",
        "trials": "1000",
        "passed_event_fraction": "1",
    }
    assert read[1]["passed_event_fraction"] == "0.40000000000000002"


def test_files_are_byte_identical(tmp_path: Path) -> None:
    first = ResultStore(tmp_path / "a").write_traces([make_trace(1)])
    second = ResultStore(tmp_path / "b").write_traces([make_trace(1)])
    assert first.read_bytes() == second.read_bytes()
    assert b"\r" not in first.read_bytes()
