from __future__ import annotations

import asyncio
import csv
import math
from pathlib import Path

import numpy as np
import orjson
import pytest

from beamlu.core.config import JacobiOptions
from beamlu.core.errors import ConfigError
from beamlu.integrations.matrix_market import write_matrix_market
from beamlu.services.experiment_config import CheckGroup, Method, OutputFormat, TauChoice, load_experiment_config
from beamlu.services.experiment_runner import ExperimentRunner, RunSummary
from beamlu.services.report_writer import CSV_HEADER, CSV_NAME, JSON_NAME, ReportWriter, log10_or_sentinel, sentinel

ZIELKE_INI = """
[experiment]
matrices = zielke:n=8
blockings = 2
methods = beam
taus = 0.25
"""


def _write(tmp_path: Path, text: str, name: str = "exp.ini") -> Path:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def _run(text: str, tmp_path: Path, jobs: int = 1) -> RunSummary:
    config = load_experiment_config(_write(tmp_path, text))
    return asyncio.run(ExperimentRunner(jacobi=JacobiOptions()).run(config, jobs=jobs))


def test_full_config_is_parsed(tmp_path: Path) -> None:
    config = load_experiment_config(
        _write(
            tmp_path,
            """
[experiment]
matrices = zielke:n=8; spd:n=16,cond=100; diag_dom_cols:n=8,delta=0.5,seed=9
blockings = 2; starts=1/3/9
methods = beam, Block LU Identity
tau_hats = 0.01, 0.001
taus = 0.25
woodbury = false
checks = growth, psi
seeds = 1, 2

[refinement]
max_iters = 3
target = 1e-10

[output]
dir = out
format = csv
""",
        )
    )
    assert [m.key for m in config.matrices] == [
        "zielke:n=8",
        "spd:n=16:cond_target=100:seed=1",
        "spd:n=16:cond_target=100:seed=2",
        "diag_dom_cols:n=8:delta=0.5:seed=9",
    ]
    assert [b.label for b in config.blockings] == ["size=2", "starts=1/3/9"]
    assert config.methods == [Method.BEAM, Method.BLOCK_LU_IDENTITY]
    assert config.tau_choices() == [TauChoice(0.01, False), TauChoice(0.001, False), TauChoice(0.25, True)]
    assert config.tau_choices()[2].label == "tau=0.25"
    assert config.woodbury is False
    assert config.checks == [CheckGroup.GROWTH, CheckGroup.PSI]
    assert config.refinement.options().max_iters == 3
    assert config.output.dir == tmp_path / "out"
    assert config.output.format is OutputFormat.CSV
    assert config.echo()["methods"] == ["beam", "block_lu_identity"]


@pytest.mark.parametrize(
    "text, field",
    [
        ("[experiment]\nmatrices = zielke:n=8\nblockings = 2\nmethods = beam\n", "experiment"),
        ("[experiment]\nmatrices = zielke:n=8\nblockings = 2\nmethods = cholesky\n", "methods"),
        ("[experiment]\nmatrices = zielke:n=8\nblockings = 2\nmethods = beam\ntau_hats = 2\n", "tau_hats.0"),
        ("[experiment]\nmatrices = zielke:n=8\nblockings = 0\nmethods = block_lu_identity\n", "blockings"),
        ("[experiment]\nmatrices = zielke:n=8\nblockings = 2\nmethods = block_lu_identity\ncolour = red\n", "colour"),
        ("[experiment]\nmatrices = spd:n=8\nblockings = 2\nmethods = block_lu_identity\n", "matrices"),
        ("[experiment]\nmatrices = zielke:n=8\nblockings = 2\nmethods = block_lu_identity\n[plots]\n", "plots"),
        ("[experiment]\nmatrices = zielke:n=8\nblockings = 2\nmethods = block_lu_identity\nseeds = a\n", "seeds"),
    ],
)
def test_config_errors_name_the_field(tmp_path: Path, text: str, field: str) -> None:
    with pytest.raises(ConfigError) as info:
        load_experiment_config(_write(tmp_path, text))
    assert info.value.field == field


def test_missing_matrix_market_file_is_reported(tmp_path: Path) -> None:
    text = "[experiment]\nmatrices = mm:data/missing.mtx\nblockings = 2\nmethods = block_lu_unitary\n"
    with pytest.raises(ConfigError) as info:
        load_experiment_config(_write(tmp_path, text))
    assert info.value.field == "matrices"
    assert str(tmp_path / "data" / "missing.mtx") in info.value.message


def test_unreadable_config(tmp_path: Path) -> None:
    with pytest.raises(ConfigError) as info:
        load_experiment_config(tmp_path / "absent.ini")
    assert info.value.field == "config"


def test_zielke_experiment_grows_as_predicted(tmp_path: Path) -> None:
    summary = _run(ZIELKE_INI, tmp_path)
    assert summary.ok
    (record,) = summary.records
    assert record.status == "ok"
    assert record.growth["max"] == pytest.approx(64.0, rel=1e-8)
    assert record.modifications == 3
    assert record.per_block == [1, 1, 1, 0]
    assert record.tau == 0.25
    assert record.failed_checks == []
    assert any(c.name == "zielke_growth" for c in record.checks)


def test_records_are_sorted_and_failures_recorded(tmp_path: Path) -> None:
    summary = _run(
        """
[experiment]
matrices = leading_swap:n=2; identity:n=3
blockings = 1; starts=1/2/4
methods = block_lu_identity, block_lu_unitary
checks = backward
""",
        tmp_path,
        jobs=3,
    )
    assert len(summary.records) == 8
    assert [r.key for r in summary.records] == sorted(r.key for r in summary.records)
    failed = [r for r in summary.records if r.status == "failed"]
    assert {(r.matrix, r.blocking) for r in failed} == {("leading_swap:n=2", "size=1")}
    assert all("BlockSingularError" in r.error for r in failed)
    skipped = [r for r in summary.records if r.status == "skipped"]
    assert {r.matrix for r in skipped} == {"leading_swap:n=2"}
    assert summary.numerical_failures == 2
    assert summary.skipped == 2
    assert not summary.ok


def test_matrix_market_input(tmp_path: Path) -> None:
    write_matrix_market(tmp_path / "a.mtx", np.array([[4.0, 1.0], [1.0, 3.0]]))
    summary = _run("[experiment]\nmatrices = mm:a.mtx\nblockings = 1\nmethods = block_lu_pointwise\n", tmp_path)
    (record,) = summary.records
    assert record.status == "ok"
    assert record.matrix == f"mm:{tmp_path / 'a.mtx'}"
    assert record.solve is not None and record.solve.final_residual < 1e-14


def test_report_files(tmp_path: Path) -> None:
    config = load_experiment_config(_write(tmp_path, ZIELKE_INI))
    summary = asyncio.run(ExperimentRunner(jacobi=JacobiOptions()).run(config))
    paths = ReportWriter().write(tmp_path / "reports", summary.records, config.echo(), OutputFormat.BOTH)
    assert [p.name for p in paths] == [JSON_NAME, CSV_NAME]

    report = orjson.loads(paths[0].read_bytes())
    assert report["schema_version"] == 1
    assert list(report) == sorted(report)
    (record,) = report["records"]
    assert record["method"] == "beam"
    assert record["growth_log10"]["max"] == pytest.approx(math.log10(64.0))

    raw = paths[1].read_bytes()
    assert raw.count(b"\r\n") == 2
    rows = list(csv.DictReader(paths[1].open(encoding="utf-8", newline="")))
    assert tuple(rows[0]) == CSV_HEADER
    assert float(rows[0]["growth_max"]) == pytest.approx(64.0)
    assert rows[0]["modifications"] == "3"
    assert rows[0]["status"] == "ok"


def test_non_finite_sentinels() -> None:
    assert sentinel(math.inf) == "inf"
    assert sentinel(-math.inf) == "-inf"
    assert sentinel(math.nan) == "nan"
    assert sentinel(1.5) == 1.5
    assert sentinel(None) is None
    assert log10_or_sentinel(0.0) == "-inf"
    assert log10_or_sentinel(math.inf) == "inf"
    assert log10_or_sentinel(100.0) == pytest.approx(2.0)


ZIELKE_OVERFLOW_INI = """
[experiment]
matrices = zielke:n=64
blockings = 2
methods = beam
taus = 1e-11
"""


def test_schur_overflow_is_recorded_with_inf_growth(tmp_path: Path) -> None:
    summary = _run(ZIELKE_OVERFLOW_INI, tmp_path)
    (record,) = summary.records
    assert record.status == "failed"
    assert "overflowed" in record.error
    assert record.growth["max"] == math.inf
    assert record.modifications > 0
    assert record.solve is None
    assert summary.numerical_failures == 1
    assert not summary.ok

    paths = ReportWriter().write(tmp_path / "reports", summary.records, {}, OutputFormat.BOTH)
    report = orjson.loads(paths[0].read_bytes())
    (payload,) = report["records"]
    assert payload["growth"]["max"] == "inf"
    assert payload["growth_log10"]["max"] == "inf"
    (row,) = csv.DictReader(paths[1].open(encoding="utf-8", newline=""))
    assert row["growth_max"] == "inf"
    assert row["growth_max_log10"] == "inf"
    assert row["status"] == "failed"


def test_overflow_in_one_run_does_not_stop_the_others(tmp_path: Path) -> None:
    summary = _run(ZIELKE_OVERFLOW_INI.replace("taus = 1e-11", "taus = 1e-11, 0.25\nchecks = growth"), tmp_path)
    by_label = {r.tau_label: r for r in summary.records}
    assert by_label["tau=1e-11"].status == "failed"
    assert by_label["tau=0.25"].status == "ok"
    assert by_label["tau=0.25"].growth["max"] == pytest.approx(0.25 ** (1 - 32), rel=1e-8)
