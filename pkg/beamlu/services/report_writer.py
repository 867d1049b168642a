"""JSON and CSV experiment reports.

JSON: UTF-8, sorted keys, `schema_version` at the top. Non-finite floats are
written as the strings "inf", "-inf" and "nan"; growth factors also carry a
log10 companion so overflowed values stay comparable.

CSV: one row per run, the fixed header CSV_HEADER, RFC 4180 quoting.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable

import orjson

from beamlu.core.logging import get_logger
from beamlu.services.experiment_config import OutputFormat
from beamlu.services.experiment_runner import RunRecord

logger = get_logger(__name__)

SCHEMA_VERSION = 1
JSON_NAME = "report.json"
CSV_NAME = "summary.csv"

CSV_HEADER = (
    "matrix",
    "n",
    "blocking",
    "method",
    "tau_label",
    "tau_hat",
    "tau",
    "status",
    "modifications",
    "growth_max",
    "growth_max_log10",
    "growth_one",
    "growth_inf",
    "growth_fro",
    "growth_spectral",
    "psi",
    "iterations",
    "final_residual",
    "checks_total",
    "checks_failed",
    "checks_skipped",
    "error",
)


def sentinel(value: float | None) -> float | str | None:
    """Finite floats pass through; inf, -inf and nan become strings."""
    if value is None or math.isfinite(value):
        return value
    if math.isnan(value):
        return "nan"
    return "inf" if value > 0 else "-inf"


def log10_or_sentinel(value: float) -> float | str:
    if math.isnan(value):
        return "nan"
    if value == math.inf:
        return "inf"
    if value <= 0.0:
        return "-inf"
    return math.log10(value)


def _sanitize(obj: Any) -> Any:
    if isinstance(obj, float):
        return sentinel(obj)
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_sanitize(v) for v in obj]
    return obj


def record_payload(record: RunRecord) -> dict[str, Any]:
    payload = record.model_dump(mode="python")
    payload["method"] = record.method.value
    payload["growth_log10"] = {k: log10_or_sentinel(v) for k, v in record.growth.items()}
    return _sanitize(payload)


def csv_row(record: RunRecord) -> dict[str, Any]:
    def fmt(value: float | None) -> str:
        if value is None:
            return ""
        out = sentinel(value)
        return out if isinstance(out, str) else repr(out)

    growth = record.growth
    row: dict[str, Any] = {
        "matrix": record.matrix,
        "n": "" if record.n is None else record.n,
        "blocking": record.blocking,
        "method": record.method.value,
        "tau_label": record.tau_label,
        "tau_hat": fmt(record.tau_hat),
        "tau": fmt(record.tau),
        "status": record.status,
        "modifications": record.modifications,
        "growth_max": fmt(growth.get("max")),
        "growth_max_log10": "" if "max" not in growth else _str(log10_or_sentinel(growth["max"])),
        "growth_one": fmt(growth.get("one")),
        "growth_inf": fmt(growth.get("inf")),
        "growth_fro": fmt(growth.get("fro")),
        "growth_spectral": fmt(growth.get("spectral")),
        "psi": fmt(record.psi),
        "iterations": "" if record.solve is None else record.solve.iterations,
        "final_residual": "" if record.solve is None else fmt(record.solve.final_residual),
        "checks_total": len(record.checks),
        "checks_failed": len(record.failed_checks),
        "checks_skipped": sum(1 for c in record.checks if c.satisfied is None),
        "error": record.error,
    }
    return row


def _str(value: float | str) -> str:
    return value if isinstance(value, str) else repr(value)


@dataclass
class ReportWriter:
    def write_json(self, path: Path, records: Iterable[RunRecord], config: dict[str, Any]) -> Path:
        body = {
            "schema_version": SCHEMA_VERSION,
            "config": _sanitize(config),
            "records": [record_payload(r) for r in records],
        }
        path.write_bytes(orjson.dumps(body, option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2))
        return path

    def write_csv(self, path: Path, records: Iterable[RunRecord]) -> Path:
        with path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_HEADER, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
            writer.writeheader()
            for record in records:
                writer.writerow(csv_row(record))
        return path

    def write(
        self,
        out_dir: Path,
        records: list[RunRecord],
        config: dict[str, Any],
        fmt: OutputFormat,
    ) -> list[Path]:
        out_dir.mkdir(parents=True, exist_ok=True)
        written: list[Path] = []
        if fmt in (OutputFormat.JSON, OutputFormat.BOTH):
            written.append(self.write_json(out_dir / JSON_NAME, records, config))
        if fmt in (OutputFormat.CSV, OutputFormat.BOTH):
            written.append(self.write_csv(out_dir / CSV_NAME, records))
        logger.info("report_written", files=[str(p) for p in written], runs=len(records))
        return written
