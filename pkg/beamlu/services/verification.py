from __future__ import annotations

import math
import time
from collections import defaultdict
from dataclasses import dataclass
from typing import NamedTuple

from beamlu.core.errors import InvalidArgumentError
from beamlu.core.logging import get_logger
from beamlu.core.suite_registry import SuiteRegistry
from beamlu.diagnostics.checks import BoundCheck

logger = get_logger(__name__)


class SuiteOutcome(NamedTuple):
    name: str
    checks: list[BoundCheck]
    elapsed: float

    @property
    def failed(self) -> list[BoundCheck]:
        return [c for c in self.checks if c.failed]

    @property
    def passed(self) -> bool:
        return bool(self.checks) and not self.failed


@dataclass
class VerificationService:
    registry: SuiteRegistry

    def available(self) -> list[str]:
        return self.registry.names()

    def run_suite(self, name: str) -> SuiteOutcome:
        suite = self.registry.get_suite(name)
        if suite is None:
            raise InvalidArgumentError(f"unknown suite {name!r}; available: {', '.join(self.available())}")
        started = time.perf_counter()
        checks = suite.run()
        outcome = SuiteOutcome(name=name, checks=checks, elapsed=time.perf_counter() - started)
        logger.info(
            "suite_finished",
            suite=name,
            checks=len(checks),
            failed=len(outcome.failed),
            elapsed=round(outcome.elapsed, 3),
        )
        for check in outcome.failed[:20]:
            logger.warning("suite_check_failed", suite=name, check=check.name, measured=check.measured, bound=check.bound, context=dict(check.context))
        return outcome


def _ratio(check: BoundCheck) -> float:
    if check.satisfied is None:
        return math.nan
    if check.log_scale:
        return check.measured - check.bound
    if check.bound == 0.0:
        return 0.0 if check.measured == 0.0 else math.inf
    return check.measured / check.bound


def format_table(outcome: SuiteOutcome) -> str:
    """Pass/fail table grouped by check name; `worst` is measured/bound (difference for log-scale checks)."""
    groups: dict[str, list[BoundCheck]] = defaultdict(list)
    for check in outcome.checks:
        groups[check.name].append(check)

    header = ("check", "total", "pass", "fail", "skip", "worst")
    rows = []
    for name in sorted(groups):
        items = groups[name]
        ratios = [r for r in (_ratio(c) for c in items) if not math.isnan(r)]
        rows.append((
            name,
            str(len(items)),
            str(sum(1 for c in items if c.satisfied is True)),
            str(sum(1 for c in items if c.satisfied is False)),
            str(sum(1 for c in items if c.satisfied is None)),
            f"{max(ratios):.3g}" if ratios else "-",
        ))
    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) if rows else len(header[i]) for i in range(len(header))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in rows)
    verdict = "PASS" if outcome.passed else "FAIL"
    lines.append(f"suite {outcome.name}: {verdict} ({len(outcome.checks)} checks, {outcome.elapsed:.2f} s)")
    return "\n".join(lines)
