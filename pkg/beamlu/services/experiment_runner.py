from __future__ import annotations

import asyncio
import math
import time
from dataclasses import dataclass
from typing import Any, Literal, NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from beamlu.core.config import JacobiOptions
from beamlu.core.errors import BeamLUError
from beamlu.core.logging import get_logger
from beamlu.diagnostics.checks import BoundCheck
from beamlu.diagnostics.dominance import dominance, modification_free_bound
from beamlu.diagnostics.factors import check_backward_error, check_factor_bounds
from beamlu.diagnostics.growth import check_growth_bounds, check_interlacing, growth_check_norms
from beamlu.diagnostics.modifications import determinant_bounds, psi_and_capacitance
from beamlu.diagnostics.zielke import zielke_growth_check
from beamlu.factorization.beam import BeamFactorization, beam_factor, beam_solve, modified_matrix
from beamlu.factorization.block_lu import BlockLUFactors, factor_block_lu, growth_factor
from beamlu.factorization.substitution import block_back_sub, block_forward_sub
from beamlu.gallery.families import MatrixFamily
from beamlu.linalg.blocking import BlockingScheme
from beamlu.linalg.norms import NormKind
from beamlu.linalg.svd import sigma_max
from beamlu.services.experiment_config import (
    BlockingChoice,
    CheckGroup,
    ExperimentConfig,
    MatrixSource,
    Method,
    TauChoice,
)

logger = get_logger(__name__)

RunStatus = Literal["ok", "failed", "skipped"]


class CheckRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    measured: float
    bound: float
    satisfied: bool | None
    log_scale: bool = False
    note: str = ""
    context: dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def from_check(cls, check: BoundCheck) -> CheckRecord:
        return cls(
            name=check.name,
            measured=check.measured,
            bound=check.bound,
            satisfied=check.satisfied,
            log_scale=check.log_scale,
            note=check.note,
            context=_plain(dict(check.context)),
        )


class SolveSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    iterations: int
    residuals: list[float]
    converged: bool
    diverged: bool
    woodbury_used: bool

    @property
    def final_residual(self) -> float:
        return self.residuals[-1]


class RunRecord(BaseModel):
    """One (matrix, blocking, method, τ) run; everything but wall_time is deterministic."""

    model_config = ConfigDict(frozen=True)

    matrix: str
    n: int | None = None
    blocking: str
    method: Method
    tau_label: str = ""
    tau_hat: float | None = None
    tau: float | None = None
    status: RunStatus
    error: str = ""
    growth: dict[str, float] = Field(default_factory=dict)
    modifications: int = 0
    per_block: list[int] = Field(default_factory=list)
    psi: float | None = None
    solve: SolveSummary | None = None
    checks: list[CheckRecord] = Field(default_factory=list)
    wall_time: float = 0.0

    @property
    def key(self) -> tuple[str, str, str, str]:
        return (self.matrix, self.blocking, self.method.value, self.tau_label)

    @property
    def failed_checks(self) -> list[CheckRecord]:
        return [c for c in self.checks if c.satisfied is False]


class RunTask(NamedTuple):
    matrix: MatrixSource
    blocking: BlockingChoice
    method: Method
    tau: TauChoice | None


class RunSummary(NamedTuple):
    records: list[RunRecord]
    failed_checks: int
    numerical_failures: int
    skipped: int

    @property
    def ok(self) -> bool:
        return self.failed_checks == 0 and self.numerical_failures == 0


@dataclass
class ExperimentRunner:
    """Оркестрирует прогоны эксперимента.

    Шаги:
    1. Раскладываем конфиг на независимые прогоны (matrix, blocking, method, τ).
    2. Каждый прогон выполняется в отдельном потоке; параллелизм ограничен --jobs.
    3. Ошибки прогона записываются в RunRecord, остальные прогоны продолжаются.
    4. Записи сортируются по ключу, итог пишется в лог.
    """

    jacobi: JacobiOptions
    trace_spectral: bool = True

    def plan(self, config: ExperimentConfig) -> list[RunTask]:
        tasks: list[RunTask] = []
        for matrix in config.matrices:
            for blocking in config.blockings:
                for method in config.methods:
                    if method is Method.BEAM:
                        tasks.extend(RunTask(matrix, blocking, method, tau) for tau in config.tau_choices())
                    else:
                        tasks.append(RunTask(matrix, blocking, method, None))
        return tasks

    async def run(self, config: ExperimentConfig, *, jobs: int = 1) -> RunSummary:
        # --- Шаг 1: раскладываем конфиг на прогоны ---
        tasks = self.plan(config)
        logger.info("experiment_started", runs=len(tasks), jobs=jobs)

        # --- Шаг 2: выполняем прогоны в потоках ---
        semaphore = asyncio.Semaphore(max(1, jobs))

        async def guarded(task: RunTask) -> RunRecord:
            async with semaphore:
                return await asyncio.to_thread(self.execute, task, config)

        records = list(await asyncio.gather(*(guarded(t) for t in tasks)))

        # --- Шаг 3: сортировка и сводка ---
        records.sort(key=lambda r: r.key)
        failed_checks = sum(len(r.failed_checks) for r in records)
        numerical_failures = sum(1 for r in records if r.status == "failed")
        skipped = sum(1 for r in records if r.status == "skipped")

        logger.info(
            "experiment_finished",
            runs=len(records),
            failed_checks=failed_checks,
            numerical_failures=numerical_failures,
            skipped=skipped,
        )
        return RunSummary(
            records=records,
            failed_checks=failed_checks,
            numerical_failures=numerical_failures,
            skipped=skipped,
        )

    def execute(self, task: RunTask, config: ExperimentConfig) -> RunRecord:
        started = time.perf_counter()
        base: dict[str, Any] = {
            "matrix": task.matrix.key,
            "blocking": task.blocking.label,
            "method": task.method,
            "tau_label": task.tau.label if task.tau is not None else "",
        }
        n: int | None = None
        try:
            a = task.matrix.load()
            n = a.shape[0]
            blocking = task.blocking.resolve(n)
            if blocking is None:
                logger.warning("experiment_run_skipped", reason="blocking does not cover n", n=n, **_log_ctx(base))
                return RunRecord(**base, n=n, status="skipped", error=f"blocking does not cover n={n}")
            fields = self._factor_and_check(a, blocking, task, config)
        except (BeamLUError, np.linalg.LinAlgError, ValueError) as exc:
            logger.warning("experiment_run_failed", error=str(exc), **_log_ctx(base))
            return RunRecord(
                **base,
                n=n,
                status="failed",
                error=f"{type(exc).__name__}: {exc}",
                wall_time=time.perf_counter() - started,
            )
        return RunRecord(**base, n=n, wall_time=time.perf_counter() - started, **{"status": "ok", **fields})

    def _factor_and_check(
        self,
        a: np.ndarray,
        blocking: BlockingScheme,
        task: RunTask,
        config: ExperimentConfig,
    ) -> dict[str, Any]:
        n = a.shape[0]
        kinds = growth_check_norms(blocking, spectral=self.trace_spectral)
        b = a @ np.ones(n)
        selected = set(config.checks)
        ctx: dict[str, Any] = {"matrix": task.matrix.key, "blocking": blocking.label, "method": task.method.value}

        beam: BeamFactorization | None = None
        if task.method is Method.BEAM:
            assert task.tau is not None
            if task.tau.absolute:
                beam = beam_factor(a, blocking, woodbury=config.woodbury, trace_norms=kinds, tau=task.tau.value, jacobi=self.jacobi)
            else:
                beam = beam_factor(a, blocking, task.tau.value, config.woodbury, kinds, jacobi=self.jacobi)
            ctx.update(tau_hat=beam.mods.tau_hat, tau=beam.mods.tau)
            if beam.factors.trace.overflowed:
                return _overflow_fields(beam.factors, beam, kinds, ctx)
            report = beam_solve(beam, b, config.refinement.options(), a)
            solve = SolveSummary(
                iterations=report.iterations,
                residuals=list(report.residuals),
                converged=report.converged,
                diverged=report.diverged,
                woodbury_used=report.woodbury_used,
            )
            factors = beam.factors
            modified = beam.mods.count > 0
        else:
            factors = factor_block_lu(a, blocking, task.method.diag, kinds, jacobi=self.jacobi)
            if factors.trace.overflowed:
                return _overflow_fields(factors, None, kinds, ctx)
            solve = _plain_solve(factors, a, b, config.refinement.target)
            modified = False

        checks: list[BoundCheck] = []
        subject: BlockLUFactors | BeamFactorization = beam if beam is not None else factors
        if CheckGroup.GROWTH in selected:
            elim = modified_matrix(beam, a) if beam is not None and modified else None
            checks += check_growth_bounds(a, blocking, factors.trace, factored=elim, context=ctx)
        if CheckGroup.INTERLACING in selected and not modified:
            checks += check_interlacing(a, blocking, factors.trace, context=ctx)
        if CheckGroup.FACTORS in selected:
            checks += check_factor_bounds(subject, a, context=ctx)
        if CheckGroup.BACKWARD in selected:
            checks += check_backward_error(subject, a, b, context=ctx)

        psi: float | None = None
        if beam is not None:
            if CheckGroup.PSI in selected:
                psi_report, psi_checks = psi_and_capacitance(beam, a, context=ctx)
                psi = psi_report.psi_measured
                checks += psi_checks
            if CheckGroup.DETERMINANT in selected:
                checks += determinant_bounds(beam, a, context=ctx)
            if CheckGroup.MODFREE in selected:
                checks += _modfree_checks(a, blocking, beam, ctx)
            if CheckGroup.ZIELKE in selected and _zielke_applies(task.matrix, blocking, beam):
                checks.append(zielke_growth_check(n, blocking, beam.mods.tau))

        growth = {kind.label: growth_factor(factors.trace, kind) for kind in sorted(kinds, key=lambda k: k.label)}
        return {
            "tau_hat": beam.mods.tau_hat if beam is not None else None,
            "tau": beam.mods.tau if beam is not None else None,
            "growth": growth,
            "modifications": beam.mods.count if beam is not None else 0,
            "per_block": beam.mods.per_block(blocking.n_blocks) if beam is not None else [],
            "psi": psi,
            "solve": solve,
            "checks": [CheckRecord.from_check(c) for c in checks],
        }


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _plain_solve(factors: BlockLUFactors, a: np.ndarray, b: np.ndarray, target: float) -> SolveSummary:
    x = block_back_sub(factors.r, factors.blocking, block_forward_sub(factors.l, factors.blocking, b))
    denom = sigma_max(a) * float(np.linalg.norm(x))
    r = float(np.linalg.norm(b - a @ x))
    residual = r / denom if denom > 0 else (0.0 if r == 0 else math.inf)
    return SolveSummary(iterations=0, residuals=[residual], converged=residual <= target, diverged=False, woodbury_used=False)


def _overflow_fields(
    factors: BlockLUFactors,
    beam: BeamFactorization | None,
    kinds: frozenset[NormKind],
    ctx: dict[str, Any],
) -> dict[str, Any]:
    """Elimination stopped on a non-finite Schur complement: growth is recorded as inf, no solve or checks."""
    step = factors.trace.overflow_step
    logger.warning("experiment_run_overflow", step=step, **ctx)
    return {
        "status": "failed",
        "error": f"Schur complement overflowed at step {step}",
        "tau_hat": beam.mods.tau_hat if beam is not None else None,
        "tau": beam.mods.tau if beam is not None else None,
        "growth": {kind.label: growth_factor(factors.trace, kind) for kind in sorted(kinds, key=lambda k: k.label)},
        "modifications": beam.mods.count if beam is not None else 0,
        "per_block": beam.mods.per_block(factors.blocking.n_blocks) if beam is not None else [],
    }


def _modfree_checks(a: np.ndarray, blocking: BlockingScheme, f: BeamFactorization, ctx: dict[str, Any]) -> list[BoundCheck]:
    """A τ below a certified modification-free threshold must leave m = 0."""
    tau_max = modification_free_bound(dominance(a, blocking), a).best
    if tau_max is None or f.mods.tau > tau_max:
        return []
    return [BoundCheck.compare("modification_free", float(f.mods.count), 0.0, {**ctx, "tau_max": tau_max})]


def _zielke_applies(matrix: MatrixSource, blocking: BlockingScheme, f: BeamFactorization) -> bool:
    return (
        matrix.spec is not None
        and matrix.spec.family is MatrixFamily.ZIELKE
        and min(blocking.sizes) >= 2
        and f.mods.tau <= 0.5
    )


def _log_ctx(base: dict[str, Any]) -> dict[str, Any]:
    return {k: (v.value if isinstance(v, Method) else v) for k, v in base.items()}


def _plain(value: Any) -> Any:
    """numpy scalars and containers to plain Python for pydantic and orjson."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    return value
