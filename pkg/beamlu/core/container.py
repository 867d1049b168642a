from __future__ import annotations

from dataclasses import dataclass

from beamlu.core.config import JacobiOptions, Settings
from beamlu.core.logging import get_logger
from beamlu.core.suite_loader import SuiteLoader
from beamlu.core.suite_registry import SuiteRegistry
from beamlu.services.experiment_runner import ExperimentRunner
from beamlu.services.report_writer import ReportWriter
from beamlu.services.verification import VerificationService

logger = get_logger(__name__)


@dataclass
class Container:
    settings: Settings
    jacobi: JacobiOptions

    registry: SuiteRegistry
    suite_loader: SuiteLoader

    experiment_runner: ExperimentRunner
    report_writer: ReportWriter
    verification: VerificationService

    def startup(self) -> None:
        self.suite_loader.load_suites(self)
        logger.debug("startup_done", suites=self.registry.names())


def build_container(settings: Settings) -> Container:
    jacobi = settings.jacobi_options()
    registry = SuiteRegistry()
    suite_loader = SuiteLoader(enabled_suites=settings.suite_names())

    experiment_runner = ExperimentRunner(jacobi=jacobi, trace_spectral=settings.trace_spectral)
    report_writer = ReportWriter()
    verification = VerificationService(registry=registry)

    return Container(
        settings=settings,
        jacobi=jacobi,
        registry=registry,
        suite_loader=suite_loader,
        experiment_runner=experiment_runner,
        report_writer=report_writer,
        verification=verification,
    )
