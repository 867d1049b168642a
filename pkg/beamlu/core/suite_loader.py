from __future__ import annotations

import importlib
from dataclasses import dataclass

from beamlu.core.logging import get_logger
from beamlu.core.suite_registry import VerificationSuite

logger = get_logger(__name__)


@dataclass(frozen=True)
class SuiteLoader:
    enabled_suites: list[str]

    def load_suites(self, container: object) -> None:
        registry = getattr(container, "registry")
        for suite_name in self.enabled_suites:
            suite_name = suite_name.strip()
            if not suite_name:
                continue
            import_path = f"beamlu.suites.{suite_name}"
            try:
                module = importlib.import_module(import_path)
                factory = getattr(module, "create_suite")
                suite: VerificationSuite = factory(container)
                registry.register_suite(suite)
                logger.debug("suite_loaded", suite=suite_name)
            except ModuleNotFoundError:
                logger.warning("suite_not_found", suite=suite_name, import_path=import_path)
            except Exception as e:
                logger.exception("suite_load_failed", suite=suite_name, error=str(e))
