from __future__ import annotations

from dataclasses import dataclass

from beamlu.core.config import JacobiOptions
from beamlu.core.suite_registry import SuiteSpec
from beamlu.diagnostics.checks import BoundCheck


@dataclass
class Suite:
    """A named, seeded bundle of bound checks run by `verify`."""

    name: str
    description: str
    jacobi: JacobiOptions
    slow: bool = False

    def spec(self) -> SuiteSpec:
        return SuiteSpec(name=self.name, description=self.description, slow=self.slow)

    def run(self) -> list[BoundCheck]:
        raise NotImplementedError
