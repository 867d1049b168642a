from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

from beamlu.diagnostics.checks import BoundCheck


@dataclass(frozen=True)
class SuiteSpec:
    name: str
    description: str
    slow: bool = False


class VerificationSuite(Protocol):
    name: str

    def spec(self) -> SuiteSpec: ...

    def run(self) -> list[BoundCheck]: ...


class SuiteRegistry:
    def __init__(self) -> None:
        self._suites: dict[str, VerificationSuite] = {}

    def register_suite(self, suite: VerificationSuite) -> None:
        self._suites[suite.name] = suite

    def get_suite(self, name: str) -> VerificationSuite | None:
        return self._suites.get(name)

    def names(self) -> list[str]:
        return sorted(self._suites)

    def all_specs(self) -> list[SuiteSpec]:
        return sorted((s.spec() for s in self._suites.values()), key=lambda s: s.name)
