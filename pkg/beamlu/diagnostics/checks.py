from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

SLACK = 1e-9


@dataclass(frozen=True)
class BoundCheck:
    """One measured quantity against one bound.

    `satisfied` is None when the check was skipped; `note` then says why.
    Log-scale checks compare natural logarithms with an additive slack.
    """

    name: str
    measured: float
    bound: float
    satisfied: bool | None
    context: Mapping[str, Any] = field(default_factory=dict)
    log_scale: bool = False
    note: str = ""

    @classmethod
    def compare(
        cls,
        name: str,
        measured: float,
        bound: float,
        context: Mapping[str, Any] | None = None,
        *,
        log_scale: bool = False,
        note: str = "",
    ) -> BoundCheck:
        if math.isnan(measured) or math.isnan(bound):
            ok = False
        elif math.isinf(bound) and bound > 0:
            ok = True
        elif log_scale:
            ok = measured <= bound + SLACK * max(1.0, abs(bound))
        else:
            ok = measured <= bound * (1.0 + SLACK)
        return cls(name=name, measured=float(measured), bound=float(bound), satisfied=ok,
                   context=dict(context or {}), log_scale=log_scale, note=note)

    @classmethod
    def skipped(cls, name: str, reason: str, context: Mapping[str, Any] | None = None) -> BoundCheck:
        return cls(name=name, measured=math.nan, bound=math.nan, satisfied=None,
                   context=dict(context or {}), note=reason)

    @property
    def failed(self) -> bool:
        return self.satisfied is False
