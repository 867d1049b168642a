from __future__ import annotations


class BeamLUError(Exception):
    pass


class InvalidArgumentError(BeamLUError):
    pass


class NumericalFailureError(BeamLUError):
    def __init__(
        self,
        message: str,
        *,
        pivot: int | None = None,
        block: int | None = None,
        sweeps: int | None = None,
    ) -> None:
        super().__init__(message)
        self.message = message
        self.pivot = pivot
        self.block = block
        self.sweeps = sweeps


class BlockSingularError(NumericalFailureError):
    def __init__(self, *, block: int, message: str = "") -> None:
        super().__init__(message or f"diagonal block {block} is singular to working precision", block=block)


class MatrixMarketParseError(BeamLUError):
    def __init__(self, *, line: int, message: str, path: str = "") -> None:
        where = f"{path}:{line}" if path else f"line {line}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.message = message
        self.path = path


class ConfigError(BeamLUError):
    def __init__(self, *, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message
