from __future__ import annotations

from dataclasses import dataclass

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

DEFAULT_MAX_BLOCK_SIZE = 64
DEFAULT_JACOBI_MAX_SWEEPS = 30
DEFAULT_JACOBI_TOL = 1e-15

DEFAULT_SUITES = "norms,growth,dominance,backward,beam,zielke,turing,modfree,psi"


@dataclass(frozen=True)
class JacobiOptions:
    """Limits of the one-sided Jacobi SVD used on diagonal blocks."""

    max_size: int = DEFAULT_MAX_BLOCK_SIZE
    max_sweeps: int = DEFAULT_JACOBI_MAX_SWEEPS
    tol: float = DEFAULT_JACOBI_TOL


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8", extra="ignore")

    log_level: str = Field(default="INFO", alias="LOG_LEVEL")
    log_json: bool = Field(default=True, alias="LOG_JSON")

    max_block_size: int = Field(default=DEFAULT_MAX_BLOCK_SIZE, alias="MAX_BLOCK_SIZE", ge=1)
    jacobi_max_sweeps: int = Field(default=DEFAULT_JACOBI_MAX_SWEEPS, alias="JACOBI_MAX_SWEEPS", ge=1)
    jacobi_tol: float = Field(default=DEFAULT_JACOBI_TOL, alias="JACOBI_TOL", gt=0)
    trace_spectral: bool = Field(default=True, alias="TRACE_SPECTRAL")

    default_jobs: int = Field(default=1, alias="DEFAULT_JOBS", ge=1)
    output_dir: str = Field(default="reports", alias="OUTPUT_DIR")

    # Comma-separated list of verification suites `verify` is allowed to load.
    # Example: ENABLED_SUITES=norms,zielke
    enabled_suites: str = Field(default=DEFAULT_SUITES, alias="ENABLED_SUITES")

    def jacobi_options(self) -> JacobiOptions:
        return JacobiOptions(
            max_size=self.max_block_size,
            max_sweeps=self.jacobi_max_sweeps,
            tol=self.jacobi_tol,
        )

    def suite_names(self) -> list[str]:
        return [s.strip() for s in self.enabled_suites.split(",") if s.strip()]
