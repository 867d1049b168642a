"""Experiment configuration: an INI file read by configparser, validated by pydantic.

    [experiment]
    matrices  = zielke:n=8; spd:n=16,cond=100; mm:data/a.mtx
    blockings = 2; 4; starts=1/3/9
    methods   = beam, block_lu_identity
    tau_hats  = 0.01, 0.001
    taus      = 0.25
    woodbury  = true
    checks    = all
    seeds     = 1, 2, 3

    [refinement]
    max_iters = 10
    target    = 1e-13

    [output]
    dir    = reports
    format = both

Matrices are separated by ';', their parameters by ','. Random families
without an explicit seed are expanded over `seeds`. Matrix Market paths are
relative to the config file.
"""

from __future__ import annotations

import configparser
from enum import Enum
from pathlib import Path
from typing import Annotated, Any, NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from beamlu.core.errors import ConfigError, InvalidArgumentError
from beamlu.factorization.beam import RefinementOptions
from beamlu.factorization.block_lu import DiagFactorizer
from beamlu.gallery.families import MatrixFamily, MatrixSpec, generate, is_random_family
from beamlu.integrations.matrix_market import read_matrix_market
from beamlu.linalg.blocking import BlockingScheme
from beamlu.utils.text import norm_key, split_items


class Method(str, Enum):
    BLOCK_LU_IDENTITY = "block_lu_identity"
    BLOCK_LU_POINTWISE = "block_lu_pointwise"
    BLOCK_LU_UNITARY = "block_lu_unitary"
    BEAM = "beam"

    @property
    def diag(self) -> DiagFactorizer:
        if self is Method.BLOCK_LU_IDENTITY:
            return DiagFactorizer.IDENTITY
        if self is Method.BLOCK_LU_POINTWISE:
            return DiagFactorizer.POINTWISE_LU
        return DiagFactorizer.UNITARY


class CheckGroup(str, Enum):
    GROWTH = "growth"
    INTERLACING = "interlacing"
    FACTORS = "factors"
    BACKWARD = "backward"
    PSI = "psi"
    DETERMINANT = "determinant"
    MODFREE = "modfree"
    ZIELKE = "zielke"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    BOTH = "both"


class MatrixSource(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    spec: MatrixSpec | None = None
    path: Path | None = None

    @model_validator(mode="after")
    def _one_of(self) -> MatrixSource:
        if (self.spec is None) == (self.path is None):
            raise ValueError("matrix source needs exactly one of spec or path")
        return self

    @property
    def key(self) -> str:
        return self.spec.key if self.spec is not None else f"mm:{self.path}"

    def load(self) -> np.ndarray:
        if self.spec is not None:
            return generate(self.spec)
        assert self.path is not None
        return read_matrix_market(self.path)


class BlockingChoice(BaseModel):
    """Uniform block size, or explicit 1-based starts ending at n+1."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    size: int | None = Field(default=None, ge=1)
    starts: tuple[int, ...] | None = None

    @model_validator(mode="after")
    def _one_of(self) -> BlockingChoice:
        if (self.size is None) == (self.starts is None):
            raise ValueError("blocking needs exactly one of size or starts")
        if self.starts is not None:
            try:
                BlockingScheme(self.starts)
            except InvalidArgumentError as exc:
                raise ValueError(str(exc)) from None
        return self

    @property
    def label(self) -> str:
        if self.size is not None:
            return f"size={self.size}"
        assert self.starts is not None
        return "starts=" + "/".join(str(s) for s in self.starts)

    def resolve(self, n: int) -> BlockingScheme | None:
        """The partition of an n×n matrix, or None when explicit starts do not cover n."""
        if self.size is not None:
            return BlockingScheme.uniform(n, self.size)
        assert self.starts is not None
        scheme = BlockingScheme(self.starts)
        return scheme if scheme.n == n else None


class TauChoice(NamedTuple):
    value: float
    absolute: bool

    @property
    def label(self) -> str:
        return f"tau={self.value:g}" if self.absolute else f"tau_hat={self.value:g}"


class RefinementSettings(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    max_iters: int = Field(default=10, ge=0)
    target: float = Field(default=1e-13, gt=0)

    def options(self) -> RefinementOptions:
        return RefinementOptions(max_iters=self.max_iters, target=self.target)


class OutputSettings(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    dir: Path | None = None
    format: OutputFormat = OutputFormat.BOTH


TauHat = Annotated[float, Field(gt=0, lt=1)]
Tau = Annotated[float, Field(gt=0)]


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    matrices: list[MatrixSource] = Field(min_length=1)
    blockings: list[BlockingChoice] = Field(min_length=1)
    methods: list[Method] = Field(min_length=1)
    tau_hats: list[TauHat] = Field(default_factory=list)
    taus: list[Tau] = Field(default_factory=list)
    woodbury: bool = True
    refinement: RefinementSettings = RefinementSettings()
    checks: list[CheckGroup] = Field(default_factory=lambda: list(CheckGroup))
    seeds: list[int] = Field(default_factory=lambda: [0])
    output: OutputSettings = OutputSettings()

    @model_validator(mode="after")
    def _taus_iff_beam(self) -> ExperimentConfig:
        has_taus = bool(self.tau_hats or self.taus)
        if Method.BEAM in self.methods and not has_taus:
            raise ValueError("tau_hats (or taus) are required when beam is selected")
        if Method.BEAM not in self.methods and has_taus:
            raise ValueError("tau_hats/taus are only meaningful when beam is selected")
        return self

    def tau_choices(self) -> list[TauChoice]:
        return [TauChoice(t, False) for t in self.tau_hats] + [TauChoice(t, True) for t in self.taus]

    def echo(self) -> dict[str, Any]:
        return self.model_dump(mode="json")


_EXPERIMENT_KEYS = {"matrices", "blockings", "methods", "tau_hats", "taus", "woodbury", "checks", "seeds"}
_SECTIONS = {"experiment", "refinement", "output"}
_SPEC_KEYS = {"cond": "cond_target"}


def load_experiment_config(path: str | Path) -> ExperimentConfig:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(field="config", message=f"cannot read config file {p}")
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(p.read_text(encoding="utf-8"), source=str(p))
    except (OSError, UnicodeDecodeError, configparser.Error) as exc:
        raise ConfigError(field="config", message=f"{p}: {exc}") from exc

    for section in parser.sections():
        if section not in _SECTIONS:
            raise ConfigError(field=section, message=f"unknown section; expected one of {sorted(_SECTIONS)}")
    if not parser.has_section("experiment"):
        raise ConfigError(field="experiment", message="missing [experiment] section")
    exp = parser["experiment"]
    for key in exp:
        if key not in _EXPERIMENT_KEYS:
            raise ConfigError(field=key, message="unknown key in [experiment]")

    seeds = _ints(exp.get("seeds", "0"), "seeds")
    data: dict[str, Any] = {
        "matrices": _matrices(exp.get("matrices", ""), seeds, p.parent),
        "blockings": [_blocking(item) for item in split_items(exp.get("blockings", ""), semicolon_only=True)],
        "methods": [_enum(Method, item, "methods") for item in split_items(exp.get("methods", ""))],
        "tau_hats": _floats(exp.get("tau_hats", ""), "tau_hats"),
        "taus": _floats(exp.get("taus", ""), "taus"),
        "seeds": seeds,
    }
    if "woodbury" in exp:
        data["woodbury"] = _bool(exp, "woodbury")
    if "checks" in exp:
        names = split_items(exp["checks"])
        data["checks"] = list(CheckGroup) if [norm_key(n) for n in names] == ["all"] else [_enum(CheckGroup, n, "checks") for n in names]
    if parser.has_section("refinement"):
        data["refinement"] = dict(parser["refinement"])
    if parser.has_section("output"):
        out = dict(parser["output"])
        if "dir" in out:
            out["dir"] = p.parent / out["dir"]
        data["output"] = out

    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        err = exc.errors()[0]
        field = ".".join(str(part) for part in err["loc"]) or "experiment"
        raise ConfigError(field=field, message=err["msg"]) from exc


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _enum(cls: type[Enum], raw: str, field: str) -> Any:
    try:
        return cls(norm_key(raw))
    except ValueError:
        allowed = ", ".join(m.value for m in cls)  # type: ignore[attr-defined]
        raise ConfigError(field=field, message=f"unknown value {raw!r}; expected one of {allowed}") from None


def _floats(raw: str, field: str) -> list[float]:
    try:
        return [float(item) for item in split_items(raw)]
    except ValueError:
        raise ConfigError(field=field, message=f"expected a list of numbers, got {raw!r}") from None


def _ints(raw: str, field: str) -> list[int]:
    try:
        return [int(item) for item in split_items(raw)]
    except ValueError:
        raise ConfigError(field=field, message=f"expected a list of integers, got {raw!r}") from None


def _bool(section: configparser.SectionProxy, key: str) -> bool:
    try:
        return section.getboolean(key)
    except ValueError:
        raise ConfigError(field=key, message=f"expected a boolean, got {section[key]!r}") from None


def _blocking(raw: str) -> BlockingChoice:
    text = raw.strip()
    try:
        if text.lower().startswith(("starts=", "starts:")):
            starts = tuple(int(s) for s in text[7:].split("/") if s.strip())
            return BlockingChoice(starts=starts)
        return BlockingChoice(size=int(text))
    except (ValueError, ValidationError) as exc:
        raise ConfigError(field="blockings", message=f"{text!r}: {exc}") from None


def _matrices(raw: str, seeds: list[int], base: Path) -> list[MatrixSource]:
    out: list[MatrixSource] = []
    for item in split_items(raw, semicolon_only=True):
        if item.lower().startswith("mm:"):
            path = Path(item[3:].strip())
            if not path.is_absolute():
                path = base / path
            if not path.is_file():
                raise ConfigError(field="matrices", message=f"Matrix Market file not found: {path}")
            out.append(MatrixSource(path=path))
            continue
        try:
            params = _spec_params(item)
            family = MatrixFamily(params["family"])
            if is_random_family(family) and "seed" not in params:
                out.extend(MatrixSource(spec=MatrixSpec(**params, seed=s)) for s in seeds)
            else:
                out.append(MatrixSource(spec=MatrixSpec(**params)))
        except (ValueError, ValidationError) as exc:
            raise ConfigError(field="matrices", message=f"{item!r}: {exc}") from None
    return out


def _spec_params(item: str) -> dict[str, Any]:
    family, _, rest = item.partition(":")
    params: dict[str, Any] = {"family": norm_key(family)}
    for pair in split_items(rest):
        key, sep, value = pair.partition("=")
        if not sep:
            raise ConfigError(field="matrices", message=f"{item!r}: expected key=value, got {pair!r}")
        key = _SPEC_KEYS.get(norm_key(key), norm_key(key))
        value = value.strip()
        params[key] = tuple(int(s) for s in value.split("/")) if key == "starts" else value
    return params
