"""Run configuration: schema validation, defaults and bundled presets."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Any, Optional

import jsonschema

from .dde import HistorySpec
from .errors import ConfigError
from .model import OscillatorConfig

__all__ = ["RunConfig", "CurveSpec", "Axis", "load_config", "parse_config", "preset_names", "preset_path", "SCHEMA"]

MAX_SWEEP_POINTS = 10 ** 6

SCHEMA = json.loads(resources.files(__package__).joinpath("config.schema.json").read_text())


@dataclass(frozen=True)
class Axis:
    min: float
    max: float
    num: int

    def values(self) -> list[float]:
        if self.num == 1:
            return [self.min]
        # weighted form keeps grids with min = -max exactly mirror-symmetric
        m = self.num - 1
        return [((m - i) * self.min + i * self.max) / m for i in range(self.num)]


@dataclass(frozen=True)
class CurveSpec:
    mu1Min: float = -0.005
    mu1Max: float = 0.005
    samples: int = 101
    mu2Rows: tuple[float, ...] = ()


@dataclass(frozen=True)
class RunConfig:
    """Everything one CLI invocation needs."""

    oscillator: OscillatorConfig
    mu1: float = 0.0
    mu2: float = 0.0
    histories: tuple[tuple[float, float], ...] = ()
    tEnd: float = 2000.0
    stepsPerDelay: int = 2048
    recordStride: int = 16
    outputStride: int = 1
    smoothingPeriods: float = 1.0
    outputs: str = "out"
    format: str = "kv"
    name: str = ""
    curves: CurveSpec = field(default_factory=CurveSpec)
    sweep: Optional[tuple[Axis, Axis]] = None

    def __post_init__(self) -> None:
        for v in (self.mu1, self.mu2, self.tEnd, self.smoothingPeriods, *sum(self.histories, ())):
            if not math.isfinite(v):
                raise ConfigError("all numeric fields must be finite")
        if self.stepsPerDelay % self.recordStride:
            raise ConfigError("recordStride must divide stepsPerDelay")
        if (self.stepsPerDelay // self.recordStride) % 2:
            raise ConfigError("stepsPerDelay / recordStride must be even for projection")
        if self.sweep is not None and self.sweep[0].num * self.sweep[1].num > MAX_SWEEP_POINTS:
            raise ConfigError(f"sweep grid exceeds {MAX_SWEEP_POINTS} points")

    def history_specs(self) -> list[HistorySpec]:
        return [HistorySpec.constant(x0, v0) for x0, v0 in self.histories]

    def with_(self, **changes: Any) -> "RunConfig":
        return replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready form that ``parse_config`` maps back to an equal object."""
        d: dict[str, Any] = {
            "name": self.name,
            "oscillator": self.oscillator.to_dict(),
            "mu1": self.mu1,
            "mu2": self.mu2,
            "histories": [{"x0": x0, "v0": v0} for x0, v0 in self.histories],
            "tEnd": self.tEnd,
            "stepsPerDelay": self.stepsPerDelay,
            "recordStride": self.recordStride,
            "outputStride": self.outputStride,
            "smoothingPeriods": self.smoothingPeriods,
            "outputs": self.outputs,
            "format": self.format,
            "curves": {
                "mu1Min": self.curves.mu1Min,
                "mu1Max": self.curves.mu1Max,
                "samples": self.curves.samples,
                "mu2Rows": list(self.curves.mu2Rows),
            },
        }
        if self.sweep is not None:
            d["sweep"] = {k: vars(ax) for k, ax in zip(("mu1", "mu2"), self.sweep)}
        return d


def parse_config(data: dict[str, Any]) -> RunConfig:
    """Validate a decoded document against the schema and build a ``RunConfig``.

    Raises
    ------
    ConfigError
        On schema violations or inconsistent values.
    """
    try:
        jsonschema.validate(data, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"invalid config at {where}: {exc.message}") from None
    try:
        osc = OscillatorConfig.from_mapping(data["oscillator"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    cv = data.get("curves", {})
    sweep = None
    if "sweep" in data:
        sweep = tuple(Axis(**data["sweep"][k]) for k in ("mu1", "mu2"))
    return RunConfig(
        oscillator=osc,
        mu1=float(data.get("mu1", 0.0)),
        mu2=float(data.get("mu2", 0.0)),
        histories=tuple((float(h["x0"]), float(h.get("v0", 0.0))) for h in data.get("histories", [])),
        tEnd=float(data.get("tEnd", 2000.0)),
        stepsPerDelay=int(data.get("stepsPerDelay", 2048)),
        recordStride=int(data.get("recordStride", 16)),
        outputStride=int(data.get("outputStride", 1)),
        smoothingPeriods=float(data.get("smoothingPeriods", 1.0)),
        outputs=data.get("outputs", "out"),
        format=data.get("format", "kv"),
        name=data.get("name", ""),
        curves=CurveSpec(
            mu1Min=float(cv.get("mu1Min", -0.005)),
            mu1Max=float(cv.get("mu1Max", 0.005)),
            samples=int(cv.get("samples", 101)),
            mu2Rows=tuple(float(v) for v in cv.get("mu2Rows", [])),
        ),
        sweep=sweep,
    )


def preset_names() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files(__package__).joinpath("configs").iterdir() if p.name.endswith(".json"))


def preset_path(name: str):
    p = resources.files(__package__).joinpath("configs", f"{name}.json")
    if not p.is_file():
        raise ConfigError(f"no bundled preset {name!r}; available: {', '.join(preset_names())}")
    return p


def load_config(path: str | Path) -> RunConfig:
    """Read a JSON config file, or a bundled preset when ``path`` names one."""
    p = Path(path)
    if not p.exists() and not p.suffix:
        p = preset_path(str(path))
    try:
        data = json.loads(p.read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return parse_config(data)
