"""Run configuration files (JSON) and one-factor-at-a-time sensitivity specs."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Any

from .economics import CostModelVariant, CostTimeParams, ProcessModel, LITERAL
from .moea import MoeaConfig
from .problem import ArlConstraints, ChartDesignProblem, DesignSpace

__all__ = [
    "BUILTIN_CONFIGS",
    "DEFAULT_SWEEP",
    "OutputSpec",
    "RunConfig",
    "SensitivitySpec",
    "config_from_dict",
    "config_to_dict",
    "dump_config",
    "load_config",
]

BUILTIN_CONFIGS = ("example_sec5",)
PROCESS_FACTORS = ("delta", "lambda")
COST_FACTORS = ("c0", "c1", "w", "y_cost", "d", "y_var", "t", "t0", "t1", "t2")
FACTORS = PROCESS_FACTORS + COST_FACTORS


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    path: str | None = None

    def __post_init__(self) -> None:
        if self.format not in ("csv", "json"):
            raise ValueError(f"output format must be 'csv' or 'json', got {self.format!r}")


@dataclass(frozen=True)
class RunConfig:
    process: ProcessModel
    costs: CostTimeParams
    space: DesignSpace
    constraints: ArlConstraints = field(default_factory=ArlConstraints)
    moea: MoeaConfig = field(default_factory=MoeaConfig)
    variant: CostModelVariant = LITERAL
    output: OutputSpec = field(default_factory=OutputSpec)

    def problem(self) -> ChartDesignProblem:
        return ChartDesignProblem(self.process, self.costs, self.space, self.constraints,
                                  self.variant)

    def with_factor(self, name: str, value: float) -> "RunConfig":
        """Copy with one model input replaced (process or cost/time factor)."""
        if name == "delta":
            return replace(self, process=replace(self.process, delta=value))
        if name == "lambda":
            return replace(self, process=replace(self.process, lam=value))
        if name in COST_FACTORS:
            return replace(self, costs=replace(self.costs, **{name: value}))
        raise ValueError(f"unknown factor {name!r}; expected one of {', '.join(FACTORS)}")

    def factor(self, name: str) -> float:
        if name == "delta":
            return self.process.delta
        if name == "lambda":
            return self.process.lam
        if name in COST_FACTORS:
            return getattr(self.costs, name)
        raise ValueError(f"unknown factor {name!r}; expected one of {', '.join(FACTORS)}")


@dataclass(frozen=True)
class SensitivitySpec:
    factor: str
    low: float
    high: float

    def __post_init__(self) -> None:
        if self.factor not in FACTORS:
            raise ValueError(f"unknown factor {self.factor!r}; expected one of {', '.join(FACTORS)}")
        if self.low == self.high:
            raise ValueError(f"low and high levels of {self.factor} must differ")

    @classmethod
    def parse(cls, text: str) -> "SensitivitySpec":
        """Parse ``name:low:high``."""
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"expected name:low:high, got {text!r}")
        return cls(parts[0], float(parts[1]), float(parts[2]))


# low/high levels of the one-factor-at-a-time study on the yogurt example
DEFAULT_SWEEP = (
    SensitivitySpec("delta", 1.0, 1.5),
    SensitivitySpec("delta", 1.0, 2.0),
    SensitivitySpec("delta", 1.0, 2.5),
    SensitivitySpec("c0", 10.0, 20.0),
    SensitivitySpec("c1", 100.0, 200.0),
    SensitivitySpec("w", 50.0, 100.0),
    SensitivitySpec("y_cost", 25.0, 50.0),
    SensitivitySpec("d", 0.5, 5.0),
    SensitivitySpec("y_var", 0.1, 1.0),
    SensitivitySpec("lambda", 0.01, 0.05),
    SensitivitySpec("t", 0.05, 0.25),
    SensitivitySpec("t0", 2.0, 5.0),
    SensitivitySpec("t1", 2.0, 5.0),
    SensitivitySpec("t2", 2.0, 5.0),
)


def _section(data: dict, name: str, allowed: set[str], required: bool) -> dict:
    if name not in data:
        if required:
            raise ValueError(f"config is missing the {name!r} section")
        return {}
    section = data[name]
    if not isinstance(section, dict):
        raise ValueError(f"config section {name!r} must be an object")
    unknown = set(section) - allowed
    if unknown:
        raise ValueError(f"unknown keys in {name!r}: {', '.join(sorted(unknown))}")
    return section


def _field_names(cls) -> set[str]:
    return {f.name for f in dataclasses.fields(cls)}


def config_from_dict(data: dict[str, Any]) -> RunConfig:
    top = {"process", "costs", "space", "constraints", "moea", "variant", "output"}
    unknown = set(data) - top
    if unknown:
        raise ValueError(f"unknown top-level config keys: {', '.join(sorted(unknown))}")

    proc = _section(data, "process", {"delta", "lambda"}, True)
    missing = {"delta", "lambda"} - set(proc)
    if missing:
        raise ValueError(f"process section is missing {', '.join(sorted(missing))}")
    costs = _section(data, "costs", _field_names(CostTimeParams), True)
    space = _section(data, "space", _field_names(DesignSpace), True)
    cons = _section(data, "constraints", _field_names(ArlConstraints), False)
    moea = _section(data, "moea", _field_names(MoeaConfig), False)
    out = _section(data, "output", _field_names(OutputSpec), False)
    variant = data.get("variant", "literal")

    return RunConfig(
        process=ProcessModel(float(proc["delta"]), float(proc["lambda"])),
        costs=CostTimeParams(**costs),
        space=DesignSpace(tuple(space["n_range"]), tuple(space["h_range"]),
                          tuple(space["H_range"])),
        constraints=ArlConstraints(**cons),
        moea=MoeaConfig(**moea),
        variant=CostModelVariant.from_name(variant),
        output=OutputSpec(**out),
    )


def config_to_dict(cfg: RunConfig) -> dict[str, Any]:
    costs = dataclasses.asdict(cfg.costs)
    return {
        "process": {"delta": cfg.process.delta, "lambda": cfg.process.lam},
        "costs": costs,
        "space": {"n_range": list(cfg.space.n_range), "h_range": list(cfg.space.h_range),
                  "H_range": list(cfg.space.H_range)},
        "constraints": {"arl_lower_bound": cfg.constraints.arl_lower_bound,
                        "arl_upper_bound": cfg.constraints.arl_upper_bound,
                        "policy": cfg.constraints.policy.value},
        "moea": dataclasses.asdict(cfg.moea),
        "variant": cfg.variant.name,
        "output": dataclasses.asdict(cfg.output),
    }


def load_config(source: str | Path) -> RunConfig:
    """Load a config file, or a bundled one by name (e.g. ``example_sec5``)."""
    if str(source) in BUILTIN_CONFIGS:
        text = resources.files("cusumopt.data").joinpath(f"{source}.json").read_text()
    else:
        text = Path(source).read_text()
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    return config_from_dict(data)


def dump_config(cfg: RunConfig, path: str | Path | None = None) -> str:
    text = json.dumps(config_to_dict(cfg), indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
