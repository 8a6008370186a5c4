"""
Experiment configuration.

A config file is YAML whose top level maps section names to flat mappings of
scalars::

    experiment:
      kind: online_rf
    architecture:
      m: 256
    seeds:
      master: 7

Unknown sections or keys, wrong scalar types and invalid choices raise
``ConfigError`` with the ``section.key`` path and the line number. Missing keys
take the defaults below.
"""

from __future__ import annotations

import dataclasses
import logging
import math
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union, get_args, get_origin, get_type_hints

import yaml

from ..core.errors import ConfigError
from ..core.seeding import derive_seed

logger = logging.getLogger(__name__)

EXPERIMENT_KINDS = ("online_rf", "nearly_convex_synthetic", "episodic_control", "invariant_suite")
WORKERS_ENV = "PYNEURALOCO_WORKERS"


@dataclass(frozen=True)
class ExperimentSection:
    kind: str = "invariant_suite"
    name: str = "run"
    strict_inputs: bool = True


@dataclass(frozen=True)
class ArchitectureSection:
    architecture: str = "two_layer"
    p: int = 8
    d: int = 1
    m: int = 64
    H: int = 2
    b: Optional[float] = None
    activation: str = "tanh"
    radius: Optional[float] = None
    ball_mode: Optional[str] = None
    loss: str = "absolute"
    loss_lipschitz: Optional[float] = None
    kappa: float = 1.0


@dataclass(frozen=True)
class AlgorithmSection:
    name: str = "ogd"
    eta0: Union[float, str] = "paper_default"


@dataclass(frozen=True)
class StreamSection:
    rounds: int = 256
    rf_norm: float = 1.0
    m_rf: Optional[int] = None
    teacher: str = "student_features"
    noise: float = 0.0
    family: str = "nearly_convex"
    beta: float = 0.05
    omega: float = 6.0
    set_radius: float = 2.0


@dataclass(frozen=True)
class ControlSection:
    horizon: int = 10
    d_x: int = 2
    d_u: int = 2
    W: float = 1.0
    disturbance: str = "sinusoidal"
    period: float = 8.0
    rho: float = 0.8
    C2: float = 1.0
    time_varying: bool = True
    mu: float = 1.0
    target: float = 0.0
    constant_coordinate: bool = False
    step_kappa: float = 1.0


@dataclass(frozen=True)
class SeedsSection:
    master: int = 0

    def derive(self, component: str) -> int:
        return derive_seed(self.master, component)


@dataclass(frozen=True)
class OutputSection:
    directory: str = "runs/default"
    comparator: str = "auto"
    comparator_budget: int = 200
    unconstrained_diagnostic: bool = False
    budget_sweep: bool = False
    save_params: bool = True


@dataclass(frozen=True)
class TolerancesSection:
    projection: float = 1e-12
    near_convex_slack: float = 1e-8
    rollout: float = 1e-10
    convexity: float = 1e-9
    regret_identity: float = 1e-9
    unit_norm: float = 1e-9
    fd_step: float = 1e-5
    fd_rel: float = 1e-4
    kink: float = 1e-3


CHOICES: Dict[Tuple[str, str], Tuple[str, ...]] = {
    ("experiment", "kind"): EXPERIMENT_KINDS,
    ("architecture", "architecture"): ("two_layer", "deep"),
    ("architecture", "ball_mode"): ("joint", "per_slice"),
    ("architecture", "loss"): ("absolute", "euclidean", "square"),
    ("algorithm", "name"): ("ogd", "adagrad"),
    ("stream", "teacher"): ("student_features", "independent"),
    ("stream", "family"): ("quadratic", "nearly_convex"),
    ("control", "disturbance"): ("zero", "uniform", "sinusoidal", "sign_alternating"),
    ("output", "comparator"): ("auto", "offline_gd_oracle", "constructive_theta_star", "rf_teacher_loss",
                               "zero_policy", "closed_form"),
}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: ExperimentSection = field(default_factory=ExperimentSection)
    architecture: ArchitectureSection = field(default_factory=ArchitectureSection)
    algorithm: AlgorithmSection = field(default_factory=AlgorithmSection)
    stream: StreamSection = field(default_factory=StreamSection)
    control: ControlSection = field(default_factory=ControlSection)
    seeds: SeedsSection = field(default_factory=SeedsSection)
    output: OutputSection = field(default_factory=OutputSection)
    tolerances: TolerancesSection = field(default_factory=TolerancesSection)

    def seed(self, component: str) -> int:
        return self.seeds.derive(component)

    def to_dict(self) -> Dict[str, Dict[str, Any]]:
        return {section.name: dataclasses.asdict(getattr(self, section.name)) for section in fields(self)}

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]], lines: Optional[Dict[Tuple[str, ...], int]] = None):
        data = data or {}
        lines = lines or {}
        if not isinstance(data, dict):
            raise ConfigError("top level must be a mapping of sections", line=lines.get(()))
        sections = {section.name: section for section in fields(cls)}
        built = {}
        for name, values in data.items():
            if name not in sections:
                raise ConfigError(f"unknown section (expected one of {sorted(sections)})", field=str(name),
                                  line=lines.get((name,)))
            section_type = get_type_hints(cls)[name]
            built[name] = _build_section(name, section_type, values, lines)
        return cls(**built)

    def dump(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)

    def with_overrides(self, seed: Optional[int] = None, kind: Optional[str] = None,
                       out: Optional[str] = None) -> "ExperimentConfig":
        config = self
        if seed is not None:
            config = replace(config, seeds=replace(config.seeds, master=int(seed)))
        if kind is not None:
            if kind not in EXPERIMENT_KINDS:
                raise ConfigError(f"invalid choice '{kind}' (expected one of {EXPERIMENT_KINDS})", field="experiment.kind")
            config = replace(config, experiment=replace(config.experiment, kind=kind))
        if out is not None:
            config = replace(config, output=replace(config.output, directory=str(out)))
        return config


def _coerce(value: Any, hint: Any, path: str, line: Optional[int]) -> Any:
    origin = get_origin(hint)
    if origin is Union:
        options = get_args(hint)
        if value is None and type(None) in options:
            return None
        for option in options:
            if option is type(None):
                continue
            try:
                return _coerce(value, option, path, line)
            except ConfigError:
                continue
        raise ConfigError(f"value {value!r} does not match {hint}", field=path, line=line)
    if hint is bool:
        if isinstance(value, bool):
            return value
    elif hint is int:
        if isinstance(value, int) and not isinstance(value, bool):
            return value
    elif hint is float:
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value)
    elif hint is str:
        if isinstance(value, str):
            return value
    raise ConfigError(f"expected {getattr(hint, '__name__', hint)}, got {type(value).__name__} {value!r}",
                      field=path, line=line)


def _build_section(name: str, section_type, values: Any, lines: Dict[Tuple[str, ...], int]):
    if values is None:
        values = {}
    if not isinstance(values, dict):
        raise ConfigError("section must be a mapping of keys to scalars", field=name, line=lines.get((name,)))
    hints = get_type_hints(section_type)
    known = {item.name for item in fields(section_type)}
    kwargs = {}
    for key, value in values.items():
        path = f"{name}.{key}"
        line = lines.get((name, key))
        if key not in known:
            raise ConfigError(f"unknown key (expected one of {sorted(known)})", field=path, line=line)
        if isinstance(value, (dict, list)):
            raise ConfigError("values must be scalars", field=path, line=line)
        value = _coerce(value, hints[key], path, line)
        choices = CHOICES.get((name, key))
        if choices is not None and value is not None and value not in choices:
            raise ConfigError(f"invalid choice {value!r} (expected one of {choices})", field=path, line=line)
        kwargs[key] = value
    section = section_type(**kwargs)
    _check_ranges(name, section, lines)
    return section


def _check_ranges(name: str, section, lines) -> None:
    def fail(key: str, message: str):
        raise ConfigError(message, field=f"{name}.{key}", line=lines.get((name, key)))

    def at_least(key: str, floor: float, strict: bool = False):
        value = getattr(section, key)
        if value is None:
            return
        if not math.isfinite(value):
            fail(key, f"must be finite, got {value}")
        if value < floor or (strict and value == floor):
            fail(key, f"must be {'greater than' if strict else 'at least'} {floor:g}, got {value}")

    if isinstance(section, ArchitectureSection):
        if section.architecture == "two_layer" and (section.m < 2 or section.m % 2):
            fail("m", f"two-layer width must be even and at least 2, got {section.m}")
        for key in ("p", "d", "m", "H"):
            at_least(key, 1)
        at_least("radius", 0.0)
        for key in ("b", "loss_lipschitz", "kappa"):
            at_least(key, 0.0, strict=True)
    elif isinstance(section, AlgorithmSection):
        if isinstance(section.eta0, str):
            if section.eta0 != "paper_default":
                fail("eta0", "must be a number or 'paper_default'")
        else:
            at_least("eta0", 0.0)
    elif isinstance(section, StreamSection):
        for key in ("rounds", "rf_norm", "noise", "beta", "omega", "set_radius"):
            at_least(key, 0)
        at_least("m_rf", 1)
    elif isinstance(section, ControlSection):
        for key in ("horizon", "d_x", "d_u"):
            at_least(key, 1)
        for key in ("W", "period", "C2", "step_kappa"):
            at_least(key, 0.0, strict=True)
        at_least("mu", 0.0)
        if not 0 < section.rho < 1:
            fail("rho", "must lie in (0, 1)")
        if not math.isfinite(section.target):
            fail("target", f"must be finite, got {section.target}")
    elif isinstance(section, OutputSection):
        at_least("comparator_budget", 1)
    elif isinstance(section, TolerancesSection):
        for item in fields(section):
            at_least(item.name, 0.0, strict=True)


def _line_map(text: str) -> Dict[Tuple[str, ...], int]:
    """1-based line numbers of every section and key, from the YAML node marks."""
    root = yaml.compose(text, Loader=yaml.SafeLoader)
    lines: Dict[Tuple[str, ...], int] = {}
    if not isinstance(root, yaml.MappingNode):
        return lines
    lines[()] = root.start_mark.line + 1
    for section_key, section_value in root.value:
        section = section_key.value
        lines[(section,)] = section_key.start_mark.line + 1
        if isinstance(section_value, yaml.MappingNode):
            for key_node, _ in section_value.value:
                lines[(section, key_node.value)] = key_node.start_mark.line + 1
    return lines


def parse_config(text: str) -> ExperimentConfig:
    try:
        data = yaml.safe_load(text)
        lines = _line_map(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError(f"invalid YAML: {exc}", line=None if mark is None else mark.line + 1) from exc
    return ExperimentConfig.from_dict(data, lines)


def load_config(path: Union[str, os.PathLike]) -> ExperimentConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    logger.debug("Loading config from %s", path)
    return parse_config(path.read_text(encoding="utf-8"))


def worker_count(default: int = 1) -> int:
    """Worker slots, overridable through the environment."""
    value = os.environ.get(WORKERS_ENV)
    if value is None:
        return default
    try:
        count = int(value)
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {value!r}") from None
    return max(1, count)
