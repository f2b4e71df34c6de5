"""Run configuration: INI-style ``key = value`` text in four sections.

``[model]`` holds ``kind`` plus the physical constants under their usual
symbols, ``[excitation]`` the road (``Y``, ``lambda``, ``v`` or ``v_kmh``)
or, for ``two_dof``, the angular frequency ``omega``. ``[solver]`` and
``[output]`` are optional. SI units throughout.
"""

from __future__ import annotations

import configparser
import dataclasses
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ConfigError, ParameterError
from .model import (
    HalfCarParams,
    HarmonicRoadExcitation,
    SecondOrderModel,
    ThreeAxleParams,
    TwoDofParams,
    build_model,
    force_excitation,
)

KINDS = {"two_dof": TwoDofParams, "half_car": HalfCarParams, "three_axle": ThreeAxleParams}
ROAD_KEYS = ("Y", "lambda", "v")
SOLVER_DEFAULTS = {
    "tolerance": 1e-3,
    "phase_tolerance": 0.01,
    "periods": 10,
    "samples": 1024,
}
SOLVER_OPTIONAL = ("sweep_from", "sweep_to", "sweep_points")
_INT_KEYS = ("periods", "samples", "sweep_points")
OUTPUT_KEYS = ("netlist", "solve", "validate", "sweep", "timeseries")


def _fields(cls):
    required, optional = [], []
    for f in dataclasses.fields(cls):
        has_default = f.default is not dataclasses.MISSING
        (optional if has_default else required).append(f.name)
    return required, optional


@dataclass
class RunConfig:
    kind: str
    params: dict[str, float]
    excitation: dict[str, float]
    solver: dict[str, float] = field(default_factory=lambda: dict(SOLVER_DEFAULTS))
    output: dict[str, str] = field(default_factory=dict)

    @property
    def params_class(self):
        return KINDS[self.kind]

    def build_params(self):
        try:
            return self.params_class(**self.params)
        except ParameterError as err:
            raise ConfigError(f"[model] {err}") from err

    def build_model(self) -> SecondOrderModel:
        return build_model(self.build_params())

    def build_excitation(self, model: SecondOrderModel | None = None):
        model = model or self.build_model()
        try:
            if self.kind == "two_dof":
                return force_excitation(model, self.excitation["omega"])
            return HarmonicRoadExcitation(
                self.excitation["Y"], self.excitation["lambda"], self.excitation["v"]
            )
        except ParameterError as err:
            raise ConfigError(f"[excitation] {err}") from err

    def perturbed(self, key: str, factor: float) -> RunConfig:
        """Copy with one model constant scaled by ``factor``."""
        if key not in self.params:
            raise ConfigError(f"cannot perturb unknown model key {key!r}")
        params = dict(self.params)
        params[key] = params[key] * factor
        return dataclasses.replace(self, params=params)


def _float(section, key, raw):
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: not a number: {raw!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"[{section}] {key}: must be finite")
    return value


def _section(cp, name):
    return dict(cp.items(name)) if cp.has_section(name) else {}


def parse_config(text: str) -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as err:
        raise ConfigError(f"malformed config: {err}") from None
    unknown_sections = set(cp.sections()) - {"model", "excitation", "solver", "output"}
    if unknown_sections:
        raise ConfigError(f"unknown sections {sorted(unknown_sections)}")

    model = _section(cp, "model")
    kind = model.pop("kind", None)
    if kind is None:
        raise ConfigError("[model] kind: missing key")
    if kind not in KINDS:
        raise ConfigError(f"[model] kind: expected one of {sorted(KINDS)}, got {kind!r}")
    required, optional = _fields(KINDS[kind])
    wheelbase = model.pop("l", None) if kind != "two_dof" else None
    unknown = set(model) - set(required) - set(optional)
    if unknown:
        raise ConfigError(f"[model] unknown keys {sorted(unknown)} for kind {kind}")
    missing = [k for k in required if k not in model]
    if missing:
        raise ConfigError(f"[model] missing keys {missing} for kind {kind}")
    order = required + optional
    params = {k: _float("model", k, model[k]) for k in sorted(model, key=order.index)}
    if wheelbase is not None:
        lval = _float("model", "l", wheelbase)
        if abs(lval - (params["l_d"] + params["l_t"])) > 1e-9 * lval:
            raise ConfigError(f"[model] l = {lval!r} differs from l_d + l_t")

    exc_raw = _section(cp, "excitation")
    if kind == "two_dof":
        allowed = ("omega",)
        if "omega" not in exc_raw:
            raise ConfigError("[excitation] omega: missing key")
    else:
        allowed = ("Y", "lambda", "v", "v_kmh")
        if "v" in exc_raw and "v_kmh" in exc_raw:
            raise ConfigError("[excitation] give either v or v_kmh, not both")
        for k in ("Y", "lambda"):
            if k not in exc_raw:
                raise ConfigError(f"[excitation] {k}: missing key")
        if "v" not in exc_raw and "v_kmh" not in exc_raw:
            raise ConfigError("[excitation] v: missing key (or v_kmh)")
    unknown = set(exc_raw) - set(allowed)
    if unknown:
        raise ConfigError(f"[excitation] unknown keys {sorted(unknown)}")
    excitation = {k: _float("excitation", k, v) for k, v in exc_raw.items()}
    if "v_kmh" in excitation:
        excitation["v"] = excitation.pop("v_kmh") / 3.6
    if kind != "two_dof":
        excitation = {k: excitation[k] for k in ROAD_KEYS}

    solver = dict(SOLVER_DEFAULTS)
    for k, v in _section(cp, "solver").items():
        if k not in SOLVER_DEFAULTS and k not in SOLVER_OPTIONAL:
            raise ConfigError(f"[solver] unknown key {k!r}")
        value = _float("solver", k, v)
        if k in _INT_KEYS:
            if value != int(value) or value < 1:
                raise ConfigError(f"[solver] {k}: expected a positive integer")
            value = int(value)
        solver[k] = value

    output = _section(cp, "output")
    unknown = set(output) - set(OUTPUT_KEYS)
    if unknown:
        raise ConfigError(f"[output] unknown keys {sorted(unknown)}")
    return RunConfig(kind, params, excitation, solver, output)


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from None
    return parse_config(text)


def dump_config(cfg: RunConfig) -> str:
    """Canonical text form; parses back to an equal RunConfig."""
    lines = ["[model]", f"kind = {cfg.kind}"]
    lines += [f"{k} = {v!r}" for k, v in cfg.params.items()]
    lines += ["", "[excitation]"]
    lines += [f"{k} = {v!r}" for k, v in cfg.excitation.items()]
    lines += ["", "[solver]"]
    lines += [f"{k} = {v!r}" for k, v in cfg.solver.items()]
    if cfg.output:
        lines += ["", "[output]"]
        lines += [f"{k} = {v}" for k, v in cfg.output.items()]
    return "\n".join(lines) + "\n"


def example_config_text(name: str = "table2") -> str:
    """Text of a bundled configuration (``table2`` or ``two_dof``)."""
    return resources.files("vehanalog.data").joinpath(f"{name}.ini").read_text()
