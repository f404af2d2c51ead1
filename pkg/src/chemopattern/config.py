"""Experiment configuration: flat dotted-key text files plus CLI overrides.

Format: one ``key = value`` per line, ``#`` starts a comment. Values are
numbers (with an optional ``pi`` suffix, e.g. ``2pi``), booleans, or bare
strings. Exactly one of ``eps`` and ``params.chi`` must be given for the
scenarios that need a bifurcation parameter; they are related through
chi = chi_crit (1 + eps^2) where chi_crit follows ``mode_policy``.

Named presets reproducing the reference experiments ship with the
package (``presets/fig1.cfg`` .. ``fig9.cfg``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path
from typing import Optional

from .model import ModelParams

SCENARIOS = ("stability", "landau", "bifurcation", "competition", "simulate",
             "compare", "hysteresis")


class ConfigError(ValueError):
    pass


def _parse_value(raw: str):
    raw = raw.strip()
    low = raw.lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    if low.endswith("pi"):
        head = low[:-2].strip()
        try:
            return (float(head) if head else 1.0) * math.pi
        except ValueError:
            pass
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        pass
    return raw


def parse_config_text(text: str) -> dict:
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = body.split("=", 1)
        out[key.strip()] = _parse_value(raw)
    return out


def apply_overrides(data: dict, overrides) -> dict:
    out = dict(data)
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"override {item!r} must be key=value")
        key, raw = item.split("=", 1)
        out[key.strip()] = _parse_value(raw)
    return out


def preset_text(name: str) -> str:
    try:
        return (resources.files("chemopattern") / "presets" / f"{name}.cfg").read_text()
    except FileNotFoundError:
        raise ConfigError(f"unknown preset {name!r}") from None


def available_presets() -> list:
    root = resources.files("chemopattern") / "presets"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".cfg"))


@dataclass
class ExperimentConfig:
    """Fully resolved settings for one experiment run."""

    scenario: str
    params: ModelParams
    eps: Optional[float] = None
    chi: Optional[float] = None
    mode_policy: str = "substitute"
    seed: int = 0
    n_cells: int = 512
    dt_safety: float = 0.2
    steady_tol: float = 1e-8
    t_max: float = 4000.0
    ic_rel_amplitude: float = 0.01
    compare_order: int = 2
    amp_rtol: float = 0.10
    bif_chi_lo: Optional[float] = None
    bif_chi_hi: Optional[float] = None
    bif_samples: int = 400
    comp_k1: Optional[float] = None
    comp_k2: Optional[float] = None
    comp_a1_0: Optional[float] = None
    comp_a2_0: Optional[float] = None
    comp_run_pde: bool = False
    comp_basin_n: int = 21
    comp_basin_max: Optional[float] = None
    hyst_ic_k: float = 2.0
    hyst_amp_large: float = 0.5
    hyst_amp_small: float = 0.1
    hyst_pattern_min: float = 0.1
    hyst_uniform_tol: float = 1e-6
    sim_ic: str = "random"  # "random" or "cosine"
    sim_ic_k: float = 1.0
    sim_ic_amp: float = 0.01
    raw: dict = field(default_factory=dict)

    def resolved(self) -> dict:
        """Flat dict of everything, embedded verbatim in reports."""
        out = {}
        for f in fields(self):
            if f.name in ("params", "raw"):
                continue
            out[f.name] = getattr(self, f.name)
        for name in ("d1", "d2", "chi", "mu", "u_c", "alpha", "beta", "domain_length"):
            out[f"params.{name}"] = getattr(self.params, name)
        return out


_KEYMAP = {
    "scenario": "scenario",
    "eps": "eps",
    "mode_policy": "mode_policy",
    "seed": "seed",
    "grid.n_cells": "n_cells",
    "solver.dt_safety": "dt_safety",
    "solver.steady_tol": "steady_tol",
    "solver.t_max": "t_max",
    "ic.rel_amplitude": "ic_rel_amplitude",
    "compare.order": "compare_order",
    "compare.amp_rtol": "amp_rtol",
    "bifurcation.chi_lo": "bif_chi_lo",
    "bifurcation.chi_hi": "bif_chi_hi",
    "bifurcation.samples": "bif_samples",
    "competition.k1": "comp_k1",
    "competition.k2": "comp_k2",
    "competition.a1_0": "comp_a1_0",
    "competition.a2_0": "comp_a2_0",
    "competition.run_pde": "comp_run_pde",
    "competition.basin_n": "comp_basin_n",
    "competition.basin_max": "comp_basin_max",
    "hysteresis.ic_k": "hyst_ic_k",
    "hysteresis.amp_large": "hyst_amp_large",
    "hysteresis.amp_small": "hyst_amp_small",
    "hysteresis.pattern_min": "hyst_pattern_min",
    "hysteresis.uniform_tol": "hyst_uniform_tol",
    "simulate.ic": "sim_ic",
    "simulate.ic_k": "sim_ic_k",
    "simulate.ic_amp": "sim_ic_amp",
}

_PARAM_KEYS = ("d1", "d2", "chi", "mu", "u_c", "alpha", "beta", "domain_length")


def config_from_dict(data: dict, scenario: Optional[str] = None) -> ExperimentConfig:
    """Validate and assemble an ``ExperimentConfig``; unknown keys and type
    problems are reported with their field paths."""
    errors = []
    pvals = {}
    kwargs = {}
    for key, value in data.items():
        if key.startswith("params."):
            name = key[len("params."):]
            if name not in _PARAM_KEYS:
                errors.append(f"{key}: unknown parameter field")
            else:
                pvals[name] = float(value)
        elif key in _KEYMAP:
            kwargs[_KEYMAP[key]] = value
        else:
            errors.append(f"{key}: unknown key")

    if scenario is not None:
        file_scenario = kwargs.get("scenario")
        if file_scenario is not None and file_scenario != scenario:
            errors.append(f"scenario: config says {file_scenario!r}, command is {scenario!r}")
        kwargs["scenario"] = scenario
    if kwargs.get("scenario") not in SCENARIOS:
        errors.append(f"scenario: must be one of {SCENARIOS}")

    missing = [k for k in _PARAM_KEYS if k not in pvals and k != "chi"]
    if missing:
        errors.append("params: missing " + ", ".join(f"params.{m}" for m in missing))

    chi_given = "chi" in pvals
    eps_given = kwargs.get("eps") is not None
    if chi_given and eps_given:
        errors.append("eps / params.chi: mutually exclusive, give exactly one")
    if errors:
        raise ConfigError("; ".join(errors))

    chi = pvals.pop("chi", None)
    params = ModelParams(chi=(chi if chi is not None else 0.0), **pvals)
    from .model import validate

    perrs = [e for e in validate(params) if not (chi is None and e.startswith("chi"))]
    if perrs:
        raise ConfigError("; ".join(f"params: {e}" for e in perrs))

    cfg = ExperimentConfig(params=params, chi=chi, raw=dict(data),
                           **{k: v for k, v in kwargs.items()})
    if cfg.mode_policy not in ("exact", "substitute"):
        raise ConfigError(f"mode_policy: must be 'exact' or 'substitute', got {cfg.mode_policy!r}")
    if cfg.compare_order not in (2, 4):
        raise ConfigError("compare.order: must be 2 or 4")
    return cfg


def load_config(path=None, preset: Optional[str] = None, overrides=None,
                scenario: Optional[str] = None) -> ExperimentConfig:
    if (path is None) == (preset is None):
        raise ConfigError("give exactly one of a config path and a preset name")
    text = Path(path).read_text() if path is not None else preset_text(preset)
    data = apply_overrides(parse_config_text(text), overrides)
    return config_from_dict(data, scenario=scenario)


def resolve_chi(cfg: ExperimentConfig):
    """The chemotaxis strength the experiment runs at, plus the critical
    value and eps^2 relative to it under the configured mode policy."""
    from .linear_stability import chi_min, chi_c

    p = cfg.params
    chi_crit = chi_min(p).chi_min if cfg.mode_policy == "substitute" else chi_c(p)
    if cfg.chi is not None:
        chi = cfg.chi
    elif cfg.eps is not None:
        chi = chi_crit * (1.0 + cfg.eps**2)
    else:
        raise ConfigError("scenario requires eps or params.chi")
    return chi, chi_crit, chi / chi_crit - 1.0
