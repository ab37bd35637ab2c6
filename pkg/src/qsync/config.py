"""Sweep configuration: strict JSON schema with full-violation reporting.

Schema (version "1"), all field names exact; unknown fields are rejected::

    {
      "schema_version": "1",
      "model":   {"type": "<catalog name>", "params": {<model fields>}},
      "sweep":   {"axis1": {"param": str, "min": num, "max": num, "count": int>=2},
                  "axis2": {...}},
      "measures": [{"id": "<measure id>", ...options}, ...],
      "output":  {"path": str, "format": "csv"|"json"},
      "runtime": {"workers": int, "convergence_check": bool},
      "wigner":  {"site": int, "x": {"min","max","count"}, "p": {...}}
    }

``sweep``, ``output``, ``runtime`` and ``wigner`` are optional sections;
every violation found is reported with its field path, not just the first.
"""
from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .models import (
    MODEL_NAMES,
    MODEL_TYPES,
    ModelSpec,
    fock_sites,
    model_dims,
    qutrit_sites,
    sweepable_parameters,
)

MEASURE_IDS = (
    "omega_r",
    "omega_d",
    "s_coh",
    "l1_coherence",
    "vn_entropy",
    "mutual_information",
    "classical_mutual_information",
    "c1",
    "s_phase",
    "spectral_gap",
)

LIMIT_CYCLE_NAMES = (
    "diagonal_correlated",
    "diagonal_product",
    "marginal_product",
    "partially_coherent_product",
)


@dataclass(frozen=True)
class AxisSpec:
    param: str
    lo: float
    hi: float
    count: int

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class MeasureSpec:
    id: str
    limit_cycle: str | None = None
    pairs: tuple[tuple[int, int], ...] | None = None
    site: int = 0
    n_theta: int = 181
    n_phi: int = 360
    oracle_samples: int = 0

    @property
    def label(self) -> str:
        if self.id == "omega_r":
            return f"omega_r_{self.limit_cycle}"
        return self.id


@dataclass(frozen=True)
class WignerSpec:
    site: int = 0
    x_lo: float = -4.5
    x_hi: float = 4.5
    x_count: int = 201
    p_lo: float = -4.5
    p_hi: float = 4.5
    p_count: int = 201


@dataclass(frozen=True)
class SweepConfig:
    model: ModelSpec
    axis1: AxisSpec | None = None
    axis2: AxisSpec | None = None
    measures: tuple[MeasureSpec, ...] = ()
    output_path: str | None = None
    output_format: str = "csv"
    workers: int = 1
    convergence_check: bool = True
    wigner: WignerSpec | None = None


class _Collector:
    def __init__(self):
        self.violations: list[str] = []

    def add(self, path: str, message: str):
        self.violations.append(f"{path}: {message}")

    def require_mapping(self, value, path):
        if not isinstance(value, dict):
            self.add(path, f"expected an object, got {type(value).__name__}")
            return None
        return value

    def reject_unknown(self, mapping: dict, allowed, path):
        for key in mapping:
            if key not in allowed:
                self.add(f"{path}.{key}" if path else key, "unknown field")

    def number(self, mapping, key, path, required=True, default=None):
        if key not in mapping:
            if required:
                self.add(f"{path}.{key}", "missing required field")
            return default
        value = mapping[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.add(f"{path}.{key}", f"expected a number, got {type(value).__name__}")
            return default
        return float(value)

    def integer(self, mapping, key, path, required=True, default=None, minimum=None):
        if key not in mapping:
            if required:
                self.add(f"{path}.{key}", "missing required field")
            return default
        value = mapping[key]
        if isinstance(value, bool) or not isinstance(value, int):
            self.add(f"{path}.{key}", f"expected an integer, got {type(value).__name__}")
            return default
        if minimum is not None and value < minimum:
            self.add(f"{path}.{key}", f"must be >= {minimum}, got {value}")
            return default
        return value

    def string(self, mapping, key, path, required=True, default=None, choices=None):
        if key not in mapping:
            if required:
                self.add(f"{path}.{key}", "missing required field")
            return default
        value = mapping[key]
        if not isinstance(value, str):
            self.add(f"{path}.{key}", f"expected a string, got {type(value).__name__}")
            return default
        if choices is not None and value not in choices:
            self.add(f"{path}.{key}", f"must be one of {sorted(choices)}, got '{value}'")
            return default
        return value

    def boolean(self, mapping, key, path, default):
        if key not in mapping:
            return default
        value = mapping[key]
        if not isinstance(value, bool):
            self.add(f"{path}.{key}", f"expected a boolean, got {type(value).__name__}")
            return default
        return value


def _parse_model(collector: _Collector, raw) -> ModelSpec | None:
    section = collector.require_mapping(raw, "model")
    if section is None:
        return None
    collector.reject_unknown(section, {"type", "params"}, "model")
    type_name = collector.string(section, "type", "model", choices=set(MODEL_TYPES))
    params_raw = section.get("params")
    params = collector.require_mapping(params_raw if params_raw is not None else {}, "model.params")
    if type_name is None or params is None:
        return None
    model_type = MODEL_TYPES[type_name]
    field_names = {f.name for f in dataclasses.fields(model_type)}
    collector.reject_unknown(params, field_names, "model.params")
    kwargs = {}
    ok = True
    for field in dataclasses.fields(model_type):
        if field.name not in params:
            if field.default is dataclasses.MISSING:
                collector.add(f"model.params.{field.name}", "missing required field")
                ok = False
            continue
        value = params[field.name]
        if field.type in ("int", int) or field.name.startswith("n_fock"):
            if isinstance(value, bool) or not isinstance(value, int):
                collector.add(f"model.params.{field.name}", "expected an integer")
                ok = False
                continue
            kwargs[field.name] = value
        else:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                collector.add(f"model.params.{field.name}", "expected a number")
                ok = False
                continue
            kwargs[field.name] = float(value)
    if not ok:
        return None
    try:
        return model_type(**kwargs)
    except Exception as exc:  # invariant messages carry the offending field name
        collector.add("model.params", str(exc))
        return None


def _parse_axis(collector: _Collector, raw, path: str, model: ModelSpec | None) -> AxisSpec | None:
    section = collector.require_mapping(raw, path)
    if section is None:
        return None
    collector.reject_unknown(section, {"param", "min", "max", "count"}, path)
    param = collector.string(section, "param", path)
    lo = collector.number(section, "min", path)
    hi = collector.number(section, "max", path)
    count = collector.integer(section, "count", path, minimum=2)
    if param is not None and model is not None:
        allowed = sweepable_parameters(type(model))
        if param not in allowed:
            collector.add(f"{path}.param", f"'{param}' is not a sweepable parameter of "
                                           f"{MODEL_NAMES[type(model)]} (choose from {list(allowed)})")
            param = None
    if lo is not None and hi is not None and lo > hi:
        collector.add(f"{path}.min", f"min {lo} exceeds max {hi}")
    if None in (param, lo, hi, count):
        return None
    return AxisSpec(param=param, lo=lo, hi=hi, count=count)


def _parse_measure(collector: _Collector, raw, path: str, model: ModelSpec | None) -> MeasureSpec | None:
    section = collector.require_mapping(raw, path)
    if section is None:
        return None
    allowed = {"id", "limit_cycle", "pairs", "site", "n_theta", "n_phi", "oracle_samples"}
    collector.reject_unknown(section, allowed, path)
    measure_id = collector.string(section, "id", path, choices=set(MEASURE_IDS))
    if measure_id is None:
        return None
    kwargs: dict = {"id": measure_id}

    n_subsystems = len(model_dims(model)) if model is not None else None
    if measure_id == "omega_r":
        lc = collector.string(section, "limit_cycle", path, choices=set(LIMIT_CYCLE_NAMES))
        kwargs["limit_cycle"] = lc
        if lc in ("diagonal_product", "marginal_product", "partially_coherent_product"):
            if n_subsystems is not None and n_subsystems != 2:
                collector.add(f"{path}.limit_cycle", f"'{lc}' requires a bipartite model")
        if lc == "partially_coherent_product":
            pairs_raw = section.get("pairs")
            if pairs_raw is None:
                collector.add(f"{path}.pairs", "required for partially_coherent_product")
            elif not isinstance(pairs_raw, list) or not all(
                isinstance(p, list) and len(p) == 2 and all(isinstance(i, int) for i in p)
                for p in pairs_raw
            ):
                collector.add(f"{path}.pairs", "expected a list of [i, j] integer pairs")
            else:
                pairs = tuple(tuple(p) for p in pairs_raw)
                if model is not None:
                    sites = qutrit_sites(model)
                    if len(pairs) != n_subsystems:
                        collector.add(f"{path}.pairs", f"need one pair per subsystem ({n_subsystems})")
                    elif len(sites) != n_subsystems:
                        collector.add(f"{path}.pairs", "every subsystem must be a qutrit for this class")
                kwargs["pairs"] = pairs
        elif "pairs" in section:
            collector.add(f"{path}.pairs", f"only valid for partially_coherent_product, not '{lc}'")
    elif "limit_cycle" in section or "pairs" in section:
        collector.add(path, f"limit_cycle/pairs options are only valid for omega_r, not '{measure_id}'")

    if measure_id in ("mutual_information", "classical_mutual_information"):
        if n_subsystems is not None and n_subsystems != 2:
            collector.add(f"{path}.id", f"'{measure_id}' requires a bipartite model")

    site = collector.integer(section, "site", path, required=False, default=0, minimum=0)
    kwargs["site"] = site if site is not None else 0
    if measure_id == "c1" and model is not None:
        if kwargs["site"] not in fock_sites(model):
            collector.add(f"{path}.site", f"site {kwargs['site']} is not a Fock factor "
                                          f"(Fock sites: {list(fock_sites(model))})")
    if measure_id == "s_phase" and model is not None:
        if kwargs["site"] not in qutrit_sites(model):
            collector.add(f"{path}.site", f"site {kwargs['site']} is not a spin-1 factor "
                                          f"(spin sites: {list(qutrit_sites(model))})")
    elif measure_id not in ("c1", "s_phase") and "site" in section:
        collector.add(f"{path}.site", f"only valid for c1/s_phase, not '{measure_id}'")

    for key in ("n_theta", "n_phi"):
        value = collector.integer(section, key, path, required=False, default=None, minimum=2)
        if value is not None:
            if measure_id != "s_phase" and key in section:
                collector.add(f"{path}.{key}", "only valid for s_phase")
            else:
                kwargs[key] = value
    oracle_samples = collector.integer(section, "oracle_samples", path, required=False, default=0, minimum=0)
    if oracle_samples:
        if measure_id != "omega_r":
            collector.add(f"{path}.oracle_samples", "only valid for omega_r")
        else:
            kwargs["oracle_samples"] = oracle_samples
    return MeasureSpec(**kwargs)


def _parse_wigner(collector: _Collector, raw, model: ModelSpec | None) -> WignerSpec | None:
    section = collector.require_mapping(raw, "wigner")
    if section is None:
        return None
    collector.reject_unknown(section, {"site", "x", "p"}, "wigner")
    site = collector.integer(section, "site", "wigner", required=False, default=0, minimum=0)
    kwargs = {"site": site if site is not None else 0}
    if model is not None and kwargs["site"] not in fock_sites(model):
        collector.add("wigner.site", f"site {kwargs['site']} is not a Fock factor")
    for key, (lo_name, hi_name, count_name) in (
        ("x", ("x_lo", "x_hi", "x_count")),
        ("p", ("p_lo", "p_hi", "p_count")),
    ):
        if key not in section:
            continue
        sub = collector.require_mapping(section[key], f"wigner.{key}")
        if sub is None:
            continue
        collector.reject_unknown(sub, {"min", "max", "count"}, f"wigner.{key}")
        lo = collector.number(sub, "min", f"wigner.{key}", required=False, default=-4.5)
        hi = collector.number(sub, "max", f"wigner.{key}", required=False, default=4.5)
        count = collector.integer(sub, "count", f"wigner.{key}", required=False, default=201, minimum=2)
        if lo is not None and hi is not None and lo >= hi:
            collector.add(f"wigner.{key}.min", f"min {lo} must be below max {hi}")
        kwargs[lo_name], kwargs[hi_name], kwargs[count_name] = lo, hi, count
    return WignerSpec(**kwargs)


def parse_config(text) -> SweepConfig:
    """Parse and validate a UTF-8 JSON config; raise ConfigError with all violations."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ConfigError([f"config: not valid UTF-8 ({exc})"]) from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"config: invalid JSON ({exc})"]) from exc

    collector = _Collector()
    top = collector.require_mapping(raw, "config")
    if top is None:
        raise ConfigError(collector.violations)
    collector.reject_unknown(
        top, {"schema_version", "model", "sweep", "measures", "output", "runtime", "wigner"}, ""
    )
    version = collector.string(top, "schema_version", "", required=False, default="1")
    if version != "1":
        collector.add("schema_version", f"unsupported version '{version}', expected '1'")

    model = None
    if "model" not in top:
        collector.add("model", "missing required field")
    else:
        model = _parse_model(collector, top["model"])

    axis1 = axis2 = None
    if "sweep" in top:
        sweep = collector.require_mapping(top["sweep"], "sweep")
        if sweep is not None:
            collector.reject_unknown(sweep, {"axis1", "axis2"}, "sweep")
            if "axis1" not in sweep:
                collector.add("sweep.axis1", "missing required field")
            else:
                axis1 = _parse_axis(collector, sweep["axis1"], "sweep.axis1", model)
            if "axis2" not in sweep:
                collector.add("sweep.axis2", "missing required field")
            else:
                axis2 = _parse_axis(collector, sweep["axis2"], "sweep.axis2", model)
            if axis1 is not None and axis2 is not None and axis1.param == axis2.param:
                collector.add("sweep.axis2.param", f"must differ from axis1 ('{axis1.param}')")

    measures: list[MeasureSpec] = []
    if "measures" in top:
        if not isinstance(top["measures"], list):
            collector.add("measures", "expected a list")
        else:
            for index, entry in enumerate(top["measures"]):
                parsed = _parse_measure(collector, entry, f"measures[{index}]", model)
                if parsed is not None:
                    measures.append(parsed)
            labels = [m.label for m in measures]
            for label in sorted(set(labels)):
                if labels.count(label) > 1:
                    collector.add("measures", f"duplicate measure '{label}'")

    output_path = None
    output_format = "csv"
    if "output" in top:
        output = collector.require_mapping(top["output"], "output")
        if output is not None:
            collector.reject_unknown(output, {"path", "format"}, "output")
            output_path = collector.string(output, "path", "output", required=False, default=None)
            output_format = collector.string(
                output, "format", "output", required=False, default="csv",
                choices={"csv", "json"},
            ) or "csv"

    workers = os.cpu_count() or 1
    convergence_check = True
    if "runtime" in top:
        runtime = collector.require_mapping(top["runtime"], "runtime")
        if runtime is not None:
            collector.reject_unknown(runtime, {"workers", "convergence_check"}, "runtime")
            workers = collector.integer(
                runtime, "workers", "runtime", required=False, default=workers, minimum=1
            ) or workers
            convergence_check = collector.boolean(
                runtime, "convergence_check", "runtime", convergence_check
            )

    wigner = None
    if "wigner" in top:
        wigner = _parse_wigner(collector, top["wigner"], model)

    if collector.violations:
        raise ConfigError(collector.violations)
    return SweepConfig(
        model=model,
        axis1=axis1,
        axis2=axis2,
        measures=tuple(measures),
        output_path=output_path,
        output_format=output_format,
        workers=workers,
        convergence_check=convergence_check,
        wigner=wigner,
    )


def config_to_dict(config: SweepConfig) -> dict:
    """Plain-JSON form of a config; parse(serialize(c)) == c."""
    model_params = dataclasses.asdict(config.model)
    out: dict = {
        "schema_version": "1",
        "model": {"type": MODEL_NAMES[type(config.model)], "params": model_params},
    }
    if config.axis1 is not None and config.axis2 is not None:
        out["sweep"] = {
            "axis1": {"param": config.axis1.param, "min": config.axis1.lo,
                      "max": config.axis1.hi, "count": config.axis1.count},
            "axis2": {"param": config.axis2.param, "min": config.axis2.lo,
                      "max": config.axis2.hi, "count": config.axis2.count},
        }
    if config.measures:
        entries = []
        for m in config.measures:
            entry: dict = {"id": m.id}
            if m.id == "omega_r":
                entry["limit_cycle"] = m.limit_cycle
                if m.pairs is not None:
                    entry["pairs"] = [list(p) for p in m.pairs]
                if m.oracle_samples:
                    entry["oracle_samples"] = m.oracle_samples
            if m.id in ("c1", "s_phase"):
                entry["site"] = m.site
            if m.id == "s_phase":
                entry["n_theta"] = m.n_theta
                entry["n_phi"] = m.n_phi
            entries.append(entry)
        out["measures"] = entries
    output: dict = {"format": config.output_format}
    if config.output_path is not None:
        output["path"] = config.output_path
    out["output"] = output
    out["runtime"] = {"workers": config.workers, "convergence_check": config.convergence_check}
    if config.wigner is not None:
        w = config.wigner
        out["wigner"] = {
            "site": w.site,
            "x": {"min": w.x_lo, "max": w.x_hi, "count": w.x_count},
            "p": {"min": w.p_lo, "max": w.p_hi, "count": w.p_count},
        }
    return out


def serialize_config(config: SweepConfig) -> bytes:
    return json.dumps(config_to_dict(config), indent=2).encode("utf-8")
