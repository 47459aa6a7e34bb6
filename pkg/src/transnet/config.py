"""Run configuration: JSON document -> validated :class:`RunConfig`.

Minimal document::

    {"grid": {"n_x": 5, "n_y": 5}, "functions": "four_power"}

``functions`` is either a preset set name (``four_power``, ``hybrid``,
``hybrid_extended``, ``poly4``) or a list whose items are shorthand strings
(``linear``, ``quadratic``, ``cubic``, ``quartic``, ``power:P``, ``sin:W``,
``cos:W``, ``poly:P``) or explicit objects
``{"name": ..., "terms": [{"kind": "power", "parameter": 2}, {"kind": "constant"}]}``.

Give at most one of ``tau_s`` / ``tau_d``; the other is derived from
``tau_s = exp(-alpha * tau_d)``. The full JSON schema is :data:`CONFIG_SCHEMA`.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from .basis import (
    DEFAULT_ALPHA, NORMALIZATIONS, PRESET_SETS, TERM_KINDS, BasisTerm, ConfigurationError,
    FitEngine, ReferenceFunctionSpec, cosine_function, polynomial_function, power_function,
    sine_function,
)
from .coverage import parse_sweep, tau_d_from_tau_s, tau_s_from_tau_d
from .grid import GridError, GridSpec

DEFAULT_TAU_S = 0.2
DEFAULT_L = 0.6
FORMATS = ("json", "dot", "graphml", "csv", "svg")

_num = {"type": "number"}

CONFIG_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "transnet run configuration",
    "type": "object",
    "additionalProperties": False,
    "required": ["grid", "functions"],
    "properties": {
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "required": ["n_x", "n_y"],
            "properties": {
                "n_x": {"type": "integer", "minimum": 2},
                "n_y": {"type": "integer", "minimum": 2},
                "x_min": _num, "x_max": _num, "y_min": _num, "y_max": _num,
            },
        },
        "functions": {
            "oneOf": [
                {"type": "string", "enum": sorted(PRESET_SETS)},
                {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "oneOf": [
                            {"type": "string"},
                            {
                                "type": "object",
                                "additionalProperties": False,
                                "required": ["name", "terms"],
                                "properties": {
                                    "name": {"type": "string", "minLength": 1},
                                    "terms": {
                                        "type": "array",
                                        "minItems": 1,
                                        "items": {
                                            "type": "object",
                                            "additionalProperties": False,
                                            "required": ["kind"],
                                            "properties": {
                                                "kind": {"enum": list(TERM_KINDS)},
                                                "parameter": _num,
                                            },
                                        },
                                    },
                                },
                            },
                        ]
                    },
                },
            ]
        },
        "alpha": {"type": "number", "exclusiveMinimum": 0},
        "tau_s": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "tau_d": {"type": "number", "minimum": 0},
        "link_threshold": {"type": "number", "exclusiveMinimum": 0},
        "normalization": {"enum": list(NORMALIZATIONS)},
        "seed": {"type": "integer", "minimum": 0},
        "output_dir": {"type": "string"},
        "unique_assignment": {"type": "boolean"},
        "emit_formats": {"type": "array", "uniqueItems": True, "items": {"enum": list(FORMATS)}},
        "sweep": {"type": ["string", "null"], "pattern": r"^[^:]+:[^:]+:[^:]+$"},
        "layout": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "iterations": {"type": "integer", "minimum": 1},
                "area": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "style": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "palette": {"type": "array", "minItems": 1, "items": {"type": "string"}},
                "radius": {"type": "number", "exclusiveMinimum": 0},
                "size": {"type": "integer", "minimum": 50},
            },
        },
        "analysis": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "path_cap": {"type": "integer", "minimum": 0},
                "betweenness": {"type": "boolean"},
                "path_statistics": {"type": "boolean"},
            },
        },
    },
}


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path or '<root>'}: {message}")


_SHORTHAND = {"constant": None, "linear": 1, "quadratic": 2, "cubic": 3, "quartic": 4}
_PARAM_RE = re.compile(r"^(power|sin|cos|poly):([-+0-9.eE]+)$")


def parse_function(item, path: str = "functions") -> ReferenceFunctionSpec:
    if isinstance(item, dict):
        terms = tuple(BasisTerm(t["kind"], t.get("parameter", 0)) for t in item["terms"])
        return ReferenceFunctionSpec(item["name"], terms)
    text = item.strip()
    if text in _SHORTHAND:
        p = _SHORTHAND[text]
        if p is None:
            return ReferenceFunctionSpec("constant", (BasisTerm("constant"),))
        return power_function(p, text)
    m = _PARAM_RE.match(text)
    if not m:
        raise ConfigError(path, f"unknown function shorthand {item!r}")
    kind, val = m.group(1), float(m.group(2))
    if kind == "power":
        return power_function(int(val), text)
    if kind == "poly":
        return polynomial_function(int(val), text)
    if kind == "sin":
        return sine_function(val, text)
    return cosine_function(val, text)


@dataclass
class RunConfig:
    grid: GridSpec
    functions: list[ReferenceFunctionSpec]
    alpha: float = DEFAULT_ALPHA
    tau_s: float = DEFAULT_TAU_S
    link_threshold: float = DEFAULT_L
    normalization: str = "range"
    seed: int = 0
    output_dir: str = "out"
    unique_assignment: bool = False
    emit_formats: tuple[str, ...] = FORMATS
    sweep: str | None = None
    layout_iterations: int = 500
    layout_area: float = 1.0
    style: dict = field(default_factory=dict)
    path_cap: int = 64
    betweenness: bool = True
    path_statistics: bool = True

    @property
    def tau_d(self) -> float:
        return tau_d_from_tau_s(self.tau_s, self.alpha)

    def build_engine(self) -> FitEngine:
        return FitEngine(self.functions, self.grid, self.alpha, self.normalization)

    def to_dict(self) -> dict:
        """Fully expanded document; ``parse_config(cfg.to_dict())`` reproduces ``cfg``."""
        out = {
            "grid": self.grid.to_dict(),
            "functions": [f.to_dict() for f in self.functions],
            "alpha": self.alpha,
            "tau_s": self.tau_s,
            "link_threshold": self.link_threshold,
            "normalization": self.normalization,
            "seed": self.seed,
            "output_dir": self.output_dir,
            "unique_assignment": self.unique_assignment,
            "emit_formats": list(self.emit_formats),
            "sweep": self.sweep,
            "layout": {"iterations": self.layout_iterations, "area": self.layout_area},
            "analysis": {"path_cap": self.path_cap, "betweenness": self.betweenness,
                         "path_statistics": self.path_statistics},
        }
        if self.style:
            out["style"] = dict(self.style)
        return out


def _schema_path(err: jsonschema.ValidationError) -> str:
    return ".".join(str(p) for p in err.absolute_path)


def parse_config(document) -> RunConfig:
    """Validate a config given as dict, JSON text or path."""
    if isinstance(document, Path):
        document = json.loads(document.read_text())
    elif isinstance(document, str):
        document = json.loads(document)
    if isinstance(document, dict) and "config" in document and "outputs" in document:
        document = document["config"]  # run manifest

    validator = jsonschema.Draft7Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(document), key=lambda e: list(e.absolute_path))
    if errors:
        best = jsonschema.exceptions.best_match(errors)
        raise ConfigError(_schema_path(best), best.message)

    doc = document
    if "tau_s" in doc and "tau_d" in doc:
        raise ConfigError("tau_s", "give exactly one of tau_s or tau_d, not both")

    try:
        grid = GridSpec(**doc["grid"])
    except GridError as e:
        raise ConfigError("grid", str(e)) from None

    funcs_doc = doc["functions"]
    try:
        if isinstance(funcs_doc, str):
            functions = PRESET_SETS[funcs_doc]()
        else:
            functions = [parse_function(it, f"functions.{k}") for k, it in enumerate(funcs_doc)]
    except ConfigurationError as e:
        raise ConfigError("functions", str(e)) from None
    names = [f.name for f in functions]
    if len(set(names)) != len(names):
        raise ConfigError("functions", f"function names must be unique, got {names}")

    alpha = float(doc.get("alpha", DEFAULT_ALPHA))
    if "tau_d" in doc:
        tau_s = tau_s_from_tau_d(float(doc["tau_d"]), alpha)
    else:
        tau_s = float(doc.get("tau_s", DEFAULT_TAU_S))

    sweep = doc.get("sweep")
    if sweep is not None:
        try:
            values = parse_sweep(sweep)
        except ValueError as e:
            raise ConfigError("sweep", str(e)) from None
        if not all(0 < t <= 1 for t in values):
            raise ConfigError("sweep", "tolerances must lie in (0, 1]")

    layout = doc.get("layout", {})
    analysis = doc.get("analysis", {})
    cfg = RunConfig(
        grid=grid,
        functions=functions,
        alpha=alpha,
        tau_s=tau_s,
        link_threshold=float(doc.get("link_threshold", DEFAULT_L)),
        normalization=doc.get("normalization", "range"),
        seed=int(doc.get("seed", 0)),
        output_dir=doc.get("output_dir", "out"),
        unique_assignment=bool(doc.get("unique_assignment", False)),
        emit_formats=tuple(doc.get("emit_formats", FORMATS)),
        sweep=sweep,
        layout_iterations=int(layout.get("iterations", 500)),
        layout_area=float(layout.get("area", 1.0)),
        style=dict(doc.get("style", {})),
        path_cap=int(analysis.get("path_cap", 64)),
        betweenness=bool(analysis.get("betweenness", True)),
        path_statistics=bool(analysis.get("path_statistics", True)),
    )
    # rank / size checks
    try:
        cfg.build_engine()
    except ConfigurationError as e:
        raise ConfigError("functions", str(e)) from None
    return cfg


def load_config(path: str | Path) -> RunConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise ConfigError("", f"cannot read {p}: {e}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError("", f"invalid JSON in {p}: {e}") from None
    return parse_config(doc)
