"""CLI configuration: schema, loading, overrides, and seed splitting.

A run is described by one JSON document validated against CONFIG_SCHEMA.
Complex matrix entries are written as [re, im] pairs. Command-line
``--set key=value`` overrides use dotted paths into the document; values
parse as JSON with a plain-string fallback.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

import jsonschema
import numpy as np

from .clocks import (
    ClockModel,
    ExpansionClock,
    FundamentalLimitClock,
    GaussianClock,
    IdealClock,
    constant_width_growth,
)
from .core import DensityMatrix, HermitianOperator
from .errors import ConfigError, ValidationError

_COMPLEX_ENTRY = {
    "type": "array",
    "items": {"type": "number"},
    "minItems": 2,
    "maxItems": 2,
}
_COMPLEX_MATRIX = {
    "type": "array",
    "items": {"type": "array", "items": _COMPLEX_ENTRY, "minItems": 1},
    "minItems": 1,
}

CONFIG_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "realclock-qm run configuration",
    "type": "object",
    "additionalProperties": False,
    "required": ["command"],
    "properties": {
        "command": {"enum": ["evolve", "zurek", "condprob", "clock-limits", "sweep"]},
        "seed": {"type": "integer", "minimum": 0},
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "path": {"type": "string"},
                "format": {"enum": ["csv", "json"]},
            },
        },
        "system": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "preset": {"enum": ["qubit", "diag"]},
                "omega": {"type": "number"},
                "values": {"type": "array", "items": {"type": "number"}, "minItems": 1},
                "hamiltonian": _COMPLEX_MATRIX,
            },
        },
        "initial_state": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "preset": {"enum": ["plus", "basis0"]},
                "vector": {"type": "array", "items": _COMPLEX_ENTRY, "minItems": 1},
                "matrix": _COMPLEX_MATRIX,
            },
        },
        "clock": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["ideal", "gaussian", "expansion", "fundamental"]},
                "width": {"type": "number", "exclusiveMinimum": 0},
                "sigma": {"type": "number", "minimum": 0},
                "b_poly": {"type": "array", "items": {"type": "number"}, "minItems": 1},
                "t_planck": {"type": "number", "exclusiveMinimum": 0},
                "t_max": {"type": "number"},
            },
        },
        "evolution": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "step": {"type": "number", "exclusiveMinimum": 0},
                "t_final": {"type": "number", "minimum": 0},
                "grid": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["t_min", "t_max", "n_points"],
                    "properties": {
                        "t_min": {"type": "number"},
                        "t_max": {"type": "number"},
                        "n_points": {"type": "integer", "minimum": 3},
                    },
                },
                "quad_tol": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "zurek": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "couplings": {"type": "array", "items": {"type": "number"}, "minItems": 1},
                "alphas": {"type": "array", "items": _COMPLEX_ENTRY, "minItems": 1},
                "betas": {"type": "array", "items": _COMPLEX_ENTRY, "minItems": 1},
                "system_amplitudes": {
                    "type": "array", "items": _COMPLEX_ENTRY, "minItems": 2, "maxItems": 2,
                },
                "random_bath": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["n_atoms", "coupling_low", "coupling_high"],
                    "properties": {
                        "n_atoms": {"type": "integer", "minimum": 1},
                        "coupling_low": {"type": "number"},
                        "coupling_high": {"type": "number"},
                    },
                },
                "horizon": {"type": "number", "exclusiveMinimum": 0},
                "n_samples": {"type": "integer", "minimum": 2},
                "t_planck": {"type": "number", "exclusiveMinimum": 0},
                "verify_brute_force": {"type": "boolean"},
                "recurrence": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["threshold"],
                    "properties": {
                        "threshold": {"type": "number", "exclusiveMinimum": 0},
                        "modes": {
                            "type": "array",
                            "items": {"enum": ["ideal", "realclock"]},
                            "minItems": 1,
                        },
                        "n_samples": {"type": "integer", "minimum": 1000},
                    },
                },
            },
        },
        "condprob": {
            "type": "object",
            "additionalProperties": False,
            "required": ["mode", "queries"],
            "properties": {
                "mode": {"enum": ["analytic", "wavepacket"]},
                "queries": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["o_center", "o_halfwidth", "t_center", "t_halfwidth"],
                        "properties": {
                            "o_center": {"type": "number"},
                            "o_halfwidth": {"type": "number", "exclusiveMinimum": 0},
                            "t_center": {"type": "number"},
                            "t_halfwidth": {"type": "number", "exclusiveMinimum": 0},
                        },
                    },
                },
                "observable": _COMPLEX_MATRIX,
                "wavepacket": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "n": {"type": "integer", "minimum": 2},
                        "length": {"type": "number", "exclusiveMinimum": 0},
                        "mass": {"type": "number", "exclusiveMinimum": 0},
                        "sigma0": {"type": "number", "exclusiveMinimum": 0},
                        "x0": {"type": "number"},
                        "velocity": {"type": "number", "exclusiveMinimum": 0},
                    },
                },
            },
        },
        "limits": {
            "type": "object",
            "additionalProperties": False,
            "required": ["omega", "duration", "t_planck"],
            "properties": {
                "omega": {"type": "number"},
                "duration": {"type": "number", "minimum": 0},
                "t_planck": {"type": "number", "exclusiveMinimum": 0},
                "mass": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "required": ["key", "min", "max", "n"],
            "properties": {
                "key": {"type": "string", "minLength": 1},
                "min": {"type": "number"},
                "max": {"type": "number"},
                "n": {"type": "integer", "minimum": 1},
            },
        },
        "run": {"type": "object"},
    },
}


def validate_config(document: dict) -> None:
    """Schema-validate, reporting the offending key path on failure."""
    try:
        jsonschema.validate(document, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = ".".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config key '{path}': {exc.message}") from exc


def load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            document = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise ConfigError("config document must be a JSON object")
    return document


def apply_override(document: dict, assignment: str) -> None:
    """Apply one ``dotted.path=value`` override in place."""
    if "=" not in assignment:
        raise ConfigError(f"override {assignment!r} must look like key=value")
    key, raw = assignment.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    parts = key.split(".")
    node = document
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigError(f"override path {key!r} crosses a non-object value")
    node[parts[-1]] = value


def derive_rng(root_seed: int, component: str) -> np.random.Generator:
    """Per-component stream: seed = first 8 bytes of sha256('root:component').

    Deterministic and independent of execution order, so sweeps give the
    same streams regardless of worker count.
    """
    digest = hashlib.sha256(f"{root_seed}:{component}".encode()).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], "big"))


def _to_complex(pair) -> complex:
    return complex(pair[0], pair[1])


def complex_matrix(entries) -> np.ndarray:
    return np.array([[_to_complex(cell) for cell in row] for row in entries])


def build_hamiltonian(section: dict | None) -> HermitianOperator:
    if not section:
        raise ConfigError("config key 'system': section is required for this command")
    try:
        if "hamiltonian" in section:
            return HermitianOperator(complex_matrix(section["hamiltonian"]))
        preset = section.get("preset")
        if preset == "qubit":
            if "omega" not in section:
                raise ConfigError("config key 'system.omega': required for the qubit preset")
            return HermitianOperator(np.diag([0.0, float(section["omega"])]))
        if preset == "diag":
            if "values" not in section:
                raise ConfigError("config key 'system.values': required for the diag preset")
            return HermitianOperator(np.diag(np.asarray(section["values"], dtype=float)))
    except ValidationError as exc:
        raise ConfigError(f"config key 'system': {exc}") from exc
    raise ConfigError("config key 'system': give 'hamiltonian' or a preset")


def build_initial_state(section: dict | None, dim: int) -> DensityMatrix:
    if not section:
        raise ConfigError("config key 'initial_state': section is required for this command")
    try:
        if "matrix" in section:
            state = DensityMatrix(complex_matrix(section["matrix"]))
        elif "vector" in section:
            state = DensityMatrix.from_pure([_to_complex(p) for p in section["vector"]])
        elif section.get("preset") == "plus":
            state = DensityMatrix.from_pure(np.ones(dim))
        elif section.get("preset") == "basis0":
            vec = np.zeros(dim)
            vec[0] = 1.0
            state = DensityMatrix.from_pure(vec)
        else:
            raise ConfigError("config key 'initial_state': give 'matrix', 'vector' or a preset")
    except ValidationError as exc:
        raise ConfigError(f"config key 'initial_state': {exc}") from exc
    if state.dim != dim:
        raise ConfigError(
            f"config key 'initial_state': dimension {state.dim} does not match system {dim}"
        )
    return state


def build_clock(section: dict | None) -> ClockModel:
    if not section:
        raise ConfigError("config key 'clock': section is required for this command")
    kind = section["kind"]
    try:
        if kind == "ideal":
            return IdealClock()
        if kind == "gaussian":
            if "width" not in section:
                raise ConfigError("config key 'clock.width': required for gaussian clocks")
            return GaussianClock(width=float(section["width"]))
        if kind == "expansion":
            if "sigma" in section:
                return constant_width_growth(float(section["sigma"]))
            if "b_poly" in section:
                coeffs = [float(c) for c in section["b_poly"]]

                def b(T, _c=tuple(coeffs)):
                    return sum(c * T**j for j, c in enumerate(_c))

                def b_rate(T, _c=tuple(coeffs)):
                    return sum(j * c * T ** (j - 1) for j, c in enumerate(_c) if j >= 1)

                return ExpansionClock(b=b, b_rate=b_rate)
            raise ConfigError("config key 'clock': expansion clocks need 'sigma' or 'b_poly'")
        if kind == "fundamental":
            for required in ("t_planck", "t_max"):
                if required not in section:
                    raise ConfigError(f"config key 'clock.{required}': required for fundamental clocks")
            return FundamentalLimitClock(
                t_planck=float(section["t_planck"]), t_max=float(section["t_max"])
            )
    except ValidationError as exc:
        raise ConfigError(f"config key 'clock': {exc}") from exc
    raise ConfigError(f"config key 'clock.kind': unknown kind {kind!r}")
