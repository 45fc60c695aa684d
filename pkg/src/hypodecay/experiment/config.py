"""Run configuration: JSON schema, parsing, and initial-data builders.

A config document is plain JSON.  `parse_config` validates against the
published schema before touching any numerics (malformed input must
fail fast, before files or arrays exist), and `serialize_config` emits
the canonical dict form — `serialize(parse(doc))` is idempotent on
schema-valid documents.
"""

import json
from dataclasses import asdict, dataclass, field

import jsonschema
import numpy as np

_BC = ["periodic", "compact_support"]
_DATA_KINDS = ["gaussian", "dgaussian", "bumps", "zero"]

_matrix = {
    "type": "array",
    "minItems": 1,
    "items": {"type": "array", "minItems": 1, "items": {"type": "number"}},
}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["scenario", "grid", "time"],
    "additionalProperties": False,
    "properties": {
        "scenario": {"type": "string", "minLength": 1},
        "system": {
            "type": "object",
            "required": ["kind"],
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": ["linear", "euler", "psystem", "heat", "none"]},
                "A": _matrix,
                "D": _matrix,
                "n1": {"type": "integer", "minimum": 1},
                "gamma": {"type": "number", "exclusiveMinimum": 1},
                "rho_bar": {"type": "number", "exclusiveMinimum": 0},
                "lam": {"type": "number", "exclusiveMinimum": 0},
                "smallness_cap": {"type": "number", "exclusiveMinimum": 0},
                "r": {"type": "number"},
                "eta2": {"type": "number", "minimum": 0},
                "eta3": {"type": "number", "minimum": 0},
            },
        },
        "grid": {
            "type": "object",
            "required": ["L", "N"],
            "additionalProperties": False,
            "properties": {
                "L": {"type": "number", "exclusiveMinimum": 0},
                "N": {"type": "integer", "minimum": 16},
                "bc": {"enum": _BC},
            },
        },
        "time": {
            "type": "object",
            "required": ["T"],
            "additionalProperties": False,
            "properties": {
                "T": {"type": "number", "exclusiveMinimum": 0},
                "cfl": {"type": "number", "exclusiveMinimum": 0, "maximum": 0.7},
                "sample_stride": {"type": "integer", "minimum": 1},
                "dt": {"type": ["number", "null"], "exclusiveMinimum": 0},
                "nu": {"type": "number", "minimum": 0},
            },
        },
        "data": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind", "component"],
                "additionalProperties": False,
                "properties": {
                    "kind": {"enum": _DATA_KINDS},
                    "component": {"type": "integer", "minimum": 0},
                    "amp": {"type": "number"},
                    "width": {"type": "number", "exclusiveMinimum": 0},
                    "center": {"type": "number"},
                    "count": {"type": "integer", "minimum": 1},
                },
            },
        },
        "weights": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["role", "kind"],
                "additionalProperties": False,
                "properties": {
                    "role": {"enum": ["spatial", "wave"]},
                    "kind": {"enum": ["power", "log", "logarithmic"]},
                    "mu": {"type": "number"},
                    "q": {"type": "number"},
                    "r": {"type": "number"},
                    "a": {"type": ["number", "null"]},
                    "mass_tol": {"type": "number", "exclusiveMinimum": 0},
                },
            },
        },
        "corrector": {
            "type": ["object", "null"],
            "additionalProperties": False,
            "properties": {
                "delta": {"type": "number", "exclusiveMinimum": 0},
                "safety": {
                    "type": "number",
                    "exclusiveMinimum": 0,
                    "exclusiveMaximum": 1,
                },
            },
        },
        "outputs": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "dir": {"type": "string", "minLength": 1},
                "snapshots": {"type": "array", "items": {"type": "number"}},
            },
        },
        "seed": {"type": "integer", "minimum": 0},
    },
}


class ConfigError(ValueError):
    """Configuration document rejected before execution."""


@dataclass(frozen=True)
class DataField:
    kind: str
    component: int
    amp: float = 1.0
    width: float = 1.0
    center: float = 0.0
    count: int = 1


@dataclass(frozen=True)
class WeightEntry:
    role: str
    kind: str
    mu: float = 1.0
    q: float = 1.0
    r: float = 2.0
    a: float = None
    mass_tol: float = 1e-8


@dataclass(frozen=True)
class RunConfig:
    scenario: str
    system: dict
    grid: dict
    time: dict
    data: tuple
    weights: tuple
    corrector: dict = None
    outputs: dict = field(default_factory=dict)
    seed: int = 0

    def doc(self):
        """Canonical JSON document (the serialize direction)."""
        out = {
            "scenario": self.scenario,
            "system": dict(self.system),
            "grid": dict(self.grid),
            "time": dict(self.time),
            "data": [asdict(d) for d in self.data],
            "weights": [asdict(w) for w in self.weights],
            "corrector": dict(self.corrector) if self.corrector is not None else None,
            "outputs": dict(self.outputs),
            "seed": self.seed,
        }
        return out


_TIME_DEFAULTS = {"cfl": 0.4, "sample_stride": 1, "dt": None, "nu": 0.0}


def parse_config(doc):
    """Validate a JSON document and normalize it into a RunConfig."""
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    try:
        jsonschema.validate(doc, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = ".".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"invalid config at {path}: {exc.message}") from None

    system = dict(doc.get("system", {"kind": "none"}))
    system.setdefault("kind", "none")
    grid = {"bc": "periodic", **doc["grid"]}
    time_cfg = {**_TIME_DEFAULTS, **doc["time"]}
    data = tuple(
        DataField(
            kind=d["kind"],
            component=d["component"],
            amp=d.get("amp", 1.0),
            width=d.get("width", 1.0),
            center=d.get("center", 0.0),
            count=d.get("count", 1),
        )
        for d in doc.get("data", [])
    )
    weights = tuple(
        WeightEntry(
            role=w["role"],
            kind=w["kind"],
            mu=w.get("mu", 1.0),
            q=w.get("q", 1.0),
            r=w.get("r", 2.0),
            a=w.get("a"),
            mass_tol=w.get("mass_tol", 1e-8),
        )
        for w in doc.get("weights", [])
    )
    corrector = doc.get("corrector")
    if corrector is not None:
        corrector = {"delta": corrector.get("delta", 0.1),
                     "safety": corrector.get("safety", 0.5)}
    return RunConfig(
        scenario=doc["scenario"],
        system=system,
        grid=grid,
        time=time_cfg,
        data=data,
        weights=weights,
        corrector=corrector,
        outputs=dict(doc.get("outputs", {})),
        seed=doc.get("seed", 0),
    )


def serialize_config(cfg):
    return cfg.doc()


def load_config(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(doc)


def apply_override(doc, dotted, value):
    """Apply one --set style override (dotted path) to a raw document."""
    keys = dotted.split(".")
    node = doc
    for k in keys[:-1]:
        if isinstance(node, list):
            node = node[int(k)]
        else:
            node = node.setdefault(k, {})
    leaf = keys[-1]
    try:
        parsed = json.loads(value)
    except json.JSONDecodeError:
        parsed = value
    if isinstance(node, list):
        node[int(leaf)] = parsed
    else:
        node[leaf] = parsed
    return doc


def build_fields(cfg, grid, n_components, rng=None):
    """Evaluate the initial-data descriptors into an (N, n) array.

    `bumps` entries draw `count` random Gaussian bumps from the
    counter-based generator (reproducible across platforms); the other
    kinds are deterministic closed forms.
    """
    x = grid.x
    U = np.zeros((grid.N, n_components))
    for d in cfg.data:
        if d.component >= n_components:
            raise ConfigError(
                f"data component {d.component} out of range for {n_components} fields"
            )
        if d.kind == "zero":
            continue
        if d.kind == "gaussian":
            U[:, d.component] += d.amp * np.exp(-(((x - d.center) / d.width) ** 2))
        elif d.kind == "dgaussian":
            z = (x - d.center) / d.width
            U[:, d.component] += d.amp * (-2.0 * z / d.width) * np.exp(-(z**2))
        elif d.kind == "bumps":
            if rng is None:
                rng = np.random.Generator(np.random.Philox(cfg.seed))
            for _ in range(d.count):
                amp = rng.uniform(-1.0, 1.0) * d.amp
                center = rng.uniform(-d.width, d.width)
                width = rng.uniform(0.5, 3.0)
                U[:, d.component] += amp * np.exp(-(((x - center) / width) ** 2))
    return U
