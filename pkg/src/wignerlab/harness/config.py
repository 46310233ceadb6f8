"""Experiment configuration: JSON loading, schema validation, canonical hashing."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema

from ..ensembles import ModelSpec, model_from_dict
from ..errors import ConfigurationError, DomainError
from ..semicircle import DomainParams, in_domain

SEED_ENV = "WIGNERLAB_SEED"
DEFAULT_SEED = 0
RESOLVENT_EXPERIMENTS = {"local_law", "observable", "derivation_check"}


def load_schema() -> dict:
    text = resources.files(__package__).joinpath("config.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def canonical_json(obj) -> str:
    """Sorted keys, no whitespace, shortest round-trip floats."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True, allow_nan=False)


def config_hash(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


@dataclass
class ExperimentConfig:
    experiment: str
    model: ModelSpec
    Ns: list
    trials: int
    z_points: list
    seed: int
    seed_source: str
    workers: int
    thresholds: dict
    domain: DomainParams
    params: dict
    output_dir: str | None
    raw: dict = field(repr=False, default_factory=dict)

    @property
    def resolved(self) -> dict:
        """The raw config with the effective seed filled in; this is what gets hashed."""
        d = dict(self.raw)
        d["seed"] = self.seed
        d.pop("workers", None)
        d.pop("output", None)
        return d

    @property
    def hash(self) -> str:
        return config_hash(self.resolved)


def _schema_message(err: jsonschema.ValidationError) -> str:
    where = "/".join(str(p) for p in err.absolute_path) or "<root>"
    return f"field {where}: {err.message}"


def parse_config(raw: dict, env: dict | None = None) -> ExperimentConfig:
    env = os.environ if env is None else env
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        raise ConfigurationError("; ".join(_schema_message(e) for e in errors))

    if "seed" in raw:
        seed, source = int(raw["seed"]), "config"
    elif env.get(SEED_ENV):
        try:
            seed, source = int(env[SEED_ENV]), "env"
        except ValueError:
            raise ConfigurationError(f"{SEED_ENV} must be an integer, got {env[SEED_ENV]!r}") from None
    else:
        seed, source = DEFAULT_SEED, "default"

    model = model_from_dict(raw.get("model", "gue_pair"))
    dom = DomainParams(**raw.get("domain", {}))
    Ns = list(raw.get("Ns", [8] if raw["experiment"] == "derivation_check" else [64]))
    z_points = [complex(e, eta) for e, eta in raw.get("z_points", [])]
    if any(z.imag == 0 for z in z_points):
        raise ConfigurationError("z_points need a nonzero imaginary part")
    if raw["experiment"] in RESOLVENT_EXPERIMENTS:
        for N in Ns:
            for z in z_points:
                if not in_domain(z, N, dom):
                    raise DomainError(f"z = {z} lies outside the spectral domain for N = {N} "
                                      f"(epsilon = {dom.epsilon}, rho = {dom.rho})")
    return ExperimentConfig(raw["experiment"], model, Ns, int(raw.get("trials", 1)), z_points, seed,
                            source, int(raw.get("workers", 1)), dict(raw.get("thresholds", {})),
                            dom, dict(raw.get("params", {})), raw.get("output", {}).get("dir"), raw)


def load_config(path, env: dict | None = None) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ConfigurationError(f"{path}: top level must be a JSON object")
    return parse_config(raw, env)
