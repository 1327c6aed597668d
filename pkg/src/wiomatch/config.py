"""Run configuration: a flat ``key = value`` file plus command-line overrides."""

from __future__ import annotations

import dataclasses
import math
import os
from dataclasses import dataclass
from typing import Iterable, Mapping

from .circuit import WeightParams
from .errors import ConfigError, DomainError
from .propagation import STRATEGIES, PCG_LIMIT, PropagationConfig
from .sdd import DEFAULT_PHI, MERGE_THRESHOLD


@dataclass(frozen=True)
class RunConfig:
    # circuit weights
    lam: float = 0.85
    epsilon: float = 0.01
    gamma_C: tuple = (1 / 3, 1 / 3, 1 / 3)
    gamma_P: tuple = (1 / 3, 1 / 3, 1 / 3)
    gamma_I: tuple = (0.5, 0.5)
    subgraph_k: int = 15
    # propagation
    theta: float = 0.005
    max_iterations: int = 8
    convergence_eps: float = 1e-4
    penalty_alpha: float = 3.0
    strategy: str = "S5"
    pcg_limit: int = PCG_LIMIT
    # description documents
    sdd_weights: tuple = DEFAULT_PHI
    merge_threshold: float = MERGE_THRESHOLD
    # thresholds
    phi: float = 0.25
    delta: float = 0.25
    credible: float = 0.9
    extraction: float = 0.25
    # paths
    ontologyA: str = ""
    ontologyB: str = ""
    lexicon: str = ""
    reference: str = ""
    seeds: str = ""
    output: str = ""
    report: str = ""

    def __post_init__(self):
        try:
            self.weight_params()
            self.propagation()
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
        _unit("phi", self.phi, hi=0.5)
        for name in ("delta", "credible", "extraction", "merge_threshold"):
            _unit(name, getattr(self, name))
        if len(self.sdd_weights) != 4 or any(w < 0 or not math.isfinite(w) for w in self.sdd_weights):
            raise ConfigError(f"sdd_weights needs 4 non-negative numbers, got {self.sdd_weights}")

    def weight_params(self) -> WeightParams:
        return WeightParams(tuple(self.gamma_C), tuple(self.gamma_P), tuple(self.gamma_I), self.epsilon, self.lam)

    def propagation(self) -> PropagationConfig:
        return PropagationConfig(self.theta, self.max_iterations, self.convergence_eps, self.penalty_alpha,
                                 self.strategy, self.subgraph_k, self.pcg_limit)

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)

    def dumps(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            text = ",".join(repr(float(x)) for x in v) if isinstance(v, tuple) else str(v)
            lines.append(f"{f.name} = {text}")
        return "\n".join(lines) + "\n"


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}


def _unit(name, v, lo=0.0, hi=1.0):
    if not lo <= v <= hi:
        raise ConfigError(f"{name} must lie in [{lo}, {hi}], got {v}")


def _convert(key: str, text: str):
    default = _FIELDS[key].default
    text = text.strip()
    try:
        if isinstance(default, tuple):
            return tuple(float(x) for x in text.split(",") if x.strip())
        if isinstance(default, bool):
            return text.lower() in ("1", "true", "yes")
        if isinstance(default, int):
            return int(text)
        if isinstance(default, float):
            return float(text)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {text!r}") from None
    if key == "strategy" and text not in STRATEGIES:
        raise ConfigError(f"strategy must be one of {', '.join(STRATEGIES)}, got {text!r}")
    return text


def parse_assignments(items: Iterable[str], source: str = "<override>") -> dict:
    """``key=value`` strings to typed values; blank lines and whole-line ``#`` comments are skipped."""
    out = {}
    for lineno, raw in enumerate(items, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key=value, got {raw.strip()!r}")
        key, value = (x.strip() for x in line.split("=", 1))
        if key not in _FIELDS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        out[key] = _convert(key, value)
    return out


def load_config(path: str | os.PathLike | None = None, overrides: Iterable[str] = (),
                base: Mapping | None = None) -> RunConfig:
    """Defaults, then the file at ``path``, then ``overrides`` (later wins)."""
    values = dict(base or {})
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                values.update(parse_assignments(fh.read().splitlines(), os.fspath(path)))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    values.update(parse_assignments(overrides))
    return RunConfig(**values)
