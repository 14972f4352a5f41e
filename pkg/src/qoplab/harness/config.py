"""Run configuration: a single JSON document, complex scalars as ``[re, im]``."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

SUITE_NAMES = (
    "tq-explicit",
    "tq-generic",
    "commute",
    "wedge",
    "fusion",
    "prop22",
    "qosc",
    "yang-baxter",
    "w-recursions",
    "sr-relations",
    "trace-additivity",
    "cross-oracle",
)

DEFAULT_TOLERANCES = {
    "tq_explicit": 1e-9,
    "tq_generic": 1e-9,
    "commutator_qt": 1e-9,
    "commutator_qq": 1e-10,
    "negative_control": 1e-3,
    "wedge": 0.5,
    "fusion": 1e-8,
    "prop22": 1e-10,
    "qoscillator": 1e-12,
    "serre": 1e-12,
    "yang_baxter": 1e-12,
    "w_recursions": 1e-10,
    "sr_relations": 1e-10,
    "trace_additivity": 1e-10,
    "cross_oracle": 1e-10,
    "baxter_identification": 1e-12,
}

_KEYS = {"suite", "N", "sectors", "draws", "params", "seed", "root_of_unity", "order", "negative_controls", "tolerances", "options", "out"}


class ConfigError(ValueError):
    """Invalid run configuration."""


def parse_complex(x: Any, name: str = "value") -> complex:
    if isinstance(x, bool):
        raise ConfigError(f"{name}: expected a number or [re, im]")
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in x):
        return complex(x[0], x[1])
    raise ConfigError(f"{name}: expected a number or [re, im], got {x!r}")


@dataclass(frozen=True)
class RunConfig:
    suite: str
    N: tuple[int, ...] | None = None
    sectors: tuple[int, ...] | None = None
    draws: int | None = None
    params: dict[str, Any] | None = None
    seed: int = 0
    root_of_unity: bool = False
    order: int | None = None
    negative_controls: bool = True
    tolerances: dict[str, float] = field(default_factory=dict)
    options: dict[str, Any] = field(default_factory=dict)
    out: str | None = None

    def tolerance(self, key: str) -> float:
        return float(self.tolerances.get(key, DEFAULT_TOLERANCES[key]))

    def echo(self) -> dict[str, Any]:
        d = asdict(self)
        d["N"] = list(self.N) if self.N is not None else None
        d["sectors"] = list(self.sectors) if self.sectors is not None else None
        # the output location does not affect results
        d.pop("out")
        return d


def _int_list(x: Any, name: str) -> tuple[int, ...]:
    if isinstance(x, bool):
        raise ConfigError(f"{name}: expected integer or list of integers")
    if isinstance(x, int):
        return (x,)
    if isinstance(x, list) and x and all(isinstance(v, int) and not isinstance(v, bool) for v in x):
        return tuple(x)
    raise ConfigError(f"{name}: expected integer or non-empty list of integers")


def config_from_dict(obj: dict[str, Any], suite: str | None = None, seed: int | None = None, out: str | None = None) -> RunConfig:
    if not isinstance(obj, dict):
        raise ConfigError("configuration must be a JSON object")
    unknown = set(obj) - _KEYS
    if unknown:
        raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
    name = suite if suite is not None else obj.get("suite")
    if name is None:
        raise ConfigError("no suite given")
    if name != "dump" and name not in SUITE_NAMES:
        raise ConfigError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")
    if obj.get("suite") not in (None, name) and name != "dump":
        raise ConfigError(f"config names suite {obj['suite']!r} but {name!r} was requested")
    N = _int_list(obj["N"], "N") if "N" in obj else None
    if N is not None and any(n < 1 for n in N):
        raise ConfigError("N must be positive")
    sectors = _int_list(obj["sectors"], "sectors") if "sectors" in obj else None
    draws = obj.get("draws")
    if draws is not None and (not isinstance(draws, int) or isinstance(draws, bool) or draws < 1):
        raise ConfigError("draws must be a positive integer")
    params = obj.get("params")
    if params is not None and not isinstance(params, dict):
        raise ConfigError("params must be an object")
    s = seed if seed is not None else obj.get("seed", 0)
    if not isinstance(s, int) or isinstance(s, bool) or not 0 <= s < 2**64:
        raise ConfigError("seed must be an unsigned 64-bit integer")
    tol = obj.get("tolerances", {})
    if not isinstance(tol, dict):
        raise ConfigError("tolerances must be an object")
    for k, v in tol.items():
        if k not in DEFAULT_TOLERANCES:
            raise ConfigError(f"unknown tolerance key {k!r}")
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not v > 0:
            raise ConfigError(f"tolerance {k!r} must be a positive number")
    order = obj.get("order")
    if order is not None and (not isinstance(order, int) or isinstance(order, bool) or order < 3):
        raise ConfigError("order must be an integer >= 3")
    for flag in ("root_of_unity", "negative_controls"):
        if flag in obj and not isinstance(obj[flag], bool):
            raise ConfigError(f"{flag} must be a boolean")
    options = obj.get("options", {})
    if not isinstance(options, dict):
        raise ConfigError("options must be an object")
    return RunConfig(
        suite=name,
        N=N,
        sectors=sectors,
        draws=draws,
        params=params,
        seed=s,
        root_of_unity=bool(obj.get("root_of_unity", False)),
        order=order,
        negative_controls=bool(obj.get("negative_controls", True)),
        tolerances={k: float(v) for k, v in tol.items()},
        options=options,
        out=out if out is not None else obj.get("out"),
    )


def load_config(path: str, suite: str | None = None, seed: int | None = None, out: str | None = None) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return config_from_dict(obj, suite, seed, out)
