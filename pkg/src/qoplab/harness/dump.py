"""Operator dumps in the sector JSON format."""
from __future__ import annotations

from typing import Any

from ..intertwine import BaxterParams
from ..qtransfer import ChainSpec, baxter_q, q_explicit, q_generic, transfer_matrix
from ..repmod import BorelParams
from .config import ConfigError, RunConfig, parse_complex
from .sampling import Sampler

DUMP_KINDS = ("T", "Q-generic", "Q-explicit", "Q-baxter")


def _get(params: dict[str, Any], key: str, default=None) -> complex:
    if key not in params:
        if default is None:
            raise ConfigError(f"params.{key} is required for this dump")
        return complex(default)
    return parse_complex(params[key], f"params.{key}")


def _ws(params: dict[str, Any], N: int) -> tuple[complex, ...]:
    w = params.get("w", 1.0)
    if isinstance(w, list) and w and isinstance(w[0], list):
        if len(w) != N:
            raise ConfigError(f"params.w must list {N} inhomogeneities")
        return tuple(parse_complex(x, "params.w") for x in w)
    return (parse_complex(w, "params.w"),) * N


def _baxter(p: dict[str, Any]) -> BaxterParams:
    for k in ("eta", "v"):
        if isinstance(p.get(k), bool) or not isinstance(p.get(k), (int, float)):
            raise ConfigError(f"params.{k} must be real")
    return BaxterParams(float(p["eta"]), float(p["v"]), _get(p, "s0", 1.0))


def dump_operator(kind: str, cfg: RunConfig) -> dict[str, Any]:
    if kind not in DUMP_KINDS:
        raise ConfigError(f"unknown dump kind {kind!r}; choose from {', '.join(DUMP_KINDS)}")
    if cfg.N is None or len(cfg.N) != 1:
        raise ConfigError("dump needs a single N")
    N = cfg.N[0]
    S = Sampler(cfg.seed)
    p = dict(cfg.params or {})
    if kind in ("Q-explicit", "Q-baxter"):
        bp = _baxter(p) if "eta" in p else S.baxter(N)
        op = baxter_q(N, bp, cfg.sectors) if kind == "Q-baxter" else q_explicit(N, bp, cfg.sectors)
        return op.to_json()
    if "eta" in p:
        # (eta, v, s0) fixes q, z/w and s0; the chain sits at w = 1 unless given
        bp = _baxter(p)
        w = _ws(p, N)
        chain = ChainSpec(N, w, bp.q)
        z = w[0] * bp.z_over_w
        if kind == "T":
            return transfer_matrix(chain, z, cfg.sectors).to_json()
        return q_generic(chain, BorelParams(z, bp.s0, 0, 0), sectors=cfg.sectors).to_json()
    if not p:
        q, bpar, w = S.borel_chain(N, generic_s=(kind == "Q-generic"))
        p = {"q": [q.real, q.imag], "z": [bpar.z.real, bpar.z.imag], "w": [w.real, w.imag],
             "s0": [bpar.s0.real, bpar.s0.imag], "s1": [bpar.s1.real, bpar.s1.imag], "s2": [bpar.s2.real, bpar.s2.imag]}
    chain = ChainSpec(N, _ws(p, N), _get(p, "q"))
    z = _get(p, "z")
    if kind == "T":
        return transfer_matrix(chain, z, cfg.sectors).to_json()
    params = BorelParams(z, _get(p, "s0", 1.0), _get(p, "s1", 0.0), _get(p, "s2", 0.0))
    return q_generic(chain, params, sectors=cfg.sectors).to_json()
