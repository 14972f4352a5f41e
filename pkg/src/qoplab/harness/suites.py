"""Named check suites and the report they produce."""
from __future__ import annotations

import dataclasses
import os
import time
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..intertwine import (
    BaxterParams,
    check_sr_relations,
    w_closed_form,
    w_intertwining_residual,
    w_recursion_residual,
    yang_baxter_residual,
    WOperatorSymbolic,
)
from ..laurent import LaurentPoly
from ..repmod import BorelParams, check_prop22, qoscillator_constant_check, serre_family_check
from ..report import ResidualReport
from ..qtransfer import ChainSpec, q_explicit, q_generic, transfer_matrix
from ..qtransfer.identities import random_words, trace_additivity_check, wedge_identity_check
from ..qtransfer.checks import (
    baxter_identification_check,
    check_tq_explicit,
    check_tq_generic,
    commutator_norms,
    cross_oracle_check,
    fusion_fit,
)
from ..qtransfer.types import sector_charges
from .config import SUITE_NAMES, ConfigError, RunConfig, parse_complex
from .sampling import Sampler

Task = Callable[[], ResidualReport]


def thread_count() -> int:
    raw = os.environ.get("QOPLAB_THREADS")
    if raw is None or raw == "":
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"QOPLAB_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError("QOPLAB_THREADS must be a positive integer")
    return n


@dataclass
class SuiteReport:
    suite: str
    config: dict[str, Any]
    checks: list[ResidualReport]
    draws: list[dict[str, Any]]
    timings: dict[str, float] | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def overall_pass(self) -> bool:
        return bool(self.checks) and all(c.ok for c in self.checks)

    def to_json(self) -> dict[str, Any]:
        out = {
            "suite": self.suite,
            "seed": self.config.get("seed"),
            "config": self.config,
            "overall_pass": self.overall_pass,
            "summary": {
                "checks": len(self.checks),
                "failed": [c.name for c in self.checks if not c.ok],
                "negative_controls": sum(c.expect_fail for c in self.checks),
            },
            "checks": [c.to_json() for c in self.checks],
            "draws": self.draws,
        }
        if self.notes:
            out["notes"] = self.notes
        if self.timings is not None:
            out["timings"] = self.timings
        return out


# --------------------------------------------------------------------------
# helpers


def _tol(r: ResidualReport, tolerance: float, expect_fail: bool = False, name: str | None = None) -> ResidualReport:
    return dataclasses.replace(r, tolerance=tolerance, expect_fail=expect_fail, name=name or r.name)


def _n_list(cfg: RunConfig, default) -> tuple[int, ...]:
    return cfg.N if cfg.N is not None else tuple(default)


def _draws(cfg: RunConfig, default: int) -> int:
    if cfg.params is not None:
        return 1
    return cfg.draws if cfg.draws is not None else default


def _param(cfg: RunConfig, key: str, default=None, kind: str = "complex"):
    if cfg.params is None or key not in cfg.params:
        if default is None:
            raise ConfigError(f"params.{key} is required")
        return default
    v = cfg.params[key]
    if kind == "real":
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"params.{key} must be real")
        return float(v)
    return parse_complex(v, f"params.{key}")


def _explicit_baxter(cfg: RunConfig) -> BaxterParams:
    return BaxterParams(_param(cfg, "eta", kind="real"), _param(cfg, "v", kind="real"), _param(cfg, "s0", 1.0))


def _explicit_borel(cfg: RunConfig, generic_s: bool = True):
    q = _param(cfg, "q")
    p = BorelParams(_param(cfg, "z"), _param(cfg, "s0"), _param(cfg, "s1", 0j) if generic_s else 0j, _param(cfg, "s2", 0j) if generic_s else 0j)
    return q, p, _param(cfg, "w", 1.0)


def _opt(cfg: RunConfig, key: str, default):
    return cfg.options.get(key, default)


def _sectors_for(cfg: RunConfig, N: int, default) -> list[int]:
    valid = set(sector_charges(N))
    chosen = cfg.sectors if cfg.sectors is not None else default
    bad = [n for n in chosen if n not in valid]
    if cfg.sectors is not None and bad:
        raise ConfigError(f"sectors {bad} impossible for N = {N}")
    return [n for n in chosen if n in valid]


# --------------------------------------------------------------------------
# suites: each returns a list of zero-argument tasks; sampling happens here, in order


def suite_tq_explicit(cfg: RunConfig, S: Sampler) -> list[Task]:
    tasks: list[Task] = []
    tol = cfg.tolerance("tq_explicit")
    neg = cfg.tolerance("negative_control")
    if cfg.order is not None and not cfg.root_of_unity:
        raise ConfigError("order requires root_of_unity = true")
    for N in _n_list(cfg, (2, 4, 6, 8, 10)):
        for d in range(_draws(cfg, 10)):
            if cfg.params is not None:
                bp = _explicit_baxter(cfg)
            elif cfg.order is not None:
                bp = S.baxter(N, eta=S.root_of_unity_eta(cfg.order), allow_root_of_unity=True, label=f"N={N}#{d}")
            else:
                bp = S.baxter(N, label=f"N={N}#{d}", allow_root_of_unity=cfg.root_of_unity)
            for n in _sectors_for(cfg, N, [0] if N % 2 == 0 else [1]):
                at_root = abs(bp.q**n - 1) < 1e-9
                expect_fail = not at_root
                tasks.append(
                    lambda N=N, bp=bp, n=n, ef=expect_fail, d=d: _tol(
                        check_tq_explicit(N, bp, n, allow_root_of_unity=True),
                        neg if ef else tol,
                        ef,
                        f"tq_explicit[N={N},n={n}]#{d}",
                    )
                )
        if cfg.order is not None and cfg.negative_controls and cfg.params is None:
            # same sectors at generic q
            bp = S.baxter(N, label=f"N={N}#control")
            for n in _sectors_for(cfg, N, [0]):
                if n != 0:
                    tasks.append(
                        lambda N=N, bp=bp, n=n: _tol(check_tq_explicit(N, bp, n), neg, True, f"tq_explicit[N={N},n={n}]#generic-q")
                    )
    return tasks


def suite_tq_generic(cfg: RunConfig, S: Sampler) -> list[Task]:
    tasks: list[Task] = []
    tol = cfg.tolerance("tq_generic")
    orders = _opt(cfg, "root_of_unity_orders", [3, 4])
    for N in _n_list(cfg, (2, 3)):
        plan = [(f"#{d}", None) for d in range(_draws(cfg, 5))]
        if cfg.params is None:
            for k in orders:
                plan.append((f"#q^{k}=1", k))
        for tag, k in plan:
            if cfg.params is not None:
                q, p, w = _explicit_borel(cfg)
            elif k is None:
                q, p, w = S.borel_chain(N, label=f"N={N}{tag}")
            else:
                eta = S.root_of_unity_eta(k)
                q, p, w = S.borel_chain(N, label=f"N={N}{tag}", q=complex(np.exp(2j * eta)))
            ws = _opt(cfg, "inhomogeneous", False)
            chain = ChainSpec(N, tuple(w * (1 + 0.1 * i) for i in range(N)) if ws else (w,) * N, q)
            tasks.append(lambda chain=chain, p=p, tag=tag: _tol(check_tq_generic(chain, p), tol, name=f"tq_generic[N={chain.N}]{tag}"))
    return tasks


def suite_commute(cfg: RunConfig, S: Sampler) -> list[Task]:
    tasks: list[Task] = []
    tq, tqq, neg = cfg.tolerance("commutator_qt"), cfg.tolerance("commutator_qq"), cfg.tolerance("negative_control")
    draws = _draws(cfg, 3)
    for N in _n_list(cfg, (2, 4, 6, 8, 10)):
        # away from q^n = 1 only the n = 0 block commutes, and odd N has none
        sectors = _sectors_for(cfg, N, [0])
        if not sectors:
            continue
        for d in range(draws):
            bp = _explicit_baxter(cfg) if cfg.params is not None else S.baxter(N, label=f"QT N={N}#{d}")
            zp = S.scalar()
            tasks.append(
                lambda N=N, bp=bp, zp=zp, sectors=sectors, d=d: _tol(
                    commutator_norms(q_explicit(N, bp, sectors), transfer_matrix(ChainSpec.homogeneous(N, 1.0, bp.q), zp, sectors)),
                    tq,
                    name=f"[Q~,T] N={N} n={sectors}#{d}",
                )
            )
    if cfg.params is None:
        for N, n, k in _opt(cfg, "root_sectors", [[5, 3, 3], [5, -3, 3], [6, 4, 4], [6, -4, 4]]):
            bp = S.baxter(N, eta=S.root_of_unity_eta(k), allow_root_of_unity=True, label=f"QT N={N} n={n}")
            zp = S.scalar()
            tasks.append(
                lambda N=N, n=n, bp=bp, zp=zp: _tol(
                    commutator_norms(q_explicit(N, bp, [n]), transfer_matrix(ChainSpec.homogeneous(N, 1.0, bp.q), zp, [n])),
                    tq,
                    name=f"[Q~,T] N={N} n={n} q^{n}=1",
                )
            )
        for N in [x for x in _n_list(cfg, range(1, 9)) if x <= 8]:
            bp = S.baxter(N, label=f"QQ N={N}")
            bp2 = BaxterParams(bp.eta, S.angle(-1.5, 1.5), S.scalar())
            tasks.append(lambda N=N, bp=bp, bp2=bp2: _tol(commutator_norms(q_explicit(N, bp), q_explicit(N, bp2)), tqq, name=f"[Q~,Q~'] N={N}"))
        if cfg.negative_controls:
            q, p, w = S.borel_chain(2, label="generic-s pair")
            p2 = S.borel(q, label="generic-s partner")
            chain = ChainSpec.homogeneous(2, w, q)
            tasks.append(
                lambda chain=chain, p=p, p2=p2: _tol(
                    commutator_norms(q_generic(chain, p), q_generic(chain, p2)), neg, True, "[Q,Q'] generic s, N=2"
                )
            )
    return tasks


def suite_wedge(cfg: RunConfig, S: Sampler) -> list[Task]:
    tol = cfg.tolerance("wedge")
    families = _opt(cfg, "families", ["nested", "noncrossing"])
    return [
        lambda N=N, fam=fam: _tol(wedge_identity_check(N, fam), tol)
        for fam in families
        for N in _n_list(cfg, range(1, 7))
    ]


def suite_fusion(cfg: RunConfig, S: Sampler) -> list[Task]:
    tasks: list[Task] = []
    tol, neg = cfg.tolerance("fusion"), cfg.tolerance("negative_control")
    for N in _n_list(cfg, (1, 2, 3, 4)):
        for d in range(_draws(cfg, 3)):
            if cfg.params is not None:
                q, p, w = _explicit_borel(cfg, generic_s=False)
                z = p.z
            else:
                q, p, w = S.borel_chain(N, generic_s=False, label=f"N={N}#{d}")
                z = p.z
            ws = tuple(w * (1 + 0.15 * i) for i in range(N)) if _opt(cfg, "inhomogeneous", False) else (w,) * N
            chain = ChainSpec(N, ws, q)
            tasks.append(lambda chain=chain, z=z, d=d: _tol(fusion_fit(chain, z)[1], tol, name=f"fusion[N={chain.N}]#{d}"))
            # every N = 1 sector is 1x1, so any product fits there and the probe says nothing
            if cfg.negative_controls and d == 0 and N >= 2:
                tasks.append(
                    lambda chain=chain, z=z: _tol(fusion_fit(chain, z, shift=3)[1], neg, True, f"fusion[N={chain.N}] z q^3 product")
                )
    return tasks


def suite_prop22(cfg: RunConfig, S: Sampler) -> list[Task]:
    tasks: list[Task] = []
    tol = cfg.tolerance("prop22")
    jr = range(-6, 7)
    for d in range(_draws(cfg, 20)):
        if cfg.params is not None:
            q, p, _ = _explicit_borel(cfg)
        else:
            q = S.generic_q(4, label=f"#{d} q")
            p = S.borel(q, label=f"#{d}")
        for part in ("a", "b"):
            tasks.append(lambda p=p, q=q, part=part, d=d: _tol(check_prop22(p, q, part, jr), tol, name=f"prop22[{part}]#{d}"))
    return tasks


def suite_qosc(cfg: RunConfig, S: Sampler) -> list[Task]:
    tasks: list[Task] = []
    tol, tols = cfg.tolerance("qoscillator"), cfg.tolerance("serre")
    jr = range(-6, 7)
    for d in range(_draws(cfg, 10)):
        q = _param(cfg, "q") if cfg.params is not None else S.generic_q(4, label=f"#{d} q")
        z, s0, s = S.scalar(), S.scalar(), S.scalar()
        for branch, p in (("s1=0", BorelParams(z, s0, 0, s)), ("s2=0", BorelParams(z, s0, s, 0))):
            tasks.append(lambda p=p, q=q, b=branch, d=d: _tol(qoscillator_constant_check(p, q, jr, b), tol, name=f"qosc[{b}]#{d}"))
        pg = BorelParams(z, s0, S.scalar(), S.scalar())
        tasks.append(lambda p=pg, q=q, d=d: _tol(serre_family_check(p, q, jr), tols, name=f"serre#{d}"))
    return tasks


def suite_yang_baxter(cfg: RunConfig, S: Sampler) -> list[Task]:
    tol = cfg.tolerance("yang_baxter")
    tasks: list[Task] = []
    for d in range(_draws(cfg, 50)):
        if cfg.params is not None:
            q, z1, z2 = _param(cfg, "q"), _param(cfg, "z1"), _param(cfg, "z2")
        else:
            q = S.generic_q(3, label=f"#{d}", unit_circle=bool(d % 2))
            z1 = S.scalar()
            z2 = z1 if d % 10 == 0 else S.scalar()
        tasks.append(lambda q=q, z1=z1, z2=z2, d=d: _tol(yang_baxter_residual(z1, z2, q), tol, name=f"yang_baxter#{d}"))
    return tasks


def _perturbed(W: WOperatorSymbolic, eps: float) -> WOperatorSymbolic:
    entries = dict(W.entries)
    entries[(1, -1)] = entries[(1, -1)] + LaurentPoly({1: eps})
    return dataclasses.replace(W, entries=entries)


def suite_w_recursions(cfg: RunConfig, S: Sampler) -> list[Task]:
    tasks: list[Task] = []
    tol = cfg.tolerance("w_recursions")
    jr = range(-5, 6)
    n = _draws(cfg, 20)
    for d in range(n):
        generic = d < n - max(1, n // 4) or cfg.params is not None
        if cfg.params is not None:
            q, p, w = _explicit_borel(cfg)
        else:
            q, p, w = S.borel_chain(1, generic_s=generic, label=f"#{d}")
        tag = "" if generic else " s1=s2=0"
        tasks.append(lambda p=p, w=w, q=q, d=d, tag=tag: _tol(w_recursion_residual(w_closed_form(p, w, q), jr), tol, name=f"w_recursions#{d}{tag}"))
        tasks.append(lambda p=p, w=w, q=q, d=d, tag=tag: _tol(w_intertwining_residual(w_closed_form(p, w, q), jr), tol, name=f"w_intertwining#{d}{tag}"))
        # a 1e-3 perturbation must show up well above 1e-4
        if cfg.negative_controls and d == 0:
            tasks.append(
                lambda p=p, w=w, q=q: _tol(
                    w_recursion_residual(_perturbed(w_closed_form(p, w, q), 1e-3), jr), 1e-4, True, "w_recursions perturbed beta0"
                )
            )
    return tasks


def suite_sr_relations(cfg: RunConfig, S: Sampler) -> list[Task]:
    tol = cfg.tolerance("sr_relations")
    tasks: list[Task] = []
    for d in range(_draws(cfg, 10)):
        q, p, w = _explicit_borel(cfg) if cfg.params is not None else S.borel_chain(1, label=f"#{d}")
        tasks.append(lambda p=p, w=w, q=q, d=d: _tol(check_sr_relations(p, w, q, range(-5, 6)), tol, name=f"sr_relations#{d}"))
    return tasks


def suite_trace_additivity(cfg: RunConfig, S: Sampler) -> list[Task]:
    tol = cfg.tolerance("trace_additivity")
    tasks: list[Task] = []
    fixed = [("t1",), ("e1",), ("t1", "e1", "e0")]
    for d in range(_draws(cfg, 3)):
        if cfg.params is not None:
            q, z = _param(cfg, "q"), _param(cfg, "z")
        else:
            q, z = S.generic_q(4, label=f"#{d} q"), S.scalar()
        words = list(_opt(cfg, "words", [])) or (random_words(S.rng, _opt(cfg, "word_count", 10)) + fixed)
        tasks.append(lambda q=q, z=z, words=words, d=d: _tol(trace_additivity_check(q, z, words), tol, name=f"trace_additivity#{d}"))
    return tasks


def suite_cross_oracle(cfg: RunConfig, S: Sampler) -> list[Task]:
    tasks: list[Task] = []
    tol, tolb = cfg.tolerance("cross_oracle"), cfg.tolerance("baxter_identification")
    for d in range(_draws(cfg, 3)):
        for N in [x for x in _n_list(cfg, range(1, 6)) if x <= 5]:
            bp = _explicit_baxter(cfg) if cfg.params is not None else S.baxter(N, label=f"cross N={N}#{d}")
            tasks.append(lambda N=N, bp=bp, d=d: _tol(cross_oracle_check(N, bp), tol, name=f"cross_oracle[N={N}]#{d}"))
        for N in [x for x in _n_list(cfg, range(1, 7)) if x <= 6]:
            bp = _explicit_baxter(cfg) if cfg.params is not None else S.baxter(N, label=f"ident N={N}#{d}")
            tasks.append(lambda N=N, bp=bp, d=d: _tol(baxter_identification_check(N, bp), tolb, name=f"baxter_identification[N={N}]#{d}"))
    return tasks


SUITES: dict[str, Callable[[RunConfig, Sampler], list[Task]]] = {
    "tq-explicit": suite_tq_explicit,
    "tq-generic": suite_tq_generic,
    "commute": suite_commute,
    "wedge": suite_wedge,
    "fusion": suite_fusion,
    "prop22": suite_prop22,
    "qosc": suite_qosc,
    "yang-baxter": suite_yang_baxter,
    "w-recursions": suite_w_recursions,
    "sr-relations": suite_sr_relations,
    "trace-additivity": suite_trace_additivity,
    "cross-oracle": suite_cross_oracle,
}
assert tuple(SUITES) == SUITE_NAMES


def run_suite(cfg: RunConfig, timings: bool = False, threads: int | None = None) -> SuiteReport:
    """Sample every draw up front (in order), then evaluate the checks, possibly in parallel."""
    if cfg.suite not in SUITES:
        raise ConfigError(f"unknown suite {cfg.suite!r}; choose from {', '.join(SUITE_NAMES)}")
    sampler = Sampler(cfg.seed)
    t0 = time.perf_counter()
    tasks = SUITES[cfg.suite](cfg, sampler)
    t1 = time.perf_counter()
    workers = threads if threads is not None else thread_count()
    if workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
            checks = list(pool.map(lambda t: t(), tasks))
    else:
        checks = [t() for t in tasks]
    t2 = time.perf_counter()
    return SuiteReport(
        cfg.suite,
        cfg.echo(),
        checks,
        sampler.log,
        {"sampling_s": t1 - t0, "checks_s": t2 - t1} if timings else None,
    )
