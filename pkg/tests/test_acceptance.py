"""Top-level acceptance criteria, each run at its stated tolerance.

Every test prints one ``PASS``/``FAIL`` line; the lines are also collected
into the terminal summary.
"""
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from qoplab.harness.sampling import Sampler
from qoplab.intertwine import (
    BaxterParams,
    check_sr_relations,
    phi_coeffs,
    w_closed_form,
    w_recursion_residual,
    yang_baxter_residual,
)
from qoplab.qtransfer import (
    ChainSpec,
    baxter_identification_check,
    check_tq_explicit,
    check_tq_generic,
    commutator_norms,
    cross_oracle_check,
    fusion_fit,
    q_explicit,
    q_generic,
    random_words,
    trace_additivity_check,
    transfer_matrix,
    wedge_identity_check,
)
from qoplab.repmod import BorelParams, check_prop22, qoscillator_constant_check, serre_family_check


def report(num: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  criterion {num:2d}  {title}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_criterion_01_tq_explicit_n0():
    S = Sampler(101)
    start = time.perf_counter()
    worst, count = 0.0, 0
    for N in (2, 4, 6, 8, 10):
        for d in range(10):
            r = check_tq_explicit(N, S.baxter(N, label=f"N={N}#{d}"), 0)
            worst = max(worst, r.residual)
            count += 1
    elapsed = time.perf_counter() - start
    report(1, "T-Q explicit, n = 0", worst < 1e-9 and elapsed < 60, f"{count} draws, max residual {worst:.2e} (< 1e-9), {elapsed:.1f} s (< 60 s)")


def test_criterion_02_root_of_unity_blocks():
    S = Sampler(102)
    worst, control = 0.0, np.inf
    for N, n, order in ((5, 3, 3), (5, -3, 3), (6, 4, 4), (6, -4, 4)):
        bp = S.baxter(N, eta=S.root_of_unity_eta(order), allow_root_of_unity=True)
        assert abs(bp.q**n - 1) < 1e-12
        worst = max(worst, check_tq_explicit(N, bp, n, allow_root_of_unity=True).residual)
        generic = S.baxter(N)
        control = min(control, check_tq_explicit(N, generic, n).residual)
    report(
        2,
        "root-of-unity T-Q blocks",
        worst < 1e-9 and control >= 1e-3,
        f"max residual {worst:.2e} (< 1e-9); generic-q control min residual {control:.2e} (>= 1e-3)",
    )


def test_criterion_03_tq_generic():
    S = Sampler(103)
    worst, orders = 0.0, {"QT": 0.0, "TQ": 0.0}
    for N in (2, 3):
        for d in range(5):
            q, p, w = S.borel_chain(N, label=f"N={N}#{d}")
            r = check_tq_generic(ChainSpec.homogeneous(N, w, q), p, tolerance=1e-9)
            worst = max(worst, r.residual)
            for k in orders:
                orders[k] = max(orders[k], r.details["orders"][k])
    report(
        3,
        "generic-s T-Q, coefficient-wise",
        worst < 1e-9,
        f"N = 2, 3 x 5 draws, max residual {worst:.2e} (QT {orders['QT']:.1e}, TQ {orders['TQ']:.1e}; < 1e-9)",
    )


def test_criterion_04_commutators():
    S = Sampler(104)
    qt = 0.0
    for N in (2, 4, 6, 8, 10):
        for _ in range(3):
            bp = S.baxter(N)
            T = transfer_matrix(ChainSpec.homogeneous(N, 1.0, bp.q), S.scalar(), [0])
            qt = max(qt, commutator_norms(q_explicit(N, bp, [0]), T).residual)
    for N, n, order in ((5, 3, 3), (5, -3, 3), (6, 4, 4), (6, -4, 4)):
        bp = S.baxter(N, eta=S.root_of_unity_eta(order), allow_root_of_unity=True)
        T = transfer_matrix(ChainSpec.homogeneous(N, 1.0, bp.q), S.scalar(), [n])
        qt = max(qt, commutator_norms(q_explicit(N, bp, [n]), T).residual)
    qq = 0.0
    for N in range(1, 9):
        bp = S.baxter(N)
        bp2 = BaxterParams(bp.eta, S.angle(-1.5, 1.5), S.scalar())
        qq = max(qq, commutator_norms(q_explicit(N, bp), q_explicit(N, bp2)).residual)
    q, p, w = S.borel_chain(2)
    p2 = S.borel(q)
    chain = ChainSpec.homogeneous(2, w, q)
    neg = commutator_norms(q_generic(chain, p), q_generic(chain, p2)).residual
    report(
        4,
        "commutators",
        qt < 1e-9 and qq < 1e-10 and neg >= 1e-3,
        f"[Q~,T] {qt:.2e} (< 1e-9); [Q~,Q~'] {qq:.2e} (< 1e-10); generic-s [Q,Q'] {neg:.2e} (>= 1e-3)",
    )


def test_criterion_05_baxter_identification():
    S = Sampler(105)
    worst = max(baxter_identification_check(N, S.baxter(N)).residual for N in range(1, 7) for _ in range(3))
    report(5, "Baxter identification", worst < 1e-12, f"N = 1..6, all sectors, max residual {worst:.2e} (< 1e-12)")


def test_criterion_06_cross_oracle():
    S = Sampler(106)
    worst, off = 0.0, 0.0
    exact_support = True
    for N in range(1, 6):
        for _ in range(3):
            bp = S.baxter(N)
            r = cross_oracle_check(N, bp)
            worst = max(worst, r.details["stripped"])
            off = max(off, r.details["off_support"])
            G = q_generic(ChainSpec.homogeneous(N, 1.0, bp.q), bp.borel(1.0))
            exact_support &= all(G.block(n).support(rtol=0) == (n,) for n in G.sectors)
    report(
        6,
        "trace vs closed form",
        worst < 1e-10 and exact_support,
        f"N = 1..5, stripped residual {worst:.2e} (< 1e-10); delta support exactly {{n}}: {exact_support} (off-support mass {off:.1e})",
    )


def test_criterion_07_intertwiner_layer():
    S = Sampler(107)
    yb = 0.0
    for d in range(50):
        q = S.generic_q(3, unit_circle=bool(d % 2))
        yb = max(yb, yang_baxter_residual(S.scalar(), S.scalar(), q).residual)
    rec = 0.0
    for d in range(20):
        q, p, w = S.borel_chain(1, generic_s=d < 15)
        rec = max(rec, w_recursion_residual(w_closed_form(p, w, q), range(-5, 6)).residual)
    sr, phi_err = 0.0, 0.0
    for _ in range(10):
        q, p, w = S.borel_chain(1)
        r = check_sr_relations(p, w, q, range(-5, 6))
        rel = r.details["relations"]
        sr = max(sr, rel["sr1"], rel["sr2"], rel["sr3"], rel["sr4"])
        phi_err = max(phi_err, rel["phi1"], rel["phi2"])
        # closed-form phi values, evaluated independently
        z = p.z
        phi1, phi2 = (w - z) / (w - q * q * z), q
        ph = phi_coeffs(p, w, q)
        phi_err = max(phi_err, abs(ph.phi1 - phi1) / (1 + abs(phi1)), abs(ph.phi2 - phi2) / (1 + abs(phi2)))
    report(
        7,
        "intertwiner layer",
        yb < 1e-12 and rec < 1e-10 and sr < 1e-10 and phi_err < 1e-10,
        f"YB {yb:.2e} (< 1e-12); W recursions {rec:.2e} (< 1e-10); sr1-sr4 {sr:.2e} (< 1e-10); phi {phi_err:.2e} (< 1e-10)",
    )


def test_criterion_08_representation_layer():
    S = Sampler(108)
    jr = range(-6, 7)
    p22 = 0.0
    for _ in range(20):
        q = S.generic_q(4)
        p = S.borel(q)
        p22 = max(p22, check_prop22(p, q, "a", jr).residual, check_prop22(p, q, "b", jr).residual)
    osc, serre = 0.0, 0.0
    for _ in range(10):
        q = S.generic_q(4)
        z, s0, s = S.scalar(), S.scalar(), S.scalar()
        osc = max(
            osc,
            qoscillator_constant_check(BorelParams(z, s0, 0, s), q, jr, "s1=0").residual,
            qoscillator_constant_check(BorelParams(z, s0, s, 0), q, jr, "s2=0").residual,
        )
        serre = max(serre, serre_family_check(BorelParams(z, s0, S.scalar(), S.scalar()), q, jr).residual)
    report(
        8,
        "representation layer",
        p22 < 1e-10 and osc < 1e-12 and serre < 1e-12,
        f"submodule relations {p22:.2e} (< 1e-10); q-oscillator {osc:.2e} (< 1e-12); Serre {serre:.2e} (< 1e-12)",
    )


def test_criterion_09_wedge_and_trace_identities():
    wedge_zero, reachable, failing = True, True, []
    for N in range(1, 7):
        r = wedge_identity_check(N, "nested")
        wedge_zero &= r.details["max_abs_wedge"] == 0
        if r.details["unreachable_pairs"]:
            reachable = False
            failing.append(N)
    S = Sampler(109)
    tr = max(trace_additivity_check(S.generic_q(4), S.scalar(), random_words(S.rng, 10)).residual for _ in range(3))
    detail = f"wedge exactly 0 on nested products: {wedge_zero}; trace additivity {tr:.2e} (< 1e-10)"
    if not reachable:
        detail += f"; nested-product reachability fails for N = {failing}"
    report(9, "wedge and trace identities", wedge_zero and reachable and tr < 1e-10, detail)


def test_criterion_10_fusion():
    S = Sampler(110)
    fit, agree, literal = 0.0, 0.0, np.inf
    for N in range(1, 5):
        for _ in range(3):
            q, p, w = S.borel_chain(N, generic_s=False)
            chain = ChainSpec.homogeneous(N, w, q)
            _, r = fusion_fit(chain, p.z)
            fit = max(fit, r.details["fit"], r.details["fit_reversed"])
            agree = max(agree, r.details["scalar_agreement"])
            if N >= 2:
                literal = min(literal, fusion_fit(chain, p.z, shift=3)[1].residual)
    report(
        10,
        "fusion at n = 1",
        fit < 1e-8 and agree < 1e-8,
        f"N = 1..4, product T(zq^2)T(z): fit {fit:.2e} (< 1e-8), ordering agreement {agree:.2e} (< 1e-8); "
        f"T(zq^3)T(z) does not fit (min residual {literal:.2e})",
    )


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
