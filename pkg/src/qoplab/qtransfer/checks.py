"""Functional relations, commutators and cross-oracles for the lattice operators."""
from __future__ import annotations

import numpy as np

from ..errors import DegenerateIntertwiner, ParameterError
from ..intertwine import BaxterParams, phi_coeffs
from ..laurent import delta_compare, delta_reduce
from ..repmod import BorelParams
from ..report import ResidualReport
from .operators import baxter_rho_power, fused_transfer, q_explicit, q_explicit_form, q_generic, transfer_matrix
from .types import ChainSpec, DeltaBlock, SectorOperator, guard_q


def _rel(lhs: np.ndarray, rhs: np.ndarray) -> float:
    return float(np.max(np.abs(lhs - rhs), initial=0.0) / (1 + np.max(np.abs(rhs), initial=0.0)))


def check_tq_explicit(
    N: int,
    params: BaxterParams,
    sector: int = 0,
    w: complex = 1.0,
    allow_root_of_unity: bool = False,
    tolerance: float = 1e-9,
    expect_fail: bool = False,
) -> ResidualReport:
    """``T(z) Q~ - phi1**N Q~(v - 2eta, q s0) - phi2**N Q~(v + 2eta, s0/q)`` in one sector, both orders."""
    q = params.q
    guard_q(q, N, allow_root_of_unity)
    w = complex(w)
    z = w * params.z_over_w
    phi = phi_coeffs(params, w, scheme="baxter")
    chain = ChainSpec.homogeneous(N, w, q)
    T = transfer_matrix(chain, z, [sector]).block(sector)
    Q = q_explicit(N, params, [sector]).block(sector)
    Qp = q_explicit(N, params.shifted(1), [sector]).block(sector)
    Qm = q_explicit(N, params.shifted(-1), [sector]).block(sector)
    rhs = phi.phi1**N * Qp + phi.phi2**N * Qm
    r_tq, r_qt = _rel(T @ Q, rhs), _rel(Q @ T, rhs)
    return ResidualReport(
        f"tq_explicit[N={N},n={sector}]",
        max(r_tq, r_qt),
        tolerance,
        expect_fail,
        details={"TQ": r_tq, "QT": r_qt, "q_pow_n_is_1": bool(abs(q**sector - 1) < 1e-9)},
    )


def check_tq_generic(
    chain: ChainSpec,
    params: BorelParams,
    tolerance: float = 1e-9,
    atol_unity: float = 1e-9,
) -> ResidualReport:
    """T-Q relation for the delta-valued Q with unit normalization, both orders.

    Entries are compared coefficient-wise with :func:`delta_compare` after
    :func:`delta_reduce`, i.e. modulo ``(q**k - 1) delta(q**k) = 0``.  What
    remains is independent of the value given to ``delta(q**0)``.  The
    comparison before reduction is reported as ``unreduced`` in the details.
    """
    if chain.N > 4:
        raise ParameterError("generic-s T-Q check is limited to N <= 4")
    q = chain.q
    z = params.z
    T = transfer_matrix(chain, z)
    Q = q_generic(chain, params)
    Qp = q_generic(chain, params.shifted(1, q))
    Qm = q_generic(chain, params.shifted(-1, q))
    c1 = c2 = 1.0 + 0j
    for w in chain.w:
        phi = phi_coeffs(params, w, q)
        c1 *= phi.phi1
        c2 *= phi.phi2
    worst = {"QT": 0.0, "TQ": 0.0}
    unreduced = {"QT": 0.0, "TQ": 0.0}
    for n in Q.sectors:
        rhs = DeltaBlock.combine((c1, Qp.block(n)), (c2, Qm.block(n)))
        for label, lhs in (("QT", Q.block(n).right(T.block(n))), ("TQ", Q.block(n).left(T.block(n)))):
            D = lhs.dim
            for a in range(D):
                for b in range(D):
                    L, R = lhs.entry(a, b), rhs.entry(a, b)
                    red = delta_compare(delta_reduce(L, q, atol_unity), delta_reduce(R, q, atol_unity), tolerance)
                    raw = delta_compare(L, R, tolerance)
                    worst[label] = max(worst[label], red.residual)
                    unreduced[label] = max(unreduced[label], raw.residual)
    return ResidualReport(
        f"tq_generic[N={chain.N}]",
        max(worst.values()),
        tolerance,
        details={"orders": worst, "unreduced": unreduced},
    )


# --------------------------------------------------------------------------


def _bi_delta_product(A, B) -> dict[tuple[int, int], np.ndarray]:
    """Formal product: ``delta(q**k) delta(q**l)`` keyed by the sorted pair ``(k, l)``."""
    out: dict[tuple[int, int], np.ndarray] = {}
    for i, k in enumerate(A.exponents()):
        Ak = A.coeffs[i]
        if not Ak.any():
            continue
        for j, l in enumerate(B.exponents()):
            Bl = B.coeffs[j]
            if not Bl.any():
                continue
            key = (min(k, l), max(k, l))
            prod = Ak @ Bl
            out[key] = out.get(key, 0) + prod
    return out


def commutator_norms(A: SectorOperator, B: SectorOperator, tolerance: float = 1e-10, expect_fail: bool = False) -> ResidualReport:
    """Per-sector ``max|AB - BA| / (1 + max|AB|)``.

    Delta-valued factors are multiplied formally: a scalar factor multiplies
    every delta coefficient, two delta factors give bi-delta symbols.
    """
    if A.N != B.N:
        raise ParameterError("operators act on chains of different length")
    common = sorted(set(A.blocks) & set(B.blocks))
    if not common:
        raise ParameterError("no common sectors")
    per_sector = {}
    for n in common:
        a, b = A.blocks[n], B.blocks[n]
        if A.kind == "scalar" and B.kind == "scalar":
            if a.shape != b.shape:
                raise ParameterError("shape mismatch")
            ab, ba = a @ b, b @ a
            per_sector[n] = float(np.max(np.abs(ab - ba)) / (1 + np.max(np.abs(ab))))
        elif A.kind == "delta" and B.kind == "delta":
            P1, P2 = _bi_delta_product(a, b), _bi_delta_product(b, a)
            keys = set(P1) | set(P2)
            D = a.dim
            z = np.zeros((D, D), complex)
            diff = max(float(np.max(np.abs(P1.get(k, z) - P2.get(k, z)))) for k in keys)
            scale = max(float(np.max(np.abs(P1.get(k, z)))) for k in keys)
            per_sector[n] = diff / (1 + scale)
        else:
            d, s = (a, b) if A.kind == "delta" else (b, a)
            ab = d.right(s).coeffs if A.kind == "delta" else d.left(s).coeffs
            ba = d.left(s).coeffs if A.kind == "delta" else d.right(s).coeffs
            per_sector[n] = float(np.max(np.abs(ab - ba)) / (1 + np.max(np.abs(ab))))
    return ResidualReport(
        "commutator",
        max(per_sector.values()),
        tolerance,
        expect_fail,
        details={"sectors": {str(k): v for k, v in per_sector.items()}},
    )


# --------------------------------------------------------------------------


def cross_oracle_check(N: int, params: BaxterParams, tolerance: float = 1e-10) -> ResidualReport:
    """Delta-stripped trace over ``M(z, s0, 0, 0)`` against the explicit matrix, every sector.

    The unit-scheme trace differs from the baxter-scheme one by ``rho**N``;
    both are compared.  Delta support must be exactly ``{n}`` in sector ``n``.
    """
    q = params.q
    chain = ChainSpec.homogeneous(N, 1.0, q)
    G = q_generic(chain, params, scheme="baxter")
    U = q_generic(chain, params.borel(1.0), scheme="unit")
    E = q_explicit(N, params)
    rN = baxter_rho_power(N, params)
    res = off_support = 0.0
    for n in E.sectors:
        res = max(res, _rel(G.block(n).coefficient(n), E.block(n)))
        res = max(res, _rel(rN * U.block(n).coefficient(n), E.block(n)))
        for blk in (G.block(n), U.block(n)):
            others = [k for k in blk.exponents() if k != n]
            mass = max((np.max(np.abs(blk.coefficient(k))) for k in others), default=0.0)
            off_support = max(off_support, float(mass / (1 + np.max(np.abs(blk.coefficient(n))))))
    return ResidualReport(
        f"cross_oracle[N={N}]",
        max(res, off_support),
        tolerance,
        details={"stripped": res, "off_support": off_support},
    )


def baxter_identification_check(N: int, params: BaxterParams, tolerance: float = 1e-12) -> ResidualReport:
    """Explicit trace of the symmetric entries against ``s0**(-n/2) Q_Bax``, every sector."""
    A = q_explicit_form(N, params)
    B = q_explicit(N, params)
    res = max(_rel(A.block(n), B.block(n)) for n in A.sectors)
    return ResidualReport(f"baxter_identification[N={N}]", res, tolerance)


# --------------------------------------------------------------------------
# fusion


def _two_scalar_fit(M: SectorOperator, T2: SectorOperator):
    rows, rhs = [], []
    for n in M.sectors:
        D = M.block(n).shape[0]
        rows.append(np.stack([np.eye(D).ravel(), T2.block(n).ravel()], axis=1))
        rhs.append(M.block(n).ravel())
    A = np.concatenate(rows)
    y = np.concatenate(rhs)
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[0] == 0:
        raise DegenerateIntertwiner("fusion fit matrix vanishes (degenerate parameters)")
    # at N = 1 both sides are scalar per sector and the two columns can be proportional;
    # the minimum-norm fit is used then and the rank is reported
    rank = int(np.sum(sv > 1e-10 * sv[0]))
    coef, *_ = np.linalg.lstsq(A, y, rcond=1e-10)
    resid = float(np.max(np.abs(A @ coef - y)) / (1 + np.max(np.abs(y))))
    return coef, resid, rank


def fusion_fit(chain: ChainSpec, z: complex, shift: int = 2, tolerance: float = 1e-8) -> tuple[dict, ResidualReport]:
    """Fit ``T(z q**shift) T(z) = a I + b T(2)(z q)`` and the reversed order.

    With the entrywise normalization used here the product at ``shift = 2``
    is exactly such a combination; other shifts serve as negative probes.
    """
    if chain.N > 4:
        raise ParameterError("fusion fit is limited to N <= 4")
    q = chain.q
    z = complex(z)
    z_hi = z * q**shift
    T_hi, T_lo = transfer_matrix(chain, z_hi), transfer_matrix(chain, z)
    T2 = fused_transfer(2, chain, z * q)
    c1, r1, rank = _two_scalar_fit(T_hi @ T_lo, T2)
    c2, r2, _ = _two_scalar_fit(T_lo @ T_hi, T2)
    agree = float(np.max(np.abs(c1 - c2)) / (1 + np.max(np.abs(c1))))
    scalars = {"a": complex(c1[0]), "b": complex(c1[1]), "a_reversed": complex(c2[0]), "b_reversed": complex(c2[1])}
    rep = ResidualReport(
        f"fusion[N={chain.N},shift={shift}]",
        max(r1, r2, agree),
        tolerance,
        details={"fit": r1, "fit_reversed": r2, "scalar_agreement": agree, "fit_rank": rank},
    )
    return scalars, rep
