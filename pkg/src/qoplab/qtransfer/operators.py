"""Transfer matrices and Q-operators, assembled sector by sector."""
from __future__ import annotations

import cmath
from collections.abc import Sequence

import numpy as np

from .. import kernels
from ..errors import ParameterError, PoleError
from ..intertwine import BaxterParams, WOperatorSymbolic, rbar, rho_baxter, solve_intertwiner, w_closed_form
from ..repmod import BorelParams, EvalModuleSpec
from .types import ChainSpec, DeltaBlock, SectorOperator, all_sectors, sector_indices, sector_spins


def _site_tensors(mats: Sequence[np.ndarray], d: int) -> np.ndarray:
    """``L[i, alpha, beta, a', a] = X_i[2 a' + alpha, 2 a + beta]`` for aux dimension ``d``."""
    N = len(mats)
    L = np.empty((N, 2, 2, d, d), complex)
    for i, X in enumerate(mats):
        L[i] = X.reshape(d, 2, d, 2).transpose(1, 3, 0, 2)
    return L


def _assemble(N: int, L: np.ndarray, sectors) -> SectorOperator:
    blocks = {}
    for n in all_sectors(N, sectors):
        idx = sector_indices(N, n)
        blocks[n] = kernels.sector_traces(L, idx, idx)
    return SectorOperator(N, "scalar", blocks)


def transfer_matrix(chain: ChainSpec, z: complex, sectors: Sequence[int] | None = None) -> SectorOperator:
    """``Tr_aux R(z/w_N) ... R(z/w_1)`` on the chosen charge sectors."""
    mats = []
    for i, w in enumerate(chain.w):
        try:
            mats.append(rbar(complex(z) / w, chain.q).matrix)
        except PoleError as exc:
            raise PoleError(f"site {i + 1}: {exc}") from None
    return _assemble(chain.N, _site_tensors(mats, 2), sectors)


def fused_transfer(n: int, chain: ChainSpec, z: complex, sectors: Sequence[int] | None = None) -> SectorOperator:
    """Trace over ``V(n)_z`` of solver-built ``R(n,1)(z, w_i)``; ``n = 0`` is the identity."""
    if n not in (0, 1, 2):
        raise ParameterError("fused transfer matrices are provided for n = 0, 1, 2")
    if n == 0:
        return SectorOperator(
            chain.N,
            "scalar",
            {m: np.eye(len(sector_spins(chain.N, m)), dtype=complex) for m in all_sectors(chain.N, sectors)},
        )
    mats = [solve_intertwiner(EvalModuleSpec(n, z), EvalModuleSpec(1, w), chain.q).matrix for w in chain.w]
    return _assemble(chain.N, _site_tensors(mats, n + 1), sectors)


# --------------------------------------------------------------------------
# Q from the trace over M(z, s)


def _site_polys(W: WOperatorSymbolic) -> np.ndarray:
    out = np.zeros((2, 2, 7), complex)
    for (beta, alpha), poly in W.entries.items():
        for k, c in poly.items():
            if not -3 <= k <= 3:
                raise ParameterError(f"entry exponent {k} outside the kernel window")
            out[(1 - beta) // 2, (1 - alpha) // 2, k + 3] = c
    return out


def q_generic(
    chain: ChainSpec,
    params: BorelParams | BaxterParams,
    scheme: str = "unit",
    sectors: Sequence[int] | None = None,
) -> SectorOperator:
    """``Tr_M W(z, s; w_N) ... W(z, s; w_1)`` with entries kept as delta series.

    With ``scheme="baxter"`` the chain must be homogeneous and ``params`` are
    taken in the ``(eta, v, s0)`` form; ``chain.w`` then fixes ``z``.
    """
    if scheme == "unit":
        Ws = [w_closed_form(params, w, chain.q) for w in chain.w]
    elif scheme == "baxter":
        if not chain.is_homogeneous:
            raise ParameterError("the baxter scheme needs a homogeneous chain")
        if abs(params.q - chain.q) > 1e-12 * (1 + abs(chain.q)):
            raise ParameterError("chain q differs from exp(2 i eta)")
        Ws = [w_closed_form(params, w, scheme="baxter") for w in chain.w]
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    polys = np.stack([_site_polys(W) for W in Ws])
    N = chain.N
    blocks = {}
    for n in all_sectors(N, sectors):
        idx = sector_indices(N, n)
        dense = kernels.laurent_chain(polys, chain.q, idx, idx)
        blocks[n] = DeltaBlock(np.ascontiguousarray(dense.transpose(2, 0, 1)), -3 * N)
    return SectorOperator(N, "delta", blocks)


# --------------------------------------------------------------------------
# explicit forms


def _wedge_matrix(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """``sum_{j<k} (a_j b_k - a_k b_j)`` for all row pairs."""
    N = A.shape[1]
    U = np.triu(np.ones((N, N)), 1)
    return A @ (U - U.T) @ B.T


def baxter_q(N: int, params: BaxterParams, sectors: Sequence[int] | None = None) -> SectorOperator:
    """``exp(i eta/2 sum_{j<k}(a_j b_k - a_k b_j) + i v/2 sum_j a_j b_j)`` per sector."""
    blocks = {}
    for n in all_sectors(N, sectors):
        S = sector_spins(N, n).astype(float)
        blocks[n] = np.exp(0.5j * params.eta * _wedge_matrix(S, S) + 0.5j * params.v * (S @ S.T))
    return SectorOperator(N, "scalar", blocks)


def q_explicit(N: int, params: BaxterParams, sectors: Sequence[int] | None = None) -> SectorOperator:
    """Stripped matrix ``s0**(-n/2) Q_Bax`` (branch of ``s0`` fixed by ``log_s0``)."""
    Qb = baxter_q(N, params, sectors)
    return SectorOperator(N, "scalar", {n: params.s0_power(-n / 2) * b for n, b in Qb.blocks.items()})


def q_explicit_form(
    N: int,
    params: BaxterParams,
    sectors: Sequence[int] | None = None,
    rho: complex | None = None,
) -> SectorOperator:
    """Closed trace of the symmetric-gauge entries before any identification.

    Entry ``(alpha, beta)`` of sector ``n`` is
    ``rho~**N (z/w)**(m/2) s0**(-n/2) q**(sum_i c_i beta_i)`` where ``m``
    counts flipped sites and ``c_i = sum_{k<i} (alpha_k - beta_k)/2``; the
    factor ``delta(q**n)`` is dropped.  ``(z/w)**(1/2) = exp(-i(v + eta))``.
    ``rho`` overrides ``rho~`` (default ``exp(i v / 2)``).
    """
    rt = params.rho_tilde if rho is None else complex(rho)
    half_ratio = cmath.exp(-1j * (params.v + params.eta))
    q = params.q
    blocks = {}
    for n in all_sectors(N, sectors):
        S = sector_spins(N, n)
        A = S[:, None, :]
        B = S[None, :, :]
        flips = np.sum(A != B, axis=2)
        diff = (A - B) // 2
        prefix = np.cumsum(diff, axis=2) - diff
        expo = np.sum(prefix * B, axis=2)
        blocks[n] = rt**N * params.s0_power(-n / 2) * half_ratio**flips * q**expo
    return SectorOperator(N, "scalar", blocks)


def baxter_rho_power(N: int, params: BaxterParams) -> complex:
    """``rho**N`` of the a0-gauge W equivalent to ``rho~ = exp(i v / 2)``."""
    return rho_baxter(params) ** N
