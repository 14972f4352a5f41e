"""Vectorized numpy implementations of the sector kernels.

Both kernels work on one charge sector at a time.  Spin configurations are
passed as integer index arrays (``0`` for ``+``, ``1`` for ``-``) of shape
``(D, N)``.
"""
from __future__ import annotations

import numpy as np

SITE_KMIN = -3
SITE_WIDTH = 7


def sector_traces(L: np.ndarray, alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """``out[a, b] = Tr(L[N-1, alpha[a,N-1], beta[b,N-1]] ... L[0, alpha[a,0], beta[b,0]])``.

    ``L`` has shape ``(N, 2, 2, d, d)``; site 0 acts first (rightmost).
    """
    L = np.asarray(L, dtype=complex)
    alpha = np.asarray(alpha, dtype=np.intp)
    beta = np.asarray(beta, dtype=np.intp)
    N, d = L.shape[0], L.shape[-1]
    Da, Db = alpha.shape[0], beta.shape[0]
    P = np.broadcast_to(np.eye(d, dtype=complex), (Da, Db, d, d)).copy()
    for i in range(N):
        Li = L[i][alpha[:, i][:, None], beta[:, i][None, :]]  # (Da, Db, d, d)
        P = Li @ P
    return np.trace(P, axis1=2, axis2=3)


def laurent_chain(site_polys: np.ndarray, q: complex, alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """Dense coefficients of ``prod_i lp_shift(W_i[beta_i -> alpha_i], c_i)``.

    ``site_polys[i, b, a, k + 3]`` is the coefficient of ``u**k`` for the
    transition ``b -> a`` at site ``i`` with ``-3 <= k <= 3``; ``c_i`` is the
    prefix charge offset ``sum_{m<i} (alpha_m - beta_m) / 2`` in spin units.
    Returns shape ``(Da, Db, 6N + 1)`` with exponent ``k`` stored at
    ``k + 3N``.
    """
    site_polys = np.asarray(site_polys, dtype=complex)
    alpha = np.asarray(alpha, dtype=np.intp)
    beta = np.asarray(beta, dtype=np.intp)
    N = site_polys.shape[0]
    Da, Db = alpha.shape[0], beta.shape[0]
    K = 6 * N + 1
    out = np.zeros((Da, Db, K), complex)
    out[:, :, 3 * N] = 1.0
    ks = np.arange(SITE_KMIN, SITE_KMIN + SITE_WIDTH)
    # spins: index 0 -> +1, index 1 -> -1, so (alpha - beta)/2 = beta_idx - alpha_idx
    c = np.zeros((Da, Db), dtype=np.intp)
    for i in range(N):
        ai = alpha[:, i][:, None]
        bi = beta[:, i][None, :]
        poly = site_polys[i][bi, ai]  # (Da, Db, 7)
        poly = poly * complex(q) ** (c[:, :, None] * ks[None, None, :])
        new = np.zeros_like(out)
        for m in range(SITE_WIDTH):
            km = ks[m]
            col = poly[:, :, m : m + 1]
            if km >= 0:
                new[:, :, km:] += out[:, :, : K - km] * col
            else:
                new[:, :, : K + km] += out[:, :, -km:] * col
        out = new
        c = c + (bi - ai)
    return out
