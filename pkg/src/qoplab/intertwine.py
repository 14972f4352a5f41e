"""R-matrices and intertwiners.

The normalized 6-vertex R-matrix acts on ``V(1)_z x V(1)_w`` in the basis
``v0v0, v0v1, v1v0, v1v1``; matrices act on column vectors.  The operator
``W(z, s; w)`` on ``M(z, s) x V(1)_w`` is stored symbolically: for every spin
transition ``beta -> alpha`` (spins ``+1 = v0``, ``-1 = v1``) the coefficient is
a Laurent polynomial in ``u = q**j`` of the *input* label ``j`` and the output
label is ``j + (alpha - beta) / 2``.
"""
from __future__ import annotations

import cmath
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateIntertwiner, ParameterError, PoleError
from .laurent import LaurentPoly, lp_mul
from .repmod import (
    BorelParams,
    EvalModuleSpec,
    _check_q,
    a_coeff,
    d_coeff,
    d_poly,
    eval_rep_action,
    tensor_action,
)
from .report import ResidualReport

SPINS = (1, -1)


def spin_index(s: int) -> int:
    """``+1 -> 0`` (v0), ``-1 -> 1`` (v1)."""
    return 0 if s == 1 else 1


# --------------------------------------------------------------------------
# normalized R-matrix


@dataclass(frozen=True)
class RMatrixValue:
    matrix: np.ndarray
    zeta: complex


def rbar(zeta: complex, q: complex) -> RMatrixValue:
    """Normalized R-matrix at ratio ``zeta = z / w``."""
    q = _check_q(q)
    zeta = complex(zeta)
    den = 1 - q * q * zeta
    if abs(den) < 1e-13:
        raise PoleError(f"R-matrix pole at zeta = q**-2 (zeta={zeta})")
    b = q * (1 - zeta) / den
    c = (1 - q * q) / den
    R = np.zeros((4, 4), complex)
    R[0, 0] = R[3, 3] = 1.0
    R[1, 1] = R[2, 2] = b
    R[2, 1] = zeta * c  # v0 v1 -> v1 v0
    R[1, 2] = c  # v1 v0 -> v0 v1
    return RMatrixValue(R, zeta)


def _embed(R: np.ndarray, pair: tuple[int, int]) -> np.ndarray:
    """Embed a two-site operator into the 8-dim triple product."""
    T = R.reshape(2, 2, 2, 2)  # out_a, out_b, in_a, in_b
    full = np.zeros((2,) * 6, complex)
    i, j = pair
    (k,) = {0, 1, 2} - {i, j}
    for idx in np.ndindex(2, 2, 2, 2, 2):
        oa, ob, ia, ib, spect = idx
        out = [0, 0, 0]
        inn = [0, 0, 0]
        out[i], out[j], out[k] = oa, ob, spect
        inn[i], inn[j], inn[k] = ia, ib, spect
        full[tuple(out) + tuple(inn)] += T[oa, ob, ia, ib]
    return full.reshape(8, 8)


def yang_baxter_residual(z1: complex, z2: complex, q: complex) -> ResidualReport:
    """``R12(z1/z2) R13(z1) R23(z2) - R23(z2) R13(z1) R12(z1/z2)``, max-abs relative."""
    R12 = _embed(rbar(z1 / z2, q).matrix, (0, 1))
    R13 = _embed(rbar(z1, q).matrix, (0, 2))
    R23 = _embed(rbar(z2, q).matrix, (1, 2))
    lhs = R12 @ R13 @ R23
    rhs = R23 @ R13 @ R12
    res = np.max(np.abs(lhs - rhs)) / (1 + np.max(np.abs(lhs)))
    return ResidualReport("yang_baxter", float(res), 1e-12)


# --------------------------------------------------------------------------
# the Baxter-scheme parametrization


@dataclass(frozen=True)
class BaxterParams:
    """``q = exp(2 i eta)``, ``w / (z q) = exp(2 i v)`` and ``s0 = exp(log_s0)``.

    ``log_s0`` fixes the branch of every power of ``s0``; shifts move it by
    ``+- 2 i eta`` so that ``s0 -> q**+-1 s0`` stays on the same branch.
    """

    eta: complex
    v: complex
    s0: complex = 1.0
    log_s0: complex | None = None

    def __post_init__(self):
        object.__setattr__(self, "s0", complex(self.s0))
        if self.s0 == 0:
            raise ParameterError("s0 must be nonzero")
        if self.log_s0 is None:
            object.__setattr__(self, "log_s0", cmath.log(self.s0))
        else:
            object.__setattr__(self, "log_s0", complex(self.log_s0))
            if abs(cmath.exp(self.log_s0) - self.s0) > 1e-12 * (1 + abs(self.s0)):
                raise ParameterError("log_s0 inconsistent with s0")
        for name in ("eta", "v"):
            x = complex(getattr(self, name))
            object.__setattr__(self, name, x.real if x.imag == 0 else x)

    @property
    def q(self) -> complex:
        return cmath.exp(2j * self.eta)

    @property
    def z_over_w(self) -> complex:
        return cmath.exp(-2j * self.v) / self.q

    def s0_power(self, p: float) -> complex:
        return cmath.exp(p * self.log_s0)

    @property
    def rho_tilde(self) -> complex:
        return cmath.exp(0.5j * self.v)

    def shifted(self, sign: int) -> "BaxterParams":
        """``z -> z q**(2 sign)``, ``s0 -> q**sign s0``: ``v -> v - 2 sign eta``."""
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        return BaxterParams(
            self.eta,
            self.v - 2 * sign * self.eta,
            self.s0 * self.q**sign,
            self.log_s0 + 2j * sign * self.eta,
        )

    def borel(self, w: complex = 1.0) -> BorelParams:
        return BorelParams(w * self.z_over_w, self.s0, 0, 0)


# --------------------------------------------------------------------------
# the W intertwiner on M(z, s) x V(1)_w


@dataclass(frozen=True)
class WOperatorSymbolic:
    """Transition table ``(beta, alpha) -> coefficient polynomial in u = q**j``.

    ``gauge`` is ``"a0"`` for the general-solution form (any constant rho) and
    ``"symmetric"`` for the form with balanced off-diagonal entries, which
    differs by a site-local gauge and gives the same closed traces.
    """

    params: BorelParams
    w: complex
    q: complex
    scheme: str
    gauge: str
    entries: dict[tuple[int, int], LaurentPoly] = field(repr=False)

    @staticmethod
    def shift(beta: int, alpha: int) -> int:
        return (alpha - beta) // 2

    def entry(self, beta: int, alpha: int) -> LaurentPoly:
        return self.entries[(beta, alpha)]

    def coefficient(self, j: int, beta: int, alpha: int) -> complex:
        return self.entries[(beta, alpha)].evaluate(self.q**j)

    # named accessors matching the (alpha, beta) x (0, 1) labelling
    def alpha0(self, j):
        return self.coefficient(j, 1, 1)

    def beta0(self, j):
        return self.coefficient(j, 1, -1)

    def alpha1(self, j):
        return self.coefficient(j, -1, -1)

    def beta1(self, j):
        return self.coefficient(j, -1, 1)

    def apply(self, vec: dict) -> dict:
        """Act on a local vector of ``M x V(1)_w`` keyed ``(j, a)``."""
        out: dict = {}
        for (j, a), c in vec.items():
            beta = SPINS[a]
            for alpha in SPINS:
                j2 = j + self.shift(beta, alpha)
                key = (j2, spin_index(alpha))
                out[key] = out.get(key, 0j) + c * self.coefficient(j, beta, alpha)
        return out


def w_closed_form(
    params: BorelParams | BaxterParams,
    w: complex,
    q: complex | None = None,
    scheme: str = "unit",
    rho: complex = 1.0,
) -> WOperatorSymbolic:
    """General solution of the intertwining equations with constant normalization ``rho``.

    ``scheme="baxter"`` takes :class:`BaxterParams` and fixes ``rho`` to the
    value equivalent to ``rho~ = exp(i v / 2)`` (``s1 = s2 = 0`` only).
    """
    if scheme == "baxter":
        if isinstance(params, BorelParams):
            if params.s1 != 0 or params.s2 != 0:
                raise ParameterError("baxter scheme requires s1 = s2 = 0")
            raise ParameterError("baxter scheme takes BaxterParams (eta, v, s0)")
        bp = params
        W = w_closed_form(bp.borel(w), w, bp.q, rho=rho_baxter(bp))
        return WOperatorSymbolic(W.params, W.w, W.q, "baxter", "a0", W.entries)
    if scheme != "unit":
        raise ValueError(f"unknown scheme {scheme!r}")
    if not isinstance(params, BorelParams):
        raise TypeError("unit scheme takes BorelParams")
    q = _check_q(q)
    w = complex(w)
    if w == 0:
        raise ParameterError("w must be nonzero")
    s0, s1, s2 = params.s0, params.s1, params.s2
    k = q - 1 / q
    entries = {
        (1, 1): LaurentPoly({-1: s2 / w * q * (1 - q * q) * rho, 1: -rho / k}),
        (-1, -1): LaurentPoly({1: s0 * s1 / w * q * (q**-2 - 1) * rho, -1: -s0 * rho / k}),
        (1, -1): LaurentPoly({1: rho}),
        (-1, 1): lp_mul(LaurentPoly({-1: s0 * rho / w}), d_poly(params.z, s1, s2, q)),
    }
    return WOperatorSymbolic(params, w, q, "unit" if rho == 1 else "constant", "a0", entries)


def w_baxter(bp: BaxterParams, w: complex = 1.0) -> WOperatorSymbolic:
    """Symmetric-gauge entries ``(z/w)**((1 - a b)/4) s0**(-(a + b)/4) rho~ q**(j b)``.

    Only ``s1 = s2 = 0``.  ``rho~ = exp(i v / 2)`` and the off-diagonal
    ``(z/w)**(1/2) = exp(-i (v + eta))``, so no complex branch is ever chosen.
    """
    q = bp.q
    rt = bp.rho_tilde
    half_ratio = cmath.exp(-1j * (bp.v + bp.eta))
    entries = {
        (1, 1): LaurentPoly({1: bp.s0_power(-0.5) * rt}),
        (-1, -1): LaurentPoly({-1: bp.s0_power(0.5) * rt}),
        (1, -1): LaurentPoly({1: half_ratio * rt}),
        (-1, 1): LaurentPoly({-1: half_ratio * rt}),
    }
    return WOperatorSymbolic(bp.borel(w), complex(w), q, "baxter", "symmetric", entries)


def w_recursion_residual(W: WOperatorSymbolic, j_range: range) -> ResidualReport:
    """The eight recursion relations equivalent to the e-intertwining property."""
    if W.gauge != "a0":
        raise ParameterError("recursions are stated for the a0 gauge only")
    q, w = W.q, W.w
    p = W.params
    s0 = p.s0
    d = lambda j: d_coeff(j, p.z, p.s1, p.s2, q)
    a0, b0, a1, b1 = W.alpha0, W.beta0, W.alpha1, W.beta1
    relations: dict[str, Callable[[int], tuple[complex, complex]]] = {
        "b_{j-1,0} = b_{j,0}/q": lambda j: (b0(j - 1), b0(j) / q),
        "a_{j-1,0} = q a_{j,0} + b_{j,0}": lambda j: (a0(j - 1), q * a0(j) + b0(j)),
        "a_{j-1,1} + s0 q^-2j b_{j,0} = a_{j,1}/q": lambda j: (a1(j - 1) + s0 * q ** (-2 * j) * b0(j), a1(j) / q),
        "b_{j-1,1} + s0 q^-2j a_{j,0} = a_{j,1} + q b_{j,1}": lambda j: (
            b1(j - 1) + s0 * q ** (-2 * j) * a0(j),
            a1(j) + q * b1(j),
        ),
        "d_j a_{j+1,0} + q^2j w b_{j,1}/s0 = d_j a_{j,0}/q": lambda j: (
            d(j) * a0(j + 1) + q ** (2 * j) * w * b1(j) / s0,
            d(j) * a0(j) / q,
        ),
        "d_j b_{j+1,0} + q^2j w a_{j,1}/s0 = w a_{j,0} + q d_{j-1} b_{j,0}": lambda j: (
            d(j) * b0(j + 1) + q ** (2 * j) * w * a1(j) / s0,
            w * a0(j) + q * d(j - 1) * b0(j),
        ),
        "d_j a_{j+1,1} = q d_j a_{j,1} + w b_{j,1}": lambda j: (d(j) * a1(j + 1), q * d(j) * a1(j) + w * b1(j)),
        "d_j b_{j+1,1} = d_{j+1} b_{j,1}/q": lambda j: (d(j) * b1(j + 1), d(j + 1) * b1(j) / q),
    }
    worst: dict[str, float] = {}
    for name, rel in relations.items():
        r = 0.0
        for j in j_range:
            lhs, rhs = rel(j)
            r = max(r, abs(lhs - rhs) / (1 + abs(rhs)))
        worst[name] = r
    return ResidualReport("w_recursions", max(worst.values()), 1e-10, details={"relations": worst})


def _act_m_v(params: BorelParams, w: complex, q: complex, g: str, vec: dict, opposite: bool) -> dict:
    """Coproduct (or opposite coproduct) of a Borel generator on ``M x V(1)_w``."""
    from .repmod import act_m_tensor_v, borel_action

    if not opposite:
        return act_m_tensor_v(params, w, q, g, vec)
    V = {h: eval_rep_action(EvalModuleSpec(1, w), h, q) for h in ("e0", "e1", "t1", "t1inv")}
    t_of = {"e0": "t1inv", "e1": "t1"}
    out: dict = {}

    def acc(k, c):
        out[k] = out.get(k, 0j) + c

    for (j, a), c in vec.items():
        if g in ("t1", "t1inv"):
            j2, cm = borel_action(params, g, q).apply(j, q)
            acc((j2, a), c * cm * V[g][a, a])
            continue
        # e x t + 1 x e
        j2, cm = borel_action(params, g, q).apply(j, q)
        acc((j2, a), c * cm * V[t_of[g]][a, a])
        col = V[g][:, a]
        for b in np.nonzero(col)[0]:
            acc((j, int(b)), c * col[b])
    return out


def w_intertwining_residual(W: WOperatorSymbolic, j_range: range) -> ResidualReport:
    """Direct check of ``W D(g) = D'(g) W`` on basis vectors, independent of the recursion relations."""
    p, w, q = W.params, W.w, W.q
    from .repmod import vec_residual

    worst = 0.0
    for g in ("e0", "e1", "t1"):
        for j in j_range:
            for a in (0, 1):
                basis = {(j, a): 1.0 + 0j}
                lhs = W.apply(_act_m_v(p, w, q, g, basis, opposite=False))
                rhs = _act_m_v(p, w, q, g, W.apply(basis), opposite=True)
                worst = max(worst, vec_residual(lhs, rhs))
    return ResidualReport("w_intertwining", worst, 1e-10)


# --------------------------------------------------------------------------
# phi coefficients


@dataclass(frozen=True)
class PhiPair:
    phi1: complex
    phi2: complex


def rho_baxter(bp: BaxterParams) -> complex:
    """Constant rho of the a0 gauge equivalent to ``rho~ = exp(i v / 2)``."""
    q = bp.q
    return -bp.rho_tilde * (q - 1 / q) / bp.s0_power(0.5)


def phi_coeffs(
    params: BorelParams | BaxterParams,
    w: complex,
    q: complex | None = None,
    scheme: str = "unit",
) -> PhiPair:
    """``phi1 = rho/rho(+) (w - z)/(w - q**2 z)`` and ``phi2 = rho/rho(-) q``."""
    if scheme == "unit":
        if not isinstance(params, BorelParams):
            raise TypeError("unit scheme takes BorelParams")
        q = _check_q(q)
        ratio_plus = ratio_minus = 1.0
        z = params.z
    elif scheme == "baxter":
        if not isinstance(params, BaxterParams):
            raise TypeError("baxter scheme takes BaxterParams")
        q = params.q
        z = complex(w) * params.z_over_w
        r0 = rho_baxter(params)
        ratio_plus = r0 / rho_baxter(params.shifted(1))
        ratio_minus = r0 / rho_baxter(params.shifted(-1))
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    w = complex(w)
    den = w - q * q * z
    if abs(den) < 1e-13 * (1 + abs(w)):
        raise PoleError("phi coefficients have a pole at w = q**2 z")
    return PhiPair(ratio_plus * (w - z) / den, ratio_minus * q)


# --------------------------------------------------------------------------
# shift relations: W_13 R_23 on M x V(1)_z x V(1)_w


def _w13_r23(W: WOperatorSymbolic, R: np.ndarray, vec: dict) -> dict:
    mid: dict = {}
    for (j, a, b), c in vec.items():
        col = R[:, 2 * a + b]
        for idx in np.nonzero(col)[0]:
            key = (j, int(idx) // 2, int(idx) % 2)
            mid[key] = mid.get(key, 0j) + c * col[idx]
    out: dict = {}
    for (j, a, b), c in mid.items():
        for (j2, b2), x in W.apply({(j, b): 1.0 + 0j}).items():
            key = (j2, a, b2)
            out[key] = out.get(key, 0j) + c * x
    return out


def _tensor_v(vec: dict, eps: int) -> dict:
    return {(j, a, eps): c for (j, a), c in vec.items()}


def check_sr_relations(params: BorelParams, w: complex, q: complex, j_range: range) -> ResidualReport:
    """Decomposition of ``W_13(z, s; w) R_23(z/w)`` along ``A_j x v`` and ``B_j x v``.

    ``A_j``/``B_j`` span the submodule ``M(zq**2, s+)`` and a complement
    projecting onto ``M(zq**-2, s-)``.  All four relations (``sr1`` to
    ``sr4``) are checked literally, and ``sr4`` once more after projecting out
    the submodule.  ``phi`` values are also extracted by ratio and compared with
    :func:`phi_coeffs`.
    """
    q = _check_q(q)
    w = complex(w)
    z = params.z
    if abs(w - q * q * z) < 1e-13:
        raise PoleError("pole at w = q**2 z")
    W = w_closed_form(params, w, q)
    Wp = w_closed_form(params.shifted(1, q), w, q)
    Wm = w_closed_form(params.shifted(-1, q), w, q)
    R = rbar(z / w, q).matrix
    phi = phi_coeffs(params, w, q)
    c_extra = z * (1 - q * q) / (w - q * q * z)
    from .repmod import vec_combine, vec_residual

    A = lambda j: {(j, 0): a_coeff(j, params, q), (j - 1, 1): 1.0 + 0j}
    B = lambda j: {(j + 1, 0): 1.0 + 0j}
    AV = lambda j, e: _tensor_v(A(j), e)
    BV = lambda j, e: _tensor_v(B(j), e)

    worst = {"sr1": 0.0, "sr2": 0.0, "sr3": 0.0, "sr4": 0.0, "sr4_quotient": 0.0, "phi1": 0.0, "phi2": 0.0}
    for j in j_range:
        lhs = _w13_r23(W, R, AV(j, 0))
        rhs = vec_combine((phi.phi1 * Wp.alpha0(j), AV(j, 0)), (phi.phi1 * Wp.beta0(j), AV(j - 1, 1)))
        worst["sr1"] = max(worst["sr1"], vec_residual(lhs, rhs))
        # phi1 by ratio: the |j> v0 v0 component of A_j x v0 carries a_j alpha+_{j,0}
        extracted = lhs.get((j - 1, 1, 0), 0j) / Wp.alpha0(j)
        worst["phi1"] = max(worst["phi1"], abs(extracted - phi.phi1) / (1 + abs(phi.phi1)))

        lhs = _w13_r23(W, R, AV(j, 1))
        rhs = vec_combine((phi.phi1 * Wp.alpha1(j), AV(j, 1)), (phi.phi1 * Wp.beta1(j), AV(j + 1, 0)))
        worst["sr2"] = max(worst["sr2"], vec_residual(lhs, rhs))

        lhs = _w13_r23(W, R, BV(j, 0))
        rhs = vec_combine((phi.phi2 * Wm.alpha0(j), BV(j, 0)), (phi.phi2 * Wm.beta0(j), BV(j - 1, 1)))
        worst["sr3"] = max(worst["sr3"], vec_residual(lhs, rhs))
        extracted = lhs.get((j + 1, 0, 0), 0j) / Wm.alpha0(j)
        worst["phi2"] = max(worst["phi2"], abs(extracted - phi.phi2) / (1 + abs(phi.phi2)))

        lhs = _w13_r23(W, R, BV(j, 1))
        quotient_part = vec_combine((phi.phi2 * Wm.alpha1(j), BV(j, 1)), (phi.phi2 * Wm.beta1(j), BV(j + 1, 0)))
        rhs = vec_combine(
            (1.0, quotient_part),
            (c_extra * W.beta0(j + 1), AV(j + 1, 1)),
            (c_extra * W.alpha0(j + 1), AV(j + 2, 0)),
        )
        worst["sr4"] = max(worst["sr4"], vec_residual(lhs, rhs))
        worst["sr4_quotient"] = max(
            worst["sr4_quotient"], vec_residual(project_to_quotient(lhs, params, q), project_to_quotient(quotient_part, params, q))
        )
    return ResidualReport("sr_relations", max(worst.values()), 1e-10, details={"relations": worst, "phi": [phi.phi1, phi.phi2]})


def project_to_quotient(vec: dict, params: BorelParams, q: complex) -> dict:
    """Coordinates along ``B_m x v`` after discarding the ``A_m x v`` components.

    Uses ``|m> v1 = A_{m+1} - a_{m+1} B_m`` and ``|m> v0 = B_{m-1}``; keys of
    the result are ``(m, eps)`` for ``B_m x v_eps``.
    """
    out: dict = {}
    for (j, a, e), c in vec.items():
        if a == 0:
            key, x = (j - 1, e), c
        else:
            key, x = (j, e), -c * a_coeff(j + 1, params, q)
        out[key] = out.get(key, 0j) + x
    return out


# --------------------------------------------------------------------------
# generic finite-dimensional intertwiner solver


@dataclass(frozen=True)
class IntertwinerMatrix:
    matrix: np.ndarray
    normalization: str
    nullity: int
    singular_values: tuple[float, ...] = field(repr=False, default=())


def _rep(spec: EvalModuleSpec, q: complex):
    cache = {g: eval_rep_action(spec, g, q) for g in ("e0", "e1", "t1", "t1inv")}
    return cache.__getitem__


def solve_intertwiner(specA: EvalModuleSpec, specB: EvalModuleSpec, q: complex, rtol: float = 1e-9) -> IntertwinerMatrix:
    """Solve ``X D(g) = D'(g) X`` for ``g in {e0, e1, t1}`` on ``V_A x V_B``.

    The solution space is computed as a numerical nullspace; anything other
    than a one-dimensional space with an invertible generator is reported as
    :class:`DegenerateIntertwiner`.  The ``v0 x v0 -> v0 x v0`` entry is set to 1.
    """
    q = _check_q(q)
    A, B = _rep(specA, q), _rep(specB, q)
    D = specA.dim * specB.dim
    if D > 16:
        raise ParameterError("intertwiner solver is limited to dimension 16")
    eye = np.eye(D)
    blocks = []
    for g in ("e0", "e1", "t1"):
        left = tensor_action(g, A, B)
        right = tensor_action(g, A, B, opposite=True)
        # row-major vec: vec(X L) = (I kron L^T) vec X, vec(R X) = (R kron I) vec X
        blocks.append(np.kron(eye, left.T) - np.kron(right, eye))
    M = np.vstack(blocks)
    _, sv, vh = np.linalg.svd(M)
    scale = sv[0] if sv[0] > 0 else 1.0
    null_mask = sv < rtol * scale
    nullity = int(np.sum(null_mask)) + (D * D - len(sv))
    if nullity != 1:
        raise DegenerateIntertwiner(
            f"intertwiner space has dimension {nullity} (ratio {specA.z / specB.z}); "
            "the tensor product is reducible or parameters are non-generic"
        )
    X = vh[-1].conj().reshape(D, D)
    if abs(X[0, 0]) < 1e-12 * np.max(np.abs(X)):
        raise DegenerateIntertwiner("normalizing entry vanishes")
    X = X / X[0, 0]
    svx = np.linalg.svd(X, compute_uv=False)
    if svx[-1] < 1e-10 * svx[0]:
        raise DegenerateIntertwiner(
            f"intertwiner is singular at ratio {specA.z / specB.z}: a proper submodule exists there"
        )
    return IntertwinerMatrix(X, "v0xv0->v0xv0 = 1", nullity, tuple(float(s) for s in sv[-3:]))


def intertwining_residual(X: np.ndarray, specA: EvalModuleSpec, specB: EvalModuleSpec, q: complex) -> ResidualReport:
    A, B = _rep(specA, q), _rep(specB, q)
    worst = 0.0
    for g in ("e0", "e1", "t1"):
        lhs = X @ tensor_action(g, A, B)
        rhs = tensor_action(g, A, B, opposite=True) @ X
        worst = max(worst, float(np.max(np.abs(lhs - rhs)) / (1 + np.max(np.abs(rhs)))))
    return ResidualReport("intertwining", worst, 1e-10)
