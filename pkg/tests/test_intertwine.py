import cmath
import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qoplab.errors import DegenerateIntertwiner, ParameterError, PoleError
from qoplab.intertwine import (
    BaxterParams,
    check_sr_relations,
    intertwining_residual,
    phi_coeffs,
    rbar,
    solve_intertwiner,
    w_baxter,
    w_closed_form,
    w_intertwining_residual,
    w_recursion_residual,
    yang_baxter_residual,
)
from qoplab.laurent import LaurentPoly
from qoplab.repmod import BorelParams, EvalModuleSpec, d_coeff

scalars = st.builds(lambda r, t: r * cmath.exp(1j * t), st.floats(0.5, 2.0), st.floats(0.0, 2 * np.pi))
generic_q = scalars.filter(lambda q: all(abs(q**k - 1) > 1e-2 for k in range(1, 9)))
unit_q = st.floats(0.1, np.pi - 0.1).map(lambda t: cmath.exp(1j * t)).filter(lambda q: all(abs(q**k - 1) > 1e-2 for k in range(1, 9)))

P = np.eye(4)[[0, 2, 1, 3]]


def off_pole(q, *ratios):
    return all(abs(1 - q * q * r) > 1e-2 for r in ratios)


def ybe_oracle(z1, z2, q):
    """R12 R13 R23 - R23 R13 R12 built from kron products and a swap."""
    I2 = np.eye(2)
    P23 = np.kron(I2, P)
    R12 = np.kron(rbar(z1 / z2, q).matrix, I2)
    R23 = np.kron(I2, rbar(z2, q).matrix)
    R13 = P23 @ np.kron(rbar(z1, q).matrix, I2) @ P23
    lhs, rhs = R12 @ R13 @ R23, R23 @ R13 @ R12
    return np.max(np.abs(lhs - rhs)) / (1 + np.max(np.abs(lhs)))


# --------------------------------------------------------------------------
# R-matrix


def test_rbar_examples():
    q = 1.3 + 0.4j
    assert np.allclose(rbar(1.0, q).matrix, P)
    R0 = rbar(0.0, q).matrix
    assert R0[1, 1] == pytest.approx(q) and R0[2, 1] == 0
    with pytest.raises(PoleError):
        rbar(q**-2, q)


def test_rbar_charge_conservation():
    R = rbar(0.7 - 0.2j, 1.1 + 0.5j).matrix
    charge = np.array([2, 0, 0, -2])
    mask = charge[:, None] != charge[None, :]
    assert np.all(R[mask] == 0)
    assert R[0, 0] == R[3, 3] == 1


@given(scalars, scalars, generic_q)
@settings(max_examples=50)
def test_yang_baxter(z1, z2, q):
    if not off_pole(q, z1, z2, z1 / z2):
        return
    r = yang_baxter_residual(z1, z2, q)
    assert r.residual < 1e-12
    assert ybe_oracle(z1, z2, q) < 1e-12


@given(scalars, unit_q)
def test_yang_baxter_unit_circle_and_equal_points(z, q):
    if not off_pole(q, z, 1.0):
        return
    assert yang_baxter_residual(z, z, q).residual < 1e-12
    assert yang_baxter_residual(z, 1.3 * z, q).residual < 1e-12


# --------------------------------------------------------------------------
# W operator


@given(scalars, scalars, scalars, scalars, scalars, generic_q)
@settings(max_examples=20, deadline=None)
def test_w_recursions_generic(z, s0, s1, s2, w, q):
    p = BorelParams(z, s0, s1, s2)
    W = w_closed_form(p, w, q)
    assert w_recursion_residual(W, range(-5, 6)).residual < 1e-10
    assert w_intertwining_residual(W, range(-5, 6)).residual < 1e-10


def test_w_entries_unit_scheme():
    q, z, s0, w = 1.2 * cmath.exp(0.3j), 0.7 + 0.4j, 1.3 - 0.2j, 0.9 + 0.1j
    W = w_closed_form(BorelParams(z, s0), w, q)
    assert W.entry(1, -1) == LaurentPoly.monomial(1)
    k = q - 1 / q
    for j in range(-3, 4):
        assert W.alpha0(j) == pytest.approx(-(q**j) / k)
        assert W.beta1(j) == pytest.approx(z / w * s0 * q ** (-j) / k**2)
        assert W.beta0(j) == pytest.approx(q**j)


def test_w_general_entries():
    q, w = 0.8 + 0.7j, 1.1 - 0.3j
    p = BorelParams(0.6 + 0.2j, 1.4, 0.3 - 0.5j, -0.8 + 0.1j)
    W = w_closed_form(p, w, q)
    k = q - 1 / q
    for j in range(-3, 4):
        assert W.alpha0(j) == pytest.approx(p.s2 / w * q * (1 - q * q) * q ** (-j) - q**j / k)
        assert W.alpha1(j) == pytest.approx(p.s0 * p.s1 / w * q * (q**-2 - 1) * q**j - p.s0 * q ** (-j) / k)
        assert W.beta1(j) == pytest.approx(p.s0 * q ** (-j) / w * d_coeff(j, p.z, p.s1, p.s2, q))


def test_w_charge_shift():
    W = w_closed_form(BorelParams(1.0, 1.0), 1.0, 1.5)
    for beta in (1, -1):
        out = W.apply({(4, (1 - beta) // 2): 1.0})
        assert len(out) == 2
        for j2, a in out:
            alpha = 1 - 2 * a
            assert j2 == 4 + (alpha - beta) // 2


def test_w_perturbation_is_detected():
    q, w = 1.2 * cmath.exp(0.9j), 0.8
    W = w_closed_form(BorelParams(0.7, 1.1, 0.2, 0.4), w, q)
    entries = dict(W.entries)
    entries[(1, -1)] = entries[(1, -1)] + LaurentPoly.monomial(1, 1e-3)
    bad = dataclasses.replace(W, entries=entries)
    assert w_recursion_residual(bad, range(-5, 6)).residual >= 1e-4


def test_w_baxter_scheme_guards():
    with pytest.raises(ParameterError):
        w_closed_form(BorelParams(1.0, 1.0, 0.5, 0), 1.0, 1.3, scheme="baxter")


def test_w_symmetric_gauge_formula():
    bp = BaxterParams(0.37, 0.21, 1.3 * cmath.exp(0.4j))
    W = w_baxter(bp)
    zw = bp.z_over_w
    for beta in (1, -1):
        for alpha in (1, -1):
            for j in (-2, 0, 3):
                # principal branches are fine for these mild values
                expect = zw ** ((1 - alpha * beta) / 4) * bp.s0 ** (-(alpha + beta) / 4) * cmath.exp(0.5j * bp.v) * bp.q ** (j * beta)
                assert W.coefficient(j, beta, alpha) == pytest.approx(expect, rel=1e-12)


def test_baxter_scheme_w_is_intertwiner():
    bp = BaxterParams(0.41, -0.3, 0.9 + 0.3j)
    W = w_closed_form(bp, 1.0, scheme="baxter")
    assert w_recursion_residual(W, range(-5, 6)).residual < 1e-10


# --------------------------------------------------------------------------
# phi coefficients and the shift-relation decomposition


def test_phi_examples():
    q, z, w = 1.1 + 0.6j, 0.7 - 0.2j, 1.2
    ph = phi_coeffs(BorelParams(z, 1.3), w, q)
    assert ph.phi1 == pytest.approx((w - z) / (w - q * q * z))
    assert ph.phi2 == pytest.approx(q)
    assert phi_coeffs(BorelParams(w, 1.3), w, q).phi1 == 0
    bp = BaxterParams(0.3, 0.55, 1.2)
    zb = bp.z_over_w
    pb = phi_coeffs(bp, 1.0, scheme="baxter")
    assert pb.phi1 == pytest.approx(bp.q * (1 - zb) / (1 - bp.q**2 * zb), rel=1e-12)
    assert pb.phi2 == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(PoleError):
        phi_coeffs(BorelParams(w / q**2, 1.0), w, q)


@given(scalars, scalars, scalars, scalars, scalars, generic_q)
@settings(max_examples=15, deadline=None)
def test_sr_relations(z, s0, s1, s2, w, q):
    if abs(w - q * q * z) < 1e-2 * abs(w):
        return
    r = check_sr_relations(BorelParams(z, s0, s1, s2), w, q, range(-4, 5))
    assert r.residual < 1e-10
    assert r.details["relations"]["phi1"] < 1e-10 and r.details["relations"]["phi2"] < 1e-10


# --------------------------------------------------------------------------
# generic intertwiner solver


def test_solver_reproduces_rbar():
    q, z, w = 1.2 * cmath.exp(0.7j), 0.8 + 0.3j, 1.1 - 0.2j
    X = solve_intertwiner(EvalModuleSpec(1, z), EvalModuleSpec(1, w), q)
    assert X.nullity == 1
    assert np.max(np.abs(X.matrix - rbar(z / w, q).matrix)) < 1e-10


def test_solver_spin1_spin_half():
    q = 0.9 * cmath.exp(1.1j)
    A, B = EvalModuleSpec(2, 0.6 + 0.6j), EvalModuleSpec(1, 1.3)
    X = solve_intertwiner(A, B, q)
    assert X.matrix.shape == (6, 6)
    assert intertwining_residual(X.matrix, A, B, q).residual < 1e-10


def test_solver_flags_reducibility():
    q, z = 1.2 * cmath.exp(0.7j), 0.8 + 0.3j
    with pytest.raises(DegenerateIntertwiner):
        solve_intertwiner(EvalModuleSpec(1, z * q**2), EvalModuleSpec(1, z), q)
    with pytest.raises(DegenerateIntertwiner):
        solve_intertwiner(EvalModuleSpec(2, z * q**3), EvalModuleSpec(1, z), q)


def test_solver_dimension_cap():
    with pytest.raises(ParameterError):
        solve_intertwiner(EvalModuleSpec(4, 1.0), EvalModuleSpec(3, 2.0), 1.3)


# --------------------------------------------------------------------------
# Baxter parametrization


def test_baxter_params_shift_and_branch():
    bp = BaxterParams(0.3, 0.2, -1.0 + 1e-3j)
    sp = bp.shifted(1)
    assert sp.q == pytest.approx(bp.q)
    assert sp.v == pytest.approx(bp.v - 2 * bp.eta)
    assert sp.s0 == pytest.approx(bp.q * bp.s0)
    # powers follow log_s0 rather than re-taking the principal log
    assert sp.s0_power(0.5) == pytest.approx(bp.s0_power(0.5) * cmath.exp(1j * bp.eta))
    assert bp.shifted(1).shifted(-1).log_s0 == pytest.approx(bp.log_s0)
    with pytest.raises(ParameterError):
        BaxterParams(0.3, 0.2, 0)
    with pytest.raises(ValueError):
        bp.shifted(2)
