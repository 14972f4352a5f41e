import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qoplab.errors import GeneratorError, ParameterError, RootOfUnityError
from qoplab.repmod import (
    AlgebraParams,
    BorelParams,
    EvalModuleSpec,
    a_coeff,
    borel_action,
    check_prop22,
    d_coeff,
    eval_rep_action,
    qnum,
    qoscillator_constant_check,
    serre_family_check,
    serre_recursion_check,
)

mags = st.floats(0.5, 2.0)
phases = st.floats(0.0, 2 * np.pi)
scalars = st.builds(lambda r, t: r * cmath.exp(1j * t), mags, phases)


def generic(x: complex) -> bool:
    return all(abs(x**k - 1) > 1e-3 for k in range(1, 9))


generic_q = scalars.filter(generic)


def test_qnum_examples():
    assert qnum(0, 1.7) == 0
    assert qnum(1, 1.7) == pytest.approx(1)
    assert qnum(2, 2.0) == pytest.approx(2.5)
    assert qnum(-3, 1.3 + 0.2j) == pytest.approx(-qnum(3, 1.3 + 0.2j))
    with pytest.raises(ParameterError):
        qnum(2, 1.0)
    with pytest.raises(ParameterError):
        qnum(2, -1.0)


def test_eval_rep_examples():
    q = 1.7
    e1 = eval_rep_action(EvalModuleSpec(1, 2.0), "e1", q)
    assert np.array_equal(e1, np.array([[0, 1], [0, 0]], complex))
    t1 = eval_rep_action(EvalModuleSpec(1, 2.0), "t1", q)
    assert np.allclose(t1, np.diag([q, 1 / q]))
    f1 = eval_rep_action(EvalModuleSpec(2, 1.0), "f1", 2.0)
    assert f1[1, 0] == pytest.approx(2.5)


def test_eval_rep_loop_generators():
    spec, q = EvalModuleSpec(2, 0.7 + 0.3j), 1.3 - 0.4j
    f1 = eval_rep_action(spec, "f1", q)
    e1 = eval_rep_action(spec, "e1", q)
    assert np.allclose(eval_rep_action(spec, "e0", q), spec.z * f1)
    assert np.allclose(eval_rep_action(spec, "f0", q), e1 / spec.z)
    assert np.allclose(eval_rep_action(spec, "t1inv", q) @ eval_rep_action(spec, "t1", q), np.eye(3))


def test_eval_module_guards():
    with pytest.raises(ParameterError):
        EvalModuleSpec(-1, 1.0)
    with pytest.raises(ParameterError):
        EvalModuleSpec(1, 0)
    assert EvalModuleSpec(0, 1.0).dim == 1
    with pytest.raises(RootOfUnityError):
        AlgebraParams(1j)
    AlgebraParams(1j, allow_root_of_unity=True)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_eval_rep_relations(n):
    q = 1.1 * cmath.exp(0.7j)
    spec = EvalModuleSpec(n, 0.8 - 0.2j)
    e1, f1, t1, ti = (eval_rep_action(spec, g, q) for g in ("e1", "f1", "t1", "t1inv"))
    assert np.max(np.abs(e1 @ f1 - f1 @ e1 - (t1 - ti) / (q - 1 / q))) < 1e-12
    assert np.max(np.abs(t1 @ e1 @ ti - q * q * e1)) < 1e-12


def test_d_coeff_examples():
    q, z = 1.3 + 0.2j, 0.9 - 0.1j
    lam = (q - 1 / q) ** 2
    for j in (-2, 0, 5):
        assert d_coeff(j, z, 0, 0, q) == pytest.approx(z / lam)
    assert d_coeff(0, z, 0.4, 0.7, q) == pytest.approx(0.4 * 0.7 * lam / z + z / lam + 0.4 + 0.7)
    assert d_coeff(1, 1, 1, 1, 2.0) == pytest.approx(6.944444444444445, rel=1e-14)
    with pytest.raises(ParameterError):
        d_coeff(0, 0, 1, 1, 2.0)


def test_serre_examples():
    q = 2.0
    assert serre_recursion_check([3.0] * 4, q) == pytest.approx(0)
    assert abs(serre_recursion_check([0.7 * q ** (2 * j) for j in range(4)], q)) < 1e-12
    j = 3
    gam = [q ** (j - 3), q ** (j - 2), q ** (j - 1), q**j]
    expected = (q**-3 - qnum(3, q) * q**-2 + qnum(3, q) * q**-1 - 1) * q**j
    assert serre_recursion_check(gam, q) == pytest.approx(expected)
    assert abs(expected) > 0.1


@given(scalars, scalars, scalars, generic_q)
@settings(max_examples=60)
def test_serre_identity_on_general_solution(r, s1, s2, q):
    worst = 0.0
    for j in range(-8, 9):
        g = [r + s1 * q ** (2 * i) + s2 * q ** (-2 * i) for i in range(j - 3, j + 1)]
        worst = max(worst, abs(serre_recursion_check(g, q)) / (1 + max(map(abs, g))))
    assert worst < 1e-12


def test_serre_family():
    p = BorelParams(0.8 + 0.3j, 1.1, 0.6 - 0.2j, -0.4 + 0.9j)
    assert serre_family_check(p, 1.2 * cmath.exp(0.5j), range(-8, 9)).holds


def test_borel_action_contract():
    q = 1.4 + 0.3j
    p = BorelParams(0.9 + 0.2j, 1.3 - 0.5j, 0.4, -0.7j)
    t1 = borel_action(p, "t1", q)
    assert t1.shift == 0
    assert t1.apply(3, q)[1] == pytest.approx(p.s0 * q**-6)
    e1 = borel_action(p, "e1", q)
    assert (e1.shift, e1.coeff.terms) == (-1, {0: 1})
    e0 = borel_action(p, "e0", q)
    assert e0.shift == 1
    for j in (-3, 0, 4):
        assert e0.apply(j, q)[1] == pytest.approx(d_coeff(j, p.z, p.s1, p.s2, q))
    free = BorelParams(p.z, p.s0)
    assert borel_action(free, "e0", q).coeff.support == (0,)
    assert borel_action(free, "e0", q).coeff.coeff(0) == pytest.approx(p.z / (q - 1 / q) ** 2)
    for g in ("f0", "f1"):
        with pytest.raises(GeneratorError):
            borel_action(p, g, q)


def test_borel_composites_match_d():
    q = 0.9 + 0.6j
    p = BorelParams(1.1 - 0.3j, 0.7, 0.5 + 0.5j, -0.3)
    e1e0 = borel_action(p, "e0", q).then(borel_action(p, "e1", q), q)
    e0e1 = borel_action(p, "e1", q).then(borel_action(p, "e0", q), q)
    for j in range(-4, 5):
        assert e1e0.apply(j, q) == (j, pytest.approx(d_coeff(j, p.z, p.s1, p.s2, q)))
        assert e0e1.apply(j, q) == (j, pytest.approx(d_coeff(j - 1, p.z, p.s1, p.s2, q)))


def test_qoscillator_branches():
    q, z = 1.3 * cmath.exp(0.4j), 0.8 + 0.5j
    r = qoscillator_constant_check(BorelParams(z, 1, 0, 0.6 - 0.2j), q, range(-6, 7))
    assert r.residual < 1e-12
    const = complex(*r.details["constant"])
    assert const == pytest.approx(z * (1 - q * q) / (q - 1 / q) ** 2)
    assert qoscillator_constant_check(BorelParams(z, 1, 0.7j, 0), q, range(-6, 7)).residual < 1e-12
    with pytest.raises(ParameterError):
        qoscillator_constant_check(BorelParams(z, 1, 1, 1), q, range(-3, 3))
    # the other branch is not constant when its own condition fails
    assert qoscillator_constant_check(BorelParams(z, 1, 0, 0.6), q, range(-6, 7), branch="s2=0").residual > 1e-3


def test_a_coeff_examples():
    q = 2.0
    assert a_coeff(0, BorelParams(1, 1, 1, 0), q) == pytest.approx(2.0833333333333335, rel=1e-14)
    p = BorelParams(0.7 + 0.2j, 1.2 - 0.1j, 0, 0.3)
    for j in range(-3, 4):
        assert a_coeff(j, p, q) == pytest.approx(-p.s0 * q ** (2 * (1 - j)) / (1 - q * q))
    p = BorelParams(0.7 + 0.2j, 1.2 - 0.1j, 0.5j, 0.3)
    for j in range(-3, 4):
        assert a_coeff(j, p, q) + p.s0 * q ** (2 * (1 - j)) == pytest.approx(a_coeff(j - 1, p, q))


def _dense_check_part_a(p: BorelParams, q: complex, L: int = 6) -> float:
    """Truncated dense oracle: span{A_j} is stable under D(e0), D(e1), D(t1) away from the cut."""
    js = list(range(-L, L + 1))
    idx = {j: i for i, j in enumerate(js)}
    M = len(js)
    e0m = np.zeros((M, M), complex)
    e1m = np.zeros((M, M), complex)
    lam = (q - 1 / q) ** 2
    for j in js:
        if j + 1 in idx:
            e0m[idx[j + 1], idx[j]] = p.s1 * p.s2 * lam / p.z + p.z / lam + p.s1 * q ** (2 * j) + p.s2 * q ** (-2 * j)
        if j - 1 in idx:
            e1m[idx[j - 1], idx[j]] = 1
    t1m = np.diag([p.s0 * q ** (-2 * j) for j in js])
    z = p.z
    v_e1 = np.array([[0, 1], [0, 0]], complex)
    v_e0 = z * np.array([[0, 0], [1, 0]], complex)
    v_t1 = np.diag([q, 1 / q])
    I2 = np.eye(2)
    D = {
        "e0": np.kron(e0m, I2) + np.kron(np.linalg.inv(t1m), v_e0),
        "e1": np.kron(e1m, I2) + np.kron(t1m, v_e1),
        "t1": np.kron(t1m, v_t1),
    }

    def A(j):
        v = np.zeros(2 * M, complex)
        aj = -p.s0 * p.s1 * (1 - q * q) / (z * q * q) - p.s0 * q ** (2 * (1 - j)) / (1 - q * q)
        v[2 * idx[j]] = aj
        v[2 * idx[j - 1] + 1] = 1
        return v

    zp, s0p, s2p = z * q * q, q * p.s0, q * q * p.s2
    worst = 0.0
    for j in range(-L + 2, L - 1):
        dp = p.s1 * s2p * lam / zp + zp / lam + p.s1 * q ** (2 * j) + s2p * q ** (-2 * j)
        checks = [
            (D["e1"] @ A(j), A(j - 1)),
            (D["t1"] @ A(j), s0p * q ** (-2 * j) * A(j)),
            (D["e0"] @ A(j), dp * A(j + 1)),
        ]
        for lhs, rhs in checks:
            worst = max(worst, np.max(np.abs(lhs - rhs)) / (1 + np.max(np.abs(rhs))))
    return worst


@given(scalars, scalars, scalars, scalars, generic_q)
@settings(max_examples=20, deadline=None)
def test_submodule_relations_part_a_against_dense_oracle(z, s0, s1, s2, q):
    p = BorelParams(z, s0, s1, s2)
    assert _dense_check_part_a(p, q) < 1e-10
    assert check_prop22(p, q, "a", range(-5, 6)).residual < 1e-10


@given(scalars, scalars, scalars, scalars, generic_q)
@settings(max_examples=20, deadline=None)
def test_submodule_relations_part_b(z, s0, s1, s2, q):
    assert check_prop22(BorelParams(z, s0, s1, s2), q, "b", range(-5, 6)).residual < 1e-10


def test_submodule_relations_degenerate_s():
    p = BorelParams(0.8 - 0.4j, 1.3, 0, 0)
    q = 1.2 * cmath.exp(0.9j)
    for part in ("a", "b"):
        r = check_prop22(p, q, part, range(-5, 6))
        assert r.residual < 1e-10
        assert set(r.details["relations"]) >= {"e1 A_j = A_{j-1}", "t1 A_j"}


def test_submodule_relations_detect_wrong_a():
    import qoplab.repmod as rm

    p = BorelParams(0.8 - 0.4j, 1.3, 0.2, 0.5)
    q = 1.2 * cmath.exp(0.9j)
    orig = rm.a_coeff
    try:
        rm.a_coeff = lambda j, params, qq: orig(j, params, qq) * 1.01
        assert check_prop22(p, q, "a", range(-3, 4)).residual > 1e-4
    finally:
        rm.a_coeff = orig


def test_borel_params_shift():
    q = 1.3 + 0.1j
    p = BorelParams(0.5, 2.0, 0.3, 0.7)
    sp = p.shifted(1, q)
    assert (sp.z, sp.s0, sp.s1, sp.s2) == pytest.approx((0.5 * q * q, 2 * q, 0.3, 0.7 * q * q))
    assert p.shifted(1, q).shifted(-1, q).s2 == pytest.approx(p.s2)
    with pytest.raises(ParameterError):
        BorelParams(0, 1)
    with pytest.raises(ParameterError):
        BorelParams(1, 0)
