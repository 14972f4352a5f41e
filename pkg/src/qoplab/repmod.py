"""Evaluation modules, the Borel module M(z, s) and its tensor products with V(1).

Conventions
-----------
Generators are labelled ``"e0", "e1", "f0", "f1", "t1", "t1inv"`` (``t0`` is
``t1inv``).  The coproduct is ``D(e) = e x 1 + t x e``, ``D(t) = t x t``; the
opposite coproduct swaps the tensor factors.  On ``V(n)_z`` we fix
``e0 = z f1``, ``f0 = e1 / z`` and ``t0 = t1**-1`` (equality rather than
proportionality).

Vectors of the infinite-dimensional module only ever appear through finitely
many basis labels, so tensor-product vectors are plain dicts keyed by basis
labels: ``(j, a)`` for ``M x V`` and ``(a, j)`` for ``V x M`` with
``a in {0, 1}``.
"""
from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import GeneratorError, ParameterError
from .laurent import LaurentPoly, is_root_of_unity, lp_mul, lp_shift
from .report import ResidualReport

EVAL_GENERATORS = ("e0", "e1", "f0", "f1", "t1", "t1inv")
BOREL_GENERATORS = ("e0", "e1", "t1", "t1inv")


def _check_q(q: complex) -> complex:
    q = complex(q)
    if q == 0:
        raise ParameterError("q must be nonzero")
    if abs(q * q - 1) == 0:
        raise ParameterError("q**2 == 1 is excluded (q - 1/q vanishes)")
    return q


@dataclass(frozen=True)
class AlgebraParams:
    q: complex
    allow_root_of_unity: bool = False
    max_order: int = 8

    def __post_init__(self):
        object.__setattr__(self, "q", _check_q(self.q))
        if not self.allow_root_of_unity:
            k = is_root_of_unity(self.q, self.max_order)
            if k is not None:
                from .errors import RootOfUnityError

                raise RootOfUnityError(f"q is within 1e-3 of a root of unity of order {k}")


def qnum(n: int, q: complex) -> complex:
    """Symmetric q-integer ``[n] = (q**n - q**-n) / (q - 1/q)``."""
    q = _check_q(q)
    return (q**n - q ** (-n)) / (q - 1 / q)


@dataclass(frozen=True)
class EvalModuleSpec:
    """Spin-n/2 evaluation module ``V(n)_z`` with basis ``v_0 .. v_n``."""

    n: int
    z: complex

    def __post_init__(self):
        if self.n < 0:
            raise ParameterError("spin label n must be >= 0")
        if complex(self.z) == 0:
            raise ParameterError("spectral parameter z must be nonzero")
        object.__setattr__(self, "z", complex(self.z))

    @property
    def dim(self) -> int:
        return self.n + 1


def eval_rep_action(spec: EvalModuleSpec, g: str, params: AlgebraParams | complex) -> np.ndarray:
    """Matrix of generator ``g`` on ``V(n)_z`` (columns are images of basis vectors)."""
    q = params.q if isinstance(params, AlgebraParams) else _check_q(params)
    n, d = spec.n, spec.dim
    if g in ("t1", "t1inv"):
        sign = 1 if g == "t1" else -1
        return np.diag([q ** (sign * (n - 2 * j)) for j in range(d)]).astype(complex)
    e1 = np.zeros((d, d), complex)
    f1 = np.zeros((d, d), complex)
    for j in range(1, d):
        e1[j - 1, j] = qnum(j, q)
    for j in range(d - 1):
        f1[j + 1, j] = qnum(n - j, q)
    if g == "e1":
        return e1
    if g == "f1":
        return f1
    if g == "e0":
        return spec.z * f1
    if g == "f0":
        return e1 / spec.z
    raise GeneratorError(f"unknown generator {g!r}")


def tensor_action(g: str, A: Callable[[str], np.ndarray], B: Callable[[str], np.ndarray], opposite: bool = False):
    """``D(g)`` (or the opposite coproduct) on a tensor product of finite modules."""
    tg = {"e0": "t1inv", "e1": "t1"}
    if g in ("t1", "t1inv"):
        return np.kron(A(g), B(g))
    if g not in tg:
        raise GeneratorError(f"coproduct implemented for Borel generators only, got {g!r}")
    ia = np.eye(A("t1").shape[0])
    ib = np.eye(B("t1").shape[0])
    if opposite:
        return np.kron(A(g), B(tg[g])) + np.kron(ia, B(g))
    return np.kron(A(g), ib) + np.kron(A(tg[g]), B(g))


# --------------------------------------------------------------------------
# the Borel module M(z, s)


@dataclass(frozen=True)
class BorelParams:
    z: complex
    s0: complex
    s1: complex = 0j
    s2: complex = 0j

    def __post_init__(self):
        for name in ("z", "s0", "s1", "s2"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if self.z == 0:
            raise ParameterError("z must be nonzero")
        if self.s0 == 0:
            raise ParameterError("s0 must be nonzero")

    def shifted(self, sign: int, q: complex) -> "BorelParams":
        """``(z q**(2 sign), s^sign)`` with ``s^+- = (q**+-1 s0, s1, q**+-2 s2)``."""
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        q = complex(q)
        return BorelParams(self.z * q ** (2 * sign), self.s0 * q**sign, self.s1, self.s2 * q ** (2 * sign))


def d_coeff(j: int, z: complex, s1: complex, s2: complex, q: complex) -> complex:
    """``d_j = s1 s2 (q-1/q)**2 / z + z / (q-1/q)**2 + s1 q**(2j) + s2 q**(-2j)``."""
    q = _check_q(q)
    if complex(z) == 0:
        raise ParameterError("z must be nonzero")
    lam = (q - 1 / q) ** 2
    return s1 * s2 * lam / z + z / lam + s1 * q ** (2 * j) + s2 * q ** (-2 * j)


def d_poly(z: complex, s1: complex, s2: complex, q: complex) -> LaurentPoly:
    """``d_j`` as a Laurent polynomial in ``u = q**j``."""
    q = _check_q(q)
    lam = (q - 1 / q) ** 2
    return LaurentPoly({2: s1, -2: s2, 0: s1 * s2 * lam / z + z / lam})


def serre_recursion_check(gammas: Sequence[complex], q: complex) -> complex:
    """Left side of ``g_{j-3} - [3] g_{j-2} + [3] g_{j-1} - g_j`` for ``gammas = (g_{j-3}, .., g_j)``."""
    if len(gammas) != 4:
        raise ValueError("need exactly four consecutive gamma values")
    g3 = qnum(3, q)
    a, b, c, d = (complex(x) for x in gammas)
    return a - g3 * b + g3 * c - d


@dataclass(frozen=True)
class BorelGeneratorAction:
    """``g |j> = coeff(q**j) |j + shift>``."""

    generator: str
    shift: int
    coeff: LaurentPoly

    def apply(self, j: int, q: complex) -> tuple[int, complex]:
        return j + self.shift, self.coeff.evaluate(complex(q) ** j)

    def then(self, other: "BorelGeneratorAction", q: complex) -> "BorelGeneratorAction":
        """Composite ``other * self`` (``self`` acts first)."""
        coeff = lp_mul(lp_shift(other.coeff, self.shift, q), self.coeff)
        return BorelGeneratorAction(f"{other.generator}*{self.generator}", self.shift + other.shift, coeff)


def borel_action(params: BorelParams, g: str, q: complex) -> BorelGeneratorAction:
    q = _check_q(q)
    if g == "e1":
        return BorelGeneratorAction(g, -1, LaurentPoly.constant(1.0))
    if g == "e0":
        return BorelGeneratorAction(g, 1, d_poly(params.z, params.s1, params.s2, q))
    if g == "t1":
        return BorelGeneratorAction(g, 0, LaurentPoly.monomial(-2, params.s0))
    if g in ("t1inv", "t0"):
        return BorelGeneratorAction("t1inv", 0, LaurentPoly.monomial(2, 1 / params.s0))
    if g in ("f0", "f1"):
        raise GeneratorError(f"{g} does not act on M(z, s): it is a module for the Borel subalgebra only")
    raise GeneratorError(f"unknown generator {g!r}")


def qoscillator_constant_check(params: BorelParams, q: complex, j_range: range, branch: str | None = None) -> ResidualReport:
    """Check that ``e0 e1 - q**2 e1 e0`` (s1 = 0) or ``e1 e0 - q**2 e0 e1`` (s2 = 0) is constant.

    On ``|j>`` these act as ``g_{j-1} - q**2 g_j`` and ``g_j - q**2 g_{j-1}``
    with ``g_j = d_j``.
    """
    q = _check_q(q)
    if branch is None:
        if params.s1 == 0:
            branch = "s1=0"
        elif params.s2 == 0:
            branch = "s2=0"
        else:
            raise ParameterError("neither s1 nor s2 vanishes: no q-oscillator branch applies")
    e0e1 = borel_action(params, "e1", q).then(borel_action(params, "e0", q), q)
    e1e0 = borel_action(params, "e0", q).then(borel_action(params, "e1", q), q)
    if branch == "s1=0":
        terms = lambda j: (e0e1.apply(j, q)[1], -q * q * e1e0.apply(j, q)[1])
    elif branch == "s2=0":
        terms = lambda j: (e1e0.apply(j, q)[1], -q * q * e0e1.apply(j, q)[1])
    else:
        raise ValueError(f"unknown branch {branch!r}")
    ref = sum(terms(0))
    # the two products grow like q**(2|j|) and cancel; measure against their size
    residual = 0.0
    for j in j_range:
        a, b = terms(j)
        residual = max(residual, abs(a + b - ref) / (1 + abs(ref) + max(abs(a), abs(b))))
    return ResidualReport(f"qoscillator[{branch}]", float(residual), 1e-12, details={"constant": [ref.real, ref.imag]})


# --------------------------------------------------------------------------
# tensor products with V(1)

LocalVec = dict


def _acc(vec: LocalVec, key, c: complex):
    vec[key] = vec.get(key, 0j) + c


def _v1(z: complex, q: complex):
    spec = EvalModuleSpec(1, z)
    cache = {g: eval_rep_action(spec, g, q) for g in EVAL_GENERATORS}
    return cache.__getitem__


_T_OF = {"e0": "t1inv", "e1": "t1"}


def _act_m(params: BorelParams, g: str, q: complex, j: int) -> tuple[int, complex]:
    return borel_action(params, g, q).apply(j, q)


def act_m_tensor_v(params: BorelParams, z_v: complex, q: complex, g: str, vec: LocalVec) -> LocalVec:
    """``D(g)`` on ``M(z, s) x V(1)_{z_v}``; keys ``(j, a)``."""
    V = _v1(z_v, q)
    out: LocalVec = {}
    for (j, a), c in vec.items():
        if g in ("t1", "t1inv"):
            j2, cm = _act_m(params, g, q, j)
            _acc(out, (j2, a), c * cm * V(g)[a, a])
            continue
        j2, cm = _act_m(params, g, q, j)
        _acc(out, (j2, a), c * cm)
        jt, ct = _act_m(params, _T_OF[g], q, j)
        col = V(g)[:, a]
        for b in np.nonzero(col)[0]:
            _acc(out, (jt, int(b)), c * ct * col[b])
    return out


def act_v_tensor_m(params: BorelParams, z_v: complex, q: complex, g: str, vec: LocalVec) -> LocalVec:
    """``D(g)`` on ``V(1)_{z_v} x M(z, s)``; keys ``(a, j)``."""
    V = _v1(z_v, q)
    out: LocalVec = {}
    for (a, j), c in vec.items():
        if g in ("t1", "t1inv"):
            j2, cm = _act_m(params, g, q, j)
            _acc(out, (a, j2), c * cm * V(g)[a, a])
            continue
        col = V(g)[:, a]
        for b in np.nonzero(col)[0]:
            _acc(out, (int(b), j), c * col[b])
        ta = V(_T_OF[g])[a, a]
        j2, cm = _act_m(params, g, q, j)
        _acc(out, (a, j2), c * ta * cm)
    return out


def vec_residual(lhs: LocalVec, rhs: LocalVec) -> float:
    keys = set(lhs) | set(rhs)
    scale = 1 + max((abs(v) for v in rhs.values()), default=0.0)
    return max((abs(lhs.get(k, 0j) - rhs.get(k, 0j)) for k in keys), default=0.0) / scale


def vec_combine(*terms: tuple[complex, LocalVec]) -> LocalVec:
    out: LocalVec = {}
    for c, v in terms:
        for k, x in v.items():
            _acc(out, k, c * x)
    return out


def a_coeff(j: int, params: BorelParams, q: complex) -> complex:
    """Coefficient of ``|j> x v0`` in the submodule vector ``A_j = a_j |j> x v0 + |j-1> x v1``."""
    q = _check_q(q)
    if params.z == 0:
        raise ParameterError("z must be nonzero")
    s0, s1 = params.s0, params.s1
    return -s0 * s1 * (1 - q * q) / (params.z * q * q) - s0 * q ** (2 * (1 - j)) / (1 - q * q)


def prop22_vectors_a(params: BorelParams, q: complex):
    """``(A_j, B_j)`` factories for ``M(z, s) x V(1)_z``."""

    def A(j):
        return {(j, 0): a_coeff(j, params, q), (j - 1, 1): 1.0 + 0j}

    def B(j):
        return {(j + 1, 0): 1.0 + 0j}

    return A, B


def solve_a_prime(params: BorelParams, q: complex) -> Callable[[int], complex]:
    """Determine the coefficients ``a'_j`` of ``A_j = a'_j v0 x |j+1> + q**j v1 x |j>``.

    ``e1 A_j = A_{j-1}`` is the two-term recursion ``a'_{j-1} = q a'_j + q**j``;
    it leaves ``a'_0`` free, so ``a'_j`` is affine in ``a'_0``.  Requiring
    ``e0 A_j`` to be proportional to ``A_{j+1}`` at ``j = 0`` is quadratic in
    ``a'_0``; of its roots we keep the one that also makes the ``j = 1``
    condition hold.
    """
    q = _check_q(q)

    def affine(j: int) -> tuple[complex, complex]:
        # a'_j = c0 + c1 * a'_0
        c0, c1 = 0j, 1 + 0j
        if j >= 0:
            for m in range(1, j + 1):
                c0, c1 = (c0 - q**m) / q, c1 / q
        else:
            for m in range(0, j, -1):
                c0, c1 = q * c0 + q**m, q * c1
        return c0, c1

    def e0_condition(x: complex, j: int) -> complex:
        # (z a'_j + q**(j+1) d_j) a'_{j+1} - q**j a'_j d_{j+1}
        aj = affine(j)[0] + affine(j)[1] * x
        aj1 = affine(j + 1)[0] + affine(j + 1)[1] * x
        dj = d_coeff(j, params.z, params.s1, params.s2, q)
        dj1 = d_coeff(j + 1, params.z, params.s1, params.s2, q)
        return (params.z * aj + q ** (j + 1) * dj) * aj1 - q**j * aj * dj1

    samples = np.array([e0_condition(x, 0) for x in (-1.0, 0.0, 1.0)])
    # fit c2 x^2 + c1 x + c0 through x = -1, 0, 1
    c0 = samples[1]
    c2 = (samples[0] + samples[2]) / 2 - c0
    c1 = (samples[2] - samples[0]) / 2
    roots = np.roots([c2, c1, c0]) if abs(c2) > 0 else np.array([-c0 / c1])
    x = min(roots, key=lambda r: abs(e0_condition(r, 1)))

    def a_prime(j: int) -> complex:
        c0_, c1_ = affine(j)
        return c0_ + c1_ * x

    return a_prime


def prop22_vectors_b(params: BorelParams, q: complex):
    """``(A_j, B_j)`` factories for ``V(1)_z x M(z, s)``."""
    a_prime = solve_a_prime(params, q)

    def A(j):
        return {(0, j + 1): a_prime(j), (1, j): q**j}

    def B(j):
        return {(0, j): q ** (-j) + 0j}

    return A, B


def _span_residual(vec: LocalVec, basis_vec: LocalVec) -> tuple[complex, float]:
    """Best coefficient of ``vec`` along ``basis_vec`` and the relative size of the remainder."""
    keys = sorted(set(vec) | set(basis_vec))
    x = np.array([basis_vec.get(k, 0j) for k in keys])
    y = np.array([vec.get(k, 0j) for k in keys])
    c = np.vdot(x, y) / np.vdot(x, x)
    return c, float(np.max(np.abs(y - c * x)) / (1 + np.max(np.abs(y))))


def check_prop22(params: BorelParams, q: complex, part: str, j_range: range) -> ResidualReport:
    """Verify the submodule/quotient relations on ``M x V(1)_z`` (part a) or ``V(1)_z x M`` (part b)."""
    q = _check_q(q)
    z = params.z
    plus, minus = params.shifted(1, q), params.shifted(-1, q)
    per_relation: dict[str, float] = {}

    def rec(name, r):
        per_relation[name] = max(per_relation.get(name, 0.0), float(r))

    if part == "a":
        A, B = prop22_vectors_a(params, q)
        act = lambda g, v: act_m_tensor_v(params, z, q, g, v)
        sub, quo = plus, minus
    elif part == "b":
        A, B = prop22_vectors_b(params, q)
        act = lambda g, v: act_v_tensor_m(params, z, q, g, v)
        sub, quo = minus, plus
    else:
        raise ValueError("part must be 'a' or 'b'")

    for j in j_range:
        rec("e1 A_j = A_{j-1}", vec_residual(act("e1", A(j)), A(j - 1)))
        rec("t1 A_j", vec_residual(act("t1", A(j)), vec_combine((sub.s0 * q ** (-2 * j), A(j)))))
        dsub = d_coeff(j, sub.z, sub.s1, sub.s2, q)
        rec("e0 A_j = d_j(sub) A_{j+1}", vec_residual(act("e0", A(j)), vec_combine((dsub, A(j + 1)))))
        rec("t1 B_j", vec_residual(act("t1", B(j)), vec_combine((quo.s0 * q ** (-2 * j), B(j)))))
        rec("e1 B_j = B_{j-1}", vec_residual(act("e1", B(j)), B(j - 1)))
        dquo = d_coeff(j, quo.z, quo.s1, quo.s2, q)
        e0b = act("e0", B(j))
        if part == "a":
            rhs = vec_combine((z * q ** (2 * (j + 1)) / params.s0, A(j + 2)), (dquo, B(j + 1)))
            rec("e0 B_j", vec_residual(e0b, rhs))
        else:
            # the submodule component is whatever multiple of A_j remains
            remainder = vec_combine((1.0, e0b), (-dquo, B(j + 1)))
            _, r = _span_residual(remainder, A(j))
            rec("e0 B_j = d_j(quo) B_{j+1} mod submodule", r)
    residual = max(per_relation.values())
    return ResidualReport(f"prop22[{part}]", residual, 1e-10, details={"relations": per_relation})


def serre_family_check(params: BorelParams, q: complex, j_range: range) -> ResidualReport:
    """Serre recursion on ``g_j = d_j(z, s1, s2)`` over every window in ``j_range``."""
    q = _check_q(q)
    d = lambda j: d_coeff(j, params.z, params.s1, params.s2, q)
    worst = 0.0
    for j in j_range:
        g = [d(j - 3), d(j - 2), d(j - 1), d(j)]
        worst = max(worst, abs(serre_recursion_check(g, q)) / (1 + max(abs(x) for x in g)))
    return ResidualReport("serre_recursion", float(worst), 1e-12)
