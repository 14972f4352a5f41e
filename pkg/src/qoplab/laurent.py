"""Sparse Laurent polynomials in one formal variable and formal delta series.

A :class:`LaurentPoly` stores ``sum_k c_k u**k``; throughout the package ``u``
stands for ``q**j`` where ``j`` labels the basis of the infinite-dimensional
Borel module.  Summing such a polynomial over ``j in Z`` sends ``u**k`` to the
formal symbol ``delta(q**k) = sum_j q**(k*j)``, which is what
:class:`DeltaSeries` records.

Both types are immutable and kept in canonical sparse form: exponents sorted,
no stored zeros.  Wherever terms are summed, coefficients below
``PRUNE_RELATIVE`` times the largest one are dropped as cancellation noise;
:func:`lp_shift` only rescales terms and keeps them all.
"""
from __future__ import annotations

import json
import math
from collections.abc import Iterable, Mapping
from typing import Any

from .errors import ParameterError
from .report import ResidualReport

PRUNE_RELATIVE = 1e-14


def _canonical(items: Iterable[tuple[int, complex]]) -> tuple[tuple[int, complex], ...]:
    acc: dict[int, complex] = {}
    for k, c in items:
        c = complex(c)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise ValueError(f"non-finite coefficient {c!r} at exponent {k}")
        acc[int(k)] = acc.get(int(k), 0j) + c
    if not acc:
        return ()
    cutoff = PRUNE_RELATIVE * max(abs(c) for c in acc.values())
    return tuple(sorted((k, c) for k, c in acc.items() if c != 0 and abs(c) >= cutoff))


class _SparseTerms:
    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, complex] | Iterable[tuple[int, complex]] = ()):
        if isinstance(terms, Mapping):
            terms = terms.items()
        self._terms = _canonical(terms)

    @classmethod
    def _raw(cls, terms: tuple[tuple[int, complex], ...]):
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj

    @property
    def terms(self) -> dict[int, complex]:
        return dict(self._terms)

    def items(self):
        return iter(self._terms)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self._terms)

    def coeff(self, k: int) -> complex:
        for e, c in self._terms:
            if e == k:
                return c
        return 0j

    def max_abs(self) -> float:
        return max((abs(c) for _, c in self._terms), default=0.0)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        return type(other) is type(self) and other._terms == self._terms

    def __hash__(self) -> int:
        return hash((type(self).__name__, self._terms))

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return type(self)(list(self._terms) + list(other._terms))

    def __neg__(self):
        return type(self)._raw(tuple((k, -c) for k, c in self._terms))

    def __sub__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self + (-other)

    def scale(self, factor: complex):
        factor = complex(factor)
        return type(self)((k, factor * c) for k, c in self._terms)

    def __rmul__(self, factor):
        if isinstance(factor, (int, float, complex)):
            return self.scale(factor)
        return NotImplemented

    def to_json(self) -> dict[str, Any]:
        return {"terms": [[k, [c.real, c.imag]] for k, c in self._terms]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]):
        terms = [(int(k), complex(re, im)) for k, (re, im) in obj["terms"]]
        exps = [k for k, _ in terms]
        if exps != sorted(set(exps)):
            raise ValueError("exponents must be strictly ascending")
        if any(c == 0 for _, c in terms):
            raise ValueError("explicit zero coefficient in serialized terms")
        # already canonical on disk; keep the coefficients bit-exact
        return cls._raw(tuple(terms))

    @classmethod
    def loads(cls, text: str):
        return cls.from_json(json.loads(text))


class LaurentPoly(_SparseTerms):
    """``sum_k c_k u**k`` with finitely many nonzero complex ``c_k``."""

    __slots__ = ()

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> "LaurentPoly":
        return cls({k: c})

    @classmethod
    def constant(cls, c: complex) -> "LaurentPoly":
        return cls({0: c})

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            return lp_mul(self, other)
        if isinstance(other, (int, float, complex)):
            return self.scale(other)
        return NotImplemented

    def evaluate(self, u: complex) -> complex:
        return sum((c * u**k for k, c in self._terms), 0j)

    def __repr__(self) -> str:
        body = " + ".join(f"({c:.6g})u^{k}" for k, c in self._terms) or "0"
        return f"LaurentPoly({body})"


class DeltaSeries(_SparseTerms):
    """``sum_k a_k delta(q**k)`` with the ``delta(q**k)`` independent formal symbols."""

    __slots__ = ()

    def regularize(self, q: complex, delta0: complex = 1.0, atol: float = 1e-9) -> complex:
        """Scalar value with every ``delta(q**k)`` for which ``q**k == 1`` set to ``delta0``.

        At generic ``q`` only ``k = 0`` survives; the remaining symbols are
        shift coboundaries (see :func:`delta_reduce`) and contribute nothing.
        """
        return complex(delta0) * sum(
            (c for k, c in self._terms if abs(complex(q) ** k - 1) <= atol), 0j
        )

    def __repr__(self) -> str:
        body = " + ".join(f"({c:.6g})d(q^{k})" for k, c in self._terms) or "0"
        return f"DeltaSeries({body})"


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Product; coefficient of ``u**m`` is ``sum_{i+j=m} a_i b_j``."""
    return LaurentPoly((i + j, x * y) for i, x in a.items() for j, y in b.items())


def lp_shift(p: LaurentPoly, m: int, q: complex) -> LaurentPoly:
    """Substitute ``u -> u * q**m``: the ``u**k`` coefficient picks up ``q**(m*k)``."""
    q = complex(q)
    if q == 0:
        raise ParameterError("lp_shift needs q != 0")
    if m == 0:
        return p
    # terms map one-to-one, so nothing cancels: keep everything that is not exactly zero
    out = []
    for k, c in p.items():
        c = c * q ** (m * k)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise ValueError(f"lp_shift overflow at exponent {k}")
        if c != 0:
            out.append((k, c))
    return LaurentPoly._raw(tuple(out))


def lp_trace_to_delta(p: LaurentPoly) -> DeltaSeries:
    """Formal sum over ``j in Z``: ``u**k -> delta(q**k)``, coefficients untouched."""
    return DeltaSeries._raw(tuple(p.items()))


def delta_reduce(a: DeltaSeries, q: complex, atol: float = 1e-9) -> DeltaSeries:
    """Quotient by the shift identity ``q**k delta(q**k) = delta(q**k)``.

    Reindexing ``j -> j + 1`` in ``sum_j q**(k*j)`` shows that
    ``(q**k - 1) delta(q**k)`` is formally zero, so any coefficient sitting on a
    symbol with ``q**k != 1`` is a coboundary and can be dropped.  What is left
    are the symbols with ``q**k == 1``: ``k = 0`` always, plus multiples of the
    order of ``q`` when ``q`` is a root of unity.
    """
    q = complex(q)
    return DeltaSeries._raw(tuple((k, c) for k, c in a.items() if abs(q**k - 1) <= atol))


def delta_compare(a: DeltaSeries, b: DeltaSeries, tol: float, name: str = "delta_compare") -> ResidualReport:
    """Coefficient-wise comparison over the union of supports.

    The residual is ``max_k |a_k - b_k| / (1 + |b_k|)``.
    """
    if not tol > 0:
        raise ParameterError("tolerance must be positive")
    keys = set(a.support) | set(b.support)
    residual = max((abs(a.coeff(k) - b.coeff(k)) / (1 + abs(b.coeff(k))) for k in keys), default=0.0)
    return ResidualReport(name, float(residual), tol, details={"support": sorted(keys)})


def is_root_of_unity(q: complex, max_order: int, atol: float = 1e-3) -> int | None:
    """Smallest ``1 <= k <= max_order`` with ``|q**k - 1| < atol``, else ``None``."""
    q = complex(q)
    for k in range(1, max_order + 1):
        if abs(q**k - 1) < atol:
            return k
    return None

