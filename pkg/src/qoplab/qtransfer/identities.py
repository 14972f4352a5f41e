"""Combinatorial and trace identities behind the commutativity and T-Q arguments."""
from __future__ import annotations

import itertools
from collections.abc import Iterator, Sequence

import numpy as np

from ..errors import DecompositionError, ParameterError
from ..repmod import EvalModuleSpec, _check_q, eval_rep_action, tensor_action
from ..report import ResidualReport

# --------------------------------------------------------------------------
# wedge identity


def nested_chains(N: int, lo: int = -1, hi: int | None = None) -> Iterator[tuple[tuple[int, int], ...]]:
    """Transposition lists ``(i1, i2), (i3, i4), ...`` with ``i1 < i3 < ... < i4 < i2``."""
    hi = N if hi is None else hi
    yield ()
    for i in range(lo + 1, hi):
        for j in range(i + 1, hi):
            for rest in nested_chains(N, i, j):
                yield ((i, j),) + rest


def noncrossing_matchings(N: int, lo: int = 0) -> Iterator[tuple[tuple[int, int], ...]]:
    """Disjoint transpositions whose intervals are nested or side by side."""

    def rec(a: int, b: int):
        if b - a < 2:
            yield ()
            return
        yield from rec(a + 1, b)
        for m in range(a + 1, b):
            for inner in rec(a + 1, m):
                for outer in rec(m + 1, b):
                    yield ((a, m),) + inner + outer

    yield from rec(lo, N)


FAMILIES = {"nested": nested_chains, "noncrossing": noncrossing_matchings}


def _as_perm(N: int, pairs) -> np.ndarray:
    p = np.arange(N)
    for i, j in pairs:
        p[i], p[j] = p[j], p[i]
    return p


def wedge(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``sum_{j<k} (a_j b_k - a_k b_j)`` for all row pairs of integer arrays."""
    N = a.shape[-1]
    U = np.triu(np.ones((N, N), dtype=np.int64), 1)
    return a @ (U - U.T) @ b.T


def wedge_identity_check(N: int, family: str = "nested") -> ResidualReport:
    """Exhaustive check of ``(a - Pa) ^ (b - Pb) = 0`` plus reachability within sectors.

    The residual is ``max |wedge|`` (an exact integer) plus the number of
    unreachable ``(a, g)`` pairs, so it is zero only when both parts hold.
    """
    if not 1 <= N <= 6:
        raise ParameterError("exhaustive wedge check is limited to 1 <= N <= 6")
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    perms = [_as_perm(N, c) for c in FAMILIES[family](N)]
    S = np.array(list(itertools.product((1, -1), repeat=N)), dtype=np.int64)
    max_wedge = 0
    for p in perms:
        D = S - S[:, p]
        max_wedge = max(max_wedge, int(np.abs(wedge(D, D)).max()))
    charges = S.sum(axis=1)
    unreachable = []
    for a in S:
        images = {tuple(a[p]) for p in perms}
        for g in S[charges == a.sum()]:
            if tuple(g) not in images:
                unreachable.append(("".join("+" if x > 0 else "-" for x in a), "".join("+" if x > 0 else "-" for x in g)))
    return ResidualReport(
        f"wedge[N={N},{family}]",
        float(max_wedge + len(unreachable)),
        0.5,
        details={
            "max_abs_wedge": max_wedge,
            "unreachable_pairs": len(unreachable),
            "example_unreachable": list(unreachable[:3]),
            "family_size": len(perms),
        },
    )


# --------------------------------------------------------------------------
# trace additivity on V(1)_{zq^2} x V(1)_z


def _word_matrix(word: Sequence[str], rep) -> np.ndarray:
    d = rep("t1").shape[0]
    M = np.eye(d, dtype=complex)
    for g in word:
        M = M @ rep(g)
    return M


def parse_word(word: str | Sequence[str]) -> tuple[str, ...]:
    """``"t1 e1 e0"`` or a sequence of generator names; the product is read left to right."""
    toks = tuple(word.split()) if isinstance(word, str) else tuple(word)
    for g in toks:
        if g not in ("e0", "e1", "t1", "t1inv"):
            raise ParameterError(f"not a Borel generator: {g!r}")
    return toks


def trace_additivity_check(q: complex, z: complex, words: Sequence, tolerance: float = 1e-10) -> ResidualReport:
    """``Tr_A X = Tr_B X + Tr_C X`` for ``0 -> B -> A -> C -> 0`` with ``A = V(1)_{zq^2} x V(1)_z``.

    ``B`` is located as the common kernel of the two ``e`` generators within
    the ``t1 = 1`` eigenspace.  The quotient action is read off in an adapted
    basis and identified with ``V(2)_{zq}`` by an intertwiner; traces on ``C``
    are evaluated in ``V(2)_{zq}`` itself.
    """
    q = _check_q(q)
    z = complex(z)
    za, zb = z * q * q, z
    cacheA = {g: eval_rep_action(EvalModuleSpec(1, za), g, q) for g in ("e0", "e1", "t1", "t1inv")}
    cacheB = {g: eval_rep_action(EvalModuleSpec(1, zb), g, q) for g in ("e0", "e1", "t1", "t1inv")}
    rep_A = {g: tensor_action(g, cacheA.__getitem__, cacheB.__getitem__) for g in ("e0", "e1", "t1", "t1inv")}
    stacked = np.vstack([rep_A["e0"], rep_A["e1"], rep_A["t1"] - np.eye(4)])
    _, sv, vh = np.linalg.svd(stacked)
    null = int(np.sum(sv < 1e-10 * sv[0]))
    if null != 1:
        raise DecompositionError(f"expected a one-dimensional trivial submodule, found dimension {null}")
    v = vh[-1].conj()
    # adapted basis: v first, then an orthonormal complement
    _, _, vh2 = np.linalg.svd(v[None, :])
    S = np.column_stack([v, vh2[1:].conj().T])
    Sinv = np.linalg.inv(S)
    adapted = {g: Sinv @ M @ S for g, M in rep_A.items()}
    leak = max(float(np.max(np.abs(M[1:, 0]))) for M in adapted.values())
    if leak > 1e-10:
        raise DecompositionError("span of the trivial vector is not invariant")
    C_rep = {g: M[1:, 1:] for g, M in adapted.items()}
    V2 = {g: eval_rep_action(EvalModuleSpec(2, z * q), g, q) for g in ("e0", "e1", "t1", "t1inv")}
    # Y C(g) = V2(g) Y, one-dimensional and invertible
    blocks = [np.kron(np.eye(3), C_rep[g].T) - np.kron(V2[g], np.eye(3)) for g in ("e0", "e1", "t1")]
    _, svc, vhc = np.linalg.svd(np.vstack(blocks))
    if int(np.sum(svc < 1e-9 * svc[0])) != 1:
        raise DecompositionError("quotient is not isomorphic to V(2)_{zq}")
    Y = vhc[-1].conj().reshape(3, 3)
    if np.linalg.svd(Y, compute_uv=False)[-1] < 1e-10 * np.abs(Y).max():
        raise DecompositionError("quotient map to V(2)_{zq} is singular")

    trivial = {"e0": np.zeros((1, 1)), "e1": np.zeros((1, 1)), "t1": np.eye(1), "t1inv": np.eye(1)}
    worst = 0.0
    per_word = {}
    for w in words:
        word = parse_word(w)
        tA = np.trace(_word_matrix(word, rep_A.__getitem__))
        tB = np.trace(_word_matrix(word, trivial.__getitem__))
        tC = np.trace(_word_matrix(word, V2.__getitem__))
        tC_adapted = np.trace(_word_matrix(word, C_rep.__getitem__))
        r = max(abs(tA - tB - tC), abs(tC - tC_adapted)) / (1 + abs(tA))
        per_word[" ".join(word)] = float(r)
        worst = max(worst, r)
    return ResidualReport("trace_additivity", float(worst), tolerance, details={"words": per_word, "invariance_leak": leak})


def random_words(rng: np.random.Generator, count: int, max_len: int = 6) -> list[tuple[str, ...]]:
    gens = ("e0", "e1", "t1", "t1inv")
    return [tuple(gens[i] for i in rng.integers(0, 4, size=rng.integers(1, max_len + 1))) for _ in range(count)]

